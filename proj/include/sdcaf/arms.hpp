#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "sdcaf/rng.hpp"

namespace sdcaf {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Family { bernoulli, beta, uniform_interval, deterministic };

// One arm's reward distribution, supported on [0,1] with known mean.
class ArmSpec {
 public:
  static ArmSpec bernoulli(double mean) {
    check_unit("bernoulli mean", mean);
    return ArmSpec(Family::bernoulli, mean, 0, 0);
  }
  static ArmSpec beta(double alpha, double beta) {
    if (alpha <= 0 || beta <= 0) throw ConfigError("beta parameters must be positive");
    return ArmSpec(Family::beta, alpha / (alpha + beta), alpha, beta);
  }
  static ArmSpec uniform_interval(double lo, double hi) {
    check_unit("uniform lo", lo);
    check_unit("uniform hi", hi);
    if (lo > hi) throw ConfigError("uniform interval requires lo <= hi");
    return ArmSpec(Family::uniform_interval, 0.5 * (lo + hi), lo, hi);
  }
  static ArmSpec deterministic(double value) {
    check_unit("deterministic value", value);
    return ArmSpec(Family::deterministic, value, 0, 0);
  }

  double mean() const { return mean_; }
  Family family() const { return family_; }
  double param_a() const { return a_; }
  double param_b() const { return b_; }

  double sample(std::mt19937_64& rng) const {
    switch (family_) {
      case Family::bernoulli:
        return uniform01(rng) < mean_ ? 1.0 : 0.0;
      case Family::beta: {
        std::gamma_distribution<double> ga(a_, 1.0), gb(b_, 1.0);
        double x = ga(rng), y = gb(rng);
        double s = x + y;
        return s > 0 ? x / s : mean_;
      }
      case Family::uniform_interval:
        return a_ + (b_ - a_) * uniform01(rng);
      case Family::deterministic:
        return mean_;
    }
    throw std::logic_error("unreachable");
  }

  std::string family_name() const {
    switch (family_) {
      case Family::bernoulli: return "bernoulli";
      case Family::beta: return "beta";
      case Family::uniform_interval: return "uniform";
      case Family::deterministic: return "deterministic";
    }
    return "?";
  }

 private:
  ArmSpec(Family f, double mean, double a, double b)
      : family_(f), mean_(mean), a_(a), b_(b) {}

  static void check_unit(const char* what, double v) {
    if (!(v >= 0.0 && v <= 1.0))
      throw ConfigError(std::string(what) + " must lie in [0,1]");
  }

  Family family_;
  double mean_;
  double a_, b_;
};

}  // namespace sdcaf
