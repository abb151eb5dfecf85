#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "sdcaf/arms.hpp"
#include "sdcaf/rng.hpp"

namespace sdcaf {

enum class SpreadKind {
  uniform,
  all_at_start,
  all_at_end,
  dirichlet,
  block_boundary_adversary,
};

// components[s] is the reward mass due s steps after the pull; sums to total.
struct SpreadAssignment {
  std::vector<double> components;
  double total = 0.0;
};

inline SpreadKind parse_spread_kind(const std::string& name) {
  if (name == "uniform") return SpreadKind::uniform;
  if (name == "all-at-start") return SpreadKind::all_at_start;
  if (name == "all-at-end") return SpreadKind::all_at_end;
  if (name == "dirichlet") return SpreadKind::dirichlet;
  if (name == "block-boundary-adversary") return SpreadKind::block_boundary_adversary;
  throw ConfigError("unknown spread policy: " + name);
}

inline std::string spread_kind_name(SpreadKind k) {
  switch (k) {
    case SpreadKind::uniform: return "uniform";
    case SpreadKind::all_at_start: return "all-at-start";
    case SpreadKind::all_at_end: return "all-at-end";
    case SpreadKind::dirichlet: return "dirichlet";
    case SpreadKind::block_boundary_adversary: return "block-boundary-adversary";
  }
  return "?";
}

// Oblivious spread rule: the decomposition of each total depends only on
// (total, d, policy state, rng state), fixed at generation time.
class Spreader {
 public:
  explicit Spreader(SpreadKind kind, double dirichlet_alpha = 1.0)
      : kind_(kind), alpha_(dirichlet_alpha) {
    if (kind == SpreadKind::dirichlet && !(alpha_ > 0))
      throw ConfigError("dirichlet alpha must be positive");
  }

  SpreadKind kind() const { return kind_; }
  double alpha() const { return alpha_; }

  SpreadAssignment operator()(double total, int d, std::mt19937_64& rng) {
    SpreadAssignment out;
    out.total = total;
    out.components.assign(static_cast<std::size_t>(d), 0.0);
    if (d == 1) {
      out.components[0] = total;
      return out;
    }
    switch (kind_) {
      case SpreadKind::uniform: {
        std::fill(out.components.begin(), out.components.end(), total / d);
        break;
      }
      case SpreadKind::all_at_start:
        out.components.front() = total;
        break;
      case SpreadKind::all_at_end:
        out.components.back() = total;
        break;
      case SpreadKind::dirichlet: {
        std::gamma_distribution<double> g(alpha_, 1.0);
        std::vector<double> w(static_cast<std::size_t>(d));
        double sum = 0.0;
        for (auto& x : w) {
          x = g(rng);
          sum += x;
        }
        if (sum <= 0) {
          out.components.front() = total;
          break;
        }
        double acc = 0.0;
        for (int s = 0; s + 1 < d; ++s) {
          out.components[s] = total * (w[s] / sum);
          acc += out.components[s];
        }
        out.components.back() = std::max(0.0, total - acc);
        break;
      }
      case SpreadKind::block_boundary_adversary:
        // alternates the two phase-boundary worst cases per call
        if (calls_ % 2 == 0)
          out.components.front() = total;
        else
          out.components.back() = total;
        break;
    }
    ++calls_;
    return out;
  }

 private:
  SpreadKind kind_;
  double alpha_;
  std::uint64_t calls_ = 0;
};

}  // namespace sdcaf
