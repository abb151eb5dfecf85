#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "sdcaf/policy.hpp"
#include "sdcaf/rng.hpp"

namespace sdcaf {

// Upper confidence index B_i = mean + sqrt(2 log(1/delta) / count).
// Unplayed arms get +infinity so they are always explored first.
inline double ucb_index(double mean_estimate, std::int64_t count, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0,1)");
  if (count == 0) return std::numeric_limits<double>::infinity();
  return mean_estimate + std::sqrt(2.0 * std::log(1.0 / delta) / static_cast<double>(count));
}

// Phase length for the phased UCB policy: ceil((d/2) * sqrt(T / log T)),
// the closed form obtained with a = 1/2 and delta = T^-8. Never below 1.
inline std::int64_t alg1_default_k(std::int64_t T, int d) {
  double k = 0.5 * static_cast<double>(d) *
             std::sqrt(static_cast<double>(T) / std::log(static_cast<double>(T)));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(k)));
}

// Per-phase cumulative pull target for the elimination policy:
//   n_m = ceil( (1 / 2 dt^2) * (sqrt(L) + sqrt(L + 4 dt m (d-1)))^2 )
// with L = max(log(T dt^2), 1); the clamp keeps the schedule positive and
// monotone once T dt^2 drops below e.
inline std::int64_t alg2_nm(int m, double delta_tilde, double T, int d) {
  if (!(delta_tilde > 0)) throw ConfigError("delta_tilde must be positive");
  double dt2 = delta_tilde * delta_tilde;
  double L = std::max(std::log(T * dt2), 1.0);
  double root = std::sqrt(L) + std::sqrt(L + 4.0 * delta_tilde * m * (d - 1));
  double n = std::ceil(root * root / (2.0 * dt2));
  n = std::min(n, 0x1p62);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
}

// Lowest-index maximizer.
inline int argmax_lowest(const std::vector<double>& values) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

struct Alg1Options {
  std::int64_t k = 0;    // 0 = alg1_default_k(T, d)
  double delta = 0.0;    // 0 = T^-8
};

// Phased UCB: pick the argmax-index arm, pull it k times, update its
// estimate over the whole cumulative play set, repeat until the horizon.
class Alg1Policy final : public Policy {
 public:
  Alg1Policy(int num_arms, std::int64_t T, int d, Alg1Options opt = {})
      : K_(num_arms), T_(T) {
    k_ = opt.k > 0 ? opt.k : alg1_default_k(T, d);
    delta_ = opt.delta > 0 ? opt.delta : std::pow(static_cast<double>(T), -8.0);
    if (!(delta_ > 0.0 && delta_ < 1.0)) throw ConfigError("alg1.delta must lie in (0,1)");
    sum_.assign(static_cast<std::size_t>(K_), 0.0);
    count_.assign(static_cast<std::size_t>(K_), 0);
    times_.resize(static_cast<std::size_t>(K_));
  }

  std::int64_t k() const { return k_; }
  double delta() const { return delta_; }

  int act(std::int64_t) override {
    if (pulls_left_ == 0) {
      std::vector<double> idx(static_cast<std::size_t>(K_));
      for (int i = 0; i < K_; ++i)
        idx[static_cast<std::size_t>(i)] =
            count_[static_cast<std::size_t>(i)] == 0
                ? std::numeric_limits<double>::infinity()
                : ucb_index(sum_[static_cast<std::size_t>(i)] /
                                static_cast<double>(count_[static_cast<std::size_t>(i)]),
                            count_[static_cast<std::size_t>(i)], delta_);
      current_ = argmax_lowest(idx);
      pulls_left_ = k_;
      phase_times_.clear();
    }
    return current_;
  }

  void observe(std::int64_t t, double x) override {
    auto i = static_cast<std::size_t>(current_);
    sum_[i] += x;
    ++count_[i];
    times_[i].push_back(t);
    phase_times_.push_back(t);
    --pulls_left_;
    if (pulls_left_ == 0) close_phase(true);
  }

  void finish() override {
    if (!phase_times_.empty() && pulls_left_ > 0) close_phase(false);
  }

  const std::vector<PhaseRecord>& phases() const override { return phases_; }

  nlohmann::json resolved_params() const override {
    return {{"k", k_}, {"delta", delta_}};
  }

 private:
  void close_phase(bool complete) {
    auto i = static_cast<std::size_t>(current_);
    PhaseRecord rec;
    rec.m = m_++;
    rec.arm = current_;
    rec.times = phase_times_;
    rec.cum_count = count_[i];
    rec.estimate = sum_[i] / static_cast<double>(count_[i]);
    rec.complete = complete;
    phases_.push_back(std::move(rec));
    phase_times_.clear();
    pulls_left_ = 0;
  }

  int K_;
  std::int64_t T_;
  std::int64_t k_ = 1;
  double delta_ = 0.5;
  std::vector<double> sum_;
  std::vector<std::int64_t> count_;
  std::vector<std::vector<std::int64_t>> times_;
  int current_ = 0;
  std::int64_t pulls_left_ = 0;
  std::vector<std::int64_t> phase_times_;
  std::vector<PhaseRecord> phases_;
  int m_ = 1;
};

// Removes every arm whose estimate is more than delta_tilde below the
// running maximum (strict inequality); the empirical max always survives.
inline std::vector<int> alg2_eliminate(const std::map<int, double>& estimates,
                                       double delta_tilde,
                                       const std::vector<int>& active) {
  double best = -std::numeric_limits<double>::infinity();
  for (int i : active) best = std::max(best, estimates.at(i));
  std::vector<int> keep;
  for (int i : active)
    if (!(estimates.at(i) + delta_tilde < best)) keep.push_back(i);
  return keep;
}

struct Alg2Options {
  double delta_tilde_init = 1.0;
};

// Phase-based elimination: each phase pulls every active arm up to the
// cumulative target n_m, re-estimates, eliminates, and halves the tolerance.
class Alg2Policy final : public Policy {
 public:
  Alg2Policy(int num_arms, std::int64_t T, int d, Alg2Options opt = {})
      : K_(num_arms), T_(T), d_(d), delta_tilde_(opt.delta_tilde_init) {
    if (!(delta_tilde_ > 0)) throw ConfigError("alg2.delta_tilde_init must be positive");
    delta_tilde_init_ = delta_tilde_;
    sum_.assign(static_cast<std::size_t>(K_), 0.0);
    count_.assign(static_cast<std::size_t>(K_), 0);
    for (int i = 0; i < K_; ++i) active_.push_back(i);
    n_m_ = alg2_nm(m_, delta_tilde_, static_cast<double>(T_), d_);
    schedule_prefix_.push_back(n_m_);
  }

  double delta_tilde() const { return delta_tilde_; }
  std::int64_t current_target() const { return n_m_; }
  const std::vector<int>& active() const { return active_; }

  int act(std::int64_t) override {
    // advance past arms that already met the target; close phases as needed
    while (count_[static_cast<std::size_t>(active_[cursor_])] >= n_m_) {
      ++cursor_;
      if (cursor_ == active_.size()) close_phase();
    }
    current_ = active_[cursor_];
    return current_;
  }

  void observe(std::int64_t t, double x) override {
    auto i = static_cast<std::size_t>(current_);
    sum_[i] += x;
    ++count_[i];
    phase_times_[current_].push_back(t);
  }

  void finish() override {
    if (!phase_times_.empty()) emit_phase_records();
  }

  const std::vector<PhaseRecord>& phases() const override { return phases_; }

  nlohmann::json resolved_params() const override {
    return {{"delta_tilde_init", delta_tilde_init_},
            {"n_m_prefix", schedule_prefix_}};
  }

 private:
  void emit_phase_records() {
    for (auto& [arm, times] : phase_times_) {
      auto i = static_cast<std::size_t>(arm);
      PhaseRecord rec;
      rec.m = m_;
      rec.arm = arm;
      rec.times = times;
      rec.cum_count = count_[i];
      rec.estimate = sum_[i] / static_cast<double>(count_[i]);
      rec.complete = count_[i] == n_m_;
      phases_.push_back(std::move(rec));
    }
    phase_times_.clear();
  }

  void close_phase() {
    emit_phase_records();
    std::map<int, double> est;
    for (int i : active_)
      est[i] = sum_[static_cast<std::size_t>(i)] /
               static_cast<double>(count_[static_cast<std::size_t>(i)]);
    active_ = alg2_eliminate(est, delta_tilde_, active_);
    delta_tilde_ /= 2.0;
    ++m_;
    n_m_ = alg2_nm(m_, delta_tilde_, static_cast<double>(T_), d_);
    if (schedule_prefix_.size() < 16) schedule_prefix_.push_back(n_m_);
    cursor_ = 0;
  }

  int K_;
  std::int64_t T_;
  int d_;
  double delta_tilde_;
  double delta_tilde_init_;
  std::vector<double> sum_;
  std::vector<std::int64_t> count_;
  std::vector<int> active_;
  std::size_t cursor_ = 0;
  int current_ = 0;
  int m_ = 1;
  std::int64_t n_m_ = 1;
  std::map<int, std::vector<std::int64_t>> phase_times_;
  std::vector<PhaseRecord> phases_;
  std::vector<std::int64_t> schedule_prefix_;
};

// Control baseline: picks an arm uniformly at random every step.
class UniformRandomPolicy final : public Policy {
 public:
  UniformRandomPolicy(int num_arms, std::mt19937_64 rng)
      : K_(num_arms), rng_(rng) {}

  int act(std::int64_t) override {
    return static_cast<int>(uniform01(rng_) * K_) % K_;
  }
  void observe(std::int64_t, double) override {}

 private:
  int K_;
  std::mt19937_64 rng_;
};

struct PolicyOverrides {
  std::int64_t alg1_k = 0;
  double alg1_delta = 0.0;
  double alg2_delta_tilde_init = 1.0;
};

inline std::unique_ptr<Policy> make_policy(const std::string& name, const Instance& inst,
                                           std::uint64_t master_seed,
                                           std::uint64_t replication,
                                           const PolicyOverrides& ov = {}) {
  const int K = inst.num_arms();
  if (name == "alg1")
    return std::make_unique<Alg1Policy>(K, inst.T, inst.d,
                                        Alg1Options{ov.alg1_k, ov.alg1_delta});
  if (name == "vanilla-ucb")
    // delay-oblivious control: phased UCB degenerates to textbook UCB at k=1
    return std::make_unique<Alg1Policy>(K, inst.T, inst.d,
                                        Alg1Options{1, ov.alg1_delta});
  if (name == "alg2")
    return std::make_unique<Alg2Policy>(K, inst.T, inst.d,
                                        Alg2Options{ov.alg2_delta_tilde_init});
  if (name == "uniform-random")
    return std::make_unique<UniformRandomPolicy>(
        K, make_stream(master_seed, replication, Stream::policy));
  throw ConfigError("unknown policy: " + name);
}

}  // namespace sdcaf
