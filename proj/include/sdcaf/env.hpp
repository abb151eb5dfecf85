#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "sdcaf/arms.hpp"
#include "sdcaf/rng.hpp"
#include "sdcaf/spread.hpp"

namespace sdcaf {

struct HorizonExhausted : std::runtime_error {
  HorizonExhausted() : std::runtime_error("stepped past horizon") {}
};

// Problem instance: K arms, delay span d, horizon T, spread rule.
struct Instance {
  std::vector<ArmSpec> arms;
  int d = 1;
  std::int64_t T = 3;
  SpreadKind spread = SpreadKind::uniform;
  double spread_alpha = 1.0;

  void validate() const {
    if (arms.size() < 2) throw ConfigError("instance requires K >= 2 arms");
    if (d < 1) throw ConfigError("instance requires d >= 1");
    if (T < 3) throw ConfigError("instance requires T >= 3");
  }

  int num_arms() const { return static_cast<int>(arms.size()); }

  // Lowest-index maximizer of the means.
  int optimal_arm() const {
    int best = 0;
    for (int i = 1; i < num_arms(); ++i)
      if (arms[i].mean() > arms[best].mean()) best = i;
    return best;
  }

  double optimal_mean() const { return arms[optimal_arm()].mean(); }

  std::vector<double> gaps() const {
    double mu_star = optimal_mean();
    std::vector<double> g;
    g.reserve(arms.size());
    for (const auto& a : arms) g.push_back(mu_star - a.mean());
    return g;
  }
};

// Circular accumulator of undelivered reward components.
class PendingBuffer {
 public:
  explicit PendingBuffer(int d) : slots_(static_cast<std::size_t>(d), 0.0) {}

  void add(int offset, double mass) {
    slots_[(head_ + static_cast<std::size_t>(offset)) % slots_.size()] += mass;
  }

  // Pops the mass due now and rotates.
  double deliver() {
    double x = slots_[head_];
    slots_[head_] = 0.0;
    head_ = (head_ + 1) % slots_.size();
    return x;
  }

  double total_mass() const {
    return std::accumulate(slots_.begin(), slots_.end(), 0.0);
  }

 private:
  std::vector<double> slots_;
  std::size_t head_ = 0;
};

struct LedgerEntry {
  int arm;
  double total;                    // R_t(i_t) as generated
  SpreadAssignment spread;         // its decomposition
  double delivered;                // X_t handed to the policy at this step
};

// Ground-truth history, append-only, indexed by t from 0.
using RewardLedger = std::vector<LedgerEntry>;

// Mean of the ledger's true totals over a set of time steps.
// This is the proofs' unbiased estimator, unavailable to any policy.
template <typename TimeSet>
double ledger_true_mean_estimate(const RewardLedger& ledger, const TimeSet& times) {
  if (times.empty()) throw std::invalid_argument("empty time set");
  double sum = 0.0;
  for (auto t : times) sum += ledger.at(static_cast<std::size_t>(t)).total;
  return sum / static_cast<double>(times.size());
}

class Environment {
 public:
  Environment(Instance inst, std::uint64_t master_seed, std::uint64_t replication)
      : inst_(std::move(inst)),
        buffer_(inst_.d),
        spreader_(inst_.spread, inst_.spread_alpha),
        reward_rng_(make_stream(master_seed, replication, Stream::reward)),
        spread_rng_(make_stream(master_seed, replication, Stream::spread)) {
    inst_.validate();
    ledger_.reserve(static_cast<std::size_t>(inst_.T));
  }

  const Instance& instance() const { return inst_; }
  std::int64_t now() const { return t_; }
  bool done() const { return t_ >= inst_.T; }
  const RewardLedger& ledger() const { return ledger_; }
  double buffered_mass() const { return buffer_.total_mass(); }

  // Plays `arm`: samples its total reward, spreads it over offsets 0..d-1,
  // and returns the aggregate X_t due at the current step.
  double step(int arm) {
    if (done()) throw HorizonExhausted();
    if (arm < 0 || arm >= inst_.num_arms())
      throw std::out_of_range("arm index out of range");
    double total = inst_.arms[static_cast<std::size_t>(arm)].sample(reward_rng_);
    SpreadAssignment assignment = spreader_(total, inst_.d, spread_rng_);
    for (int s = 0; s < inst_.d; ++s) buffer_.add(s, assignment.components[static_cast<std::size_t>(s)]);
    double x = buffer_.deliver();
    ledger_.push_back(LedgerEntry{arm, total, std::move(assignment), x});
    ++t_;
    return x;
  }

 private:
  Instance inst_;
  PendingBuffer buffer_;
  Spreader spreader_;
  std::mt19937_64 reward_rng_;
  std::mt19937_64 spread_rng_;
  RewardLedger ledger_;
  std::int64_t t_ = 0;
};

}  // namespace sdcaf
