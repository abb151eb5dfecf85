#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <json.hpp>

#include "sdcaf/env.hpp"

namespace sdcaf {

// One policy phase as seen from the outside: which arm, which new time
// steps, and the estimate over the arm's cumulative play set afterwards.
// Algorithm 2 emits one record per active arm per phase.
struct PhaseRecord {
  int m = 0;                          // 1-based phase number
  int arm = 0;
  std::vector<std::int64_t> times;    // pulls added during this phase
  std::int64_t cum_count = 0;         // |S_i(m)| after the phase
  double estimate = 0.0;              // mean of observed X_t over S_i(m)
  bool complete = false;              // reached the full phase quota
};

// Anonymity firewall: a policy sees only (t, X_t). It never receives the
// Environment or its ledger.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual int act(std::int64_t t) = 0;
  virtual void observe(std::int64_t t, double x) = 0;
  // Called once after the horizon; closes out a truncated phase.
  virtual void finish() {}
  virtual const std::vector<PhaseRecord>& phases() const {
    static const std::vector<PhaseRecord> empty;
    return empty;
  }
  virtual nlohmann::json resolved_params() const { return nlohmann::json::object(); }
};

struct RunRecord {
  std::vector<int> actions;
  std::vector<double> observations;
  std::vector<PhaseRecord> phases;
  nlohmann::json resolved_params;
};

inline RunRecord run_policy(Environment& env, Policy& policy) {
  RunRecord rec;
  const std::int64_t T = env.instance().T;
  rec.actions.reserve(static_cast<std::size_t>(T));
  rec.observations.reserve(static_cast<std::size_t>(T));
  for (std::int64_t t = 0; t < T; ++t) {
    int a = policy.act(t);
    double x = env.step(a);
    policy.observe(t, x);
    rec.actions.push_back(a);
    rec.observations.push_back(x);
  }
  policy.finish();
  rec.phases = policy.phases();
  rec.resolved_params = policy.resolved_params();
  return rec;
}

}  // namespace sdcaf
