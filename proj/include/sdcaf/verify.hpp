#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdcaf/env.hpp"
#include "sdcaf/policy.hpp"

namespace sdcaf {

struct VerificationUnavailable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kBoundSlack = 1e-9;

struct LemmaRow {
  int m;
  int arm;
  double estimate_from_observations;
  double estimate_from_ledger;
  double bound;
  bool satisfied;   // |difference| <= bound + slack
  bool exempt;      // truncated phase, reported but not asserted
};

struct LemmaReport {
  std::vector<LemmaRow> rows;

  int phases_checked() const {
    int n = 0;
    for (const auto& r : rows) n += r.exempt ? 0 : 1;
    return n;
  }
  int violations() const {
    int n = 0;
    for (const auto& r : rows) n += (!r.exempt && !r.satisfied) ? 1 : 0;
    return n;
  }
  int exemptions() const {
    int n = 0;
    for (const auto& r : rows) n += r.exempt ? 1 : 0;
    return n;
  }
  double max_ratio() const {
    double worst = 0.0;
    for (const auto& r : rows) {
      if (r.exempt || r.bound <= 0) continue;
      double ratio = std::abs(r.estimate_from_observations - r.estimate_from_ledger) / r.bound;
      worst = std::max(worst, ratio);
    }
    return worst;
  }

  nlohmann::json to_json() const {
    return {{"phases_checked", phases_checked()},
            {"violations", violations()},
            {"exemptions", exemptions()},
            {"max_ratio", max_ratio()}};
  }
};

namespace detail {

// Every check starts from this consistency gate: the observations the policy
// saw must match the ledger's recorded aggregates bit-for-bit.
inline void require_ledger_consistency(const RunRecord& run, const RewardLedger& ledger) {
  if (ledger.empty()) throw VerificationUnavailable("no ledger recorded");
  if (ledger.size() != run.observations.size())
    throw VerificationUnavailable("ledger length does not match run record");
  for (std::size_t t = 0; t < ledger.size(); ++t)
    if (ledger[t].delivered != run.observations[t])
      throw VerificationUnavailable("observation stream diverges from ledger at t=" +
                                    std::to_string(t));
}

}  // namespace detail

// Lemma check for the phased UCB policy: per completed phase m playing arm i,
// |mu_hat_i(m) - mu_bar_i(m)| <= d/k, where mu_bar is the ledger-side mean of
// true totals over the cumulative play set S_i(m).
inline LemmaReport check_lemma1(const RunRecord& run, const RewardLedger& ledger,
                                int d, std::int64_t k) {
  detail::require_ledger_consistency(run, ledger);
  LemmaReport report;
  std::map<int, std::vector<std::int64_t>> cumulative;
  for (const auto& phase : run.phases) {
    auto& s = cumulative[phase.arm];
    s.insert(s.end(), phase.times.begin(), phase.times.end());
    LemmaRow row;
    row.m = phase.m;
    row.arm = phase.arm;
    row.estimate_from_observations = phase.estimate;
    row.estimate_from_ledger = ledger_true_mean_estimate(ledger, s);
    row.bound = static_cast<double>(d) / static_cast<double>(k);
    row.exempt = !phase.complete;
    row.satisfied = std::abs(row.estimate_from_observations - row.estimate_from_ledger) <=
                    row.bound + kBoundSlack;
    report.rows.push_back(row);
  }
  return report;
}

// Lemma check for the elimination policy: per phase m and active arm j that
// holds exactly n_m pulls, |mu_tilde_j(m) - X_j(m)| <= m(d-1)/n_m.
inline LemmaReport check_lemma2(const RunRecord& run, const RewardLedger& ledger, int d) {
  detail::require_ledger_consistency(run, ledger);
  LemmaReport report;
  std::map<int, std::vector<std::int64_t>> cumulative;
  for (const auto& phase : run.phases) {
    auto& s = cumulative[phase.arm];
    s.insert(s.end(), phase.times.begin(), phase.times.end());
    LemmaRow row;
    row.m = phase.m;
    row.arm = phase.arm;
    row.estimate_from_observations = phase.estimate;
    row.estimate_from_ledger = ledger_true_mean_estimate(ledger, s);
    row.bound = static_cast<double>(phase.m) * (d - 1) / static_cast<double>(phase.cum_count);
    row.exempt = !phase.complete;
    row.satisfied = std::abs(row.estimate_from_observations - row.estimate_from_ledger) <=
                    row.bound + kBoundSlack;
    report.rows.push_back(row);
  }
  return report;
}

struct PullCountRow {
  int arm;
  double gap;
  double mean_pulls;   // over replications
  double bound;        // 289 log T / (4 gap^2) + (d/2) sqrt(T/log T) + 2
  bool satisfied;
  bool excluded;       // optimal arm, or gap == 0
};

struct PullCountReport {
  std::vector<PullCountRow> rows;

  bool all_satisfied() const {
    for (const auto& r : rows)
      if (!r.excluded && !r.satisfied) return false;
    return true;
  }

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows)
      arr.push_back({{"arm", r.arm},
                     {"gap", r.gap},
                     {"mean_pulls", r.mean_pulls},
                     {"bound", r.bound},
                     {"satisfied", r.satisfied},
                     {"excluded", r.excluded}});
    return arr;
  }
};

inline double alg1_expected_pull_bound(double gap, std::int64_t T, int d) {
  double logT = std::log(static_cast<double>(T));
  return 289.0 * logT / (4.0 * gap * gap) +
         0.5 * d * std::sqrt(static_cast<double>(T) / logT) + 2.0;
}

// Checks the expected-pull-count bound for each sub-optimal arm against the
// sample mean over replications. per_rep_counts[r][i] = pulls of arm i in rep r.
inline PullCountReport check_pull_count_bound(
    const std::vector<std::vector<std::int64_t>>& per_rep_counts, const Instance& inst) {
  if (per_rep_counts.size() < 100)
    throw VerificationUnavailable("pull-count bound check requires >= 100 replications");
  PullCountReport report;
  const auto gaps = inst.gaps();
  const int best = inst.optimal_arm();
  const auto R = static_cast<double>(per_rep_counts.size());
  for (int i = 0; i < inst.num_arms(); ++i) {
    PullCountRow row;
    row.arm = i;
    row.gap = gaps[static_cast<std::size_t>(i)];
    double total = 0.0;
    for (const auto& counts : per_rep_counts) total += static_cast<double>(counts.at(static_cast<std::size_t>(i)));
    row.mean_pulls = total / R;
    row.excluded = (i == best) || row.gap == 0.0;
    row.bound = row.excluded ? std::numeric_limits<double>::infinity()
                             : alg1_expected_pull_bound(row.gap, inst.T, inst.d);
    row.satisfied = row.excluded || row.mean_pulls <= row.bound;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace sdcaf
