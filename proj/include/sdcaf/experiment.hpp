#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdcaf/env.hpp"
#include "sdcaf/ucb.hpp"
#include "sdcaf/verify.hpp"

namespace sdcaf {

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  Instance instance;
  std::string policy = "alg1";
  PolicyOverrides overrides;
  int replications = 1;
  std::uint64_t seed = 0;
  std::string out_dir;           // empty = no files written
  std::int64_t stride = 1;
  int workers = 1;

  void validate() const;
};

// Field-for-field JSON mirror of ExperimentConfig.
ExperimentConfig config_from_json(const nlohmann::json& j);

struct TraceRow {
  std::int64_t t;
  int rep;
  int arm;
  double x;
  double cum_reward;
  double cum_pseudo_regret;
};

struct ReplicationResult {
  int rep = 0;
  std::vector<TraceRow> rows;               // thinned by stride, final step kept
  std::vector<std::int64_t> pull_counts;    // per arm
  double final_pseudo_regret = 0.0;
  double realized_reward_regret = 0.0;      // reference metric only
  nlohmann::json resolved_params;
  LemmaReport lemma;
  bool has_lemma = false;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ReplicationResult> reps;

  double mean_final_pseudo_regret() const;
  double stddev_final_pseudo_regret() const;
  bool verification_failed() const;
  nlohmann::json summary() const;
};

// Runs R independent replications (seeded from (master seed, rep id)),
// optionally across worker threads; results are ordered by replication id
// regardless of worker count.
ExperimentResult run_experiment(const ExperimentConfig& config);

void write_trace_csv(const std::filesystem::path& path, const ExperimentResult& result);
void write_summary_json(const std::filesystem::path& path, const ExperimentResult& result);

struct SublinearityReport {
  std::vector<std::int64_t> horizons;
  std::vector<double> mean_final_regret;
  double exponent = 0.0;   // least-squares slope of log(regret) vs log(T)
};

// Runs the configured policy at each horizon with matched seeds and fits
// the growth exponent of mean final pseudo-regret.
SublinearityReport sublinearity_probe(const ExperimentConfig& base,
                                      const std::vector<std::int64_t>& horizons);

}  // namespace sdcaf
