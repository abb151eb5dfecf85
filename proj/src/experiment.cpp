#include "sdcaf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <thread>

#include "sdcaf/regret.hpp"

namespace sdcaf {

namespace {

constexpr std::int64_t kMaxTraceRows = 200'000'000;

ArmSpec arm_from_json(const nlohmann::json& j) {
  const std::string family = j.value("family", "bernoulli");
  if (family == "bernoulli") return ArmSpec::bernoulli(j.at("mean").get<double>());
  if (family == "deterministic") return ArmSpec::deterministic(j.at("mean").get<double>());
  if (family == "beta") return ArmSpec::beta(j.at("alpha").get<double>(), j.at("beta").get<double>());
  if (family == "uniform")
    return ArmSpec::uniform_interval(j.at("lo").get<double>(), j.at("hi").get<double>());
  throw ConfigError("unknown arm family: " + family);
}

std::string format_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

ReplicationResult run_one(const ExperimentConfig& config, int rep) {
  Environment env(config.instance, config.seed, static_cast<std::uint64_t>(rep));
  auto policy = make_policy(config.policy, config.instance, config.seed,
                            static_cast<std::uint64_t>(rep), config.overrides);
  RunRecord run = run_policy(env, *policy);

  ReplicationResult out;
  out.rep = rep;
  out.resolved_params = run.resolved_params;
  out.pull_counts.assign(static_cast<std::size_t>(config.instance.num_arms()), 0);
  const auto regret = compute_pseudo_regret(run.actions, config.instance);

  double cum_reward = 0.0;
  double true_total = 0.0;
  const std::int64_t T = config.instance.T;
  for (std::int64_t t = 0; t < T; ++t) {
    auto i = static_cast<std::size_t>(t);
    ++out.pull_counts[static_cast<std::size_t>(run.actions[i])];
    cum_reward += run.observations[i];
    true_total += env.ledger()[i].total;
    if (t % config.stride == 0 || t == T - 1)
      out.rows.push_back(TraceRow{t, rep, run.actions[i], run.observations[i], cum_reward,
                                  regret[i]});
  }
  out.final_pseudo_regret = regret.back();
  out.realized_reward_regret =
      config.instance.optimal_mean() * static_cast<double>(T) - true_total;

  if (config.policy == "alg1" || config.policy == "vanilla-ucb") {
    out.lemma = check_lemma1(run, env.ledger(), config.instance.d,
                             run.resolved_params.at("k").get<std::int64_t>());
    out.has_lemma = true;
  } else if (config.policy == "alg2") {
    out.lemma = check_lemma2(run, env.ledger(), config.instance.d);
    out.has_lemma = true;
  }
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  instance.validate();
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (stride < 1) throw ConfigError("stride must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  // resolves or throws
  make_policy(policy, instance, seed, 0, overrides);
  std::int64_t rows_per_rep = instance.T / stride + 1;
  if (rows_per_rep * replications > kMaxTraceRows)
    throw ResourceError("trace would exceed the row guard; increase stride");
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    const auto& inst = j.at("instance");
    for (const auto& arm : inst.at("arms")) c.instance.arms.push_back(arm_from_json(arm));
    c.instance.d = inst.value("delay", 1);
    c.instance.T = inst.value("horizon", std::int64_t{3});
    if (inst.contains("spread")) {
      const auto& sp = inst.at("spread");
      c.instance.spread = parse_spread_kind(sp.value("policy", "uniform"));
      c.instance.spread_alpha = sp.value("alpha", 1.0);
    }
    if (j.contains("policy")) {
      const auto& p = j.at("policy");
      c.policy = p.value("name", "alg1");
      if (p.contains("overrides")) {
        const auto& ov = p.at("overrides");
        c.overrides.alg1_k = ov.value("alg1.k", std::int64_t{0});
        c.overrides.alg1_delta = ov.value("alg1.delta", 0.0);
        c.overrides.alg2_delta_tilde_init = ov.value("alg2.delta_tilde_init", 1.0);
      }
    }
    c.replications = j.value("replications", 1);
    c.seed = j.value("seed", std::uint64_t{0});
    c.out_dir = j.value("out_dir", std::string{});
    c.stride = j.value("stride", std::int64_t{1});
    c.workers = j.value("workers", 1);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
  return c;
}

double ExperimentResult::mean_final_pseudo_regret() const {
  double s = 0.0;
  for (const auto& r : reps) s += r.final_pseudo_regret;
  return s / static_cast<double>(reps.size());
}

double ExperimentResult::stddev_final_pseudo_regret() const {
  if (reps.size() < 2) return 0.0;
  double mean = mean_final_pseudo_regret();
  double ss = 0.0;
  for (const auto& r : reps) ss += (r.final_pseudo_regret - mean) * (r.final_pseudo_regret - mean);
  return std::sqrt(ss / static_cast<double>(reps.size() - 1));
}

bool ExperimentResult::verification_failed() const {
  for (const auto& r : reps)
    if (r.has_lemma && r.lemma.violations() > 0) return true;
  return false;
}

nlohmann::json ExperimentResult::summary() const {
  std::vector<std::int64_t> pulls(static_cast<std::size_t>(config.instance.num_arms()), 0);
  for (const auto& r : reps)
    for (std::size_t i = 0; i < pulls.size(); ++i) pulls[i] += r.pull_counts[i];

  double realized = 0.0;
  for (const auto& r : reps) realized += r.realized_reward_regret;
  realized /= static_cast<double>(reps.size());

  nlohmann::json out{
      {"policy", config.policy},
      {"replications", config.replications},
      {"seed", config.seed},
      {"horizon", config.instance.T},
      {"delay", config.instance.d},
      {"spread", spread_kind_name(config.instance.spread)},
      {"mean_final_pseudo_regret", mean_final_pseudo_regret()},
      {"stddev_final_pseudo_regret", stddev_final_pseudo_regret()},
      {"mean_realized_reward_regret", realized},
      {"total_pull_counts", pulls},
      {"resolved_params", reps.empty() ? nlohmann::json::object() : reps.front().resolved_params},
  };
  if (!reps.empty() && reps.front().has_lemma) {
    int checked = 0, violations = 0, exemptions = 0;
    double max_ratio = 0.0;
    for (const auto& r : reps) {
      checked += r.lemma.phases_checked();
      violations += r.lemma.violations();
      exemptions += r.lemma.exemptions();
      max_ratio = std::max(max_ratio, r.lemma.max_ratio());
    }
    out["verification"] = {{"phases_checked", checked},
                           {"violations", violations},
                           {"exemptions", exemptions},
                           {"max_ratio", max_ratio}};
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  result.config = config;
  result.reps.resize(static_cast<std::size_t>(config.replications));

  const int workers = std::min(config.workers, config.replications);
  if (workers == 1) {
    for (int rep = 0; rep < config.replications; ++rep)
      result.reps[static_cast<std::size_t>(rep)] = run_one(config, rep);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int rep = next.fetch_add(1); rep < config.replications; rep = next.fetch_add(1))
          result.reps[static_cast<std::size_t>(rep)] = run_one(config, rep);
      });
    for (auto& th : pool) th.join();
  }

  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    write_trace_csv(std::filesystem::path(config.out_dir) / "trace.csv", result);
    write_summary_json(std::filesystem::path(config.out_dir) / "summary.json", result);
  }
  return result;
}

void write_trace_csv(const std::filesystem::path& path, const ExperimentResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ResourceError("cannot open " + path.string());
  out << "t,rep,arm,x,cum_reward,cum_pseudo_regret\n";
  for (const auto& rep : result.reps)
    for (const auto& row : rep.rows)
      out << row.t << ',' << row.rep << ',' << row.arm << ',' << format_g12(row.x) << ','
          << format_g12(row.cum_reward) << ',' << format_g12(row.cum_pseudo_regret) << '\n';
}

void write_summary_json(const std::filesystem::path& path, const ExperimentResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ResourceError("cannot open " + path.string());
  out << result.summary().dump(2) << '\n';
}

SublinearityReport sublinearity_probe(const ExperimentConfig& base,
                                      const std::vector<std::int64_t>& horizons) {
  if (horizons.size() < 3) throw ConfigError("sublinearity probe needs >= 3 horizons");
  for (std::size_t i = 1; i < horizons.size(); ++i)
    if (horizons[i] <= horizons[i - 1])
      throw ConfigError("horizons must be strictly increasing");

  SublinearityReport report;
  report.horizons = horizons;
  for (std::int64_t T : horizons) {
    ExperimentConfig c = base;
    c.instance.T = T;
    c.out_dir.clear();
    auto result = run_experiment(c);
    report.mean_final_regret.push_back(result.mean_final_pseudo_regret());
  }

  // least-squares slope of log(regret) on log(T)
  const auto n = static_cast<double>(horizons.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    double x = std::log(static_cast<double>(horizons[i]));
    double y = std::log(std::max(report.mean_final_regret[i], 1e-12));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  report.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return report;
}

}  // namespace sdcaf
