#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "sdcaf/regret.hpp"
#include "sdcaf/ucb.hpp"

using namespace sdcaf;

namespace {

Instance bernoulli_instance(std::vector<double> means, int d, std::int64_t T,
                            SpreadKind spread = SpreadKind::uniform) {
  Instance inst;
  for (double mu : means) inst.arms.push_back(ArmSpec::bernoulli(mu));
  inst.d = d;
  inst.T = T;
  inst.spread = spread;
  return inst;
}

// Textbook UCB(delta), written independently of Alg1Policy: one pull per
// round, argmax of mean + sqrt(2 log(1/delta) / count), lowest index wins.
std::vector<int> textbook_ucb_actions(Environment& env, double delta) {
  const int K = env.instance().num_arms();
  std::vector<double> sum(K, 0.0);
  std::vector<std::int64_t> cnt(K, 0);
  std::vector<int> actions;
  for (std::int64_t t = 0; t < env.instance().T; ++t) {
    int pick = -1;
    double best = -1;
    for (int i = 0; i < K; ++i) {
      double idx = cnt[i] == 0 ? std::numeric_limits<double>::infinity()
                               : sum[i] / cnt[i] + std::sqrt(2 * std::log(1 / delta) / cnt[i]);
      if (pick < 0 || idx > best) {
        pick = i;
        best = idx;
      }
    }
    double x = env.step(pick);
    sum[pick] += x;
    ++cnt[pick];
    actions.push_back(pick);
  }
  return actions;
}

}  // namespace

TEST_CASE("ucb index") {
  CHECK(ucb_index(0.3, 0, 0.1) == std::numeric_limits<double>::infinity());
  CHECK(ucb_index(0.5, 4, std::exp(-2.0)) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK_THROWS_AS(ucb_index(0.5, 4, 1.5), ConfigError);
  CHECK_THROWS_AS(ucb_index(0.5, 4, 0.0), ConfigError);

  SUBCASE("bonus vanishes with the sample count") {
    double delta = 0.01;
    auto count = static_cast<std::int64_t>(1e7 * 2 * std::log(1 / delta));
    CHECK(ucb_index(0.42, count, delta) - 0.42 < 1e-3);
  }
  SUBCASE("monotone in count and mean") {
    std::mt19937_64 gen(5);
    for (int i = 0; i < 500; ++i) {
      double mu = uniform01(gen);
      auto c = static_cast<std::int64_t>(1 + gen() % 1000);
      double delta = 0.5 * uniform01(gen) + 1e-6;
      CHECK(ucb_index(mu, c, delta) >= ucb_index(mu, c + 1, delta));
      CHECK(ucb_index(mu + 0.1, c, delta) >= ucb_index(mu, c, delta));
    }
  }
}

TEST_CASE("default phase length") {
  CHECK(alg1_default_k(10000, 4) == 66);
  CHECK(alg1_default_k(3, 1) == 1);
  CHECK(alg1_default_k(8, 1) == 1);
}

TEST_CASE("argmax tie-breaking") {
  CHECK(argmax_lowest({1.5, 1.5, 0.9}) == 0);
  CHECK(argmax_lowest({0.9, 1.5, 1.2}) == 1);

  SUBCASE("fresh policy starts at arm 0: all indices are +inf") {
    Alg1Policy p(3, 100, 1);
    CHECK(p.act(0) == 0);
  }
  SUBCASE("adding a constant to every estimate leaves the argmax unchanged") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> idx, shifted;
      for (int i = 0; i < 5; ++i) {
        double mu = uniform01(gen);
        auto c = static_cast<std::int64_t>(1 + gen() % 50);
        idx.push_back(ucb_index(mu, c, 0.01));
        shifted.push_back(ucb_index(mu + 0.25, c, 0.01));
      }
      CHECK(argmax_lowest(idx) == argmax_lowest(shifted));
    }
  }
}

TEST_CASE("alg1 phase bookkeeping") {
  SUBCASE("one phase of k=3 plays a single arm") {
    Instance inst = bernoulli_instance({0.5, 0.5}, 1, 100);
    Environment env(inst, 1, 0);
    Alg1Policy policy(2, 100, 1, {3, 0.0});
    for (int t = 0; t < 3; ++t) {
      int a = policy.act(t);
      policy.observe(t, env.step(a));
    }
    policy.finish();
    REQUIRE(policy.phases().size() == 1);
    CHECK(policy.phases()[0].cum_count == 3);
    CHECK(policy.phases()[0].complete);
  }
  SUBCASE("k=5, T=12 truncates to phases 5,5,2") {
    Instance inst = bernoulli_instance({0.5, 0.5}, 1, 12);
    Environment env(inst, 1, 0);
    Alg1Policy policy(2, 12, 1, {5, 0.0});
    auto rec = run_policy(env, policy);
    REQUIRE(rec.phases.size() == 3);
    CHECK(rec.phases[0].times.size() == 5);
    CHECK(rec.phases[1].times.size() == 5);
    CHECK(rec.phases[2].times.size() == 2);
    CHECK_FALSE(rec.phases[2].complete);
  }
  SUBCASE("action sequence is constant on blocks of k") {
    Instance inst = bernoulli_instance({0.8, 0.4, 0.2}, 3, 500, SpreadKind::dirichlet);
    Environment env(inst, 21, 0);
    Alg1Policy policy(3, 500, 3, {7, 0.0});
    auto rec = run_policy(env, policy);
    for (std::size_t t = 0; t < rec.actions.size(); ++t)
      CHECK(rec.actions[t] == rec.actions[t - t % 7]);
  }
}

TEST_CASE("alg1 with k=1 and d=1 is textbook UCB") {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 10; ++trial) {
    int K = 2 + static_cast<int>(gen() % 4);
    std::vector<double> means;
    for (int i = 0; i < K; ++i) means.push_back(uniform01(gen));
    Instance inst = bernoulli_instance(means, 1, 300);
    std::uint64_t seed = gen();
    double delta = std::pow(300.0, -8.0);

    Environment env_a(inst, seed, 0);
    Alg1Policy policy(K, 300, 1, {1, delta});
    auto rec = run_policy(env_a, policy);

    Environment env_b(inst, seed, 0);
    auto oracle = textbook_ucb_actions(env_b, delta);
    CHECK(rec.actions == oracle);
  }
}

TEST_CASE("elimination schedule formula") {
  double e = std::exp(1.0);
  CHECK(alg2_nm(1, 1.0, e, 1) == 2);
  CHECK(alg2_nm(1, 1.0, e, 3) == 8);

  SUBCASE("d=1 collapses to ceil(2L / dt^2)") {
    std::mt19937_64 gen(13);
    for (int i = 0; i < 200; ++i) {
      double dt = 0.01 + uniform01(gen);
      double T = 10 + 1e6 * uniform01(gen);
      double L = std::max(std::log(T * dt * dt), 1.0);
      CHECK(alg2_nm(1 + static_cast<int>(gen() % 20), dt, T, 1) ==
            static_cast<std::int64_t>(std::ceil(2 * L / (dt * dt))));
    }
  }
  SUBCASE("non-decreasing in m under tolerance halving") {
    for (int d : {1, 5, 50}) {
      double dt = 1.0;
      std::int64_t prev = 0;
      for (int m = 1; m <= 30; ++m) {
        std::int64_t n = alg2_nm(m, dt, 1e6, d);
        CHECK(n >= prev);
        prev = n;
        dt /= 2;
      }
    }
  }
}

TEST_CASE("alg2 elimination rule") {
  CHECK(alg2_eliminate({{0, 0.9}, {1, 0.3}}, 0.5, {0, 1}) == std::vector<int>{0});
  // 0.4 + 0.5 == 0.9 is not strictly below the max
  CHECK(alg2_eliminate({{0, 0.9}, {1, 0.4}}, 0.5, {0, 1}) == std::vector<int>{0, 1});
  CHECK(alg2_eliminate({{2, 0.1}}, 0.5, {2}) == std::vector<int>{2});

  SUBCASE("the running max always survives") {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 200; ++trial) {
      std::map<int, double> est;
      std::vector<int> active;
      int K = 2 + static_cast<int>(gen() % 6);
      for (int i = 0; i < K; ++i) {
        est[i] = uniform01(gen);
        active.push_back(i);
      }
      auto kept = alg2_eliminate(est, uniform01(gen), active);
      CHECK_FALSE(kept.empty());
      int best = active[0];
      for (int i : active)
        if (est[i] > est[best]) best = i;
      CHECK(std::count(kept.begin(), kept.end(), best) == 1);
    }
  }
}

TEST_CASE("alg2 play schedule") {
  // delta_tilde_init = 1.5, d=1, T=4: n_1 = ceil(2*log(4*2.25)/2.25) = 2
  SUBCASE("arms are visited in ascending order up to n_m") {
    Instance inst = bernoulli_instance({0.5, 0.5}, 1, 4);
    inst.T = 4;
    Environment env(inst, 1, 0);
    Alg2Policy policy(2, 4, 1, {1.5});
    CHECK(policy.current_target() == 2);
    auto rec = run_policy(env, policy);
    CHECK(rec.actions == std::vector<int>{0, 0, 1, 1});
  }
  SUBCASE("horizon truncation mid-phase") {
    Instance inst = bernoulli_instance({0.5, 0.5}, 1, 3);
    Environment env(inst, 1, 0);
    Alg2Policy policy(2, 3, 1, {1.5});
    auto rec = run_policy(env, policy);
    CHECK(rec.actions == std::vector<int>{0, 0, 1});
    REQUIRE(rec.phases.size() == 2);
    CHECK(rec.phases[0].complete);        // arm 0 reached n_1 = 2
    CHECK_FALSE(rec.phases[1].complete);  // arm 1 truncated at 1 pull
  }
  SUBCASE("eliminated arms are never pulled again") {
    Instance inst = bernoulli_instance({0.9, 0.1}, 1, 2000);
    Environment env(inst, 5, 0);
    Alg2Policy policy(2, 2000, 1);
    auto rec = run_policy(env, policy);
    // once arm 1 disappears from a phase it stays gone
    std::set<int> phases_with_arm1;
    int max_m = 0;
    for (const auto& p : rec.phases) {
      if (p.arm == 1) phases_with_arm1.insert(p.m);
      max_m = std::max(max_m, p.m);
    }
    REQUIRE(!phases_with_arm1.empty());
    int last = *phases_with_arm1.rbegin();
    CHECK(last < max_m);
    for (int m = 1; m <= last; ++m) CHECK(phases_with_arm1.count(m) == 1);
  }
  SUBCASE("active sets shrink monotonically") {
    Instance inst = bernoulli_instance({0.8, 0.6, 0.4, 0.2}, 4, 5000, SpreadKind::dirichlet);
    Environment env(inst, 17, 0);
    Alg2Policy policy(4, 5000, 4);
    auto rec = run_policy(env, policy);
    std::map<int, std::set<int>> arms_by_phase;
    for (const auto& p : rec.phases) arms_by_phase[p.m].insert(p.arm);
    for (auto it = std::next(arms_by_phase.begin()); it != arms_by_phase.end(); ++it) {
      const auto& prev = std::prev(it)->second;
      for (int arm : it->second) CHECK(prev.count(arm) == 1);
    }
  }
}

TEST_CASE("baseline policies") {
  SUBCASE("uniform-random frequencies are flat") {
    UniformRandomPolicy p(4, make_stream(1, 0, Stream::policy));
    std::vector<int> counts(4, 0);
    const int n = 100000;
    for (int t = 0; t < n; ++t) ++counts[p.act(t)];
    for (int c : counts) CHECK(std::abs(static_cast<double>(c) / n - 0.25) < 0.01);
  }
  SUBCASE("uniform-random pseudo-regret is about T/2 on a 0/1 gap pair") {
    Instance inst = bernoulli_instance({1.0, 0.0}, 1, 10000);
    Environment env(inst, 2, 0);
    UniformRandomPolicy p(2, make_stream(2, 0, Stream::policy));
    auto rec = run_policy(env, p);
    double final_regret = compute_pseudo_regret(rec.actions, inst).back();
    CHECK(std::abs(final_regret - 5000.0) <= 150.0);  // 3 sqrt(T) / 2
  }
  SUBCASE("vanilla-ucb is alg1 with k=1") {
    Instance inst = bernoulli_instance({0.7, 0.3, 0.5}, 1, 500);
    Environment a(inst, 8, 0), b(inst, 8, 0);
    auto pa = make_policy("vanilla-ucb", inst, 8, 0, {});
    auto pb = make_policy("alg1", inst, 8, 0, PolicyOverrides{1, 0.0, 1.0});
    CHECK(run_policy(a, *pa).actions == run_policy(b, *pb).actions);
  }
  SUBCASE("unknown policy name is a configuration error") {
    Instance inst = bernoulli_instance({0.5, 0.5}, 1, 10);
    CHECK_THROWS_AS(make_policy("thompson", inst, 0, 0, {}), ConfigError);
  }
}

TEST_CASE("policies run against observations alone") {
  // the anonymity firewall: a policy needs no Environment, only (t, x)
  Alg1Policy p1(2, 100, 1, {2, 0.0});
  Alg2Policy p2(2, 100, 1);
  for (int t = 0; t < 20; ++t) {
    p1.observe(t, 0.1 * p1.act(t));
    p2.observe(t, 0.1 * p2.act(t));
  }
  p1.finish();
  p2.finish();
  CHECK(!p1.phases().empty());
}

TEST_CASE("per-arm counts always sum to the elapsed time") {
  Instance inst = bernoulli_instance({0.6, 0.5, 0.4}, 5, 1000, SpreadKind::all_at_end);
  Environment env(inst, 4, 0);
  Alg1Policy policy(3, 1000, 5);
  auto rec = run_policy(env, policy);
  std::int64_t total = 0;
  std::map<int, std::int64_t> per_arm;
  for (const auto& p : rec.phases) {
    per_arm[p.arm] += static_cast<std::int64_t>(p.times.size());
    total += static_cast<std::int64_t>(p.times.size());
  }
  CHECK(total == 1000);
  for (const auto& p : rec.phases)
    if (p.m == rec.phases.back().m) CHECK(p.cum_count == per_arm[p.arm]);
}
