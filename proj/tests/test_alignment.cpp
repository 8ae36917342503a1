#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pacmarl/alignment.hpp"
#include "pacmarl/bounds.hpp"
#include "pacmarl/errors.hpp"
#include "pacmarl/rng.hpp"

using namespace pacmarl;
using namespace pacmarl::alignment;
using tasks::TaskMode;

namespace {

std::vector<RewardPair> gap_list() {
  return {{1.0, 1.0}, {0.9, 0.7}, {0.2, 0.6}, {0.7, 0.1}, {0.1, 0.9}};  // 0 .2 .4 .6 .8
}

tasks::SyntheticTask task(std::size_t K, TaskMode mode, double lambda, double sigma2 = 1.0) {
  tasks::TaskConfig c;
  c.K = K;
  c.p = 3;
  c.mode = mode;
  c.lambda = lambda;
  c.sigma2 = sigma2;
  c.weight_seed = 8;
  return tasks::make_task(c);
}

learners::SegmentedModel trained(const tasks::SyntheticTask& t, learners::Learner l,
                                 std::size_t n = 200) {
  return learners::train(l, tasks::generate(t, n, 1), {}).model;
}

}  // namespace

TEST_CASE("nearest-rank quantile") {
  const auto pairs = gap_list();
  CHECK(alpha_monte_carlo(pairs, 0.95).alpha_hat == doctest::Approx(0.8));
  CHECK(alpha_monte_carlo(pairs, 0.5).alpha_hat == doctest::Approx(0.4));
  CHECK(alpha_monte_carlo(pairs, 1.0).alpha_hat == doctest::Approx(0.8));
  CHECK(alpha_monte_carlo(pairs, 0.2).alpha_hat == 0.0);
  CHECK(alpha_monte_carlo(pairs, 1.0).method == Method::MonteCarloMax);
  CHECK(alpha_monte_carlo(pairs, 0.5).method == Method::MonteCarloQuantile);

  double last = -1;
  for (double q = 0.05; q <= 1.0; q += 0.05) {
    const double a = alpha_monte_carlo(pairs, q).alpha_hat;
    CHECK(a >= last);
    last = a;
  }

  std::vector<RewardPair> repeated;
  for (int m = 0; m < 4; ++m) repeated.insert(repeated.end(), pairs.begin(), pairs.end());
  CHECK(alpha_monte_carlo(repeated, 1.0).alpha_hat == alpha_monte_carlo(pairs, 1.0).alpha_hat);
}

TEST_CASE("identical and shifted rewards") {
  const std::vector<RewardPair> same{{0.3, 0.3}, {0.9, 0.9}};
  CHECK(alpha_monte_carlo(same, 1.0).alpha_hat == 0.0);
  const std::vector<RewardPair> shifted{{0.3, 0.4}, {0.5, 0.6}, {0.1, 0.2}};
  for (double q : {0.1, 0.5, 1.0}) {
    CHECK(alpha_monte_carlo(shifted, q).alpha_hat == doctest::Approx(0.1));
  }
  CHECK_THROWS_AS(alpha_monte_carlo({}, 1.0), InputError);
  CHECK_THROWS_AS(alpha_monte_carlo(same, 0.0), ValidationError);
  CHECK_THROWS_AS(alpha_monte_carlo(same, 1.5), ValidationError);
}

TEST_CASE("witnesses reproduce the estimate") {
  const auto pairs = gap_list();
  const auto est = alpha_monte_carlo(pairs, 0.5);
  CHECK(recompute(est.witness) == est.alpha_hat);

  const auto t = task(3, TaskMode::Dependent, 1.0);
  const auto model = trained(t, learners::Learner::MARL);
  const auto mc = alpha_from_model(t, model, 300, 0.95, 4);
  CHECK(recompute(mc.witness) == mc.alpha_hat);
  CHECK(mc.alpha_hat >= 0.0);
  CHECK(mc.alpha_hat <= 1.0);

  AscentConfig cfg;
  cfg.restarts = 4;
  cfg.steps_per_restart = 30;
  const auto ga = alpha_gradient_ascent(t, model, cfg);
  CHECK(recompute(ga.witness) == ga.alpha_hat);
  CHECK(ga.alpha_hat <= 1.0);
}

TEST_CASE("a single segment has no misalignment") {
  for (auto mode : {TaskMode::Independent, TaskMode::Dependent}) {
    const auto t = task(1, mode, 0.7);
    const auto model = trained(t, learners::Learner::SARL);
    CHECK(alpha_from_model(t, model, 200, 1.0, 3).alpha_hat == 0.0);
    AscentConfig cfg;
    cfg.restarts = 3;
    cfg.steps_per_restart = 20;
    CHECK(alpha_gradient_ascent(t, model, cfg).alpha_hat == 0.0);
  }
}

TEST_CASE("an exact model on noiseless data has no misalignment") {
  const auto t = task(3, TaskMode::Independent, 0.0, 0.0);
  auto model = learners::SegmentedModel::zeros(learners::Arrangement::PerAgent,
                                               TaskMode::Independent, 3, 3);
  model.weights = t.weights;
  CHECK(alpha_from_model(t, model, 100, 1.0, 2).alpha_hat == 0.0);
}

TEST_CASE("ascent is never worse than its starting points") {
  const auto t = task(3, TaskMode::Dependent, 1.0);
  const auto model = trained(t, learners::Learner::SARL);
  AscentConfig cfg;
  cfg.restarts = 6;
  cfg.steps_per_restart = 50;
  cfg.seed = 12;
  const auto est = alpha_gradient_ascent(t, model, cfg);
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    const auto x = tasks::draw_features(t.config, rng::derive(cfg.seed, {r}));
    const auto pred = model.predict(x);
    const auto y = tasks::noiseless_targets(t, x);
    const double start = std::fabs(tasks::unified_reward(pred, y) -
                                   tasks::decomposed_reward_dependent(pred, y, 1.0));
    CHECK(est.alpha_hat >= start);
  }
}

TEST_CASE("adversarial search beats passive sampling on the observed seeds") {
  const auto t = task(4, TaskMode::Dependent, 1.0);
  const auto model = trained(t, learners::Learner::MARL, 400);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    AscentConfig cfg;
    cfg.seed = seed;
    const auto ga = alpha_gradient_ascent(t, model, cfg);
    const auto mc = alpha_from_model(t, model, cfg.restarts, 1.0, seed);
    CHECK(ga.alpha_hat >= mc.alpha_hat);
  }
}

TEST_CASE("the coherence penalty lowers the decomposed reward as lambda grows") {
  // With predictions and targets held fixed, R is unchanged and Rbar falls,
  // so the gap in the R > Rbar direction widens with lambda.
  const std::vector<double> pred{0.5, 2.0, -1.0, 3.0};
  const std::vector<double> target{0.0, 1.5, -0.5, 2.0};
  const double R = tasks::unified_reward(pred, target);
  double last = -1.0;
  for (double lambda : {0.0, 0.25, 0.5, 1.0}) {
    const double gap = R - tasks::decomposed_reward_dependent(pred, target, lambda);
    CHECK(gap >= last);
    last = gap;
  }
}

TEST_CASE("chaining a large estimate into the misaligned bound fails") {
  const auto est = alpha_monte_carlo(gap_list(), 1.0);  // 0.8
  auto m = bounds::MarlInputs::homogeneous(2, 5, 1, 50, 1, 0.5, 0.05, est.alpha_hat);
  CHECK_THROWS_AS(bounds::marl_bound_misaligned(m), AlignmentInfeasibleError);
}

TEST_CASE("ascent configuration and serialization") {
  AscentConfig bad;
  bad.restarts = 0;
  CHECK_THROWS_AS(validate(bad), ValidationError);
  bad = {};
  bad.step_size = -1;
  CHECK_THROWS_AS(validate(bad), ValidationError);

  std::ostringstream out;
  write_estimate(alpha_monte_carlo(gap_list(), 0.95), out);
  CHECK(out.str().find("alpha_hat=0.8") != std::string::npos);

  std::istringstream in("R,Rbar\n0.5,0.25\n1,1\n");
  const auto pairs = read_pairs_csv(in);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].decomposed == 0.25);
}
