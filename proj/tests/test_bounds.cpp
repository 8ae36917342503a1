#include <doctest.h>

#include <cmath>
#include <random>

#include "pacmarl/bounds.hpp"
#include "pacmarl/errors.hpp"
#include "reference_values.hpp"

using namespace pacmarl;
using namespace pacmarl::bounds;

namespace {

SarlInputs worked_sarl() {
  SarlInputs s;
  s.d = 10;
  s.B = 1;
  s.L_step = 1;
  s.T_max = 100;
  s.epsilon = 0.1;
  s.delta = 0.05;
  return s;
}

MarlInputs worked_pair(double alpha = 0.0) {
  return MarlInputs::homogeneous(2, 5, 1, 50, 1, 0.1, 0.05, alpha);
}

bool rel_close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b));
}

}  // namespace

TEST_CASE("single-agent bound matches the hand-evaluated values") {
  const auto b = sarl_bound(worked_sarl());
  CHECK(rel_close(b.n_samples, ref::kSarlWorked, 1e-12));
  CHECK(b.n_samples == b.reconstruct());

  SarlInputs unit;
  unit.d = 1;
  unit.L_step = 1;
  unit.T_max = 1;
  unit.epsilon = 0.5;
  unit.B = std::exp(1.0) * 0.5;
  unit.delta = std::exp(-1.0);
  CHECK(sarl_bound(unit).n_samples == doctest::Approx(8.0).epsilon(1e-12));

  auto looser = worked_sarl();
  looser.epsilon = 0.2;
  CHECK(sarl_bound(looser).n_samples < b.n_samples);
}

TEST_CASE("single-agent bound rejects bad input") {
  auto s = worked_sarl();
  s.epsilon = 1.5;
  CHECK_THROWS_AS(sarl_bound(s), ValidationError);
  s = worked_sarl();
  s.delta = 0.0;
  CHECK_THROWS_AS(sarl_bound(s), ValidationError);
  s = worked_sarl();
  s.d = -1;
  try {
    sarl_bound(s);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "d");
  }
  s = worked_sarl();
  s.B = 5e-4;  // L_seq * B / eps = 0.5
  CHECK_THROWS_AS(sarl_bound(s), VacuousBoundError);
  s = worked_sarl();
  s.T_max = 0.5;
  CHECK_THROWS_AS(sarl_bound(s), ValidationError);
}

TEST_CASE("dependent MARL bound") {
  CHECK(rel_close(marl_bound_dependent(worked_pair()).n_samples, ref::kDependentWorked, 1e-12));

  const auto single = MarlInputs::homogeneous(1, 10, 1, 100, 1, 0.1, 0.05);
  CHECK(rel_close(marl_bound_dependent(single).n_samples, ref::kSarlWorked, 1e-12));

  const auto three = MarlInputs::homogeneous(3, 10.0 / 3, 1, 100.0 / 3, 1, 0.1, 0.05);
  CHECK(marl_bound_dependent(three).n_samples > marl_bound_dependent(worked_pair()).n_samples);

  CHECK_THROWS_AS(marl_bound_dependent(worked_pair(0.01)), RegimeMismatchError);

  auto vacuous = worked_pair();
  vacuous.agents[1].B = 1e-3;
  CHECK_THROWS_AS(marl_bound_dependent(vacuous), VacuousBoundError);
}

TEST_CASE("independent MARL bound depends only on the per-agent maxima") {
  CHECK(rel_close(marl_bound_independent(worked_pair()).n_samples, ref::kIndependentWorked, 1e-12));
  const auto single = MarlInputs::homogeneous(1, 10, 1, 100, 1, 0.1, 0.05);
  CHECK(rel_close(marl_bound_independent(single).n_samples, ref::kSarlWorked, 1e-12));

  MarlInputs hetero;
  hetero.agents = {{2, 1, 10}, {5, 1, 50}, {3, 1, 20}};
  hetero.epsilon = 0.1;
  hetero.delta = 0.05;
  CHECK(marl_bound_independent(hetero).n_samples ==
        doctest::Approx(ref::kIndependentWorked).epsilon(1e-12));
}

TEST_CASE("misaligned MARL bound") {
  CHECK(rel_close(marl_bound_misaligned(worked_pair(0.02)).n_samples, ref::kMisalignedWorked,
                  1e-12));
  const auto single = MarlInputs::homogeneous(1, 10, 1, 100, 1, 0.1, 0.05);
  CHECK(rel_close(marl_bound_misaligned(single).n_samples,
                  marl_bound_independent(single).n_samples, 1e-12));

  try {
    marl_bound_misaligned(worked_pair(0.05));
    FAIL("expected alignment-infeasible");
  } catch (const AlignmentInfeasibleError& e) {
    CHECK(e.min_feasible_epsilon() == doctest::Approx(0.1));
  }
  CHECK(marl_bound_misaligned(worked_pair(0.03)).n_samples >
        marl_bound_misaligned(worked_pair(0.02)).n_samples);
}

TEST_CASE("independent ratio and cap") {
  const auto r = ratio_independent(worked_sarl(), worked_pair());
  CHECK(r.ratio == doctest::Approx(ref::kIndependentWorked / ref::kSarlWorked).epsilon(1e-12));
  CHECK(r.ratio == doctest::Approx(0.4727).epsilon(1e-4));
  REQUIRE(r.homogeneous_cap);
  CHECK(*r.homogeneous_cap == doctest::Approx(ref::kCapWorked).epsilon(1e-12));
  CHECK(r.ratio <= *r.homogeneous_cap);
  CHECK(r.condition_holds);
  CHECK(r.recommendation == Recommendation::MARL);

  const auto single = MarlInputs::homogeneous(1, 10, 1, 100, 1, 0.1, 0.05);
  const auto one = ratio_independent(worked_sarl(), single);
  CHECK(one.ratio == 1.0);
  CHECK(one.recommendation == Recommendation::Indeterminate);

  auto big = worked_pair();
  big.agents[0].d = 12;
  const auto over = ratio_independent(worked_sarl(), big);
  CHECK_FALSE(over.condition_holds);
  CHECK(over.recommendation == Recommendation::Indeterminate);
  CHECK_FALSE(over.homogeneous_cap);
}

TEST_CASE("dependent ratio factors") {
  const auto r = ratio_dependent(worked_sarl(), worked_pair());
  CHECK(*r.factor_A == doctest::Approx(ref::kFactorA).epsilon(1e-12));
  CHECK(*r.factor_C == doctest::Approx(ref::kFactorC).epsilon(1e-12));
  CHECK(r.ratio == doctest::Approx(ref::kDependentRatio).epsilon(1e-12));
  CHECK(*r.factored_ratio == doctest::Approx(r.ratio).epsilon(1e-12));
  CHECK(r.recommendation == Recommendation::SARL);

  const auto single = MarlInputs::homogeneous(1, 10, 1, 100, 1, 0.1, 0.05);
  const auto one = ratio_dependent(worked_sarl(), single);
  CHECK(*one.factor_A * *one.factor_C == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(one.ratio == doctest::Approx(1.0).epsilon(1e-14));

  auto s = worked_sarl();
  s.d *= 1000;
  auto m = worked_pair();
  for (auto& a : m.agents) a.d *= 1000;
  const auto large = ratio_dependent(s, m);
  CHECK(std::fabs(*large.factor_C - 1.0) <= 1e-3);
  // A converges to sum(d_i)/d only up to the log-argument mismatch between
  // ln(L_seq_i B_i / eps) and ln(L_seq B / eps).
  CHECK(*large.factor_A == doctest::Approx(ref::kFactorALimit).epsilon(1e-3));
}

TEST_CASE("misalignment condition") {
  const auto r = misalignment_condition(worked_sarl(), worked_pair(0.02));
  CHECK(*r.kappa_d == doctest::Approx(0.5));
  CHECK(*r.kappa_l == doctest::Approx(ref::kKappaL).epsilon(1e-12));
  CHECK_FALSE(r.condition_holds);
  CHECK(r.recommendation == Recommendation::SARL);

  const auto aligned = misalignment_condition(worked_sarl(), worked_pair());
  CHECK(*aligned.kappa_l == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(aligned.condition_holds);
  CHECK(aligned.recommendation == Recommendation::MARL);

  const auto single = MarlInputs::homogeneous(1, 10, 1, 100, 1, 0.1, 0.05);
  const auto same = misalignment_condition(worked_sarl(), single);
  CHECK(same.condition_holds);
  CHECK(*same.entropy_only_ratio == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(misalignment_condition(worked_sarl(), worked_pair(0.06)),
                  AlignmentInfeasibleError);
}

TEST_CASE("covering entropies and effective dimensions") {
  CHECK(covering_entropy_sarl(10, 1, 100, 0.1, 1) == doctest::Approx(ref::kEntropy1000));
  CHECK(covering_entropy_sarl(10, 1, 100, 0.1, 2) == doctest::Approx(ref::kEntropy2000));
  CHECK(covering_entropy_sarl(1, std::exp(1.0) / 2, 1, 0.5, 1) == doctest::Approx(1.0));
  CHECK_THROWS_AS(covering_entropy_sarl(1, 0.05, 1, 0.1, 1), VacuousBoundError);

  CHECK(covering_entropy_marl(worked_pair()) == doctest::Approx(ref::kEntropy500));
  CHECK(covering_entropy_marl(worked_pair(), 1.0) == doctest::Approx(ref::kEntropy1000));
  const auto single = MarlInputs::homogeneous(1, 10, 1, 100, 1, 0.1, 0.05);
  CHECK(covering_entropy_marl(single, 1.0) == doctest::Approx(covering_entropy_sarl(10, 1, 100, 0.1, 1)));

  const double none[] = {5, 5};
  CHECK(effective_dimensions(none, 0).sum_effective == 10);
  CHECK(effective_dimensions(none, 0).max_effective == 5);
  const double three[] = {2, 2, 2};
  CHECK(effective_dimensions(three, 8).sum_effective == 14);
  CHECK(effective_dimensions(three, 8).max_effective == 10);
  const double zeros[] = {0, 0};
  CHECK(effective_dimensions(zeros, 7).sum_effective == 7);
  CHECK(effective_dimensions(zeros, 7).max_effective == 7);
  CHECK_THROWS_AS(effective_dimensions({}, 0), ValidationError);
}

TEST_CASE("bounds are monotone in their inputs") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    SarlInputs s;
    s.d = 6 + 50 * u(gen);
    s.B = 0.5 + 4 * u(gen);
    s.T_max = 10 + 200 * u(gen);
    s.epsilon = 0.02 + 0.3 * u(gen);
    s.delta = 0.01 + 0.3 * u(gen);
    const double base = sarl_bound(s).n_samples;
    auto more = s;
    more.epsilon *= 1.1;
    CHECK(sarl_bound(more).n_samples < base);
    more = s;
    more.d *= 1.1;
    CHECK(sarl_bound(more).n_samples > base);
    more = s;
    more.B *= 1.1;
    CHECK(sarl_bound(more).n_samples > base);
    more = s;
    more.T_max *= 1.1;
    CHECK(sarl_bound(more).n_samples > base);
    more = s;
    more.delta *= 0.9;
    CHECK(sarl_bound(more).n_samples > base);

    const std::size_t K = 2 + gen() % 4;
    auto m = MarlInputs::homogeneous(K, s.d / K, s.B, s.T_max / K, 1, s.epsilon, s.delta);
    auto bigger = m;
    bigger.agents[0].d *= 1.1;
    CHECK(marl_bound_dependent(bigger).n_samples > marl_bound_dependent(m).n_samples);
    m.alpha = 0.2 * s.epsilon;
    auto worse = m;
    worse.alpha = 0.3 * s.epsilon;
    CHECK(marl_bound_misaligned(worse).n_samples > marl_bound_misaligned(m).n_samples);
  }
}

TEST_CASE("every bound reconstructs bit-exactly") {
  const auto m = worked_pair();
  for (const auto& b : {sarl_bound(worked_sarl()), marl_bound_dependent(m),
                        marl_bound_independent(m), marl_bound_misaligned(worked_pair(0.02))}) {
    CHECK(b.n_samples == b.reconstruct());
    CHECK(b.entropy_term > 0);
    CHECK(b.confidence_term > 0);
  }
}
