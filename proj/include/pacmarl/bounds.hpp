#pragma once

// Closed-form PAC sample-complexity bounds for single-agent (SARL) and
// multi-agent (MARL) empirical reward maximization, plus the ratio factors
// and decision conditions built from them.
//
// Conventions: natural logarithms; the unspecified universal constant is the
// explicit multiplier `c` (default 1); sample counts are returned as reals.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace pacmarl::bounds {

struct SarlInputs {
  double d = 1.0;       // effective dimension
  double B = 1.0;       // parameter-space radius
  double L_step = 1.0;  // per-token Lipschitz constant
  double T_max = 1.0;   // maximum sequence length
  double epsilon = 0.1;
  double delta = 0.05;
  double c = 1.0;

  double L_seq() const noexcept { return T_max * L_step; }
};

struct AgentSpec {
  double d = 1.0;  // private effective dimension when shared_dim > 0
  double B = 1.0;
  double T_max = 1.0;
};

struct MarlInputs {
  std::vector<AgentSpec> agents;  // K = agents.size()
  double L_step = 1.0;
  double epsilon = 0.1;
  double delta = 0.05;
  double alpha = 0.0;
  double c = 1.0;
  double shared_dim = 0.0;

  std::size_t K() const noexcept { return agents.size(); }
  double L_seq(std::size_t i) const noexcept { return agents[i].T_max * L_step; }
  // max_i (d_i) over effective dimensions (shared block included).
  double d_tilde() const;
  // max_i (L_seq_i * B_i).
  double gamma() const;

  // K identical agents.
  static MarlInputs homogeneous(std::size_t K, double d_i, double B_i, double T_max_i,
                                double L_step, double epsilon, double delta,
                                double alpha = 0.0, double c = 1.0);
};

// n = constant_used * (entropy_term + confidence_term) / accuracy_denominator,
// evaluated in exactly that order.
struct ComplexityBound {
  double n_samples = 0.0;
  double entropy_term = 0.0;
  double confidence_term = 0.0;
  double accuracy_denominator = 0.0;
  double constant_used = 1.0;

  double reconstruct() const noexcept {
    return constant_used * (entropy_term + confidence_term) / accuracy_denominator;
  }
};

enum class Recommendation { MARL, SARL, Indeterminate };
enum class Regime { Independent, Dependent, Misaligned };

std::string_view to_string(Recommendation r) noexcept;
std::string_view to_string(Regime r) noexcept;

struct ComparisonReport {
  Regime regime = Regime::Independent;
  double n_sarl = 0.0;
  double n_marl = 0.0;
  double ratio = 0.0;  // n_marl / n_sarl
  std::optional<double> factor_A;
  std::optional<double> factor_C;
  std::optional<double> factored_ratio;  // K^2 * A * C (dependent)
  std::optional<double> large_model_heuristic;  // K^2 * sum(d_i) / d (dependent)
  std::optional<double> kappa_d;
  std::optional<double> kappa_l;
  std::optional<double> entropy_only_ratio;  // misaligned
  std::optional<double> homogeneous_cap;     // independent, homogeneous split only
  bool condition_holds = false;
  Recommendation recommendation = Recommendation::Indeterminate;
};

// Throws ValidationError naming the first offending field.
void validate(const SarlInputs& in);
void validate(const MarlInputs& in);

ComplexityBound sarl_bound(const SarlInputs& in);
ComplexityBound marl_bound_dependent(const MarlInputs& in);
ComplexityBound marl_bound_independent(const MarlInputs& in);
ComplexityBound marl_bound_misaligned(const MarlInputs& in);

ComparisonReport ratio_independent(const SarlInputs& s, const MarlInputs& m);
ComparisonReport ratio_dependent(const SarlInputs& s, const MarlInputs& m);
ComparisonReport misalignment_condition(const SarlInputs& s, const MarlInputs& m);

// True when d_i = d/K, T_max_i = T_max/K and B_i <= B for every agent.
bool is_homogeneous_split(const SarlInputs& s, const MarlInputs& m);

// 1/K + (1 - 1/K) * ln(1/delta) / (d ln(L_seq B / eps) + ln(1/delta)).
double homogeneous_ratio_cap(const SarlInputs& s, std::size_t K);

// d * ln(c * L_seq * B / eps).
double covering_entropy_sarl(double d, double B, double L_seq, double epsilon, double c);

// sum_i d_i * ln(c * L_rho * K * L_seq_i * B_i / eps). A shared block adds
// shared_dim * ln(c * L_rho * K * gamma / eps) once.
double covering_entropy_marl(const MarlInputs& m, std::optional<double> L_rho = std::nullopt);

struct EffectiveDimensions {
  double sum_effective = 0.0;
  double max_effective = 0.0;
};

// Shared parameters count once: sum = shared + sum(private),
// max = shared + max(private).
EffectiveDimensions effective_dimensions(std::span<const double> private_dims,
                                         double shared_dim);

}  // namespace pacmarl::bounds
