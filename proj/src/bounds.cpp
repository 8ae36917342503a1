#include "pacmarl/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "pacmarl/errors.hpp"

namespace pacmarl {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

AlignmentInfeasibleError::AlignmentInfeasibleError(double epsilon, double alpha)
    : InputError("epsilon must exceed 2*alpha (epsilon=" + num(epsilon) + ", alpha=" +
                 num(alpha) + ", need epsilon > " + num(2.0 * alpha) + ")"),
      min_epsilon_(2.0 * alpha) {}

DivergenceError::DivergenceError(double learning_rate, const std::string& detail)
    : std::runtime_error("training diverged at learning rate " + num(learning_rate) +
                         ": " + detail),
      learning_rate_(learning_rate) {}

namespace bounds {

namespace {

void require(bool ok, const char* field, const std::string& why) {
  if (!ok) throw ValidationError(field, why);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

void require_unit_open(double v, const char* field) {
  require(std::isfinite(v) && v > 0.0 && v < 1.0, field, "must lie in (0,1), got " + num(v));
}

// ln(arg) with the vacuity guard shared by every bound.
double positive_log(double arg, const std::string& what) {
  if (!(arg > 1.0)) {
    throw VacuousBoundError("vacuous bound: " + what + " = " + num(arg) +
                            " must exceed 1 for the logarithm to be positive");
  }
  return std::log(arg);
}

void require_aligned(const MarlInputs& m, const char* regime) {
  if (m.alpha != 0.0) {
    throw RegimeMismatchError(std::string(regime) +
                              " bound assumes an exact decomposition (alpha = 0); got alpha = " +
                              num(m.alpha) + ", use the misaligned regime");
  }
}

double per_agent_dim(const MarlInputs& m, std::size_t i) { return m.agents[i].d; }

}  // namespace

std::string_view to_string(Recommendation r) noexcept {
  switch (r) {
    case Recommendation::MARL: return "MARL";
    case Recommendation::SARL: return "SARL";
    case Recommendation::Indeterminate: return "Indeterminate";
  }
  return "?";
}

std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::Independent: return "independent";
    case Regime::Dependent: return "dependent";
    case Regime::Misaligned: return "misaligned";
  }
  return "?";
}

double MarlInputs::d_tilde() const {
  double best = 0.0;
  for (const auto& a : agents) best = std::max(best, a.d);
  return shared_dim + best;
}

double MarlInputs::gamma() const {
  double best = 0.0;
  for (std::size_t i = 0; i < agents.size(); ++i) best = std::max(best, L_seq(i) * agents[i].B);
  return best;
}

MarlInputs MarlInputs::homogeneous(std::size_t K, double d_i, double B_i, double T_max_i,
                                   double L_step, double epsilon, double delta, double alpha,
                                   double c) {
  MarlInputs m;
  m.agents.assign(K, AgentSpec{d_i, B_i, T_max_i});
  m.L_step = L_step;
  m.epsilon = epsilon;
  m.delta = delta;
  m.alpha = alpha;
  m.c = c;
  return m;
}

void validate(const SarlInputs& in) {
  require(std::isfinite(in.d) && in.d >= 1.0, "d", "must be >= 1, got " + num(in.d));
  require(finite_positive(in.B), "B", "must be > 0, got " + num(in.B));
  require(finite_positive(in.L_step), "L_step", "must be > 0, got " + num(in.L_step));
  require(std::isfinite(in.T_max) && in.T_max >= 1.0, "T_max",
          "must be >= 1, got " + num(in.T_max));
  require_unit_open(in.epsilon, "epsilon");
  require_unit_open(in.delta, "delta");
  require(finite_positive(in.c), "c", "must be > 0, got " + num(in.c));
}

void validate(const MarlInputs& in) {
  require(in.K() >= 1, "K", "at least one agent is required");
  require(std::isfinite(in.shared_dim) && in.shared_dim >= 0.0, "shared_dim",
          "must be >= 0, got " + num(in.shared_dim));
  const double min_private = in.shared_dim > 0.0 ? 0.0 : 1.0;
  for (const auto& a : in.agents) {
    require(std::isfinite(a.d) && a.d >= min_private, "d_i",
            "must be >= " + num(min_private) + ", got " + num(a.d));
    require(finite_positive(a.B), "B_i", "must be > 0, got " + num(a.B));
    require(std::isfinite(a.T_max) && a.T_max >= 1.0, "T_max_i",
            "must be >= 1, got " + num(a.T_max));
  }
  require(finite_positive(in.L_step), "L_step", "must be > 0, got " + num(in.L_step));
  require_unit_open(in.epsilon, "epsilon");
  require_unit_open(in.delta, "delta");
  require(std::isfinite(in.alpha) && in.alpha >= 0.0, "alpha",
          "must be >= 0, got " + num(in.alpha));
  require(finite_positive(in.c), "c", "must be > 0, got " + num(in.c));
}

ComplexityBound sarl_bound(const SarlInputs& in) {
  validate(in);
  ComplexityBound b;
  b.entropy_term = in.d * positive_log(in.L_seq() * in.B / in.epsilon, "L_seq*B/epsilon");
  b.confidence_term = std::log(1.0 / in.delta);
  b.accuracy_denominator = in.epsilon * in.epsilon;
  b.constant_used = in.c;
  b.n_samples = b.reconstruct();
  return b;
}

ComplexityBound marl_bound_dependent(const MarlInputs& in) {
  validate(in);
  require_aligned(in, "dependent");
  const double K = static_cast<double>(in.K());
  ComplexityBound b;
  double entropy = 0.0;
  for (std::size_t i = 0; i < in.K(); ++i) {
    entropy += per_agent_dim(in, i) *
               positive_log(in.L_seq(i) * in.agents[i].B / in.epsilon,
                            "L_seq_" + std::to_string(i + 1) + "*B_" + std::to_string(i + 1) +
                                "/epsilon");
  }
  if (in.shared_dim > 0.0) {
    entropy += in.shared_dim * positive_log(in.gamma() / in.epsilon, "gamma/epsilon");
  }
  b.entropy_term = entropy;
  b.confidence_term = std::log(K / in.delta);
  const double per_agent_eps = in.epsilon / K;
  b.accuracy_denominator = per_agent_eps * per_agent_eps;
  b.constant_used = in.c;
  b.n_samples = b.reconstruct();
  return b;
}

ComplexityBound marl_bound_independent(const MarlInputs& in) {
  validate(in);
  require_aligned(in, "independent");
  ComplexityBound b;
  b.entropy_term = in.d_tilde() * positive_log(in.gamma() / in.epsilon, "gamma/epsilon");
  b.confidence_term = std::log(1.0 / in.delta);
  b.accuracy_denominator = in.epsilon * in.epsilon;
  b.constant_used = in.c;
  b.n_samples = b.reconstruct();
  return b;
}

ComplexityBound marl_bound_misaligned(const MarlInputs& in) {
  validate(in);
  if (!(in.epsilon > 2.0 * in.alpha)) throw AlignmentInfeasibleError(in.epsilon, in.alpha);
  const double K = static_cast<double>(in.K());
  const double effective_eps = in.epsilon - 2.0 * in.alpha;
  ComplexityBound b;
  b.entropy_term =
      in.d_tilde() * positive_log(K * in.gamma() / effective_eps, "K*gamma/(epsilon-2*alpha)");
  b.confidence_term = std::log(1.0 / in.delta);
  b.accuracy_denominator = effective_eps * effective_eps;
  b.constant_used = in.c;
  b.n_samples = b.reconstruct();
  return b;
}

namespace {

bool close_rel(double a, double b) {
  return std::fabs(a - b) <= 1e-12 * std::max(std::fabs(a), std::fabs(b));
}

void require_shared_accuracy(const SarlInputs& s, const MarlInputs& m) {
  if (s.epsilon != m.epsilon || s.delta != m.delta) {
    throw ValidationError("epsilon", "SARL and MARL inputs must share epsilon and delta");
  }
}

}  // namespace

bool is_homogeneous_split(const SarlInputs& s, const MarlInputs& m) {
  if (m.shared_dim != 0.0 || m.L_step != s.L_step) return false;
  const double K = static_cast<double>(m.K());
  return std::all_of(m.agents.begin(), m.agents.end(), [&](const AgentSpec& a) {
    return close_rel(a.d, s.d / K) && close_rel(a.T_max, s.T_max / K) && a.B <= s.B;
  });
}

double homogeneous_ratio_cap(const SarlInputs& s, std::size_t K) {
  validate(s);
  const double inv_k = 1.0 / static_cast<double>(K);
  const double conf = std::log(1.0 / s.delta);
  const double entropy = s.d * positive_log(s.L_seq() * s.B / s.epsilon, "L_seq*B/epsilon");
  return inv_k + (1.0 - inv_k) * conf / (entropy + conf);
}

ComparisonReport ratio_independent(const SarlInputs& s, const MarlInputs& m) {
  require_shared_accuracy(s, m);
  const ComplexityBound sarl = sarl_bound(s);
  const ComplexityBound marl = marl_bound_independent(m);
  ComparisonReport r;
  r.regime = Regime::Independent;
  r.n_sarl = sarl.n_samples;
  r.n_marl = marl.n_samples;
  r.ratio = r.n_marl / r.n_sarl;
  r.condition_holds = m.d_tilde() <= s.d && m.gamma() <= s.L_seq() * s.B;
  if (is_homogeneous_split(s, m) && s.c == m.c) r.homogeneous_cap = homogeneous_ratio_cap(s, m.K());
  r.recommendation = (r.condition_holds && r.ratio < 1.0) ? Recommendation::MARL
                                                          : Recommendation::Indeterminate;
  return r;
}

ComparisonReport ratio_dependent(const SarlInputs& s, const MarlInputs& m) {
  require_shared_accuracy(s, m);
  const ComplexityBound sarl = sarl_bound(s);
  const ComplexityBound marl = marl_bound_dependent(m);
  const double K = static_cast<double>(m.K());

  // A = S / A_sarl, C = (1 + L_K / S) / (1 + L / A_sarl).
  const double S = marl.entropy_term;
  const double A_sarl = sarl.entropy_term;
  const double L_K = marl.confidence_term;
  const double L = sarl.confidence_term;

  ComparisonReport r;
  r.regime = Regime::Dependent;
  r.n_sarl = sarl.n_samples;
  r.n_marl = marl.n_samples;
  r.ratio = r.n_marl / r.n_sarl;
  r.factor_A = S / A_sarl;
  r.factor_C = (1.0 + L_K / S) / (1.0 + L / A_sarl);
  r.factored_ratio = (m.c / s.c) * K * K * (*r.factor_A) * (*r.factor_C);
  double dim_sum = m.shared_dim;
  for (const auto& a : m.agents) dim_sum += a.d;
  r.large_model_heuristic = K * K * dim_sum / s.d;
  r.condition_holds = r.ratio <= 1.0;
  r.recommendation = r.condition_holds ? Recommendation::MARL : Recommendation::SARL;
  return r;
}

ComparisonReport misalignment_condition(const SarlInputs& s, const MarlInputs& m) {
  require_shared_accuracy(s, m);
  const ComplexityBound marl = marl_bound_misaligned(m);
  const ComplexityBound sarl = sarl_bound(s);
  const double K = static_cast<double>(m.K());
  const double eps = s.epsilon;
  const double effective_eps = eps - 2.0 * m.alpha;

  const double marl_log = std::log(K * m.gamma() / effective_eps);
  const double sarl_log = std::log(s.L_seq() * s.B / eps);

  ComparisonReport r;
  r.regime = Regime::Misaligned;
  r.n_sarl = sarl.n_samples;
  r.n_marl = marl.n_samples;
  r.ratio = r.n_marl / r.n_sarl;
  r.kappa_d = m.d_tilde() / s.d;
  r.kappa_l = marl_log / sarl_log;
  const double slack = 1.0 - 2.0 * m.alpha / eps;
  r.condition_holds = (*r.kappa_d) * (*r.kappa_l) <= slack * slack;
  r.entropy_only_ratio = (m.d_tilde() * marl_log / (effective_eps * effective_eps)) /
                         (s.d * sarl_log / (eps * eps));
  r.recommendation = r.condition_holds ? Recommendation::MARL : Recommendation::SARL;
  return r;
}

double covering_entropy_sarl(double d, double B, double L_seq, double epsilon, double c) {
  require(std::isfinite(d) && d >= 1.0, "d", "must be >= 1, got " + num(d));
  require(finite_positive(B), "B", "must be > 0, got " + num(B));
  require(finite_positive(L_seq), "L_seq", "must be > 0, got " + num(L_seq));
  require_unit_open(epsilon, "epsilon");
  require(finite_positive(c), "c", "must be > 0, got " + num(c));
  return d * positive_log(c * L_seq * B / epsilon, "c*L_seq*B/epsilon");
}

double covering_entropy_marl(const MarlInputs& m, std::optional<double> L_rho) {
  validate(m);
  const double K = static_cast<double>(m.K());
  const double lrho = L_rho.value_or(1.0 / K);
  require(finite_positive(lrho), "L_rho", "must be > 0, got " + num(lrho));
  const double scale = m.c * lrho * K;
  double total = 0.0;
  for (std::size_t i = 0; i < m.K(); ++i) {
    total += m.agents[i].d * positive_log(scale * m.L_seq(i) * m.agents[i].B / m.epsilon,
                                          "c*L_rho*K*L_seq_i*B_i/epsilon");
  }
  if (m.shared_dim > 0.0) {
    total += m.shared_dim * positive_log(scale * m.gamma() / m.epsilon, "c*L_rho*K*gamma/epsilon");
  }
  return total;
}

EffectiveDimensions effective_dimensions(std::span<const double> private_dims,
                                         double shared_dim) {
  require(std::isfinite(shared_dim) && shared_dim >= 0.0, "shared_dim",
          "must be >= 0, got " + num(shared_dim));
  EffectiveDimensions out;
  double sum = 0.0;
  double max = 0.0;
  for (double p : private_dims) {
    require(std::isfinite(p) && p >= 0.0, "private_dims", "must be >= 0, got " + num(p));
    sum += p;
    max = std::max(max, p);
  }
  require(max >= 1.0 || shared_dim >= 1.0, "private_dims",
          "need at least one private dimension >= 1 or a shared dimension >= 1");
  out.sum_effective = shared_dim + sum;
  out.max_effective = shared_dim + max;
  return out;
}

}  // namespace bounds
}  // namespace pacmarl
