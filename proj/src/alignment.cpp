#include "pacmarl/alignment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include "format.hpp"
#include "pacmarl/errors.hpp"
#include "pacmarl/rng.hpp"

namespace pacmarl::alignment {

using detail::exact;

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::MonteCarloMax: return "monte_carlo_max";
    case Method::MonteCarloQuantile: return "monte_carlo_quantile";
    case Method::GradientAscent: return "gradient_ascent";
  }
  return "?";
}

void validate(const AscentConfig& cfg) {
  if (cfg.restarts == 0) throw ValidationError("restarts", "must be >= 1");
  if (cfg.steps_per_restart == 0) throw ValidationError("steps_per_restart", "must be >= 1");
  if (!(std::isfinite(cfg.step_size) && cfg.step_size > 0.0)) {
    throw ValidationError("step_size", "must be > 0");
  }
  if (!(std::isfinite(cfg.finite_difference_h) && cfg.finite_difference_h > 0.0)) {
    throw ValidationError("finite_difference_h", "must be > 0");
  }
}

double discrepancy(const RewardPair& pair) noexcept {
  return std::fabs(pair.unified - pair.decomposed);
}

namespace {

RewardPair score(RewardKind kind, double lambda, const std::vector<double>& predicted,
                 const std::vector<double>& target) {
  RewardPair pair;
  pair.unified = tasks::unified_reward(predicted, target);
  pair.decomposed = kind == RewardKind::Independent
                        ? tasks::decomposed_reward_independent(predicted, target)
                        : tasks::decomposed_reward_dependent(predicted, target, lambda);
  return pair;
}

RewardKind kind_for(const tasks::TaskConfig& cfg) {
  return cfg.mode == tasks::TaskMode::Independent ? RewardKind::Independent
                                                  : RewardKind::Dependent;
}

void check_model(const tasks::SyntheticTask& task, const learners::SegmentedModel& model) {
  if (model.K != task.config.K || model.p != task.config.p) {
    throw ValidationError("model", "model shape does not match the task");
  }
}

}  // namespace

double recompute(const Witness& witness) {
  if (witness.predictions.empty()) return discrepancy(witness.rewards);
  return discrepancy(score(witness.kind, witness.lambda, witness.predictions, witness.targets));
}

AlphaEstimate alpha_monte_carlo(std::span<const RewardPair> pairs, double quantile) {
  if (pairs.empty()) throw ValidationError("pairs", "at least one reward pair is required");
  if (!(quantile > 0.0 && quantile <= 1.0)) {
    throw ValidationError("quantile", "must lie in (0,1]");
  }
  for (const auto& p : pairs) {
    if (!std::isfinite(p.unified) || !std::isfinite(p.decomposed)) {
      throw ValidationError("pairs", "reward values must be finite");
    }
  }
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return discrepancy(pairs[a]) < discrepancy(pairs[b]);
  });
  const double n = static_cast<double>(pairs.size());
  // The relative nudge keeps exact products such as 0.6 * 5 from rounding
  // up past an integer rank.
  auto rank = static_cast<std::size_t>(std::ceil(quantile * n * (1.0 - 1e-12)));
  rank = std::clamp<std::size_t>(rank, 1, pairs.size());
  const std::size_t chosen = order[rank - 1];

  AlphaEstimate est;
  est.method = quantile == 1.0 ? Method::MonteCarloMax : Method::MonteCarloQuantile;
  est.quantile = quantile;
  est.n_evaluations = pairs.size();
  est.witness.rewards = pairs[chosen];
  est.witness.index = chosen;
  est.alpha_hat = discrepancy(pairs[chosen]);
  return est;
}

AlphaEstimate alpha_from_model(const tasks::SyntheticTask& task,
                               const learners::SegmentedModel& model, std::size_t n_rollouts,
                               double quantile, std::uint64_t data_seed) {
  if (n_rollouts == 0) throw ValidationError("n_rollouts", "must be >= 1");
  check_model(task, model);
  const auto data = tasks::generate(task, n_rollouts, data_seed);
  const RewardKind kind = kind_for(task.config);
  const double lambda = task.config.effective_lambda();

  std::vector<RewardPair> pairs;
  std::vector<std::vector<double>> predictions;
  pairs.reserve(n_rollouts);
  for (const auto& s : data.samples) {
    predictions.push_back(model.predict(s.features));
    pairs.push_back(score(kind, lambda, predictions.back(), s.targets));
  }
  AlphaEstimate est = alpha_monte_carlo(pairs, quantile);
  const std::size_t i = est.witness.index;
  est.witness.features = data.samples[i].features;
  est.witness.targets = data.samples[i].targets;
  est.witness.predictions = predictions[i];
  est.witness.kind = kind;
  est.witness.lambda = lambda;
  return est;
}

AlphaEstimate alpha_gradient_ascent(const tasks::SyntheticTask& task,
                                    const learners::SegmentedModel& model,
                                    const AscentConfig& cfg) {
  validate(cfg);
  check_model(task, model);
  const RewardKind kind = kind_for(task.config);
  const double lambda = task.config.effective_lambda();
  const std::size_t K = task.config.K;
  const std::size_t p = task.config.p;

  AlphaEstimate best;
  best.method = Method::GradientAscent;
  best.alpha_hat = -1.0;

  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    auto features = tasks::draw_features(task.config, rng::derive(cfg.seed, {r}));

    auto delta_at = [&](const std::vector<std::vector<double>>& x) {
      const auto pred = model.predict(x);
      const auto target = tasks::noiseless_targets(task, x);
      const double d = discrepancy(score(kind, lambda, pred, target));
      ++best.n_evaluations;
      if (!std::isfinite(d)) {
        throw std::runtime_error("non-finite discrepancy during ascent restart " +
                                 std::to_string(r));
      }
      return d;
    };

    double current = delta_at(features);
    std::vector<std::vector<double>> gradient(K, std::vector<double>(p, 0.0));
    for (std::size_t step = 0; step < cfg.steps_per_restart; ++step) {
      for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
          const double saved = features[i][j];
          features[i][j] = saved + cfg.finite_difference_h;
          const double up = delta_at(features);
          features[i][j] = saved - cfg.finite_difference_h;
          const double down = delta_at(features);
          features[i][j] = saved;
          gradient[i][j] = (up - down) / (2.0 * cfg.finite_difference_h);
        }
      }
      auto candidate = features;
      for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t j = 0; j < p; ++j) candidate[i][j] += cfg.step_size * gradient[i][j];
      }
      const double next = delta_at(candidate);
      if (!(next > current)) break;
      features = std::move(candidate);
      current = next;
    }

    if (current > best.alpha_hat) {
      best.alpha_hat = current;
      auto& w = best.witness;
      w.features = features;
      w.targets = tasks::noiseless_targets(task, features);
      w.predictions = model.predict(features);
      w.kind = kind;
      w.lambda = lambda;
      w.rewards = score(kind, lambda, w.predictions, w.targets);
      w.index = r;
    }
  }
  best.alpha_hat = discrepancy(best.witness.rewards);
  return best;
}

namespace {

void write_vector(std::ostream& out, const char* key, const std::vector<double>& v) {
  out << key << '=';
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << exact(v[i]);
  out << '\n';
}

}  // namespace

void write_estimate(const AlphaEstimate& est, std::ostream& out) {
  out << "alpha_hat=" << exact(est.alpha_hat) << '\n';
  out << "method=" << to_string(est.method) << '\n';
  out << "quantile=" << exact(est.quantile) << '\n';
  out << "n_evaluations=" << est.n_evaluations << '\n';
  out << "label=lower estimate of the supremum (not certified)\n";
  const auto& w = est.witness;
  out << "witness.index=" << w.index << '\n';
  out << "witness.unified_reward=" << exact(w.rewards.unified) << '\n';
  out << "witness.decomposed_reward=" << exact(w.rewards.decomposed) << '\n';
  if (!w.predictions.empty()) {
    out << "witness.reward_kind="
        << (w.kind == RewardKind::Independent ? "independent" : "dependent") << '\n';
    out << "witness.lambda=" << exact(w.lambda) << '\n';
    for (std::size_t i = 0; i < w.features.size(); ++i) {
      const std::string key = "witness.features_" + std::to_string(i);
      write_vector(out, key.c_str(), w.features[i]);
    }
    write_vector(out, "witness.targets", w.targets);
    write_vector(out, "witness.predictions", w.predictions);
  }
}

std::vector<RewardPair> read_pairs_csv(std::istream& in) {
  std::vector<RewardPair> pairs;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (first && std::isalpha(static_cast<unsigned char>(line[0]))) {
      first = false;
      continue;
    }
    first = false;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ValidationError("pairs", "expected 'R,Rbar' rows");
    RewardPair p;
    p.unified = detail::parse_double(std::string_view(line).substr(0, comma), "R");
    p.decomposed = detail::parse_double(std::string_view(line).substr(comma + 1), "Rbar");
    pairs.push_back(p);
  }
  return pairs;
}

}  // namespace pacmarl::alignment
