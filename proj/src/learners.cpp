#include "pacmarl/learners.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "format.hpp"
#include "pacmarl/errors.hpp"
#include "pacmarl/rng.hpp"

namespace pacmarl::learners {

using detail::exact;
using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

std::string_view to_string(Arrangement a) noexcept {
  return a == Arrangement::Unified ? "unified" : "per_agent";
}

std::string_view to_string(Learner l) noexcept { return l == Learner::SARL ? "SARL" : "MARL"; }

Learner parse_learner(std::string_view text) {
  if (text == "SARL" || text == "sarl") return Learner::SARL;
  if (text == "MARL" || text == "marl") return Learner::MARL;
  throw ValidationError("learner", "expected 'sarl' or 'marl', got '" + std::string(text) + "'");
}

std::size_t parameter_count(Arrangement arrangement, TaskMode mode, std::size_t K, std::size_t p) {
  if (arrangement == Arrangement::Unified) return K * K * p + K;
  if (mode == TaskMode::Independent) return K * p + K;
  return K * p + (K - 1) + K;
}

std::size_t SegmentedModel::parameter_count() const noexcept {
  return learners::parameter_count(arrangement, mode, K, p);
}

bool SegmentedModel::uses_context(std::size_t agent) const noexcept {
  return arrangement == Arrangement::PerAgent && mode == TaskMode::Dependent && agent > 0;
}

SegmentedModel SegmentedModel::zeros(Arrangement arrangement, TaskMode mode, std::size_t K,
                                     std::size_t p) {
  SegmentedModel m;
  m.arrangement = arrangement;
  m.mode = mode;
  m.K = K;
  m.p = p;
  m.biases.assign(K, 0.0);
  m.weights.resize(K);
  for (std::size_t i = 0; i < K; ++i) {
    const std::size_t len =
        arrangement == Arrangement::Unified ? K * p : p + (m.uses_context(i) ? 1 : 0);
    m.weights[i].assign(len, 0.0);
  }
  return m;
}

namespace {

// Output of PerAgent agent i; shared by training and prediction so the
// contexts seen in both are bit-identical.
double agent_output(const SegmentedModel& m, std::size_t i, const std::vector<double>& x,
                    double context) {
  double out = 0.0;
  for (std::size_t j = 0; j < m.p; ++j) out += m.weights[i][j] * x[j];
  if (m.uses_context(i)) out += m.weights[i][m.p] * context;
  return out + m.biases[i];
}

void check_shape(const SegmentedModel& m, const std::vector<std::vector<double>>& features) {
  if (features.size() != m.K) {
    throw ValidationError("features", "model expects " + std::to_string(m.K) + " segments");
  }
  for (const auto& x : features) {
    if (x.size() != m.p) {
      throw ValidationError("features", "model expects segment length " + std::to_string(m.p));
    }
  }
}

}  // namespace

std::vector<double> SegmentedModel::predict(
    const std::vector<std::vector<double>>& features) const {
  check_shape(*this, features);
  std::vector<double> out(K, 0.0);
  if (arrangement == Arrangement::Unified) {
    for (std::size_t i = 0; i < K; ++i) {
      double acc = 0.0;
      for (std::size_t s = 0; s < K; ++s) {
        for (std::size_t j = 0; j < p; ++j) acc += weights[i][s * p + j] * features[s][j];
      }
      out[i] = acc + biases[i];
    }
    return out;
  }
  double running = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    out[i] = agent_output(*this, i, features[i], running);
    running += (out[i] - running) / static_cast<double>(i + 1);
  }
  return out;
}

void validate(const TrainConfig& cfg) {
  if (cfg.learning_rate_grid.empty()) {
    throw ValidationError("learning_rate_grid", "must not be empty");
  }
  for (double lr : cfg.learning_rate_grid) {
    if (!std::isfinite(lr) || lr <= 0.0) {
      throw ValidationError("learning_rate_grid", "entries must be positive");
    }
  }
  if (cfg.max_epochs == 0) throw ValidationError("max_epochs", "must be >= 1");
  if (!std::isfinite(cfg.convergence_tol) || cfg.convergence_tol < 0.0) {
    throw ValidationError("convergence_tol", "must be >= 0");
  }
  if (!(cfg.validation_fraction > 0.0 && cfg.validation_fraction < 1.0)) {
    throw ValidationError("validation_fraction", "must lie in (0,1)");
  }
}

namespace {

struct AffineFit {
  MatrixXd W;         // q x m, raw feature coordinates
  RowVectorXd b;      // m
  std::vector<double> trace;
  std::size_t epochs = 0;
};

// Full-batch gradient descent on mean squared error of Y ~ X W + 1 b from
// zero initialization. Descent runs on column-standardized features (an
// affine reparametrization with the same minimizers); the returned
// coefficients are mapped back to raw coordinates.
AffineFit fit_affine(const MatrixXd& X, const MatrixXd& Y, double lr, const TrainConfig& cfg) {
  const auto n = X.rows();
  const auto q = X.cols();
  const auto m = Y.cols();

  const RowVectorXd mu = X.colwise().mean();
  RowVectorXd scale(q);
  for (Eigen::Index j = 0; j < q; ++j) {
    const double var = (X.col(j).array() - mu(j)).square().mean();
    scale(j) = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  MatrixXd Z = X;
  for (Eigen::Index j = 0; j < q; ++j) Z.col(j) = (X.col(j).array() - mu(j)) / scale(j);

  MatrixXd W = MatrixXd::Zero(q, m);
  RowVectorXd b = RowVectorXd::Zero(m);
  const double norm = 2.0 / static_cast<double>(n * m);

  MatrixXd R = -Y;
  double prev = R.squaredNorm() / static_cast<double>(n * m);
  AffineFit fit;
  fit.trace.push_back(prev);
  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    W.noalias() -= (lr * norm) * (Z.transpose() * R);
    b -= (lr * norm) * R.colwise().sum();
    R.noalias() = Z * W;
    R.rowwise() += b;
    R -= Y;
    const double cur = R.squaredNorm() / static_cast<double>(n * m);
    fit.epochs = epoch;
    if (!std::isfinite(cur)) throw DivergenceError(lr, "objective became non-finite");
    if (cur > prev + cfg.convergence_tol) {
      throw DivergenceError(lr, "objective increased from " + detail::fixed(prev) + " to " +
                                    detail::fixed(cur));
    }
    fit.trace.push_back(cur);
    if (cur == 0.0 || prev - cur <= cfg.convergence_tol * prev) break;
    prev = cur;
  }

  fit.W = W;
  for (Eigen::Index j = 0; j < q; ++j) fit.W.row(j) /= scale(j);
  fit.b = b - mu * fit.W;
  return fit;
}

double mse_of(const AffineFit& fit, const MatrixXd& X, const MatrixXd& Y) {
  MatrixXd R = X * fit.W;
  R.rowwise() += fit.b;
  R -= Y;
  return R.squaredNorm() / static_cast<double>(R.size());
}

struct StageFit {
  AffineFit fit;
  double lr = 0.0;
  std::optional<double> validation_mse;
};

// Grid-searches the learning rate on a tail validation split, then refits on
// all rows with the chosen rate. When the split would leave either side
// empty the rate minimizing the full-data objective is chosen.
StageFit select_and_fit(const MatrixXd& X, const MatrixXd& Y, const TrainConfig& cfg) {
  const auto n = static_cast<std::size_t>(X.rows());
  const auto n_val = static_cast<std::size_t>(
      std::floor(cfg.validation_fraction * static_cast<double>(n)));
  const std::size_t n_fit = n - n_val;
  const bool split = n_val > 0 && n_fit > 0;

  std::optional<DivergenceError> last_error;
  std::optional<StageFit> best;
  double best_score = std::numeric_limits<double>::infinity();
  for (double lr : cfg.learning_rate_grid) {
    try {
      if (split) {
        const auto fit = fit_affine(X.topRows(n_fit), Y.topRows(n_fit), lr, cfg);
        const double score = mse_of(fit, X.bottomRows(n_val), Y.bottomRows(n_val));
        if (std::isfinite(score) && (!best || score < best_score)) {
          best_score = score;
          best = StageFit{fit, lr, score};
        }
      } else {
        auto fit = fit_affine(X, Y, lr, cfg);
        const double score = fit.trace.back();
        if (!best || score < best_score) {
          best_score = score;
          best = StageFit{std::move(fit), lr, std::nullopt};
        }
      }
    } catch (const DivergenceError& e) {
      last_error = e;
    }
  }
  if (!best) throw *last_error;
  if (split) best->fit = fit_affine(X, Y, best->lr, cfg);
  return *best;
}

void require_trainable(const Dataset& data) {
  if (data.n == 0 || data.samples.empty()) {
    throw ValidationError("n", "training requires at least one sample");
  }
}

void record_stage(FitReport& report, const StageFit& stage) {
  report.learning_rates.push_back(stage.lr);
  report.epochs.push_back(stage.fit.epochs);
  report.objective_traces.push_back(stage.fit.trace);
  report.validation_mse.push_back(stage.validation_mse);
  report.epochs_run += stage.fit.epochs;
}

void finish_report(FitReport& report, const SegmentedModel& model, const Dataset& data) {
  const double lambda = data.provenance.task.effective_lambda();
  double mse = 0.0;
  double reward = 0.0;
  for (const auto& s : data.samples) {
    const auto pred = model.predict(s.features);
    double err = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) err += (pred[i] - s.targets[i]) * (pred[i] - s.targets[i]);
    mse += err / static_cast<double>(pred.size());
    reward += matching_reward(model, lambda, pred, s.targets);
  }
  report.train_mse = mse / static_cast<double>(data.n);
  report.train_mean_reward = reward / static_cast<double>(data.n);

  double total = 0.0;
  for (const auto& v : report.validation_mse) {
    if (!v) {
      report.validation_objective.reset();
      return;
    }
    total += *v;
  }
  report.validation_objective = total / static_cast<double>(report.validation_mse.size());
}

}  // namespace

TrainResult train_sarl(const Dataset& data, const TrainConfig& cfg) {
  validate(cfg);
  require_trainable(data);
  const std::size_t K = data.K();
  const std::size_t p = data.p();
  const auto n = static_cast<Eigen::Index>(data.n);

  MatrixXd X(n, static_cast<Eigen::Index>(K * p));
  MatrixXd Y(n, static_cast<Eigen::Index>(K));
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& s = data.samples[static_cast<std::size_t>(r)];
    for (std::size_t i = 0; i < K; ++i) {
      for (std::size_t j = 0; j < p; ++j) X(r, static_cast<Eigen::Index>(i * p + j)) = s.features[i][j];
      Y(r, static_cast<Eigen::Index>(i)) = s.targets[i];
    }
  }

  const StageFit stage = select_and_fit(X, Y, cfg);
  TrainResult result;
  result.model = SegmentedModel::zeros(Arrangement::Unified, data.provenance.task.mode, K, p);
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t c = 0; c < K * p; ++c) {
      result.model.weights[i][c] = stage.fit.W(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(i));
    }
    result.model.biases[i] = stage.fit.b(static_cast<Eigen::Index>(i));
  }
  record_stage(result.report, stage);
  finish_report(result.report, result.model, data);
  return result;
}

TrainResult train_marl_sequential(const Dataset& data, const TrainConfig& cfg, TaskMode mode) {
  validate(cfg);
  require_trainable(data);
  if (data.provenance.task.mode != mode) {
    throw ModeMismatchError("MARL training mode '" + std::string(tasks::to_string(mode)) +
                            "' does not match the dataset's task mode");
  }
  const std::size_t K = data.K();
  const std::size_t p = data.p();
  const auto n = static_cast<Eigen::Index>(data.n);

  TrainResult result;
  auto& model = result.model;
  model = SegmentedModel::zeros(Arrangement::PerAgent, mode, K, p);

  // Running mean of predicted outputs of agents trained so far, per sample.
  std::vector<double> running(data.n, 0.0);
  for (std::size_t i = 0; i < K; ++i) {
    const bool ctx = model.uses_context(i);
    MatrixXd X(n, static_cast<Eigen::Index>(p + (ctx ? 1 : 0)));
    MatrixXd Y(n, 1);
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto& s = data.samples[static_cast<std::size_t>(r)];
      for (std::size_t j = 0; j < p; ++j) X(r, static_cast<Eigen::Index>(j)) = s.features[i][j];
      if (ctx) X(r, static_cast<Eigen::Index>(p)) = running[static_cast<std::size_t>(r)];
      Y(r, 0) = s.targets[i];
    }
    const StageFit stage = select_and_fit(X, Y, cfg);
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
      model.weights[i][static_cast<std::size_t>(c)] = stage.fit.W(c, 0);
    }
    model.biases[i] = stage.fit.b(0);
    record_stage(result.report, stage);

    for (std::size_t r = 0; r < data.n; ++r) {
      const double out = agent_output(model, i, data.samples[r].features[i], running[r]);
      running[r] += (out - running[r]) / static_cast<double>(i + 1);
    }
  }
  finish_report(result.report, model, data);
  return result;
}

TrainResult train(Learner learner, const Dataset& data, const TrainConfig& cfg) {
  return learner == Learner::SARL ? train_sarl(data, cfg)
                                  : train_marl_sequential(data, cfg, data.provenance.task.mode);
}

double matching_reward(const SegmentedModel& model, double lambda,
                       const std::vector<double>& predicted, const std::vector<double>& target) {
  if (model.arrangement == Arrangement::Unified) return tasks::unified_reward(predicted, target);
  if (model.mode == TaskMode::Independent) {
    return tasks::decomposed_reward_independent(predicted, target);
  }
  return tasks::decomposed_reward_dependent(predicted, target, lambda);
}

EvalResult evaluate(const SegmentedModel& model, const Dataset& data, TaskMode mode) {
  if (data.samples.empty()) throw ValidationError("data", "evaluation requires samples");
  if (model.arrangement == Arrangement::PerAgent && model.mode != mode) {
    throw ModeMismatchError("per-agent model trained for '" +
                            std::string(tasks::to_string(model.mode)) +
                            "' cannot be evaluated in '" + std::string(tasks::to_string(mode)) +
                            "' mode");
  }
  if (data.K() != model.K || data.p() != model.p) {
    throw ValidationError("data", "dataset shape does not match the model");
  }
  const double lambda = data.provenance.task.effective_lambda();
  EvalResult out;
  out.per_segment_mse.assign(model.K, 0.0);
  double reward = 0.0;
  for (const auto& s : data.samples) {
    const auto pred = model.predict(s.features);
    for (std::size_t i = 0; i < model.K; ++i) {
      out.per_segment_mse[i] += (pred[i] - s.targets[i]) * (pred[i] - s.targets[i]);
    }
    reward += matching_reward(model, lambda, pred, s.targets);
  }
  const double n = static_cast<double>(data.samples.size());
  double total = 0.0;
  for (auto& v : out.per_segment_mse) {
    v /= n;
    total += v;
  }
  out.overall_mse = total / static_cast<double>(model.K);
  out.mean_reward = reward / n;
  return out;
}

CellSeeds cell_seeds(std::uint64_t base_seed, std::size_t K, double lambda, Learner learner,
                     std::size_t n, std::size_t trial) {
  const std::uint64_t k = K;
  const std::uint64_t lam = rng::word(lambda);
  CellSeeds s;
  s.train_data = rng::derive(base_seed, {k, lam, n, trial, rng::label_hash("train")});
  s.test_data = rng::derive(base_seed, {k, lam, n, trial, rng::label_hash("test")});
  s.trainer = rng::derive(base_seed, {k, lam, rng::label_hash(to_string(learner)), n, trial});
  return s;
}

TrialOutcome run_trial(const tasks::SyntheticTask& task, Learner learner, std::size_t n,
                       std::size_t trial, std::uint64_t base_seed, const TrainConfig& cfg,
                       std::size_t test_set_size) {
  const auto seeds =
      cell_seeds(base_seed, task.config.K, task.config.effective_lambda(), learner, n, trial);
  TrialOutcome out;
  out.n = n;
  out.trial = trial;
  const auto train_data = tasks::generate(task, n, seeds.train_data);
  const auto test_data = tasks::generate(task, test_set_size, seeds.test_data);
  TrainConfig local = cfg;
  local.seed = seeds.trainer;
  try {
    const auto trained = train(learner, train_data, local);
    const auto eval = evaluate(trained.model, test_data, task.config.mode);
    out.test_mse = eval.overall_mse;
    out.mean_reward = eval.mean_reward;
  } catch (const DivergenceError& e) {
    out.failed = true;
    out.error = e.what();
    out.test_mse = std::numeric_limits<double>::quiet_NaN();
    out.mean_reward = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

std::vector<CurvePoint> summarize(const std::vector<TrialOutcome>& trials) {
  std::vector<CurvePoint> curve;
  std::map<std::size_t, std::vector<double>> by_n;
  for (const auto& t : trials) {
    auto& bucket = by_n[t.n];
    if (!t.failed) bucket.push_back(t.test_mse);
  }
  for (const auto& [n, values] : by_n) {
    CurvePoint pt;
    pt.n = n;
    if (values.empty()) {
      pt.mean_mse = pt.std_mse = std::numeric_limits<double>::quiet_NaN();
    } else {
      double sum = 0.0;
      for (double v : values) sum += v;
      pt.mean_mse = sum / static_cast<double>(values.size());
      double ss = 0.0;
      for (double v : values) ss += (v - pt.mean_mse) * (v - pt.mean_mse);
      pt.std_mse = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
    }
    curve.push_back(pt);
  }
  return curve;
}

std::optional<std::size_t> first_below(const std::vector<CurvePoint>& curve, double threshold) {
  for (const auto& pt : curve) {
    if (pt.mean_mse <= threshold) return pt.n;
  }
  return std::nullopt;
}

namespace {

void validate_grid(const std::vector<std::size_t>& n_grid, std::size_t trials) {
  if (n_grid.empty()) throw ValidationError("n_grid", "must not be empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] == 0) throw ValidationError("n_grid", "entries must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
      throw ValidationError("n_grid", "must be strictly increasing");
    }
  }
  if (trials == 0) throw ValidationError("trials", "must be >= 1");
}

}  // namespace

ThresholdResult samples_to_threshold(const tasks::SyntheticTask& task, Learner learner,
                                     double threshold_mse, const std::vector<std::size_t>& n_grid,
                                     std::size_t trials, std::uint64_t base_seed,
                                     const TrainConfig& cfg, std::size_t test_set_size) {
  validate_grid(n_grid, trials);
  validate(cfg);
  if (test_set_size == 0) throw ValidationError("test_set_size", "must be >= 1");
  ThresholdResult out;
  for (std::size_t n : n_grid) {
    for (std::size_t t = 0; t < trials; ++t) {
      out.trials.push_back(run_trial(task, learner, n, t, base_seed, cfg, test_set_size));
    }
  }
  out.curve = summarize(out.trials);
  out.n_star = first_below(out.curve, threshold_mse);
  return out;
}

double bayes_mse_floor(const tasks::TaskConfig& config) {
  tasks::validate(config);
  const double lambda = config.effective_lambda();
  // Residual y_i - E[y_i | x] as coefficients on the noise terms xi_1..xi_K.
  std::vector<std::vector<double>> coef(config.K, std::vector<double>(config.K, 0.0));
  std::vector<double> running(config.K, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < config.K; ++i) {
    for (std::size_t j = 0; j < config.K; ++j) {
      coef[i][j] = (i == j ? 1.0 : 0.0) + (i > 0 ? lambda * running[j] : 0.0);
    }
    double norm2 = 0.0;
    for (std::size_t j = 0; j < config.K; ++j) {
      norm2 += coef[i][j] * coef[i][j];
      running[j] += (coef[i][j] - running[j]) / static_cast<double>(i + 1);
    }
    total += config.sigma2 * norm2;
  }
  return total / static_cast<double>(config.K);
}

void write_model_csv(const SegmentedModel& model, std::ostream& out) {
  out << "# arrangement=" << to_string(model.arrangement)
      << " mode=" << tasks::to_string(model.mode) << " K=" << model.K << " p=" << model.p << '\n';
  out << "segment,index,value\n";
  for (std::size_t i = 0; i < model.K; ++i) {
    for (std::size_t c = 0; c < model.weights[i].size(); ++c) {
      out << i << ',' << c << ',' << exact(model.weights[i][c]) << '\n';
    }
    out << i << ',' << model.weights[i].size() << ',' << exact(model.biases[i]) << '\n';
  }
}

SegmentedModel read_model_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("#", 0) != 0) {
    throw ValidationError("model", "missing '# arrangement=...' line");
  }
  std::map<std::string, std::string> kv;
  {
    std::istringstream ss(line.substr(1));
    std::string tok;
    while (ss >> tok) {
      const auto eq = tok.find('=');
      if (eq != std::string::npos) kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
  }
  for (const char* key : {"arrangement", "mode", "K", "p"}) {
    if (!kv.count(key)) throw ValidationError(key, "missing from model header");
  }
  Arrangement arrangement;
  if (kv["arrangement"] == "unified") {
    arrangement = Arrangement::Unified;
  } else if (kv["arrangement"] == "per_agent") {
    arrangement = Arrangement::PerAgent;
  } else {
    throw ValidationError("arrangement", "unknown arrangement '" + kv["arrangement"] + "'");
  }
  const auto K = detail::parse_int<std::size_t>(kv["K"], "K");
  const auto p = detail::parse_int<std::size_t>(kv["p"], "p");
  if (K == 0 || p == 0) throw ValidationError("K", "model dimensions must be >= 1");
  auto model = SegmentedModel::zeros(arrangement, tasks::parse_mode(kv["mode"]), K, p);

  if (!std::getline(in, line) || line != "segment,index,value") {
    throw ValidationError("model", "expected header 'segment,index,value'");
  }
  std::vector<std::vector<bool>> seen(K);
  for (std::size_t i = 0; i < K; ++i) seen[i].assign(model.weights[i].size() + 1, false);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    if (a == std::string::npos || b == std::string::npos) {
      throw ValidationError("model", "malformed row '" + line + "'");
    }
    const auto seg = detail::parse_int<std::size_t>(std::string_view(line).substr(0, a), "segment");
    const auto idx =
        detail::parse_int<std::size_t>(std::string_view(line).substr(a + 1, b - a - 1), "index");
    const double value = detail::parse_double(std::string_view(line).substr(b + 1), "value");
    if (seg >= K || idx > model.weights[seg].size()) {
      throw ValidationError("model", "parameter index out of range in '" + line + "'");
    }
    if (idx == model.weights[seg].size()) {
      model.biases[seg] = value;
    } else {
      model.weights[seg][idx] = value;
    }
    seen[seg][idx] = true;
  }
  for (const auto& row : seen) {
    if (std::find(row.begin(), row.end(), false) != row.end()) {
      throw ValidationError("model", "missing parameters");
    }
  }
  return model;
}

void write_fit_report(const FitReport& report, std::ostream& out) {
  out << "stages=" << report.learning_rates.size() << '\n';
  out << "chosen_learning_rate=" << exact(report.learning_rates.front()) << '\n';
  for (std::size_t s = 0; s < report.learning_rates.size(); ++s) {
    out << "stage_" << s << ".learning_rate=" << exact(report.learning_rates[s]) << '\n';
    out << "stage_" << s << ".epochs=" << report.epochs[s] << '\n';
    out << "stage_" << s << ".final_objective=" << exact(report.objective_traces[s].back()) << '\n';
    out << "stage_" << s << ".validation_mse="
        << (report.validation_mse[s] ? exact(*report.validation_mse[s]) : "none") << '\n';
  }
  out << "epochs_run=" << report.epochs_run << '\n';
  out << "final_train_objective=" << exact(report.train_mean_reward) << '\n';
  out << "train_mse=" << exact(report.train_mse) << '\n';
  out << "validation_objective="
      << (report.validation_objective ? exact(*report.validation_objective) : "none") << '\n';
}

}  // namespace pacmarl::learners
