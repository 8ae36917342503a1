#pragma once

// Empirical reward maximization for the synthetic tasks. Under the bounded
// surrogate reward 1/(1+e^2) the maximizer of the empirical reward and the
// minimizer of mean squared error coincide, so both trainers run full-batch
// gradient descent on MSE.
//
//   SARL: one affine map from all K*p features to all K targets.
//   MARL: K affine agents trained in order 1..K. In Dependent mode agent i
//         also sees the mean of agents 1..i-1's *predicted* outputs.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pacmarl/tasks.hpp"

namespace pacmarl::learners {

using tasks::Dataset;
using tasks::Sample;
using tasks::TaskMode;

enum class Arrangement { Unified, PerAgent };
enum class Learner { SARL, MARL };

std::string_view to_string(Arrangement a) noexcept;
std::string_view to_string(Learner l) noexcept;
Learner parse_learner(std::string_view text);

struct SegmentedModel {
  Arrangement arrangement = Arrangement::Unified;
  TaskMode mode = TaskMode::Independent;  // PerAgent models are tied to a mode
  std::size_t K = 0;
  std::size_t p = 0;
  // Unified: K rows of length K*p. PerAgent: row i has length p, plus one
  // trailing context coefficient for agents i >= 1 in Dependent mode.
  std::vector<std::vector<double>> weights;
  std::vector<double> biases;  // K

  std::size_t parameter_count() const noexcept;
  bool uses_context(std::size_t agent) const noexcept;

  // Predictions for every segment. PerAgent Dependent models feed their own
  // predicted predecessors forward; true prefix targets are never read.
  std::vector<double> predict(const std::vector<std::vector<double>>& features) const;

  static SegmentedModel zeros(Arrangement arrangement, TaskMode mode, std::size_t K,
                              std::size_t p);
};

// Trainable parameter counts: K^2 p + K (Unified); K p + K (PerAgent,
// Independent); K p + (K-1) + K (PerAgent, Dependent).
std::size_t parameter_count(Arrangement arrangement, TaskMode mode, std::size_t K, std::size_t p);

struct TrainConfig {
  std::vector<double> learning_rate_grid{1e-3, 1e-2, 1e-1};
  std::size_t max_epochs = 500;
  // Descent stops once an epoch lowers the objective by at most this fraction
  // of its previous value. An epoch that raises it by more than this amount
  // (absolute) is a divergence.
  double convergence_tol = 1e-8;
  double validation_fraction = 0.2;
  // Descent starts from zero weights, so results do not depend on the seed;
  // it is carried for provenance.
  std::uint64_t seed = 0;
};

void validate(const TrainConfig& cfg);

// One row per descent stage (one for SARL, K for MARL).
struct FitReport {
  std::vector<double> learning_rates;
  std::vector<std::size_t> epochs;
  std::vector<std::vector<double>> objective_traces;  // MSE after each epoch, index 0 = start
  std::vector<std::optional<double>> validation_mse;  // absent when n is too small to split
  std::size_t epochs_run = 0;
  double train_mse = 0.0;
  double train_mean_reward = 0.0;  // empirical objective J_n under the matching reward
  std::optional<double> validation_objective;  // MSE of the selected rates on the held-out rows

  // Scalar view for single-stage reports.
  double chosen_learning_rate() const { return learning_rates.front(); }
};

struct TrainResult {
  SegmentedModel model;
  FitReport report;
};

TrainResult train_sarl(const Dataset& data, const TrainConfig& cfg);
TrainResult train_marl_sequential(const Dataset& data, const TrainConfig& cfg, TaskMode mode);
TrainResult train(Learner learner, const Dataset& data, const TrainConfig& cfg);

struct EvalResult {
  std::vector<double> per_segment_mse;
  double overall_mse = 0.0;
  double mean_reward = 0.0;
};

// Reward used for a model: unified for Unified models; the mode's decomposed
// reward for PerAgent models.
double matching_reward(const SegmentedModel& model, double lambda,
                       const std::vector<double>& predicted, const std::vector<double>& target);

EvalResult evaluate(const SegmentedModel& model, const Dataset& data, TaskMode mode);

struct CurvePoint {
  std::size_t n = 0;
  double mean_mse = 0.0;
  double std_mse = 0.0;  // sample standard deviation over trials (0 for one trial)
};

struct TrialOutcome {
  std::size_t n = 0;
  std::size_t trial = 0;
  double test_mse = 0.0;
  double mean_reward = 0.0;
  bool failed = false;
  std::string error;
};

struct ThresholdResult {
  std::optional<std::size_t> n_star;
  std::vector<CurvePoint> curve;
  std::vector<TrialOutcome> trials;
};

struct CellSeeds {
  std::uint64_t train_data = 0;
  std::uint64_t test_data = 0;
  std::uint64_t trainer = 0;
};

// Seeds for one (config point, learner, n, trial) cell. Train and test data
// seeds do not depend on the learner, so SARL and MARL are compared on the
// same draws.
CellSeeds cell_seeds(std::uint64_t base_seed, std::size_t K, double lambda, Learner learner,
                     std::size_t n, std::size_t trial);

// One train + evaluate cycle on fresh data.
TrialOutcome run_trial(const tasks::SyntheticTask& task, Learner learner, std::size_t n,
                       std::size_t trial, std::uint64_t base_seed, const TrainConfig& cfg,
                       std::size_t test_set_size);

// Mean and sample standard deviation of trial MSEs per n; failed trials are
// skipped (an n with no successful trial gets NaN).
std::vector<CurvePoint> summarize(const std::vector<TrialOutcome>& trials);

// First grid n whose trial-averaged held-out MSE is <= threshold.
std::optional<std::size_t> first_below(const std::vector<CurvePoint>& curve, double threshold);

ThresholdResult samples_to_threshold(const tasks::SyntheticTask& task, Learner learner,
                                     double threshold_mse, const std::vector<std::size_t>& n_grid,
                                     std::size_t trials, std::uint64_t base_seed,
                                     const TrainConfig& cfg = {},
                                     std::size_t test_set_size = 2000);

// Irreducible test MSE of the generator: mean over segments of Var(y_i | x).
double bayes_mse_floor(const tasks::TaskConfig& config);

// Model CSV: a "# arrangement=... mode=... K=... p=..." line, then
// segment,index,value rows (bias stored at the last index of each segment).
void write_model_csv(const SegmentedModel& model, std::ostream& out);
SegmentedModel read_model_csv(std::istream& in);

// key=value lines.
void write_fit_report(const FitReport& report, std::ostream& out);

}  // namespace pacmarl::learners
