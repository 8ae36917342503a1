#pragma once

// Synthetic noisy-arithmetic tasks. Each sample has K segments; segment i
// carries a feature vector x_i (length p) and a scalar target
//
//   independent:  y_i = w_i . x_i + xi_i
//   dependent:    y_i = w_i . x_i + lambda * mean(y_1 .. y_{i-1}) + xi_i
//
// with xi_i ~ N(0, sigma2) and the mean over an empty prefix taken as 0.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pacmarl::tasks {

enum class TaskMode { Independent, Dependent };

std::string_view to_string(TaskMode mode) noexcept;
TaskMode parse_mode(std::string_view text);

struct TaskConfig {
  std::size_t K = 1;
  std::size_t p = 1;
  double lambda = 0.0;  // ignored (recorded as 0) in Independent mode
  double sigma2 = 1.0;
  std::uint64_t weight_seed = 0;
  TaskMode mode = TaskMode::Independent;

  double effective_lambda() const noexcept { return mode == TaskMode::Dependent ? lambda : 0.0; }
};

void validate(const TaskConfig& config);

// Canonical single-line key-value form, e.g.
//   K=4 p=8 lambda=0 sigma2=1 weight_seed=7 mode=independent
std::string fingerprint(const TaskConfig& config);
TaskConfig parse_fingerprint(std::string_view line);

struct SyntheticTask {
  TaskConfig config;
  std::vector<std::vector<double>> weights;  // K x p
};

struct Sample {
  std::vector<std::vector<double>> features;  // K x p
  std::vector<double> targets;                // K
};

struct Provenance {
  TaskConfig task;
  std::uint64_t data_seed = 0;
};

struct Dataset {
  std::vector<Sample> samples;
  std::size_t n = 0;
  Provenance provenance;

  std::size_t K() const noexcept { return provenance.task.K; }
  std::size_t p() const noexcept { return provenance.task.p; }
};

SyntheticTask make_task(const TaskConfig& config);

// Targets from the generator recurrence with the given per-segment noise.
std::vector<double> apply_recurrence(const SyntheticTask& task,
                                     const std::vector<std::vector<double>>& features,
                                     std::span<const double> noise);

// Noise-free targets (all xi_i = 0).
std::vector<double> noiseless_targets(const SyntheticTask& task,
                                      const std::vector<std::vector<double>>& features);

// Features and noise are drawn in a fixed order per sample (all K*p features,
// then K standard normals scaled by sqrt(sigma2)), so a dependent task with
// lambda = 0 reproduces the independent dataset bit for bit.
Dataset generate_independent(const SyntheticTask& task, std::size_t n, std::uint64_t data_seed);
Dataset generate_dependent(const SyntheticTask& task, std::size_t n, std::uint64_t data_seed);
// Dispatches on task.config.mode.
Dataset generate(const SyntheticTask& task, std::size_t n, std::uint64_t data_seed);

// Regenerates a dataset from its provenance.
Dataset regenerate(const Provenance& provenance, std::size_t n);

// Feature draw used by the generators, exposed for adversarial search.
std::vector<std::vector<double>> draw_features(const TaskConfig& config, std::uint64_t seed);

// R = 1 / (1 + mean_i (pred_i - target_i)^2)
double unified_reward(std::span<const double> predicted, std::span<const double> target);

// Rbar = mean_i 1 / (1 + (pred_i - target_i)^2)
double decomposed_reward_independent(std::span<const double> predicted,
                                     std::span<const double> target);

// Rbar = mean_i r_i with
//   r_i = 1 / (1 + (pred_i - target_i)^2 + lambda * (pred_i - lambda * prefix_mean_i)^2 [i > 1])
// where prefix_mean_i is the mean of target_1 .. target_{i-1}. The coherence
// penalty conditions each segment's reward on the preceding segments.
double decomposed_reward_dependent(std::span<const double> predicted,
                                   std::span<const double> target, double lambda);

// Same, with the prefix means supplied explicitly (entry 0 is never read).
double decomposed_reward_dependent(std::span<const double> predicted,
                                   std::span<const double> target,
                                   std::span<const double> prefix_means, double lambda);

// Running means of target[0..i-1] for i = 0..K-1 (entry 0 is 0).
std::vector<double> prefix_means(std::span<const double> target);

// Flat CSV: a leading "# " provenance comment line, then the header
// sample,segment,feature_0..feature_{p-1},target and one row per (sample, segment).
void write_csv(const Dataset& data, std::ostream& out);
Dataset read_csv(std::istream& in);

}  // namespace pacmarl::tasks
