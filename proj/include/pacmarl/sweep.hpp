#pragma once

// Learning-curve sweeps comparing SARL and MARL on the synthetic tasks.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pacmarl/learners.hpp"
#include "pacmarl/tasks.hpp"

namespace pacmarl::sweep {

using learners::Learner;
using tasks::TaskMode;

struct SweepConfig {
  TaskMode mode = TaskMode::Independent;
  std::vector<std::size_t> K_list{4};
  std::vector<double> lambda_list{0.0};  // collapsed to {0} in Independent mode
  std::size_t p = 8;
  double sigma2 = 1.0;
  std::vector<std::size_t> n_grid{32, 64, 128, 256, 512, 1024};
  std::size_t trials = 5;
  double threshold_mse = 1.2;
  std::uint64_t base_seed = 0;
  std::filesystem::path output_dir;  // empty: compute only, write nothing
  std::size_t test_set_size = 2000;
  std::size_t threads = 1;  // 0 = hardware concurrency
  learners::TrainConfig train;
};

void validate(const SweepConfig& cfg);

struct Row {
  TaskMode mode;
  std::size_t K;
  double lambda;
  Learner learner;
  std::size_t n;
  std::size_t trial;
  double test_mse;
  double mean_reward;
  std::string error;  // non-empty when the cell's training failed
};

struct Summary {
  TaskMode mode;
  std::size_t K;
  double lambda;
  Learner learner;
  std::size_t n;
  double mean_mse;
  double std_mse;
};

struct NStar {
  TaskMode mode;
  std::size_t K;
  double lambda;
  Learner learner;
  std::optional<std::size_t> n_star;
};

struct SweepResult {
  std::vector<Row> rows;
  std::vector<Summary> summaries;
  std::vector<NStar> n_star_table;

  // Curve lookup for one (K, lambda, learner).
  std::vector<Summary> curve(std::size_t K, double lambda, Learner learner) const;
  std::optional<std::size_t> n_star(std::size_t K, double lambda, Learner learner) const;
};

// Task weights for a config point depend on (base_seed, K) only, so every
// lambda in a sweep shares the same w_i.
std::uint64_t task_weight_seed(std::uint64_t base_seed, std::size_t K);

// Runs every (K, lambda, learner, n, trial) cell. Training failures are
// recorded in the row and the sweep continues. When output_dir is set the
// directory is checked for writability before any computation, and
// rows.csv, summary.csv, nstar.csv and one curve_{mode}_K{K}_lam{lambda}.svg
// per config point are written after all cells finish.
SweepResult run_sweep(const SweepConfig& cfg);

std::string rows_csv(const SweepResult& result);
std::string summary_csv(const SweepResult& result);
std::string nstar_csv(const SweepResult& result);
std::string curve_svg(const SweepResult& result, TaskMode mode, std::size_t K, double lambda);
std::string curve_filename(TaskMode mode, std::size_t K, double lambda);

}  // namespace pacmarl::sweep
