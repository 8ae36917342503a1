#pragma once

// Estimates of the task alignment factor
//
//   alpha = sup_{x,y} | R(x,y) - Rbar(x,y) |
//
// between the unified reward R and a decomposed reward Rbar. Both estimators
// here search a finite set of points, so they return lower estimates of the
// supremum, never certified values.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "pacmarl/learners.hpp"
#include "pacmarl/tasks.hpp"

namespace pacmarl::alignment {

enum class Method { MonteCarloMax, MonteCarloQuantile, GradientAscent };
enum class RewardKind { Independent, Dependent };

std::string_view to_string(Method m) noexcept;

struct RewardPair {
  double unified = 0.0;     // R
  double decomposed = 0.0;  // Rbar
};

// The point that realized an estimate. Pair-only witnesses (from
// alpha_monte_carlo on raw pairs) leave the vectors empty.
struct Witness {
  std::vector<std::vector<double>> features;
  std::vector<double> targets;
  std::vector<double> predictions;
  RewardKind kind = RewardKind::Independent;
  double lambda = 0.0;
  RewardPair rewards;
  std::size_t index = 0;  // position in the evaluated list, or restart index
};

struct AlphaEstimate {
  double alpha_hat = 0.0;
  Method method = Method::MonteCarloMax;
  double quantile = 1.0;
  std::size_t n_evaluations = 0;
  Witness witness;
};

struct AscentConfig {
  std::size_t restarts = 16;
  std::size_t steps_per_restart = 200;
  double step_size = 0.05;
  double finite_difference_h = 1e-4;
  std::uint64_t seed = 0;
};

void validate(const AscentConfig& cfg);

// |R - Rbar|.
double discrepancy(const RewardPair& pair) noexcept;

// Recomputes |R - Rbar| from a witness: from its predictions and targets when
// present, otherwise from the stored reward pair.
double recompute(const Witness& witness);

// Nearest-rank quantile (the ceil(q*n)-th smallest gap; q = 1 is the max).
AlphaEstimate alpha_monte_carlo(std::span<const RewardPair> pairs, double quantile);

// Draws n_rollouts fresh samples from the task, scores the model's
// predictions under the unified reward and the task mode's decomposed reward,
// and takes the nearest-rank quantile of the gaps.
AlphaEstimate alpha_from_model(const tasks::SyntheticTask& task,
                               const learners::SegmentedModel& model, std::size_t n_rollouts,
                               double quantile, std::uint64_t data_seed);

// Hill climbing on Delta(x) = |R - Rbar| over feature coordinates, with
// targets tied to the noiseless recurrence and central finite-difference
// gradients. Steps are taken only when they raise Delta; a rejected step
// ends the restart.
AlphaEstimate alpha_gradient_ascent(const tasks::SyntheticTask& task,
                                    const learners::SegmentedModel& model,
                                    const AscentConfig& cfg);

void write_estimate(const AlphaEstimate& estimate, std::ostream& out);

// Reads "R,Rbar" rows (an optional header line starting with a letter is skipped).
std::vector<RewardPair> read_pairs_csv(std::istream& in);

}  // namespace pacmarl::alignment
