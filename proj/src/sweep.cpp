#include "pacmarl/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "format.hpp"
#include "pacmarl/errors.hpp"
#include "pacmarl/rng.hpp"
#include "pacmarl/svg_chart.hpp"

namespace pacmarl::sweep {

using detail::exact;

void validate(const SweepConfig& cfg) {
  if (cfg.K_list.empty()) throw ValidationError("K_list", "must not be empty");
  for (auto K : cfg.K_list) {
    if (K == 0) throw ValidationError("K_list", "entries must be >= 1");
  }
  if (cfg.lambda_list.empty()) throw ValidationError("lambda_list", "must not be empty");
  for (double l : cfg.lambda_list) {
    if (!std::isfinite(l) || l < 0.0) throw ValidationError("lambda_list", "entries must be >= 0");
  }
  if (cfg.p == 0) throw ValidationError("p", "must be >= 1");
  if (!std::isfinite(cfg.sigma2) || cfg.sigma2 < 0.0) throw ValidationError("sigma2", "must be >= 0");
  if (cfg.n_grid.empty()) throw ValidationError("n_grid", "must not be empty");
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    if (cfg.n_grid[i] == 0) throw ValidationError("n_grid", "entries must be >= 1");
    if (i > 0 && cfg.n_grid[i] <= cfg.n_grid[i - 1]) {
      throw ValidationError("n_grid", "must be strictly increasing");
    }
  }
  if (cfg.trials == 0) throw ValidationError("trials", "must be >= 1");
  if (cfg.test_set_size == 0) throw ValidationError("test_set_size", "must be >= 1");
  if (std::isnan(cfg.threshold_mse)) throw ValidationError("threshold_mse", "must be a number");
  learners::validate(cfg.train);
}

std::uint64_t task_weight_seed(std::uint64_t base_seed, std::size_t K) {
  return rng::derive(base_seed, {rng::label_hash("task"), K});
}

namespace {

struct Point {
  std::size_t K;
  double lambda;
};

std::vector<Point> config_points(const SweepConfig& cfg) {
  std::vector<double> lambdas = cfg.lambda_list;
  if (cfg.mode == TaskMode::Independent) lambdas = {0.0};
  std::vector<Point> points;
  for (auto K : cfg.K_list) {
    for (double l : lambdas) points.push_back({K, l});
  }
  return points;
}

constexpr Learner kLearners[] = {Learner::SARL, Learner::MARL};

void check_writable(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto probe = dir / ".write_probe";
  std::ofstream out(probe);
  if (ec || !out) {
    throw ValidationError("output_dir", "cannot write to '" + dir.string() + "'");
  }
  out.close();
  std::filesystem::remove(probe, ec);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string mse_text(double v) { return std::isfinite(v) ? exact(v) : "nan"; }

}  // namespace

std::vector<Summary> SweepResult::curve(std::size_t K, double lambda, Learner learner) const {
  std::vector<Summary> out;
  for (const auto& s : summaries) {
    if (s.K == K && s.lambda == lambda && s.learner == learner) out.push_back(s);
  }
  return out;
}

std::optional<std::size_t> SweepResult::n_star(std::size_t K, double lambda,
                                               Learner learner) const {
  for (const auto& e : n_star_table) {
    if (e.K == K && e.lambda == lambda && e.learner == learner) return e.n_star;
  }
  return std::nullopt;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  validate(cfg);
  if (!cfg.output_dir.empty()) check_writable(cfg.output_dir);

  struct Cell {
    std::size_t point;
    Learner learner;
    std::size_t n;
    std::size_t trial;
  };
  const auto points = config_points(cfg);
  std::vector<tasks::SyntheticTask> task_for_point;
  for (const auto& pt : points) {
    tasks::TaskConfig tc;
    tc.K = pt.K;
    tc.p = cfg.p;
    tc.lambda = pt.lambda;
    tc.sigma2 = cfg.sigma2;
    tc.mode = cfg.mode;
    tc.weight_seed = task_weight_seed(cfg.base_seed, pt.K);
    task_for_point.push_back(tasks::make_task(tc));
  }

  std::vector<Cell> cells;
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    for (Learner l : kLearners) {
      for (auto n : cfg.n_grid) {
        for (std::size_t t = 0; t < cfg.trials; ++t) cells.push_back({pi, l, n, t});
      }
    }
  }

  // Every cell owns its output slot and derives its own seeds, so the
  // schedule cannot affect results.
  std::vector<learners::TrialOutcome> outcomes(cells.size());
  auto work = [&](std::size_t i) {
    const auto& c = cells[i];
    outcomes[i] = learners::run_trial(task_for_point[c.point], c.learner, c.n, c.trial,
                                      cfg.base_seed, cfg.train, cfg.test_set_size);
  };
  std::size_t threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                         : cfg.threads;
  threads = std::min(threads, cells.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) work(i);
      });
    }
  }

  SweepResult result;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    const auto& o = outcomes[i];
    result.rows.push_back({cfg.mode, points[c.point].K, points[c.point].lambda, c.learner, c.n,
                           c.trial, o.test_mse, o.mean_reward, o.error});
  }
  const std::size_t per_learner = cfg.n_grid.size() * cfg.trials;
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    for (std::size_t li = 0; li < 2; ++li) {
      const std::size_t start = (pi * 2 + li) * per_learner;
      std::vector<learners::TrialOutcome> block(outcomes.begin() + static_cast<std::ptrdiff_t>(start),
                                                outcomes.begin() +
                                                    static_cast<std::ptrdiff_t>(start + per_learner));
      const auto curve = learners::summarize(block);
      for (const auto& cp : curve) {
        result.summaries.push_back({cfg.mode, points[pi].K, points[pi].lambda, kLearners[li], cp.n,
                                    cp.mean_mse, cp.std_mse});
      }
      result.n_star_table.push_back({cfg.mode, points[pi].K, points[pi].lambda, kLearners[li],
                                     learners::first_below(curve, cfg.threshold_mse)});
    }
  }

  if (!cfg.output_dir.empty()) {
    write_file(cfg.output_dir / "rows.csv", rows_csv(result));
    write_file(cfg.output_dir / "summary.csv", summary_csv(result));
    write_file(cfg.output_dir / "nstar.csv", nstar_csv(result));
    for (const auto& pt : points) {
      write_file(cfg.output_dir / curve_filename(cfg.mode, pt.K, pt.lambda),
                 curve_svg(result, cfg.mode, pt.K, pt.lambda));
    }
  }
  return result;
}

std::string rows_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "mode,K,lambda,learner,n,trial,test_mse,mean_reward\n";
  for (const auto& r : result.rows) {
    out << tasks::to_string(r.mode) << ',' << r.K << ',' << exact(r.lambda) << ','
        << learners::to_string(r.learner) << ',' << r.n << ',' << r.trial << ','
        << mse_text(r.test_mse) << ',' << mse_text(r.mean_reward) << '\n';
  }
  return out.str();
}

std::string summary_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "mode,K,lambda,learner,n,mean_mse,std_mse\n";
  for (const auto& s : result.summaries) {
    out << tasks::to_string(s.mode) << ',' << s.K << ',' << exact(s.lambda) << ','
        << learners::to_string(s.learner) << ',' << s.n << ',' << mse_text(s.mean_mse) << ','
        << mse_text(s.std_mse) << '\n';
  }
  return out.str();
}

std::string nstar_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "mode,K,lambda,learner,n_star\n";
  for (const auto& e : result.n_star_table) {
    out << tasks::to_string(e.mode) << ',' << e.K << ',' << exact(e.lambda) << ','
        << learners::to_string(e.learner) << ','
        << (e.n_star ? std::to_string(*e.n_star) : std::string("none")) << '\n';
  }
  return out.str();
}

std::string curve_filename(TaskMode mode, std::size_t K, double lambda) {
  return "curve_" + std::string(tasks::to_string(mode)) + "_K" + std::to_string(K) + "_lam" +
         exact(lambda) + ".svg";
}

std::string curve_svg(const SweepResult& result, TaskMode mode, std::size_t K, double lambda) {
  svg::LineChart chart;
  chart.title = std::string(tasks::to_string(mode)) + " tasks, K=" + std::to_string(K) +
                (mode == TaskMode::Dependent ? ", lambda=" + exact(lambda) : std::string());
  chart.x_label = "training samples n";
  chart.y_label = "mean test MSE (+/- 1 std)";
  chart.log_x = true;
  chart.log_y = true;
  for (Learner l : kLearners) {
    svg::Series s;
    s.name = std::string(learners::to_string(l));
    s.color = l == Learner::SARL ? "#d62728" : "#1f77b4";
    for (const auto& pt : result.curve(K, lambda, l)) {
      s.x.push_back(static_cast<double>(pt.n));
      s.y.push_back(pt.mean_mse);
      s.band_low.push_back(pt.mean_mse - pt.std_mse);
      s.band_high.push_back(pt.mean_mse + pt.std_mse);
    }
    chart.series.push_back(std::move(s));
  }
  return svg::render(chart);
}

}  // namespace pacmarl::sweep
