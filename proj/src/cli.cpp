#include "pacmarl/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "format.hpp"
#include "pacmarl/alignment.hpp"
#include "pacmarl/bounds.hpp"
#include "pacmarl/errors.hpp"
#include "pacmarl/learners.hpp"
#include "pacmarl/sweep.hpp"
#include "pacmarl/tasks.hpp"

namespace pacmarl::cli {

namespace {

using detail::fixed;

// SARL and MARL parameters shared by `bounds`, `advise` and `alpha --then-bound`.
struct BoundFlags {
  double d = 10.0;
  double B = 1.0;
  double L_step = 1.0;
  double T_max = 100.0;
  double epsilon = 0.1;
  double delta = 0.05;
  double c = 1.0;
  std::size_t K = 1;
  std::vector<double> d_i;
  std::vector<double> B_i;
  std::vector<double> T_max_i;
  double alpha = 0.0;
  double shared_dim = 0.0;

  void add_sarl(CLI::App& app) {
    app.add_option("--d", d, "SARL effective dimension")->capture_default_str();
    app.add_option("--B", B, "SARL parameter radius")->capture_default_str();
    app.add_option("--tmax", T_max, "SARL maximum sequence length")->capture_default_str();
  }
  void add_common(CLI::App& app) {
    app.add_option("--lstep", L_step, "per-token Lipschitz constant")->capture_default_str();
    app.add_option("--eps", epsilon, "accuracy epsilon in (0,1)")->capture_default_str();
    app.add_option("--delta", delta, "confidence delta in (0,1)")->capture_default_str();
    app.add_option("--c", c, "universal constant multiplier")->capture_default_str();
  }
  void add_marl(CLI::App& app, bool with_k = true) {
    if (with_k) app.add_option("--K", K, "number of agents")->capture_default_str();
    app.add_option("--di", d_i, "per-agent dimensions (one value is repeated K times; "
                                "default d/K)");
    app.add_option("--Bi", B_i, "per-agent radii (default B)");
    app.add_option("--tmaxi", T_max_i, "per-agent segment lengths (default tmax/K)");
    app.add_option("--alpha", alpha, "alignment factor")->capture_default_str();
    app.add_option("--shared-dim", shared_dim, "shared-parameter dimension")
        ->capture_default_str();
  }

  bounds::SarlInputs sarl() const {
    bounds::SarlInputs s;
    s.d = d;
    s.B = B;
    s.L_step = L_step;
    s.T_max = T_max;
    s.epsilon = epsilon;
    s.delta = delta;
    s.c = c;
    return s;
  }

  bounds::MarlInputs marl() const {
    if (K == 0) throw ValidationError("K", "must be >= 1");
    auto expand = [&](const std::vector<double>& v, double fallback, const char* name) {
      if (v.empty()) return std::vector<double>(K, fallback);
      if (v.size() == 1) return std::vector<double>(K, v.front());
      if (v.size() != K) {
        throw ValidationError(name, "expected 1 or K=" + std::to_string(K) + " values");
      }
      return v;
    };
    const double k = static_cast<double>(K);
    const auto ds = expand(d_i, d / k, "d_i");
    const auto bs = expand(B_i, B, "B_i");
    const auto ts = expand(T_max_i, T_max / k, "T_max_i");
    bounds::MarlInputs m;
    for (std::size_t i = 0; i < K; ++i) m.agents.push_back({ds[i], bs[i], ts[i]});
    m.L_step = L_step;
    m.epsilon = epsilon;
    m.delta = delta;
    m.alpha = alpha;
    m.c = c;
    m.shared_dim = shared_dim;
    return m;
  }
};

void print_bound(std::ostream& out, std::string_view label, const bounds::ComplexityBound& b) {
  out << label << ".n_samples=" << fixed(b.n_samples, 10) << '\n';
  out << label << ".entropy_term=" << fixed(b.entropy_term, 10) << '\n';
  out << label << ".confidence_term=" << fixed(b.confidence_term, 10) << '\n';
  out << label << ".accuracy_denominator=" << fixed(b.accuracy_denominator, 10) << '\n';
  out << label << ".constant=" << fixed(b.constant_used, 10) << '\n';
}

void print_optional(std::ostream& out, const char* key, const std::optional<double>& v) {
  if (v) out << key << '=' << fixed(*v, 10) << '\n';
}

struct TaskFlags {
  std::string mode = "independent";
  std::size_t K = 4;
  std::size_t p = 8;
  double lambda = 0.0;
  double sigma2 = 1.0;
  std::uint64_t weight_seed = 0;

  void add(CLI::App& app) {
    app.add_option("--mode", mode, "independent | dependent")->capture_default_str();
    app.add_option("--K", K, "segment count")->capture_default_str();
    app.add_option("--p", p, "features per segment")->capture_default_str();
    app.add_option("--lambda", lambda, "dependence strength")->capture_default_str();
    app.add_option("--sigma2", sigma2, "noise variance")->capture_default_str();
    app.add_option("--weight-seed", weight_seed, "seed for the task weights")
        ->capture_default_str();
  }

  tasks::TaskConfig config() const {
    tasks::TaskConfig c;
    c.mode = tasks::parse_mode(mode);
    c.K = K;
    c.p = p;
    c.lambda = lambda;
    c.sigma2 = sigma2;
    c.weight_seed = weight_seed;
    return c;
  }
};

struct TrainFlags {
  learners::TrainConfig cfg;

  void add(CLI::App& app) {
    app.add_option("--lr-grid", cfg.learning_rate_grid, "learning-rate grid");
    app.add_option("--max-epochs", cfg.max_epochs, "maximum epochs per stage")
        ->capture_default_str();
    app.add_option("--tol", cfg.convergence_tol, "relative objective-decrease tolerance")
        ->capture_default_str();
    app.add_option("--val-frac", cfg.validation_fraction, "validation fraction")
        ->capture_default_str();
  }
};

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("out", "cannot write '" + path + "'");
  return f;
}

std::ifstream open_in(const std::string& path, const char* field) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError(field, "cannot read '" + path + "'");
  return f;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sample-complexity bounds and SARL/MARL experiments", "pacmarl"};
  app.require_subcommand(1);

  // bounds
  BoundFlags bf;
  std::string bounds_regime = "sarl";
  auto* bounds_cmd = app.add_subcommand("bounds", "evaluate a sample-complexity bound");
  bounds_cmd->add_option("--regime", bounds_regime, "sarl | dependent | independent | misaligned")
      ->check(CLI::IsMember({"sarl", "dependent", "independent", "misaligned"}))
      ->capture_default_str();
  bf.add_sarl(*bounds_cmd);
  bf.add_common(*bounds_cmd);
  bf.add_marl(*bounds_cmd);

  // advise
  BoundFlags af;
  std::string advise_regime = "independent";
  auto* advise_cmd = app.add_subcommand("advise", "compare MARL against SARL");
  advise_cmd->add_option("--regime", advise_regime, "independent | dependent | misaligned")
      ->check(CLI::IsMember({"independent", "dependent", "misaligned"}))
      ->capture_default_str();
  af.add_sarl(*advise_cmd);
  af.add_common(*advise_cmd);
  af.add_marl(*advise_cmd);

  // generate
  TaskFlags gt;
  std::size_t gen_n = 100;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("generate", "sample a synthetic dataset as CSV");
  gt.add(*gen_cmd);
  gen_cmd->add_option("--n", gen_n, "sample count")->capture_default_str();
  gen_cmd->add_option("--data-seed", gen_seed, "seed for features and noise")
      ->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "output file (default stdout)");

  // train
  TaskFlags tt;
  TrainFlags tf;
  std::string train_data;
  std::string train_learner = "sarl";
  std::size_t train_n = 200;
  std::uint64_t train_seed = 0;
  std::string model_out;
  std::size_t eval_n = 0;
  auto* train_cmd = app.add_subcommand("train", "fit a SARL or MARL model");
  tt.add(*train_cmd);
  tf.add(*train_cmd);
  train_cmd->add_option("--data", train_data, "dataset CSV (default: generate from task flags)");
  train_cmd->add_option("--learner", train_learner, "sarl | marl")->capture_default_str();
  train_cmd->add_option("--n", train_n, "samples to generate when --data is absent")
      ->capture_default_str();
  train_cmd->add_option("--data-seed", train_seed, "seed when generating")->capture_default_str();
  train_cmd->add_option("--model-out", model_out, "write the model CSV here");
  train_cmd->add_option("--eval-n", eval_n, "also evaluate on this many fresh samples");

  // sweep
  sweep::SweepConfig sc;
  std::string sweep_mode = "independent";
  std::string sweep_out = "sweep_out";
  auto* sweep_cmd = app.add_subcommand("sweep", "run SARL vs MARL learning-curve sweeps");
  app.set_config("--config", "", "TOML/INI file; sweep settings go under a [sweep] table");
  app.allow_config_extras(CLI::config_extras_mode::error);
  sweep_cmd->footer(
      "Settings can also come from a file: sweep --config FILE, with keys named after the long\n"
      "flags under a [sweep] table (e.g. n-grid = [32, 64]). Flags override file values.");
  sweep_cmd->add_option("--mode", sweep_mode, "independent | dependent")->capture_default_str();
  sweep_cmd->add_option("--K", sc.K_list, "agent counts")->capture_default_str();
  sweep_cmd->add_option("--lambda", sc.lambda_list, "dependence strengths")->capture_default_str();
  sweep_cmd->add_option("--p", sc.p, "features per segment")->capture_default_str();
  sweep_cmd->add_option("--sigma2", sc.sigma2, "noise variance")->capture_default_str();
  sweep_cmd->add_option("--n-grid", sc.n_grid, "training sizes")->capture_default_str();
  sweep_cmd->add_option("--trials", sc.trials, "trials per n")->capture_default_str();
  sweep_cmd->add_option("--threshold", sc.threshold_mse, "MSE threshold for n_star")
      ->capture_default_str();
  sweep_cmd->add_option("--seed", sc.base_seed, "base seed")->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "output directory")->capture_default_str();
  sweep_cmd->add_option("--test-size", sc.test_set_size, "test samples per cell")
      ->capture_default_str();
  sweep_cmd->add_option("--threads", sc.threads, "worker threads (0 = all cores)")
      ->capture_default_str();
  TrainFlags sf;
  sf.add(*sweep_cmd);

  // alpha
  TaskFlags at;
  TrainFlags atf;
  BoundFlags abf;
  std::string alpha_method = "mc";
  std::string pairs_file;
  std::string model_file;
  bool train_first = false;
  std::string alpha_learner = "sarl";
  std::size_t alpha_train_n = 500;
  std::size_t rollouts = 1000;
  double quantile = 1.0;
  std::uint64_t alpha_seed = 0;
  alignment::AscentConfig ascent;
  bool then_bound = false;
  auto* alpha_cmd = app.add_subcommand("alpha", "estimate the alignment factor");
  alpha_cmd->add_option("--method", alpha_method, "mc | grad")
      ->check(CLI::IsMember({"mc", "grad"}))
      ->capture_default_str();
  alpha_cmd->add_option("--pairs", pairs_file, "CSV of R,Rbar pairs (mc only)");
  alpha_cmd->add_option("--model", model_file, "model CSV");
  alpha_cmd->add_flag("--train-first", train_first, "train a model on fresh task data first");
  alpha_cmd->add_option("--learner", alpha_learner, "learner for --train-first")
      ->capture_default_str();
  alpha_cmd->add_option("--train-n", alpha_train_n, "training samples for --train-first")
      ->capture_default_str();
  alpha_cmd->add_option("--rollouts", rollouts, "Monte Carlo rollouts")->capture_default_str();
  alpha_cmd->add_option("--quantile", quantile, "nearest-rank quantile in (0,1]")
      ->capture_default_str();
  alpha_cmd->add_option("--data-seed", alpha_seed, "seed for rollouts and training data")
      ->capture_default_str();
  alpha_cmd->add_option("--restarts", ascent.restarts, "ascent restarts")->capture_default_str();
  alpha_cmd->add_option("--steps", ascent.steps_per_restart, "steps per restart")
      ->capture_default_str();
  alpha_cmd->add_option("--step-size", ascent.step_size, "ascent step size")
      ->capture_default_str();
  alpha_cmd->add_option("--fd-h", ascent.finite_difference_h, "finite-difference step")
      ->capture_default_str();
  alpha_cmd->add_option("--ascent-seed", ascent.seed, "seed for restart points")
      ->capture_default_str();
  alpha_cmd->add_flag("--then-bound", then_bound,
                      "feed alpha_hat into the misaligned MARL bound");
  at.add(*alpha_cmd);
  atf.add(*alpha_cmd);
  abf.add_common(*alpha_cmd);
  abf.add_marl(*alpha_cmd, /*with_k=*/false);

  // CLI11 only reads the config file of the top-level app, so a --config
  // given after the subcommand is moved in front of it.
  std::vector<std::string> ordered;
  std::vector<std::string> config_args;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_args = {args[i], args[i + 1]};
      ++i;
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_args = {args[i]};
    } else {
      ordered.push_back(args[i]);
    }
  }
  if (!ordered.empty()) ordered.insert(ordered.begin() + 1, config_args.begin(), config_args.end());
  std::vector<const char*> argv;
  for (const auto& a : ordered) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (bounds_cmd->parsed()) {
      if (bounds_regime == "sarl") {
        const auto b = bounds::sarl_bound(bf.sarl());
        out << "regime=" << bounds_regime << '\n';
        print_bound(out, "sarl", b);
      } else {
        const auto m = bf.marl();
        const auto b = bounds_regime == "dependent"     ? bounds::marl_bound_dependent(m)
                       : bounds_regime == "independent" ? bounds::marl_bound_independent(m)
                                                        : bounds::marl_bound_misaligned(m);
        out << "regime=" << bounds_regime << '\n';
        print_bound(out, "marl", b);
      }
      return kExitOk;
    }

    if (advise_cmd->parsed()) {
      const auto s = af.sarl();
      const auto m = af.marl();
      const auto r = advise_regime == "independent" ? bounds::ratio_independent(s, m)
                     : advise_regime == "dependent" ? bounds::ratio_dependent(s, m)
                                                    : bounds::misalignment_condition(s, m);
      out << "regime=" << bounds::to_string(r.regime) << '\n';
      out << "n_sarl=" << fixed(r.n_sarl, 10) << '\n';
      out << "n_marl=" << fixed(r.n_marl, 10) << '\n';
      out << "ratio=" << fixed(r.ratio, 10) << '\n';
      print_optional(out, "factor_A", r.factor_A);
      print_optional(out, "factor_C", r.factor_C);
      print_optional(out, "factored_ratio", r.factored_ratio);
      print_optional(out, "kappa_d", r.kappa_d);
      print_optional(out, "kappa_l", r.kappa_l);
      print_optional(out, "entropy_only_ratio", r.entropy_only_ratio);
      print_optional(out, "homogeneous_cap", r.homogeneous_cap);
      if (r.large_model_heuristic) {
        out << "large_model_heuristic=" << fixed(*r.large_model_heuristic, 10) << " ("
            << (*r.large_model_heuristic <= 1.0 ? "pass" : "fail") << " against 1)\n";
      }
      out << "condition_holds=" << (r.condition_holds ? "true" : "false") << '\n';
      out << "recommendation=" << bounds::to_string(r.recommendation) << '\n';
      return kExitOk;
    }

    if (gen_cmd->parsed()) {
      const auto task = tasks::make_task(gt.config());
      const auto data = tasks::generate(task, gen_n, gen_seed);
      if (gen_out.empty()) {
        tasks::write_csv(data, out);
      } else {
        auto f = open_out(gen_out);
        tasks::write_csv(data, f);
        out << "wrote " << data.n << " samples to " << gen_out << '\n';
      }
      return kExitOk;
    }

    if (train_cmd->parsed()) {
      tasks::Dataset data;
      if (!train_data.empty()) {
        auto f = open_in(train_data, "data");
        data = tasks::read_csv(f);
      } else {
        data = tasks::generate(tasks::make_task(tt.config()), train_n, train_seed);
      }
      const auto learner = learners::parse_learner(train_learner);
      const auto result = learners::train(learner, data, tf.cfg);
      out << "learner=" << learners::to_string(learner) << '\n';
      out << "parameters=" << result.model.parameter_count() << '\n';
      learners::write_fit_report(result.report, out);
      if (eval_n > 0) {
        const auto task = tasks::make_task(data.provenance.task);
        const auto test = tasks::generate(task, eval_n, data.provenance.data_seed + 1);
        const auto ev = learners::evaluate(result.model, test, data.provenance.task.mode);
        out << "test_mse=" << detail::exact(ev.overall_mse) << '\n';
        out << "test_mean_reward=" << detail::exact(ev.mean_reward) << '\n';
      }
      if (!model_out.empty()) {
        auto f = open_out(model_out);
        learners::write_model_csv(result.model, f);
      }
      return kExitOk;
    }

    if (sweep_cmd->parsed()) {
      sc.mode = tasks::parse_mode(sweep_mode);
      sc.output_dir = sweep_out;
      sc.train = sf.cfg;
      const auto result = sweep::run_sweep(sc);
      out << sweep::nstar_csv(result);
      out << "wrote rows.csv, summary.csv, nstar.csv and curve SVGs to " << sweep_out << '\n';
      return kExitOk;
    }

    if (alpha_cmd->parsed()) {
      alignment::AlphaEstimate est;
      if (!pairs_file.empty()) {
        if (alpha_method != "mc") {
          throw ValidationError("pairs", "--pairs only applies to --method mc");
        }
        auto f = open_in(pairs_file, "pairs");
        const auto pairs = alignment::read_pairs_csv(f);
        est = alignment::alpha_monte_carlo(pairs, quantile);
      } else {
        const auto task = tasks::make_task(at.config());
        learners::SegmentedModel model;
        if (!model_file.empty()) {
          auto f = open_in(model_file, "model");
          model = learners::read_model_csv(f);
        } else if (train_first) {
          const auto train_data = tasks::generate(task, alpha_train_n, alpha_seed + 1);
          model = learners::train(learners::parse_learner(alpha_learner), train_data, atf.cfg).model;
        } else {
          throw ValidationError("model", "pass --model FILE or --train-first");
        }
        est = alpha_method == "mc"
                  ? alignment::alpha_from_model(task, model, rollouts, quantile, alpha_seed)
                  : alignment::alpha_gradient_ascent(task, model, ascent);
      }
      alignment::write_estimate(est, out);
      if (then_bound) {
        abf.K = pairs_file.empty() ? at.K : std::max<std::size_t>(abf.K, 1);
        if (abf.d_i.empty()) abf.d_i = {static_cast<double>(at.p + 1)};
        if (abf.B_i.empty()) abf.B_i = {1.0};
        if (abf.T_max_i.empty()) abf.T_max_i = {1.0};
        abf.alpha = est.alpha_hat;
        print_bound(out, "marl", bounds::marl_bound_misaligned(abf.marl()));
      }
      return kExitOk;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace pacmarl::cli
