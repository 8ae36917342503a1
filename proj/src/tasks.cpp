#include "pacmarl/tasks.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "format.hpp"
#include "pacmarl/errors.hpp"
#include "pacmarl/rng.hpp"

namespace pacmarl::tasks {

using detail::exact;

std::string_view to_string(TaskMode mode) noexcept {
  return mode == TaskMode::Independent ? "independent" : "dependent";
}

TaskMode parse_mode(std::string_view text) {
  if (text == "independent") return TaskMode::Independent;
  if (text == "dependent") return TaskMode::Dependent;
  throw ValidationError("mode", "expected 'independent' or 'dependent', got '" +
                                    std::string(text) + "'");
}

void validate(const TaskConfig& config) {
  if (config.K == 0) throw ValidationError("K", "segment count must be >= 1");
  if (config.p == 0) throw ValidationError("p", "feature dimension must be >= 1");
  if (!std::isfinite(config.lambda) || config.lambda < 0.0) {
    throw ValidationError("lambda", "must be finite and >= 0");
  }
  if (!std::isfinite(config.sigma2) || config.sigma2 < 0.0) {
    throw ValidationError("sigma2", "must be finite and >= 0");
  }
}

std::string fingerprint(const TaskConfig& config) {
  std::string out;
  out += "K=" + std::to_string(config.K);
  out += " p=" + std::to_string(config.p);
  out += " lambda=" + exact(config.effective_lambda());
  out += " sigma2=" + exact(config.sigma2);
  out += " weight_seed=" + std::to_string(config.weight_seed);
  out += " mode=" + std::string(to_string(config.mode));
  return out;
}

namespace {

std::map<std::string, std::string> split_key_values(std::string_view line) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(line)};
  std::string token;
  while (in >> token) {
    if (token == "#") continue;
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw ValidationError("fingerprint", "malformed token '" + token + "'");
    kv[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return kv;
}

const std::string& need(const std::map<std::string, std::string>& kv, const char* key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw ValidationError(key, "missing from fingerprint");
  return it->second;
}

TaskConfig config_from(const std::map<std::string, std::string>& kv) {
  TaskConfig c;
  c.K = detail::parse_int<std::size_t>(need(kv, "K"), "K");
  c.p = detail::parse_int<std::size_t>(need(kv, "p"), "p");
  c.lambda = detail::parse_double(need(kv, "lambda"), "lambda");
  c.sigma2 = detail::parse_double(need(kv, "sigma2"), "sigma2");
  c.weight_seed = detail::parse_int<std::uint64_t>(need(kv, "weight_seed"), "weight_seed");
  c.mode = parse_mode(need(kv, "mode"));
  validate(c);
  return c;
}

}  // namespace

TaskConfig parse_fingerprint(std::string_view line) { return config_from(split_key_values(line)); }

SyntheticTask make_task(const TaskConfig& config) {
  validate(config);
  SyntheticTask task;
  task.config = config;
  if (config.mode == TaskMode::Independent) task.config.lambda = 0.0;
  auto engine = rng::make_engine(rng::derive(config.weight_seed, {rng::label_hash("weights")}));
  std::normal_distribution<double> normal(0.0, 1.0);
  task.weights.assign(config.K, std::vector<double>(config.p));
  for (auto& w : task.weights) {
    for (auto& v : w) v = normal(engine);
  }
  return task;
}

std::vector<double> prefix_means(std::span<const double> target) {
  std::vector<double> means(target.size(), 0.0);
  double running = 0.0;
  for (std::size_t i = 1; i < target.size(); ++i) {
    // Incremental mean; avoids overflow of the raw sum for huge targets.
    running += (target[i - 1] - running) / static_cast<double>(i);
    means[i] = running;
  }
  return means;
}

std::vector<double> apply_recurrence(const SyntheticTask& task,
                                     const std::vector<std::vector<double>>& features,
                                     std::span<const double> noise) {
  const auto& cfg = task.config;
  if (features.size() != cfg.K || noise.size() != cfg.K) {
    throw ValidationError("features", "expected " + std::to_string(cfg.K) + " segments");
  }
  const double lambda = cfg.effective_lambda();
  std::vector<double> y(cfg.K, 0.0);
  double running = 0.0;
  for (std::size_t i = 0; i < cfg.K; ++i) {
    if (features[i].size() != cfg.p) {
      throw ValidationError("features", "segment length must equal p=" + std::to_string(cfg.p));
    }
    double dot = 0.0;
    for (std::size_t j = 0; j < cfg.p; ++j) dot += task.weights[i][j] * features[i][j];
    y[i] = dot + noise[i];
    if (i > 0 && lambda != 0.0) y[i] += lambda * running;
    running += (y[i] - running) / static_cast<double>(i + 1);
  }
  return y;
}

std::vector<double> noiseless_targets(const SyntheticTask& task,
                                      const std::vector<std::vector<double>>& features) {
  const std::vector<double> zero(task.config.K, 0.0);
  return apply_recurrence(task, features, zero);
}

namespace {

rng::Engine data_engine(std::uint64_t data_seed) {
  return rng::make_engine(rng::derive(data_seed, {rng::label_hash("data")}));
}

void fill_features(const TaskConfig& cfg, rng::Engine& engine,
                   std::vector<std::vector<double>>& features) {
  std::normal_distribution<double> normal(0.0, 1.0);
  features.assign(cfg.K, std::vector<double>(cfg.p));
  for (auto& x : features) {
    for (auto& v : x) v = normal(engine);
  }
}

Dataset generate_impl(const SyntheticTask& task, std::size_t n, std::uint64_t data_seed) {
  const auto& cfg = task.config;
  Dataset data;
  data.n = n;
  data.provenance = {cfg, data_seed};
  if (cfg.mode == TaskMode::Independent) data.provenance.task.lambda = 0.0;
  data.samples.resize(n);
  auto engine = data_engine(data_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double noise_scale = std::sqrt(cfg.sigma2);
  std::vector<double> noise(cfg.K);
  for (auto& s : data.samples) {
    fill_features(cfg, engine, s.features);
    for (auto& e : noise) e = noise_scale * normal(engine);
    s.targets = apply_recurrence(task, s.features, noise);
  }
  return data;
}

}  // namespace

std::vector<std::vector<double>> draw_features(const TaskConfig& config, std::uint64_t seed) {
  auto engine = data_engine(seed);
  std::vector<std::vector<double>> features;
  fill_features(config, engine, features);
  return features;
}

Dataset generate_independent(const SyntheticTask& task, std::size_t n, std::uint64_t data_seed) {
  if (task.config.mode != TaskMode::Independent) {
    throw ModeMismatchError("generate_independent requires an independent task");
  }
  return generate_impl(task, n, data_seed);
}

Dataset generate_dependent(const SyntheticTask& task, std::size_t n, std::uint64_t data_seed) {
  if (task.config.mode != TaskMode::Dependent) {
    throw ModeMismatchError("generate_dependent requires a dependent task");
  }
  return generate_impl(task, n, data_seed);
}

Dataset generate(const SyntheticTask& task, std::size_t n, std::uint64_t data_seed) {
  return task.config.mode == TaskMode::Independent ? generate_independent(task, n, data_seed)
                                                   : generate_dependent(task, n, data_seed);
}

Dataset regenerate(const Provenance& provenance, std::size_t n) {
  return generate(make_task(provenance.task), n, provenance.data_seed);
}

namespace {

void require_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ValidationError("predicted", "length " + std::to_string(a.size()) +
                                           " does not match target length " +
                                           std::to_string(b.size()));
  }
  if (a.empty()) throw ValidationError("predicted", "at least one segment is required");
}

double squared(double v) { return v * v; }

}  // namespace

double unified_reward(std::span<const double> predicted, std::span<const double> target) {
  require_same_length(predicted, target);
  double mse = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    mse += (squared(predicted[i] - target[i]) - mse) / static_cast<double>(i + 1);
  }
  return 1.0 / (1.0 + mse);
}

double decomposed_reward_independent(std::span<const double> predicted,
                                     std::span<const double> target) {
  require_same_length(predicted, target);
  double total = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    total += 1.0 / (1.0 + squared(predicted[i] - target[i]));
  }
  return total / static_cast<double>(predicted.size());
}

double decomposed_reward_dependent(std::span<const double> predicted,
                                   std::span<const double> target,
                                   std::span<const double> prefix_means, double lambda) {
  require_same_length(predicted, target);
  if (prefix_means.size() != predicted.size()) {
    throw ValidationError("prefix_means", "needs one entry per segment");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    double penalty = squared(predicted[i] - target[i]);
    if (i > 0 && lambda != 0.0) {
      penalty += lambda * squared(predicted[i] - lambda * prefix_means[i]);
    }
    total += 1.0 / (1.0 + penalty);
  }
  return total / static_cast<double>(predicted.size());
}

double decomposed_reward_dependent(std::span<const double> predicted,
                                   std::span<const double> target, double lambda) {
  const auto means = prefix_means(target);
  return decomposed_reward_dependent(predicted, target, means, lambda);
}

void write_csv(const Dataset& data, std::ostream& out) {
  out << "# " << fingerprint(data.provenance.task) << " data_seed=" << data.provenance.data_seed
      << " n=" << data.n << '\n';
  out << "sample,segment";
  for (std::size_t j = 0; j < data.p(); ++j) out << ",feature_" << j;
  out << ",target\n";
  for (std::size_t s = 0; s < data.samples.size(); ++s) {
    const auto& sample = data.samples[s];
    for (std::size_t i = 0; i < sample.targets.size(); ++i) {
      out << s << ',' << i;
      for (double v : sample.features[i]) out << ',' << exact(v);
      out << ',' << exact(sample.targets[i]) << '\n';
    }
  }
}

Dataset read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("#", 0) != 0) {
    throw ValidationError("dataset", "missing '# K=... data_seed=...' provenance line");
  }
  const auto kv = split_key_values(line);
  Dataset data;
  data.provenance.task = config_from(kv);
  data.provenance.data_seed =
      detail::parse_int<std::uint64_t>(need(kv, "data_seed"), "data_seed");
  const std::size_t K = data.K();
  const std::size_t p = data.p();

  if (!std::getline(in, line)) throw ValidationError("dataset", "missing CSV header");
  std::string expected = "sample,segment";
  for (std::size_t j = 0; j < p; ++j) expected += ",feature_" + std::to_string(j);
  expected += ",target";
  if (line != expected) throw ValidationError("dataset", "unexpected header '" + line + "'");

  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      cells.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cells.size() != p + 3) throw ValidationError("dataset", "row with wrong column count");
    const auto s = detail::parse_int<std::size_t>(cells[0], "sample");
    const auto i = detail::parse_int<std::size_t>(cells[1], "segment");
    if (s != row / K || i != row % K) throw ValidationError("dataset", "rows out of order");
    if (i == 0) {
      data.samples.emplace_back();
      data.samples.back().features.assign(K, std::vector<double>(p));
      data.samples.back().targets.assign(K, 0.0);
    }
    auto& sample = data.samples.back();
    for (std::size_t j = 0; j < p; ++j) {
      sample.features[i][j] = detail::parse_double(cells[2 + j], "feature");
    }
    sample.targets[i] = detail::parse_double(cells[p + 2], "target");
    ++row;
  }
  if (row % K != 0) throw ValidationError("dataset", "truncated final sample");
  data.n = data.samples.size();
  if (auto it = kv.find("n"); it != kv.end()) {
    if (detail::parse_int<std::size_t>(it->second, "n") != data.n) {
      throw ValidationError("n", "provenance sample count does not match rows");
    }
  }
  return data;
}

}  // namespace pacmarl::tasks
