#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pacmarl/cli.hpp"

using pacmarl::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "pacmarl");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

double value_of(const std::string& text, const std::string& key) {
  const auto at = text.find(key + "=");
  REQUIRE(at != std::string::npos);
  return std::strtod(text.c_str() + at + key.size() + 1, nullptr);
}

}  // namespace

TEST_CASE("bounds subcommand") {
  const auto r = call({"bounds", "--regime", "sarl", "--d", "10", "--tmax", "100", "--lstep", "1",
                       "--B", "1", "--eps", "0.1", "--delta", "0.05"});
  CHECK(r.code == 0);
  CHECK(value_of(r.out, "sarl.n_samples") == doctest::Approx(7207.3285).epsilon(1e-8));

  const auto bad = call({"bounds", "--regime", "misaligned", "--d", "10", "--tmax", "100",
                         "--K", "2", "--alpha", "0.05", "--eps", "0.1"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("epsilon must exceed 2*alpha") != std::string::npos);

  CHECK(call({"bounds", "--eps", "0"}).code == 2);
  CHECK(call({"bounds", "--regime", "nope"}).code == 2);
  CHECK(call({"bounds", "--tmax", "0.01"}).code == 2);

  const auto help = call({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("bounds") != std::string::npos);
  CHECK(call({"bounds", "--help"}).code == 0);
  CHECK(call({}).code == 2);
}

TEST_CASE("advise subcommand") {
  const auto dep = call({"advise", "--regime", "dependent", "--d", "10", "--tmax", "100",
                         "--K", "2", "--eps", "0.1", "--delta", "0.05"});
  CHECK(dep.code == 0);
  CHECK(value_of(dep.out, "factor_A") == doctest::Approx(0.89965).epsilon(1e-5));
  CHECK(value_of(dep.out, "factor_C") == doctest::Approx(1.01533).epsilon(1e-5));
  CHECK(value_of(dep.out, "ratio") == doctest::Approx(3.6538).epsilon(1e-4));
  CHECK(dep.out.find("recommendation=SARL") != std::string::npos);
  CHECK(dep.out.find("large_model_heuristic=") != std::string::npos);

  const auto ind = call({"advise", "--regime", "independent", "--d", "40", "--tmax", "100",
                         "--K", "4", "--eps", "0.1", "--delta", "0.05"});
  CHECK(ind.code == 0);
  CHECK(ind.out.find("recommendation=MARL") != std::string::npos);
  CHECK(value_of(ind.out, "ratio") < value_of(ind.out, "homogeneous_cap"));

  const auto edge = call({"advise", "--regime", "misaligned", "--d", "10", "--tmax", "100",
                          "--K", "1", "--alpha", "0"});
  CHECK(edge.code == 0);
  CHECK(edge.out.find("condition_holds=true") != std::string::npos);
  CHECK(value_of(edge.out, "ratio") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("generate and train") {
  const auto dir = std::filesystem::temp_directory_path() / "pacmarl_cli_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto data = (dir / "d.csv").string();
  const auto model = (dir / "m.csv").string();

  CHECK(call({"generate", "--mode", "dependent", "--K", "3", "--p", "2", "--lambda", "0.5",
              "--n", "40", "--data-seed", "3", "--out", data})
            .code == 0);
  const auto t = call({"train", "--data", data, "--learner", "marl", "--model-out", model,
                       "--eval-n", "100"});
  CHECK(t.code == 0);
  CHECK(t.out.find("learner=MARL") != std::string::npos);
  CHECK(t.out.find("test_mse=") != std::string::npos);
  CHECK(std::filesystem::exists(model));

  const auto a = call({"alpha", "--method", "mc", "--mode", "dependent", "--K", "3", "--p", "2",
                       "--lambda", "0.5", "--model", model, "--rollouts", "200"});
  CHECK(a.code == 0);
  CHECK(a.out.find("alpha_hat=") != std::string::npos);

  CHECK(call({"train", "--data", (dir / "missing.csv").string()}).code == 2);
  CHECK(call({"train", "--learner", "both"}).code == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("alpha subcommand") {
  const auto dir = std::filesystem::temp_directory_path() / "pacmarl_cli_alpha";
  std::filesystem::create_directories(dir);
  const auto pairs = (dir / "pairs.csv").string();
  std::ofstream(pairs) << "R,Rbar\n1,1\n0.9,0.7\n0.2,0.6\n0.7,0.1\n0.1,0.9\n";
  const auto q = call({"alpha", "--method", "mc", "--quantile", "0.95", "--pairs", pairs});
  CHECK(q.code == 0);
  CHECK(value_of(q.out, "alpha_hat") == doctest::Approx(0.8));

  const auto chained = call({"alpha", "--method", "mc", "--pairs", pairs, "--then-bound",
                             "--eps", "0.1", "--delta", "0.05", "--K", "2"});
  CHECK(chained.code == 2);
  CHECK(chained.err.find("epsilon must exceed 2*alpha") != std::string::npos);

  const auto one = call({"alpha", "--method", "mc", "--mode", "independent", "--K", "1",
                         "--train-first", "--rollouts", "100"});
  CHECK(one.code == 0);
  CHECK(value_of(one.out, "alpha_hat") == 0.0);

  CHECK(call({"alpha", "--method", "mc", "--K", "2"}).code == 2);
  CHECK(call({"alpha", "--method", "grad", "--pairs", pairs}).code == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweep subcommand with a config file") {
  const auto dir = std::filesystem::temp_directory_path() / "pacmarl_cli_sweep";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto ini = (dir / "sweep.toml").string();
  std::ofstream(ini) << "[sweep]\nmode = \"dependent\"\nK = [2]\nlambda = [0.5]\np = 2\n"
                        "n-grid = [16, 32]\ntrials = 2\ntest-size = 50\n";
  const auto out = (dir / "out").string();
  const auto r = call({"sweep", "--config", ini, "--out", out, "--trials", "3"});
  CHECK(r.code == 0);
  CHECK(std::filesystem::exists(dir / "out" / "curve_dependent_K2_lam0.5.svg"));
  std::ifstream rows(dir / "out" / "rows.csv");
  std::string line;
  std::size_t count = 0;
  while (std::getline(rows, line)) ++count;
  CHECK(count == 1 + 2 * 2 * 3);
  CHECK(call({"sweep", "--n-grid", "4", "2", "--out", out}).code == 2);
  const auto typo = (dir / "typo.toml").string();
  std::ofstream(typo) << "[sweep]\ntrails = 3\n";
  CHECK(call({"sweep", "--config", typo, "--out", out}).code == 2);
  CHECK(call({"sweep", "--config", (dir / "absent.toml").string(), "--out", out}).code == 2);
  std::filesystem::remove_all(dir);
}
