#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "dqdwtd_cli/cli.hpp"

using namespace dqdwtd::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "dqdwtd");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "dqdwtd_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("parse_config") {
  std::istringstream ok("# header\n alpha = 5  # trailing\n\ncoop=10\n");
  const auto m = parse_config(ok);
  CHECK(m.size() == 2);
  CHECK(m.at("alpha") == "5");
  CHECK(m.at("coop") == "10");

  std::istringstream bad("alpha 5\n");
  CHECK_THROWS_AS(parse_config(bad), std::runtime_error);
  std::istringstream dup("alpha=1\nalpha=2\n");
  CHECK_THROWS_AS(parse_config(dup), std::runtime_error);
}

TEST_CASE("probabilities") {
  SUBCASE("one photon") {
    const Result r = invoke({"probabilities", "--alpha", "1", "--coop", "1", "--photons", "1"});
    CHECK(r.code == kOk);
    const auto rows = csv(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(r.out.rfind("quantity,closed_form,numeric,abs_diff\n", 0) == 0);
    CHECK(rows[1][0] == "p_e");
    CHECK(std::stod(rows[1][1]) == 0.125);
    CHECK(std::abs(std::stod(rows[1][2]) - 0.125) <= 1e-9);
    CHECK(std::stod(rows[1][3]) <= 1e-9);
    CHECK(r.out.find('\r') == std::string::npos);
  }
  SUBCASE("two photons sum to one") {
    const Result r = invoke({"probabilities", "--photons", "2", "--alpha", "5", "--coop", "10"});
    CHECK(r.code == kOk);
    const auto rows = csv(r.out);
    REQUIRE(rows.size() == 7);
    double sum = 0.0;
    for (int i = 1; i <= 4; ++i) sum += std::stod(rows[i][2]);
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }
  SUBCASE("zero photons is a usage error") {
    const Result r = invoke({"probabilities", "--photons", "0"});
    CHECK(r.code == kUsage);
    CHECK(r.out.empty());
    CHECK_FALSE(r.err.empty());
  }
  SUBCASE("unknown flag is a usage error") { CHECK(invoke({"probabilities", "--bogus"}).code == kUsage); }
  SUBCASE("help exits cleanly") { CHECK(invoke({"--help"}).code == kOk); }
}

TEST_CASE("sweep") {
  SUBCASE("mean time is one at alpha = 1") {
    const Result r = invoke({"sweep", "--axis", "C", "--from", "0", "--to", "10", "--count", "101", "--alpha", "1"});
    CHECK(r.code == kOk);
    const auto rows = csv(r.out);
    REQUIRE(rows.size() == 102);
    CHECK(r.out.rfind("C,alpha,p_e,p_e1,p_e2,p_ee,kappa_t1,max_engine_diff\n", 0) == 0);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::abs(std::stod(rows[i][6]) - 1.0) <= 1e-12);
  }
  SUBCASE("hierarchy at alpha = 5") {
    const Result r =
        invoke({"sweep", "--axis", "C", "--from", "0", "--to", "25", "--count", "101", "--alpha", "5", "--photons", "2"});
    CHECK(r.code == kOk);
    const auto rows = csv(r.out);
    REQUIRE(rows.size() == 102);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double pe = std::stod(rows[i][2]), pe1 = std::stod(rows[i][3]), pe2 = std::stod(rows[i][4]),
                   pee = std::stod(rows[i][5]);
      CHECK(pee <= pe1);
      CHECK(pe1 <= pe);
      CHECK(pe <= pe2);
      CHECK(std::stod(rows[i][7]) <= 1e-8);
    }
  }
  SUBCASE("two-point grid") {
    const Result r = invoke({"sweep", "--axis", "alpha", "--from", "0.5", "--to", "2", "--count", "2"});
    CHECK(r.code == kOk);
    const auto rows = csv(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0][0] == "alpha");
    CHECK(rows[1][0] == "0.5");
    CHECK(rows[2][0] == "2");
  }
  SUBCASE("bad axis and count") {
    CHECK(invoke({"sweep", "--axis", "g"}).code == kUsage);
    CHECK(invoke({"sweep", "--count", "1"}).code == kUsage);
  }
}

TEST_CASE("wtd-curve") {
  const Result r = invoke({"wtd-curve", "--t-max", "2", "--points", "5"});
  CHECK(r.code == kOk);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(r.out.rfind("t,W_e,W_gamma,W_total,survival\n", 0) == 0);
  CHECK(std::stod(rows[1][1]) == 0.0);
  CHECK(std::abs(std::stod(rows[1][2]) - 1.0) <= 1e-14);
  CHECK(std::abs(std::stod(rows[1][4]) - 1.0) <= 1e-14);
}

TEST_CASE("trajectories") {
  SUBCASE("fixed seed is reproducible and on target") {
    const std::vector<std::string> args = {"trajectories", "--alpha", "1",    "--coop", "1",
                                           "--photons",    "1",       "--n", "20000",  "--seed", "42"};
    const Result a = invoke(args);
    const Result b = invoke(args);
    CHECK(a.code == kOk);
    CHECK(a.out == b.out);
    const auto rows = csv(a.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[1][0] == "p_e");
    CHECK(std::abs(std::stod(rows[1][4])) <= 3.0);
  }
  SUBCASE("small ensembles warn but run") {
    const Result r = invoke({"trajectories", "--n", "10", "--seed", "1"});
    CHECK(r.code == kOk);
    CHECK(r.err.find("warning") != std::string::npos);
  }
  SUBCASE("missing seed is reported") {
    const Result r = invoke({"trajectories", "--n", "200"});
    CHECK(r.err.find("--seed") != std::string::npos);
  }
  SUBCASE("dump") {
    const auto path = scratch_dir() / "dump.csv";
    const Result r = invoke({"trajectories", "--n", "100", "--seed", "3", "--photons", "2", "--dump", path.string()});
    CHECK(r.code == kOk);
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    const auto rows = csv(text.str());
    REQUIRE(rows.size() == 201);
    CHECK(rows[0] == std::vector<std::string>{"traj_id", "channel", "time"});
    CHECK(rows[1][0] == "0");
  }
}

TEST_CASE("efficiency") {
  const Result r = invoke({"efficiency", "--coop", "1", "--epsilon", "1", "--tc", "0.8660254037844386"});
  CHECK(r.code == kOk);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(r.out.rfind("delta_d,delta_r,eta\n", 0) == 0);
  CHECK(std::abs(std::stod(rows[1][2]) - 0.5) <= 1e-12);

  const Result grid = invoke({"efficiency", "--dd-from", "-1", "--dd-to", "1", "--dd-count", "3", "--dr-count", "2",
                              "--dr-to", "0.5"});
  CHECK(grid.code == kOk);
  CHECK(csv(grid.out).size() == 7);
}

TEST_CASE("dyson") {
  const Result r = invoke({"dyson", "--photons", "1", "--t-max", "4", "--points", "5"});
  CHECK(r.code == kOk);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(r.out.rfind("t,P0,P1,P2\n", 0) == 0);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::abs(std::stod(rows[i][1]) + std::stod(rows[i][2]) - 1.0) <= 1e-6);
    CHECK(std::abs(std::stod(rows[i][3])) <= 1e-8);
  }
}

TEST_CASE("config precedence and output directory") {
  const auto dir = scratch_dir();
  const auto cfg = dir / "run.cfg";
  {
    std::ofstream f(cfg);
    f << "# two-photon run\nalpha = 5\ncoop = 10\nphotons = 2\n";
  }
  SUBCASE("config fills defaults") {
    const Result r = invoke({"probabilities", "--config", cfg.string()});
    CHECK(r.code == kOk);
    CHECK(csv(r.out).size() == 7);
  }
  SUBCASE("flags override config") {
    const Result r = invoke({"probabilities", "--config", cfg.string(), "--photons", "1"});
    CHECK(r.code == kOk);
    const auto rows = csv(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(std::abs(std::stod(rows[1][1]) - 0.631313131313131) <= 1e-12);
  }
  SUBCASE("unknown key") {
    const auto bad = dir / "bad.cfg";
    std::ofstream(bad) << "bogus = 1\n";
    CHECK(invoke({"probabilities", "--config", bad.string()}).code == kUsage);
  }
  SUBCASE("relative output goes under the env directory") {
    const auto out_dir = dir / "out";
    std::filesystem::create_directories(out_dir);
    std::filesystem::remove(out_dir / "p.csv");
    ::setenv(kOutputDirEnv, out_dir.c_str(), 1);
    const Result r = invoke({"probabilities", "-o", "p.csv"});
    ::unsetenv(kOutputDirEnv);
    CHECK(r.code == kOk);
    CHECK(r.out.empty());
    CHECK(std::filesystem::exists(out_dir / "p.csv"));
  }
}
