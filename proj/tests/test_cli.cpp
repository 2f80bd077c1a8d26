#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qsu11/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int status;
  std::string out;
  std::string err;
};

RunResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = qsu11::run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("qsu11_test_" + name);
}

}  // namespace

TEST_CASE("spectrum command") {
  SUBCASE("I1 json report passes") {
    const RunResult r = run({"spectrum", "--op", "I1", "--q", "0.5", "--l", "1",
                             "--dim", "300", "--format", "json"});
    CHECK(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["prediction"]["type"] == "interval");
    CHECK(j["prediction"]["hi"].get<double>() == doctest::Approx(2.8284271247461903));
    CHECK(j["eigenvalues"].size() == 300);
    CHECK(j["checks"][0]["pass"] == true);
  }

  SUBCASE("I2 ladder matching passes") {
    const RunResult r =
        run({"spectrum", "--op", "I2", "--q", "0.5", "--l", "1", "--dim", "200"});
    CHECK(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["prediction"]["type"] == "point_set");
    CHECK(j["prediction"]["matched_points"].size() >= 8);
  }

  SUBCASE("invalid q exits 2 with a message") {
    const RunResult r = run({"spectrum", "--op", "I1", "--q", "1.5", "--l", "1"});
    CHECK(r.status == 2);
    CHECK(r.err.find("q must lie in (0,1)") != std::string::npos);
  }

  SUBCASE("small dim exits 2") {
    const RunResult r =
        run({"spectrum", "--op", "I1", "--q", "0.5", "--l", "1", "--dim", "8"});
    CHECK(r.status == 2);
  }

  SUBCASE("csv format has the fixed columns") {
    const RunResult r = run({"spectrum", "--op", "I1", "--q", "0.5", "--l", "1",
                             "--dim", "32", "--format", "csv"});
    CHECK(r.status == 0);
    CHECK(r.out.rfind("index,eigenvalue,predicted,abs_error\n", 0) == 0);
  }
}

TEST_CASE("ortho command") {
  SUBCASE("continuous relation passes") {
    const RunResult r = run({"ortho", "--relation", "cont_qL_313", "--q", "0.5",
                             "--l", "1", "--nmax", "8"});
    CHECK(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["max_offdiag"].get<double>() < 1e-8);
  }

  SUBCASE("nmax = 0 single entry passes") {
    const RunResult r = run({"ortho", "--relation", "little_qL_510", "--q", "0.5",
                             "--l", "1", "--nmax", "0"});
    CHECK(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["gram"].size() == 1);
  }

  SUBCASE("the non-orthogonal dual system fails honestly") {
    const RunResult r = run({"ortho", "--relation", "fk_719", "--q", "0.5", "--l",
                             "1", "--c", "1", "--nmax", "6"});
    CHECK(r.status == 1);
    const json j = json::parse(r.out);
    CHECK(j["max_offdiag"].get<double>() > 0.5);
  }

  SUBCASE("unknown relation exits 2") {
    CHECK(run({"ortho", "--relation", "nope"}).status == 2);
  }
}

TEST_CASE("deficiency command") {
  const RunResult r = run({"deficiency", "--op", "I4", "--q", "0.5", "--l", "1",
                           "--kmax", "200"});
  CHECK(r.status == 0);
  const json j = json::parse(r.out);
  CHECK(j["verdict"] == "indices_1_1");
  CHECK(run({"deficiency", "--op", "I1", "--q", "0.5", "--l", "1"}).status == 0);
}

TEST_CASE("limits command") {
  const RunResult r = run({"limits", "--check", "eigenvalue-map", "--mu", "1.0",
                           "--q-seq", "0.9,0.99,0.999"});
  CHECK(r.status == 0);
  CHECK(r.out.rfind("q,error\n", 0) == 0);
  CHECK(run({"limits", "--check", "poly-limit", "--mu", "0.7"}).status == 0);
  CHECK(run({"limits", "--check", "matrix-limit",
             "--q-seq", "0.5,0.75,0.875,0.9375,0.96875,0.984375"})
            .status == 0);
  CHECK(run({"limits", "--check", "bogus"}).status == 2);
}

TEST_CASE("verify-all summary") {
  const RunResult r = run({"verify-all", "--q", "0.5", "--l", "1"});
  // one claim is honestly red, so the aggregate exits 1 and lists it
  CHECK(r.status == 1);
  int pass = 0, fail = 0;
  std::istringstream lines(r.out);
  std::string line;
  std::vector<std::string> failing;
  while (std::getline(lines, line)) {
    if (line.rfind("PASS", 0) == 0) ++pass;
    if (line.rfind("FAIL", 0) == 0) {
      ++fail;
      failing.push_back(line);
    }
  }
  CHECK(pass == 8);
  CHECK(fail == 1);
  REQUIRE(failing.size() == 1);
  CHECK(failing[0].find("fk-orthogonality") != std::string::npos);
  CHECK(r.out.find("failing: fk-orthogonality") != std::string::npos);
}

TEST_CASE("reports are byte-identical across runs") {
  const fs::path p1 = temp_file("det1.json"), p2 = temp_file("det2.json");
  for (const fs::path& p : {p1, p2}) {
    const RunResult r = run({"spectrum", "--op", "I2", "--q", "0.5", "--l", "1",
                             "--dim", "64", "--out", p.string()});
    CHECK(r.status == 0);
  }
  CHECK(slurp(p1) == slurp(p2));
  CHECK(!slurp(p1).empty());
  fs::remove(p1);
  fs::remove(p2);
}

TEST_CASE("config file precedence") {
  const fs::path cfg = temp_file("config.txt");
  {
    std::ofstream out(cfg);
    out << "# comment line\n";
    out << "q = 0.7\n";
    out << "l = 1.25\n";
  }

  SUBCASE("config value used when no flag") {
    const RunResult r =
        run({"spectrum", "--op", "I1", "--dim", "32", "--config", cfg.string()});
    CHECK(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["params"]["q"].get<double>() == doctest::Approx(0.7));
    CHECK(j["params"]["l"].get<double>() == doctest::Approx(1.25));
  }

  SUBCASE("command line overrides config") {
    const RunResult r = run({"spectrum", "--op", "I1", "--dim", "32", "--config",
                             cfg.string(), "--q", "0.5"});
    CHECK(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["params"]["q"].get<double>() == doctest::Approx(0.5));
    CHECK(j["params"]["l"].get<double>() == doctest::Approx(1.25));
  }

  fs::remove(cfg);
}

TEST_CASE("worker cap from the environment") {
  setenv("QSU11_THREADS", "2", 1);
  const RunResult threaded = run({"verify-all", "--q", "0.5", "--l", "1"});
  unsetenv("QSU11_THREADS");
  const RunResult serial = run({"verify-all", "--q", "0.5", "--l", "1"});
  CHECK(threaded.status == serial.status);
  CHECK(threaded.out == serial.out);

  setenv("QSU11_THREADS", "zero", 1);
  const RunResult bad = run({"verify-all", "--q", "0.5", "--l", "1"});
  unsetenv("QSU11_THREADS");
  CHECK(bad.status == 2);
}

#ifdef QSU11_CLI_PATH
TEST_CASE("installed binary writes reports atomically") {
  const fs::path out = temp_file("bin.json");
  const std::string cmd = std::string(QSU11_CLI_PATH) +
                          " spectrum --op I1 --q 0.5 --l 1 --dim 32 --out " +
                          out.string();
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(out));
  CHECK(!fs::exists(out.string() + ".tmp"));
  fs::remove(out);
}
#endif
