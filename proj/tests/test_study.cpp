#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "test_support.hpp"
#include "tunebench/errors.hpp"
#include "tunebench/network_csv.hpp"
#include "tunebench/study.hpp"

using namespace tunebench;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("tunebench_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

StudyConfig small_config(std::uint64_t seed, std::size_t networks) {
  StudyConfig config;
  config.seed = seed;
  config.networks = networks;
  config.restarts = 2;
  config.threads = 1;
  return config;
}

}  // namespace

TEST_SUITE("study") {
  TEST_CASE("small pipeline report invariants and persistence") {
    const auto dir = scratch_dir("pipeline");
    const auto report = run_study(small_config(5, 8), dir);
    for (const char* name : {"networks.csv", "norms.csv", "tuned_params.json", "per_network_rmse.csv",
                             "report.md", "report.json"}) {
      CHECK(fs::exists(dir / name));
    }
    CHECK(report.networks == 8);
    CHECK(report.probes_per_network == 25);
    REQUIRE(report.calculi.size() == 4);
    for (const auto& c : report.calculi) {
      CHECK(c.rmse.low >= 0.0);
      CHECK(c.rmse.low <= c.rmse.mean);
      CHECK(c.rmse.mean <= c.rmse.high);
    }
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(report.correlations[i][i].value() == doctest::Approx(1.0));
      for (std::size_t j = 0; j < 4; ++j) {
        REQUIRE(report.correlations[i][j].has_value());
        CHECK(*report.correlations[i][j] == *report.correlations[j][i]);
        CHECK(std::abs(*report.correlations[i][j]) <= 1.0);
      }
    }
    REQUIRE(report.anova.has_value());
    CHECK(report.anova->df1 == 3);
    CHECK(report.anova->df2 == 21);

    // Every tuned fit is at least as good as its theoretical start.
    const auto tuned = read_tuned_json(dir / "tuned_params.json");
    CHECK(tuned.entries.size() == 32);
    for (const auto& e : tuned.entries) CHECK(e.result.mse <= e.result.theoretical_mse);

    const std::string fresh = slurp(dir / "report.json");
    const auto regen_dir = scratch_dir("pipeline_regen");
    report_from_files(dir / "networks.csv", dir / "tuned_params.json", regen_dir);
    CHECK(slurp(regen_dir / "report.json") == fresh);
    CHECK(slurp(regen_dir / "report.md") == slurp(dir / "report.md"));
    CHECK(slurp(regen_dir / "per_network_rmse.csv") == slurp(dir / "per_network_rmse.csv"));
    CHECK(report_to_json(report).dump() == nlohmann::json::parse(fresh).dump());

    const auto header = slurp(dir / "per_network_rmse.csv").substr(0, 100);
    CHECK(header.rfind("network_id,additivity,linear,independence,mycin,prospector\n", 0) == 0);
  }

  TEST_CASE("results do not depend on the thread count") {
    auto config = small_config(6, 5);
    const auto one = report_to_json(run_study(config)).dump();
    config.threads = 3;
    CHECK(report_to_json(run_study(config)).dump() == one);
    config.threads = 1;
    CHECK(report_to_json(run_study(config)).dump() == one);
  }

  TEST_CASE("tuned JSON round trip") {
    const auto networks = generate_networks(9, 2, 1);
    RunMetadata meta{9, kDefaultGrid, {Calculus::Mycin, Calculus::Linear}, 1, false};
    const auto norms = solve_all(networks, meta.grid, {}, 1);
    const auto tuned = tune_all(networks, norms, meta, {}, 1);
    const auto back = tuned_from_json(tuned_to_json(tuned));
    CHECK(back.metadata.seed == 9);
    CHECK(back.metadata.mycin_clamp == false);
    CHECK(back.metadata.methods == meta.methods);
    REQUIRE(back.entries.size() == tuned.entries.size());
    for (std::size_t i = 0; i < back.entries.size(); ++i) {
      CHECK(back.entries[i].network_id == tuned.entries[i].network_id);
      CHECK(back.entries[i].result.params == tuned.entries[i].result.params);
      CHECK(back.entries[i].result.mse == tuned.entries[i].result.mse);
    }
  }

  TEST_CASE("uniform table from a file is fit exactly by every calculus") {
    const auto dir = scratch_dir("uniform");
    write_networks_csv(dir / "in.csv", {Network{"u", JointTable::uniform()}});
    auto config = small_config(1, 0);
    config.networks_file = dir / "in.csv";
    const auto report = run_study(config, dir / "out");
    REQUIRE(report.networks == 1);
    for (const auto& c : report.calculi) CHECK(c.rmse.high < 1e-6);
    CHECK_FALSE(report.anova.has_value());
  }

  TEST_CASE("linear fits additive tables") {
    const auto dir = scratch_dir("additive");
    std::mt19937_64 engine(10);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    std::vector<Network> networks;
    for (int i = 0; i < 5; ++i) {
      // P(C|e1,e2) = base + d1 e1 + d2 e2 with the evidence jointly dependent.
      const double base = 0.1 + 0.1 * u(engine), d1 = 0.3 * u(engine), d2 = 0.3 * u(engine);
      std::array<double, 4> ev{u(engine), u(engine), u(engine), u(engine)};
      const double total = ev[0] + ev[1] + ev[2] + ev[3];
      JointTable::Cells cells{};
      for (int e1 = 0; e1 < 2; ++e1)
        for (int e2 = 0; e2 < 2; ++e2) {
          const double mass = ev[2 * e1 + e2] / total, q = base + d1 * e1 + d2 * e2;
          cells[4 * e1 + 2 * e2] = mass * (1 - q);
          cells[4 * e1 + 2 * e2 + 1] = mass * q;
        }
      networks.push_back({std::to_string(i + 1), JointTable::normalized(cells, 1e-9)});
    }
    write_networks_csv(dir / "in.csv", networks);
    auto config = small_config(2, 0);
    config.networks_file = dir / "in.csv";
    config.methods = {Calculus::Linear};
    const auto tuned = tune_all(networks, solve_all(networks, kDefaultGrid, {}, 1),
                                {2, kDefaultGrid, config.methods, 2, true}, {}, 1);
    for (const auto& r : network_results(networks, tuned)) {
      CHECK(r.additivity < 1e-6);
      CHECK(r.fits[0].rmse < 1e-3);
    }
  }

  TEST_CASE("errors name their stage") {
    auto config = small_config(1, 0);
    config.networks_file = "/nonexistent/tables.csv";
    try {
      run_study(config);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).rfind("generate", 0) == 0);
    }

    const auto dir = scratch_dir("degenerate");
    write_networks_csv(dir / "in.csv", {Network{"bad", JointTable({0.0, 0.0, 0.3, 0.2, 0.1, 0.1, 0.2, 0.1})}});
    config.networks_file = dir / "in.csv";
    try {
      run_study(config);
      FAIL("expected an error");
    } catch (const Error& e) {
      const std::string msg = e.what();
      CHECK(msg.find("network bad") != std::string::npos);
    }

    CHECK_THROWS(run_study(small_config(1, 0)));
  }
}
