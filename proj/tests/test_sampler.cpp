#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tunebench/sampler.hpp"

using namespace tunebench;

TEST_SUITE("sampler") {
  TEST_CASE("deterministic in seed and independent of thread count") {
    const auto a = sample_tables({42, 2, 1});
    const auto b = sample_tables({42, 2, 1});
    CHECK(a == b);
    const auto serial = sample_tables({7, 200, 1});
    const auto parallel = sample_tables({7, 200, 4});
    CHECK(serial == parallel);
    CHECK(sample_tables({8, 2, 1}) != a);
    CHECK_THROWS_AS(sample_tables({1, 0, 1}), std::invalid_argument);
  }

  TEST_CASE("cells are strictly positive and cell means are 1/8") {
    const auto tables = sample_tables({2024, 10000, 0});
    std::array<double, 8> mean{};
    for (const auto& t : tables) {
      for (int i = 0; i < 8; ++i) {
        CHECK(t.cells()[i] > 0.0);
        mean[i] += t.cells()[i] / 10000.0;
      }
    }
    for (double m : mean) CHECK(std::abs(m - 0.125) < 0.01);
  }

  TEST_CASE("single cell follows Beta(1,7) (Kolmogorov-Smirnov at 0.01)") {
    const auto tables = sample_tables({99, 10000, 0});
    for (int cell : {0, 5}) {
      std::vector<double> x;
      for (const auto& t : tables) x.push_back(t.cells()[cell]);
      std::sort(x.begin(), x.end());
      double d = 0.0;
      const double n = static_cast<double>(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double cdf = 1.0 - std::pow(1.0 - x[i], 7.0);
        d = std::max({d, cdf - i / n, (i + 1) / n - cdf});
      }
      CHECK(oracle::ks_p_value(d, x.size()) > 0.01);
    }
  }

  TEST_CASE("mean additivity factor agrees with an independent simplex sampler") {
    const std::size_t n = 10000;
    const auto tables = sample_tables({31337, n, 0});
    double s = 0.0, s2 = 0.0;
    for (const auto& t : tables) {
      const double a = additivity_factor(t);
      s += a;
      s2 += a * a;
    }
    std::mt19937 engine(271828);
    double o = 0.0, o2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = oracle::additivity_from_cells(oracle::dirichlet_by_spacings(engine));
      o += a;
      o2 += a * a;
    }
    const double m = s / n, mo = o / n;
    const double se = std::sqrt((s2 / n - m * m) / n + (o2 / n - mo * mo) / n);
    INFO("library " << m << " oracle " << mo << " se " << se);
    CHECK(std::abs(m - mo) < 2.0 * se);
  }
}
