#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "tunebench/errors.hpp"
#include "tunebench/stats.hpp"

using namespace tunebench;

TEST_SUITE("stats") {
  TEST_CASE("network rmse") {
    CHECK(network_rmse(std::vector<double>(25, 0.0)) == 0.0);
    CHECK(std::abs(network_rmse(std::vector<double>(25, 0.1)) - 0.1) < 1e-15);
    std::vector<double> r(25, 0.0);
    r[0] = 0.3;
    r[1] = -0.4;
    CHECK(std::abs(network_rmse(r) - 0.1) < 1e-15);
    CHECK_THROWS_AS(network_rmse(std::vector<double>{}), std::invalid_argument);
  }

  TEST_CASE("pearson") {
    const std::vector<double> x{0.3, 1.2, -0.7, 2.5, 0.1};
    CHECK(std::abs(pearson(x, x) - 1.0) < 1e-15);
    std::vector<double> y;
    for (double v : x) y.push_back(-2.0 * v + 7.0);
    CHECK(std::abs(pearson(x, y) + 1.0) < 1e-15);
    // 3 / sqrt(2 * 14/3)
    CHECK(std::abs(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 4}) - 0.9819805060619657) < 1e-14);
    CHECK_THROWS_AS(pearson(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), ZeroVariance);
    CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}), std::invalid_argument);
  }

  TEST_CASE("ols") {
    std::vector<double> x, y;
    for (int i = 0; i < 30; ++i) {
      x.push_back(i / 29.0);
      y.push_back(0.1227 * x.back() + 0.0005);
    }
    const auto fit = ols_fit(x, y);
    CHECK(std::abs(fit.slope - 0.1227) < 1e-14);
    CHECK(std::abs(fit.intercept - 0.0005) < 1e-14);
    const auto flat = ols_fit(x, std::vector<double>(30, 0.04));
    CHECK(std::abs(flat.slope) < 1e-15);
    CHECK(std::abs(flat.intercept - 0.04) < 1e-15);
    const auto id = ols_fit(std::vector<double>{0, 1, 2}, std::vector<double>{0, 1, 2});
    CHECK(std::abs(id.slope - 1.0) < 1e-15);
    CHECK(std::abs(id.intercept) < 1e-15);
    CHECK_THROWS_AS(ols_fit(std::vector<double>{2, 2, 2}, std::vector<double>{0, 1, 2}), ZeroVariance);
  }

  TEST_CASE("anova sentinels") {
    const std::vector<std::vector<double>> same(5, std::vector<double>(4, 0.05));
    const auto none = rm_anova_f(same);
    CHECK(none.outcome == AnovaOutcome::NoVariance);
    CHECK(none.p_value == 1.0);

    std::vector<std::vector<double>> offset;
    for (int i = 0; i < 6; ++i) offset.push_back({0.01 * i, 0.01 * i, 0.01 * i + 0.03, 0.01 * i});
    const auto inf = rm_anova_f(offset);
    CHECK(inf.outcome == AnovaOutcome::ZeroError);
    CHECK(inf.f == std::numeric_limits<double>::infinity());
    CHECK(inf.p_value == 0.0);
    CHECK(inf.df1 == 3);
    CHECK(inf.df2 == 15);

    CHECK_THROWS_AS(rm_anova_f({{1.0, 2.0}}), InsufficientData);
    CHECK_THROWS_AS(rm_anova_f({{1.0}, {2.0}}), InsufficientData);
    CHECK_THROWS_AS(rm_anova_f({{1.0, 2.0}, {1.0}}), std::invalid_argument);
  }

  TEST_CASE("anova matches the textbook computation") {
    std::mt19937_64 engine(8);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<std::vector<double>> x(10, std::vector<double>(4));
      for (auto& row : x) {
        const double subject = noise(engine);
        for (int j = 0; j < 4; ++j) row[j] = subject + 0.3 * j + noise(engine);
      }
      const auto r = rm_anova_f(x);
      CHECK(r.outcome == AnovaOutcome::Ok);
      CHECK(r.df1 == 3);
      CHECK(r.df2 == 27);
      CHECK(std::abs(r.f - oracle::rm_anova_f(x)) < 1e-9);
      CHECK(std::abs(r.p_value - f_upper_tail(r.f, 3, 27)) < 1e-15);
    }
  }

  TEST_CASE("F upper tail") {
    // F(2,2) has CDF x/(1+x).
    CHECK(std::abs(f_upper_tail(1.0, 2, 2) - 0.5) < 1e-14);
    CHECK(std::abs(f_upper_tail(3.0, 2, 2) - 0.25) < 1e-14);
    CHECK(f_upper_tail(0.0, 3, 10) == 1.0);
  }

  TEST_CASE("summary") {
    const auto s = summarize(std::vector<double>{0.2, 0.05, 0.11});
    CHECK(s.low == 0.05);
    CHECK(s.high == 0.2);
    CHECK(std::abs(s.mean - 0.12) < 1e-15);
    CHECK(s.low <= s.mean);
    CHECK(s.mean <= s.high);
  }
}
