#include "tunebench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/fisher_f.hpp>

#include "tunebench/errors.hpp"

namespace tunebench {

namespace {

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("inputs differ in length");
  if (x.size() < 3) throw std::invalid_argument("need at least 3 observations");
}

}  // namespace

double network_rmse(std::span<const double> residuals) {
  if (residuals.empty()) throw std::invalid_argument("no residuals");
  double sum = 0.0;
  for (double r : residuals) sum += r * r;
  return std::sqrt(sum / static_cast<double>(residuals.size()));
}

double pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw ZeroVariance("correlation of a constant series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

OlsFit ols_fit(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw ZeroVariance("regression on a constant predictor");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

AnovaResult rm_anova_f(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  if (n < 2) throw InsufficientData("repeated-measures ANOVA needs at least 2 subjects");
  const std::size_t k = rows.front().size();
  if (k < 2) throw InsufficientData("repeated-measures ANOVA needs at least 2 conditions");
  for (const auto& row : rows) {
    if (row.size() != k) throw std::invalid_argument("ragged ANOVA matrix");
  }

  double grand = 0.0;
  std::vector<double> subject_mean(n, 0.0), condition_mean(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      subject_mean[i] += rows[i][j];
      condition_mean[j] += rows[i][j];
      grand += rows[i][j];
    }
  }
  grand /= static_cast<double>(n * k);
  for (auto& m : subject_mean) m /= static_cast<double>(k);
  for (auto& m : condition_mean) m /= static_cast<double>(n);

  double ss_conditions = 0.0;
  for (double m : condition_mean) ss_conditions += (m - grand) * (m - grand);
  ss_conditions *= static_cast<double>(n);

  // Error term: subject-by-condition interaction residuals.
  double ss_error = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double e = rows[i][j] - subject_mean[i] - condition_mean[j] + grand;
      ss_error += e * e;
    }
  }

  AnovaResult result;
  result.df1 = k - 1;
  result.df2 = (k - 1) * (n - 1);
  // Sums of squares at rounding level of the data count as zero.
  double scale = 0.0;
  for (const auto& row : rows) {
    for (double v : row) scale += v * v;
  }
  const double noise = 1e-24 * std::max(scale, std::numeric_limits<double>::min());
  const bool no_effect = ss_conditions <= noise;
  const bool no_error = ss_error <= noise;
  if (no_effect && no_error) {
    result.outcome = AnovaOutcome::NoVariance;
    result.f = 0.0;
    result.p_value = 1.0;
  } else if (no_error) {
    result.outcome = AnovaOutcome::ZeroError;
    result.f = std::numeric_limits<double>::infinity();
    result.p_value = 0.0;
  } else {
    result.f = (ss_conditions / static_cast<double>(result.df1)) /
               (ss_error / static_cast<double>(result.df2));
    result.p_value = f_upper_tail(result.f, result.df1, result.df2);
  }
  return result;
}

double f_upper_tail(double f, std::size_t df1, std::size_t df2) {
  if (std::isinf(f)) return 0.0;
  if (f <= 0.0) return 1.0;
  const boost::math::fisher_f dist(static_cast<double>(df1), static_cast<double>(df2));
  return boost::math::cdf(boost::math::complement(dist, f));
}

Summary summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("no values to summarize");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {mean(values), *hi, *lo};
}

}  // namespace tunebench
