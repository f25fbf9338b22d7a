#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tunebench {

/// sqrt(mean(r^2)). Throws std::invalid_argument on an empty input.
double network_rmse(std::span<const double> residuals);

/// Product-moment correlation. Throws std::invalid_argument when lengths
/// differ or are below 3, ZeroVariance when either input is constant.
double pearson(std::span<const double> x, std::span<const double> y);

struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares line y = slope*x + intercept. Throws ZeroVariance when x is
/// constant.
OlsFit ols_fit(std::span<const double> x, std::span<const double> y);

enum class AnovaOutcome {
  Ok,
  NoVariance,  // nothing varies: F is 0/0, reported as not significant
  ZeroError,   // conditions differ but the error term is 0: F is +inf
};

struct AnovaResult {
  double f = 0.0;
  std::size_t df1 = 0;
  std::size_t df2 = 0;
  double p_value = 1.0;
  AnovaOutcome outcome = AnovaOutcome::Ok;
};

/// One-way repeated-measures ANOVA. `rows` are subjects (networks), each
/// holding one value per condition (calculus). df1 = k-1, df2 = (k-1)(n-1).
/// Throws InsufficientData with fewer than 2 subjects or 2 conditions and
/// std::invalid_argument on ragged rows.
AnovaResult rm_anova_f(const std::vector<std::vector<double>>& rows);

/// Upper tail P(F(df1, df2) >= f).
double f_upper_tail(double f, std::size_t df1, std::size_t df2);

struct Summary {
  double mean = 0.0;
  double high = 0.0;
  double low = 0.0;
};

Summary summarize(std::span<const double> values);

}  // namespace tunebench
