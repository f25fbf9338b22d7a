#include "tunebench/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tunebench/errors.hpp"
#include "tunebench/random.hpp"

namespace tunebench {

namespace {

constexpr double kBoundInset = 1e-12;

enum class Transform { Identity, LogOdds, Atanh };

Transform transform_for(Calculus calculus, std::size_t index) {
  switch (calculus) {
    case Calculus::Linear: return Transform::Identity;
    case Calculus::Independence:
    case Calculus::Prospector: return Transform::LogOdds;
    case Calculus::Mycin: return index >= 3 ? Transform::Atanh : Transform::LogOdds;
  }
  return Transform::Identity;
}

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double forward(Transform t, double v) {
  switch (t) {
    case Transform::Identity: return v;
    case Transform::LogOdds: {
      const double p = std::clamp(v, kBoundInset, 1.0 - kBoundInset);
      return std::log(p) - std::log1p(-p);
    }
    case Transform::Atanh: return std::atanh(std::clamp(v, -1.0 + kBoundInset, 1.0 - kBoundInset));
  }
  return v;
}

double inverse(Transform t, double z) {
  switch (t) {
    case Transform::Identity: return z;
    case Transform::LogOdds: return logistic(z);
    case Transform::Atanh: return std::tanh(z);
  }
  return z;
}

// Midpoints of the gaps between consecutive distinct evidence levels,
// including the gaps to 0 and 1.
std::vector<double> gap_midpoints(const std::vector<double>& levels) {
  std::vector<double> cuts{0.0, 1.0};
  cuts.insert(cuts.end(), levels.begin(), levels.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<double> mids;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) mids.push_back(0.5 * (cuts[i] + cuts[i + 1]));
  return mids;
}

// MYCIN and PROSPECTOR change formula where an evidence base rate crosses a
// probe level, so their objectives are piecewise smooth with a basin per
// placement of (prior_e1, prior_e2) among the levels. One start per placement,
// otherwise equal to the theoretical point.
std::vector<std::vector<double>> regime_starts(const CalculusParams& theory,
                                               const ProblemSet& problems) {
  const Calculus calculus = calculus_of(theory);
  if (calculus != Calculus::Mycin && calculus != Calculus::Prospector) return {};
  std::vector<double> levels1, levels2;
  for (const auto& p : problems.probes) {
    levels1.push_back(p.p1);
    levels2.push_back(p.p2);
  }
  std::vector<std::vector<double>> starts;
  for (double m1 : gap_midpoints(levels1)) {
    for (double m2 : gap_midpoints(levels2)) {
      std::vector<double> v = to_vector(theory);
      v[0] = m1;  // prior_e1
      v[1] = m2;  // prior_e2
      if (calculus == Calculus::Prospector) {
        starts.push_back(to_unconstrained(from_vector(calculus, v)));
        continue;
      }
      // MYCIN has a further kink where the combined certainty changes sign;
      // cover every sign pattern of (cf1, cf2).
      for (double cf1 : {0.5, -0.5}) {
        for (double cf2 : {0.5, -0.5}) {
          v[3] = cf1;
          v[4] = cf2;
          starts.push_back(to_unconstrained(from_vector(calculus, v)));
        }
      }
    }
  }
  return starts;
}

}  // namespace

ProblemSet make_problem_set(std::vector<EvidenceProbe> probes, std::vector<double> targets) {
  if (probes.empty() || probes.size() != targets.size()) {
    throw std::invalid_argument("problem set needs equally many probes and targets, got " +
                                std::to_string(probes.size()) + " and " +
                                std::to_string(targets.size()));
  }
  for (const auto& p : probes) {
    if (!(p.p1 >= 0.0 && p.p1 <= 1.0 && p.p2 >= 0.0 && p.p2 <= 1.0)) {
      throw std::invalid_argument("probe outside [0,1]^2");
    }
  }
  for (double t : targets) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("target outside [0,1]");
  }
  return {std::move(probes), std::move(targets)};
}

ProblemSet norm_problem_set(const JointTable& table, std::span<const EvidenceProbe> probes,
                            const IpfOptions& ipf) {
  std::vector<double> targets;
  targets.reserve(probes.size());
  for (const auto& probe : probes) targets.push_back(mce_update(table, probe, ipf).posterior_c);
  return make_problem_set({probes.begin(), probes.end()}, std::move(targets));
}

std::vector<double> residuals(const CalculusParams& params, const ProblemSet& problems,
                              const EvalOptions& options) {
  std::vector<double> out(problems.probes.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = evaluate(params, problems.probes[k], options) - problems.targets[k];
  }
  return out;
}

double objective(const CalculusParams& params, const ProblemSet& problems,
                 const EvalOptions& options) {
  double sum = 0.0;
  for (std::size_t k = 0; k < problems.probes.size(); ++k) {
    const double r = evaluate(params, problems.probes[k], options) - problems.targets[k];
    sum += r * r;
  }
  return sum / static_cast<double>(problems.probes.size());
}

std::vector<double> to_unconstrained(const CalculusParams& params) {
  const Calculus calculus = calculus_of(params);
  std::vector<double> v = to_vector(params);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = forward(transform_for(calculus, i), v[i]);
  return v;
}

CalculusParams from_unconstrained(Calculus calculus, std::span<const double> z) {
  std::vector<double> v(z.begin(), z.end());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = inverse(transform_for(calculus, i), v[i]);
  return from_vector(calculus, v);
}

TuneResult tune(Calculus calculus, const ProblemSet& problems, const JointTable& table,
                const TunerConfig& config) {
  const CalculusParams theory = theoretical_init(table, calculus);
  const std::size_t n = parameter_count(calculus);
  const Objective f = [&](std::span<const double> z) {
    const double value = objective(from_unconstrained(calculus, z), problems, config.eval);
    return std::isfinite(value) ? value : std::numeric_limits<double>::infinity();
  };

  std::vector<std::vector<double>> starts{to_unconstrained(theory)};
  std::mt19937_64 engine(
      derive_seed(config.seed, {0x74756e65ULL, static_cast<std::uint64_t>(calculus)}));
  if (config.regime_starts) {
    for (const auto& z : regime_starts(theory, problems)) starts.push_back(z);
  }
  for (std::size_t r = 0; r < config.restarts; ++r) {
    std::vector<double> z(n);
    for (double& zi : z) zi = config.start_box * (2.0 * open_unit(engine) - 1.0);
    starts.push_back(std::move(z));
  }

  TuneResult result;
  result.params = theory;
  result.mse = std::numeric_limits<double>::infinity();
  result.theoretical_mse = objective(theory, problems, config.eval);
  std::vector<double> best_z;
  bool any_progress = false;
  double best_initial = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < starts.size(); ++s) {
    CgResult run = conjugate_gradient(f, starts[s], config.cg);
    result.starts.push_back({s == 0, run.initial_value, run.value, run.iterations, run.stop});
    best_initial = std::min(best_initial, run.initial_value);
    if (run.iterations > 0 || run.stop == CgStop::Gradient) any_progress = true;
    if (run.value < result.mse) {
      result.mse = run.value;
      result.gradient_norm = run.gradient_norm;
      best_z = std::move(run.x);
    }
  }
  if (!std::isfinite(result.mse) || (!any_progress && !(result.mse < best_initial))) {
    throw OptimizerFailure(std::string(to_string(calculus)) +
                           ": no start reduced the objective below " +
                           std::to_string(best_initial));
  }
  result.params = from_unconstrained(calculus, best_z);
  // The search space round trip can perturb the theoretical point by an ulp.
  const double reached = objective(result.params, problems, config.eval);
  if (result.theoretical_mse <= reached) {
    result.params = theory;
    result.mse = result.theoretical_mse;
  } else {
    result.mse = reached;
  }
  result.rmse = std::sqrt(result.mse);
  for (const auto& s : result.starts) {
    if (s.final_mse - result.mse <= config.agreement) ++result.starts_agreeing;
  }
  return result;
}

}  // namespace tunebench
