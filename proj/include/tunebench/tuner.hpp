#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tunebench/calculi.hpp"
#include "tunebench/joint_table.hpp"
#include "tunebench/mce.hpp"
#include "tunebench/optimizer.hpp"

namespace tunebench {

/// Probes paired with their minimum cross-entropy posteriors of C.
struct ProblemSet {
  std::vector<EvidenceProbe> probes;
  std::vector<double> targets;
};

/// Validates alignment, probe range and targets in [0,1]; throws
/// std::invalid_argument otherwise.
ProblemSet make_problem_set(std::vector<EvidenceProbe> probes, std::vector<double> targets);

/// Solves the norm for every probe against `table`.
ProblemSet norm_problem_set(const JointTable& table, std::span<const EvidenceProbe> probes,
                            const IpfOptions& ipf = {});

/// Mean squared error of the calculus against the targets.
double objective(const CalculusParams& params, const ProblemSet& problems,
                 const EvalOptions& options = {});

/// Signed residuals eval - target, in problem order.
std::vector<double> residuals(const CalculusParams& params, const ProblemSet& problems,
                              const EvalOptions& options = {});

/// Maps parameters to the unconstrained search space: log-odds for
/// probabilities, inverse hyperbolic tangent for certainty factors, identity
/// for linear weights. Bounded values are pulled 1e-12 inside their bounds
/// first so the image is finite.
std::vector<double> to_unconstrained(const CalculusParams& params);
CalculusParams from_unconstrained(Calculus calculus, std::span<const double> z);

struct TunerConfig {
  std::size_t restarts = 4;  // random starts in addition to the theoretical one
  std::uint64_t seed = 0;
  double start_box = 3.0;  // random starts are uniform in [-box, box]^n
  double agreement = 1e-6;
  // MYCIN and PROSPECTOR only: also start from the theoretical point with the
  // evidence base rates moved into every gap between probe levels.
  bool regime_starts = true;
  CgOptions cg{};
  EvalOptions eval{};
};

struct StartOutcome {
  bool theoretical = false;  // the untouched theoretical_init point
  double initial_mse = 0.0;
  double final_mse = 0.0;
  std::size_t iterations = 0;
  CgStop stop = CgStop::IterationLimit;
};

struct TuneResult {
  CalculusParams params;
  double mse = 0.0;
  double rmse = 0.0;
  double theoretical_mse = 0.0;
  // Gradient norm in the unconstrained space at the returned point.
  double gradient_norm = 0.0;
  // Starts whose final objective is within `agreement` of the best.
  std::size_t starts_agreeing = 0;
  std::vector<StartOutcome> starts;
};

/// Minimizes the objective over the calculus's parameters by conjugate
/// gradients in the unconstrained space, starting from theoretical_init(table)
/// and from `config.restarts` random points seeded by `config.seed`.
///
/// The result never has a larger mse than the theoretical initialization.
/// Throws OptimizerFailure when no start yields a finite objective or every
/// start stalls in its first line search without improving on the starting
/// values.
TuneResult tune(Calculus calculus, const ProblemSet& problems, const JointTable& table,
                const TunerConfig& config = {});

}  // namespace tunebench
