#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tunebench/joint_table.hpp"

namespace tunebench {

/// New marginal probabilities asserted for E1 and E2.
struct EvidenceProbe {
  double p1 = 0.0;
  double p2 = 0.0;

  friend bool operator==(const EvidenceProbe&, const EvidenceProbe&) = default;
};

/// The five evidence levels used per evidence node.
inline const std::vector<double> kDefaultGrid{0.999, 0.75, 0.5, 0.25, 0.001};

/// Cartesian product of `levels` over (E1, E2), E1 varying slowest.
std::vector<EvidenceProbe> probe_grid(std::span<const double> levels);

struct IpfOptions {
  double tolerance = 1e-10;  // max absolute mismatch of the E1/E2 marginals
  std::size_t max_iter = 100000;
};

struct MceSolution {
  JointTable posterior_table;
  double posterior_c = 0.0;
  std::size_t iterations = 0;
  double residual = 0.0;
};

/// Minimum cross-entropy update of `prior` to the probe's E1 and E2
/// marginals, minimizing sum Q log(Q/P).
///
/// Solved by iterative proportional fitting: each sweep rescales the E1 slices
/// to (1-p1, p1) and then the E2 slices to (1-p2, p2). Scaling factors depend
/// only on (e1,e2), so P(C|e1,e2) is carried over unchanged from the prior.
///
/// Throws InvalidProbe when a probe value is outside [0,1] or asks for mass on
/// an empty prior slice, and NoConvergence when the sweep cap is reached.
MceSolution mce_update(const JointTable& prior, EvidenceProbe probe, const IpfOptions& options = {});

/// One row of norms.csv.
struct NormRecord {
  std::string network_id;
  EvidenceProbe probe;
  double posterior_c = 0.0;
  std::size_t iterations = 0;
  double residual = 0.0;
};

/// Norm records for every probe, in probe order.
std::vector<NormRecord> solve_norms(const std::string& network_id, const JointTable& prior,
                                    std::span<const EvidenceProbe> probes,
                                    const IpfOptions& options = {});

/// `network_id,p1,p2,posterior_c,iterations,residual` with a header line.
void write_norms_csv(std::ostream& out, std::span<const NormRecord> records);
void write_norms_csv(const std::filesystem::path& path, std::span<const NormRecord> records);
std::vector<NormRecord> read_norms_csv(std::istream& in);
std::vector<NormRecord> read_norms_csv(const std::filesystem::path& path);

}  // namespace tunebench
