#include "tunebench/mce.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "tunebench/errors.hpp"
#include "tunebench/network_csv.hpp"

namespace tunebench {

namespace {

using Cells = JointTable::Cells;

// Index of the bit for E1 (axis 0) or E2 (axis 1) in a cell index.
int evidence_bit(int cell, int axis) { return axis == 0 ? (cell >> 2) & 1 : (cell >> 1) & 1; }

double evidence_mass(const Cells& q, int axis) {
  double mass = 0.0;
  for (int i = 0; i < 8; ++i) {
    if (evidence_bit(i, axis) == 1) mass += q[i];
  }
  return mass;
}

double mismatch(const Cells& q, EvidenceProbe probe) {
  return std::max(std::abs(evidence_mass(q, 0) - probe.p1), std::abs(evidence_mass(q, 1) - probe.p2));
}

void check_support(const Cells& q, int axis, double target) {
  const double on = evidence_mass(q, axis);
  const double off = std::accumulate(q.begin(), q.end(), 0.0) - on;
  const char* name = axis == 0 ? "E1" : "E2";
  if ((target > 0.0 && on <= 0.0) || (target < 1.0 && off <= 0.0)) {
    throw InvalidProbe(std::string("probe for ") + name + " = " + format_double(target) +
                       " requires mass on an empty prior slice");
  }
}

// Rescales the two slices of `axis` to masses (1-target, target).
// Returns false if a slice that must carry mass is empty.
bool fit_axis(Cells& q, int axis, double target) {
  double mass[2] = {0.0, 0.0};
  for (int i = 0; i < 8; ++i) mass[evidence_bit(i, axis)] += q[i];
  const double want[2] = {1.0 - target, target};
  double factor[2];
  for (int b = 0; b < 2; ++b) {
    if (want[b] == 0.0) {
      factor[b] = 0.0;
    } else if (mass[b] <= 0.0) {
      return false;
    } else {
      factor[b] = want[b] / mass[b];
    }
  }
  for (int i = 0; i < 8; ++i) q[i] *= factor[evidence_bit(i, axis)];
  return true;
}

}  // namespace

std::vector<EvidenceProbe> probe_grid(std::span<const double> levels) {
  std::vector<EvidenceProbe> probes;
  probes.reserve(levels.size() * levels.size());
  for (double p1 : levels) {
    for (double p2 : levels) probes.push_back({p1, p2});
  }
  return probes;
}

MceSolution mce_update(const JointTable& prior, EvidenceProbe probe, const IpfOptions& options) {
  for (double p : {probe.p1, probe.p2}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InvalidProbe("probe value " + format_double(p) + " is outside [0,1]");
    }
  }
  Cells q = prior.cells();
  check_support(q, 0, probe.p1);
  check_support(q, 1, probe.p2);

  std::size_t iterations = 0;
  double residual = mismatch(q, probe);
  while (residual >= options.tolerance) {
    if (iterations == options.max_iter) {
      throw NoConvergence("proportional fitting stopped at residual " + format_double(residual) +
                          " after " + std::to_string(iterations) + " sweeps");
    }
    ++iterations;
    if (!fit_axis(q, 0, probe.p1) || !fit_axis(q, 1, probe.p2)) {
      throw NoConvergence("prior support cannot satisfy probe (" + format_double(probe.p1) + ", " +
                          format_double(probe.p2) + ")");
    }
    residual = mismatch(q, probe);
  }

  MceSolution solution{JointTable::normalized(q, 1e-9), 0.0, iterations, 0.0};
  solution.posterior_c = marginal(solution.posterior_table, Variable::C);
  solution.residual = mismatch(solution.posterior_table.cells(), probe);
  return solution;
}

std::vector<NormRecord> solve_norms(const std::string& network_id, const JointTable& prior,
                                    std::span<const EvidenceProbe> probes,
                                    const IpfOptions& options) {
  std::vector<NormRecord> records;
  records.reserve(probes.size());
  for (const auto& probe : probes) {
    const auto solution = mce_update(prior, probe, options);
    records.push_back(
        {network_id, probe, solution.posterior_c, solution.iterations, solution.residual});
  }
  return records;
}

void write_norms_csv(std::ostream& out, std::span<const NormRecord> records) {
  out << "network_id,p1,p2,posterior_c,iterations,residual\n";
  for (const auto& r : records) {
    out << r.network_id << ',' << format_double(r.probe.p1) << ',' << format_double(r.probe.p2)
        << ',' << format_double(r.posterior_c) << ',' << r.iterations << ','
        << format_double(r.residual) << '\n';
  }
}

void write_norms_csv(const std::filesystem::path& path, std::span<const NormRecord> records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_norms_csv(out, records);
}

std::vector<NormRecord> read_norms_csv(std::istream& in) {
  std::vector<NormRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("network_id,", 0) == 0) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 6) {
      throw FormatError("norms line " + std::to_string(line_no) + ": expected 6 fields");
    }
    NormRecord r{f[0], {parse_double(f[1]), parse_double(f[2])}, parse_double(f[3]), 0,
                 parse_double(f[5])};
    const double iterations = parse_double(f[4]);
    if (iterations < 0 || iterations != std::floor(iterations)) {
      throw FormatError("norms line " + std::to_string(line_no) + ": bad iteration count");
    }
    r.iterations = static_cast<std::size_t>(iterations);
    if (!(r.posterior_c >= 0.0 && r.posterior_c <= 1.0)) {
      throw FormatError("norms line " + std::to_string(line_no) + ": posterior outside [0,1]");
    }
    records.push_back(r);
  }
  return records;
}

std::vector<NormRecord> read_norms_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_norms_csv(in);
}

}  // namespace tunebench
