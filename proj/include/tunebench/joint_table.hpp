#pragma once

#include <array>
#include <span>

namespace tunebench {

enum class Variable { E1, E2, C };

/// Slices with less mass than this have no defined conditional.
inline constexpr double kSliceMassEpsilon = 1e-12;

/// Joint distribution over three binary variables (E1, E2, C).
///
/// Cells are stored in (e1, e2, c) lexicographic order with 0 before 1, so
/// cell index = 4*e1 + 2*e2 + c. The same order is used in every file format.
class JointTable {
 public:
  using Cells = std::array<double, 8>;

  /// Validates that cells are non-negative, finite and sum to 1 within 1e-12.
  /// Throws std::invalid_argument otherwise.
  explicit JointTable(const Cells& cells);

  /// Accepts any non-negative cells whose sum deviates from 1 by at most
  /// `tolerance` and rescales them to sum to 1.
  static JointTable normalized(const Cells& cells, double tolerance);

  static JointTable uniform();

  static constexpr int index(int e1, int e2, int c) { return 4 * e1 + 2 * e2 + c; }

  double at(int e1, int e2, int c) const { return cells_[index(e1, e2, c)]; }
  const Cells& cells() const { return cells_; }

  /// Mass of the (e1,e2) slice, summed over C.
  double slice_mass(int e1, int e2) const { return at(e1, e2, 0) + at(e1, e2, 1); }

  friend bool operator==(const JointTable&, const JointTable&) = default;

 private:
  struct Unchecked {};
  JointTable(const Cells& cells, Unchecked) : cells_(cells) {}

  Cells cells_;
};

/// P(variable = 1).
double marginal(const JointTable& table, Variable variable);

/// P(C=1 | E1=e1, E2=e2). Throws DegenerateSlice if the slice mass is below
/// kSliceMassEpsilon.
double conditional_c(const JointTable& table, int e1, int e2);

/// P(C|E1&E2) - P(C|E1&~E2) - P(C|~E1&E2) + P(C|~E1&~E2).
///
/// Zero exactly when the conditionals of C are additive in the evidence.
double signed_additivity_defect(const JointTable& table);

/// Absolute value of signed_additivity_defect. Lies in [0, 2].
double additivity_factor(const JointTable& table);

/// The four conditionals P(C|e1,e2) together with the base rates of the
/// source table.
struct ConditionalProfile {
  // Indexed [e1][e2].
  std::array<std::array<double, 2>, 2> p_c_given{};
  double prior_e1 = 0.0;
  double prior_e2 = 0.0;
  double prior_c = 0.0;
};

ConditionalProfile conditional_profile(const JointTable& table);

/// Builds a table from base rates of independent E1, E2 and arbitrary
/// conditionals P(C|e1,e2) indexed [e1][e2].
JointTable product_table(double p_e1, double p_e2,
                         const std::array<std::array<double, 2>, 2>& p_c_given);

}  // namespace tunebench
