#include "tunebench/joint_table.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "tunebench/errors.hpp"

namespace tunebench {

namespace {

double checked_sum(const JointTable::Cells& cells) {
  for (double v : cells) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("joint table cell is negative or not finite: " +
                                  std::to_string(v));
    }
  }
  return std::accumulate(cells.begin(), cells.end(), 0.0);
}

}  // namespace

JointTable::JointTable(const Cells& cells) : cells_(cells) {
  const double sum = checked_sum(cells);
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("joint table cells sum to " + std::to_string(sum));
  }
}

JointTable JointTable::normalized(const Cells& cells, double tolerance) {
  const double sum = checked_sum(cells);
  if (std::abs(sum - 1.0) > tolerance) {
    throw std::invalid_argument("joint table cells sum to " + std::to_string(sum) +
                                ", outside tolerance");
  }
  Cells scaled = cells;
  for (double& v : scaled) v /= sum;
  return JointTable(scaled, Unchecked{});
}

JointTable JointTable::uniform() {
  Cells cells;
  cells.fill(0.125);
  return JointTable(cells, Unchecked{});
}

double marginal(const JointTable& table, Variable variable) {
  double total = 0.0;
  for (int e1 = 0; e1 < 2; ++e1) {
    for (int e2 = 0; e2 < 2; ++e2) {
      for (int c = 0; c < 2; ++c) {
        const int bit = variable == Variable::E1 ? e1 : variable == Variable::E2 ? e2 : c;
        if (bit == 1) total += table.at(e1, e2, c);
      }
    }
  }
  return total;
}

double conditional_c(const JointTable& table, int e1, int e2) {
  const double mass = table.slice_mass(e1, e2);
  if (mass < kSliceMassEpsilon) {
    throw DegenerateSlice("slice (e1=" + std::to_string(e1) + ", e2=" + std::to_string(e2) +
                          ") has mass " + std::to_string(mass));
  }
  return table.at(e1, e2, 1) / mass;
}

double signed_additivity_defect(const JointTable& table) {
  return conditional_c(table, 1, 1) - conditional_c(table, 1, 0) - conditional_c(table, 0, 1) +
         conditional_c(table, 0, 0);
}

double additivity_factor(const JointTable& table) {
  return std::abs(signed_additivity_defect(table));
}

ConditionalProfile conditional_profile(const JointTable& table) {
  ConditionalProfile profile;
  for (int e1 = 0; e1 < 2; ++e1) {
    for (int e2 = 0; e2 < 2; ++e2) {
      profile.p_c_given[e1][e2] = conditional_c(table, e1, e2);
    }
  }
  profile.prior_e1 = marginal(table, Variable::E1);
  profile.prior_e2 = marginal(table, Variable::E2);
  profile.prior_c = marginal(table, Variable::C);
  return profile;
}

JointTable product_table(double p_e1, double p_e2,
                         const std::array<std::array<double, 2>, 2>& p_c_given) {
  JointTable::Cells cells{};
  for (int e1 = 0; e1 < 2; ++e1) {
    for (int e2 = 0; e2 < 2; ++e2) {
      const double mass = (e1 ? p_e1 : 1.0 - p_e1) * (e2 ? p_e2 : 1.0 - p_e2);
      cells[JointTable::index(e1, e2, 1)] = mass * p_c_given[e1][e2];
      cells[JointTable::index(e1, e2, 0)] = mass * (1.0 - p_c_given[e1][e2]);
    }
  }
  return JointTable::normalized(cells, 1e-9);
}

}  // namespace tunebench
