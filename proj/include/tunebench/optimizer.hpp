#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace tunebench {

using Objective = std::function<double(std::span<const double>)>;

/// Central-difference gradient with step h in every coordinate.
std::vector<double> central_gradient(const Objective& f, std::span<const double> x, double h);

struct CgOptions {
  double fd_step = 1e-5;
  double armijo_c = 1e-4;
  double shrink = 0.5;
  // Stop when |f_k - f_{k+1}| <= relative_tolerance * max(|f_k|, |f_{k+1}|).
  double relative_tolerance = 1e-12;
  double gradient_tolerance = 1e-8;
  std::size_t max_iter = 500;
  // Reset the search direction to steepest descent every this many
  // iterations; 0 means the problem dimension.
  std::size_t restart_every = 0;
  std::size_t max_backtracks = 60;
  // Extra Brent iterations spent minimizing along each search direction;
  // 0 keeps the plain backtracking step.
  std::size_t line_refinement = 30;
  bool record_trace = false;
};

enum class CgStop { Gradient, RelativeChange, IterationLimit, LineSearch };

struct CgResult {
  std::vector<double> x;
  double value = 0.0;
  double initial_value = 0.0;
  double gradient_norm = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  CgStop stop = CgStop::IterationLimit;
  // Objective after each accepted step, starting with the initial value.
  std::vector<double> trace;
};

/// Nonlinear conjugate-gradient descent (Polak-Ribiere with non-negative
/// deflection) on finite-difference gradients.
///
/// Each step backtracks from a trial length until the Armijo condition holds,
/// then refines the step by bracketing and Brent minimization along the
/// direction (or, with line_refinement = 0, by one quadratic trial), keeping
/// the refined point only if it is lower. The direction falls back to
/// steepest descent every `restart_every` steps and whenever it stops being a
/// descent direction. Accepted objective values are strictly decreasing.
CgResult conjugate_gradient(const Objective& f, std::vector<double> x0, const CgOptions& options = {});

}  // namespace tunebench
