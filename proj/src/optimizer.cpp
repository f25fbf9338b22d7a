#include "tunebench/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/tools/minima.hpp>

namespace tunebench {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

std::vector<double> step(std::span<const double> x, std::span<const double> d, double alpha) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + alpha * d[i];
  return out;
}

}  // namespace

std::vector<double> central_gradient(const Objective& f, std::span<const double> x, double h) {
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

CgResult conjugate_gradient(const Objective& f, std::vector<double> x0, const CgOptions& options) {
  const std::size_t n = x0.size();
  const std::size_t restart_every = options.restart_every == 0 ? n : options.restart_every;

  CgResult result;
  auto eval = [&](std::span<const double> x) {
    ++result.evaluations;
    return f(x);
  };
  auto grad = [&](std::span<const double> x) {
    result.evaluations += 2 * n;
    return central_gradient(f, x, options.fd_step);
  };

  std::vector<double> x = std::move(x0);
  double fx = eval(x);
  result.initial_value = fx;
  if (options.record_trace) result.trace.push_back(fx);
  std::vector<double> g = grad(x);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];

  double previous_alpha = 0.0;
  double previous_slope = 0.0;
  std::size_t since_restart = 0;
  result.stop = CgStop::IterationLimit;

  while (result.iterations < options.max_iter) {
    const double gnorm = norm(g);
    if (gnorm < options.gradient_tolerance) {
      result.stop = CgStop::Gradient;
      break;
    }
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      slope = -gnorm * gnorm;
      since_restart = 0;
    }

    double alpha = previous_alpha > 0.0 ? previous_alpha * previous_slope / slope : 1.0 / gnorm;
    alpha = std::min(alpha, 1e3 / norm(d));

    std::vector<double> trial = step(x, d, alpha);
    double f_trial = eval(trial);
    std::size_t backtracks = 0;
    while (!(f_trial <= fx + options.armijo_c * alpha * slope) &&
           backtracks < options.max_backtracks) {
      alpha *= options.shrink;
      trial = step(x, d, alpha);
      f_trial = eval(trial);
      ++backtracks;
    }
    if (!(f_trial <= fx + options.armijo_c * alpha * slope) || !(f_trial < fx)) {
      if (since_restart == 0) {
        result.stop = CgStop::LineSearch;
        break;
      }
      // Deflected direction was useless; retry from steepest descent.
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      since_restart = 0;
      previous_alpha = 0.0;
      continue;
    }

    if (options.line_refinement) {
      // Bracket the line minimum by doubling past the Armijo point, then
      // locate it with Brent's method.
      auto phi = [&](double a) { return eval(step(x, d, a)); };
      double a_mid = alpha, f_mid = f_trial;
      double a_hi = 2.0 * alpha, f_hi = phi(a_hi);
      for (int expand = 0; f_hi < f_mid && expand < 40; ++expand) {
        a_mid = a_hi;
        f_mid = f_hi;
        a_hi *= 2.0;
        f_hi = phi(a_hi);
      }
      std::uintmax_t max_iter = options.line_refinement;
      const auto [a_best, f_best] = boost::math::tools::brent_find_minima(phi, 0.0, a_hi, 40, max_iter);
      if (f_best < f_mid) {
        a_mid = a_best;
        f_mid = f_best;
      }
      if (f_mid < f_trial) {
        alpha = a_mid;
        f_trial = f_mid;
        trial = step(x, d, alpha);
      }
    } else {
      // Minimizer of the interpolating quadratic through (0, fx, slope) and
      // (alpha, f_trial).
      const double curvature = f_trial - fx - slope * alpha;
      if (curvature > 0.0) {
        const double alpha_q = -slope * alpha * alpha / (2.0 * curvature);
        if (alpha_q > 0.0 && std::abs(alpha_q - alpha) > 1e-3 * alpha && alpha_q < 10.0 * alpha) {
          std::vector<double> refined = step(x, d, alpha_q);
          const double f_refined = eval(refined);
          if (f_refined < f_trial) {
            trial = std::move(refined);
            f_trial = f_refined;
            alpha = alpha_q;
          }
        }
      }
    }

    ++result.iterations;
    const double change = fx - f_trial;
    const double scale = std::max(std::abs(fx), std::abs(f_trial));
    x = std::move(trial);
    fx = f_trial;
    if (options.record_trace) result.trace.push_back(fx);

    std::vector<double> g_next = grad(x);
    if (change <= options.relative_tolerance * scale) {
      g = std::move(g_next);
      result.stop = CgStop::RelativeChange;
      break;
    }

    ++since_restart;
    double beta = 0.0;
    if (since_restart < restart_every) {
      double numer = 0.0;
      for (std::size_t i = 0; i < n; ++i) numer += g_next[i] * (g_next[i] - g[i]);
      beta = std::max(0.0, numer / (gnorm * gnorm));
    } else {
      since_restart = 0;
    }
    previous_alpha = alpha;
    previous_slope = slope;
    g = std::move(g_next);
    for (std::size_t i = 0; i < n; ++i) d[i] = -g[i] + beta * d[i];
  }

  result.x = std::move(x);
  result.value = fx;
  result.gradient_norm = norm(g);
  return result;
}

}  // namespace tunebench
