#include "rmtsense/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rmtsense/error.hpp"

namespace rmtsense::quad {

GaussLegendre gauss_legendre(std::size_t n) {
  if (n == 0) raise(ErrorCode::InvalidArgument, "Gauss-Legendre rule needs at least one node");
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double derivative = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
        p0 = p1;
        p1 = p2;
      }
      derivative = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / derivative;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const GaussLegendre& rule) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

Converged integrate_converged(const std::function<double(double)>& f, double lo, double hi,
                              double abs_tol, double rel_tol, std::size_t start_points,
                              std::size_t max_points) {
  std::size_t n = start_points;
  double previous = integrate(f, lo, hi, gauss_legendre(n));
  double achieved = 0.0;
  while (n < max_points) {
    n *= 2;
    const double current = integrate(f, lo, hi, gauss_legendre(n));
    achieved = std::abs(current - previous);
    if (achieved <= abs_tol + rel_tol * std::abs(current)) return {current, achieved, n};
    previous = current;
  }
  raise(ErrorCode::NumericalFailure,
        "quadrature did not converge with " + std::to_string(max_points) +
            " points; achieved " + std::to_string(achieved));
}

namespace {

/// x = S sin^(2m)(t) on [0, pi/2]: the Jacobian 2m S sin^(2m-1)(t) cos(t)
/// cancels x^(-alpha) growth at 0 for alpha <= 1 - 1/(2m), and the cos factor
/// absorbs square-root vanishing at the edge.
double support_integrand(const std::function<double(double)>& density, double support_max,
                         std::size_t power, double t) {
  const double m = static_cast<double>(power);
  const double s = std::sin(t);
  const double c = std::cos(t);
  const double x = support_max * std::pow(s, 2.0 * m);
  return density(x) * 2.0 * m * support_max * std::pow(s, 2.0 * m - 1.0) * c;
}

double support_angle(double x, double support_max, std::size_t power) {
  const double u = std::clamp(x / support_max, 0.0, 1.0);
  return std::asin(std::pow(u, 0.5 / static_cast<double>(power)));
}

}  // namespace

Converged integrate_on_support(const std::function<double(double)>& density, double support_max,
                               double abs_tol, double rel_tol, std::size_t power) {
  if (power == 0) raise(ErrorCode::InvalidArgument, "substitution power must be >= 1");
  auto integrand = [&](double t) { return support_integrand(density, support_max, power, t); };
  return integrate_converged(integrand, 0.0, 0.5 * std::numbers::pi, abs_tol, rel_tol, 32, 2048);
}

double integrate_on_support_range(const std::function<double(double)>& density,
                                  double support_max, double lo, double hi, std::size_t points,
                                  std::size_t power) {
  if (power == 0) raise(ErrorCode::InvalidArgument, "substitution power must be >= 1");
  auto integrand = [&](double t) { return support_integrand(density, support_max, power, t); };
  return integrate(integrand, support_angle(lo, support_max, power),
                   support_angle(hi, support_max, power), gauss_legendre(points));
}

}  // namespace rmtsense::quad
