#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace rmtsense::quad {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendre gauss_legendre(std::size_t n);

/// Integral of f over [lo, hi] with an n-point Gauss-Legendre rule.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const GaussLegendre& rule);

struct Converged {
  double value = 0.0;
  double achieved = 0.0;  ///< |I(2n) - I(n)| at the accepted level
  std::size_t points = 0;
};

/// Doubles the Gauss-Legendre order from `start_points` until successive
/// estimates agree to abs_tol + rel_tol*|I|. Throws NumericalFailure past
/// `max_points`.
Converged integrate_converged(const std::function<double(double)>& f, double lo, double hi,
                              double abs_tol, double rel_tol, std::size_t start_points = 16,
                              std::size_t max_points = 4096);

/// Integral of a density over [0, support_max] through x = support_max*sin^(2m)(t)
/// with m = power. Choose m so that 2m(1 - alpha) is an odd integer for a density
/// growing like x^(-alpha) at 0 (m = k + 1 for the k-fold product law).
Converged integrate_on_support(const std::function<double(double)>& density, double support_max,
                               double abs_tol, double rel_tol, std::size_t power = 1);

/// Same substitution over a sub-interval [lo, hi] of [0, support_max].
double integrate_on_support_range(const std::function<double(double)>& density,
                                  double support_max, double lo, double hi,
                                  std::size_t points = 64, std::size_t power = 1);

}  // namespace rmtsense::quad
