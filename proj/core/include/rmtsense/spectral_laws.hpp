#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rmtsense {

/// Ring-law parameters for products of L rectangular factors, c = N/T.
class RingLawParams {
 public:
  RingLawParams(double c, std::size_t factors);

  double c() const noexcept { return c_; }
  std::size_t factors() const noexcept { return factors_; }

 private:
  double c_;
  std::size_t factors_;
};

/// Density of |lambda|: (2/(cL)) r^(2/L - 1) on [(1-c)^(L/2), 1].
double ring_radial_pdf(double r, const RingLawParams& params);

/// clamp((r^(2/L) - (1-c))/c, 0, 1).
double ring_radial_cdf(double r, const RingLawParams& params);

/// (1-c)^(L/2).
double ring_inner_radius(const RingLawParams& params);

/// Marchenko-Pastur support [(1-sqrt c)^2, (1+sqrt c)^2] for c = n/p >= 1.
struct MpSupport {
  double lower;
  double upper;
};

MpSupport mp_support(double c);

/// Limiting eigenvalue density of (1/p) X X^H with n/p = c >= 1.
/// c < 1 throws UnsupportedConvention.
double mp_pdf(double x, double c);

/// Upper edge (k+1)^(k+1)/k^k of the squared-singular-value law of a
/// product of k square Ginibre matrices.
double ginibre_support_max(std::size_t k);

struct GinibreProductParams {
  explicit GinibreProductParams(std::size_t k);

  std::size_t k;
  double support_max;
};

/// Closed-form density for k = 2 on (0, 27/4]; +infinity at x = 0, 0 past the edge.
double ginibre_product_pdf_k2(double x);

/// Power-series pFq(a; b; x). Terminates when a term drops below 1e-15 of the
/// partial sum, or at 1e5 terms. Throws InvalidArgument for a pole in b and
/// NumericalFailure when the series diverges.
double hypergeometric_pfq(std::span<const double> a, std::span<const double> b, double x);

/// Lambda_{i,k} coefficient of the k-fold density (1 <= i <= k): gamma factors
/// Gamma((j - i)/(k+1)) over j != i, divided by Gamma((j+1)/k - i/(k+1)) over j = 1..k.
double lambda_coeff(std::size_t i, std::size_t k);

/// Sum_i Lambda_{i,k} x^(i/(k+1)-1) kF_{k-1}(...; x k^k/(k+1)^(k+1)), 1 <= k <= 8.
/// Zero outside (0, support_max); +infinity at x = 0.
double ginibre_product_pdf(double x, std::size_t k);

}  // namespace rmtsense
