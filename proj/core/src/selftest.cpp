#include "rmtsense/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "rmtsense/detector.hpp"
#include "rmtsense/error.hpp"
#include "rmtsense/lss_clt.hpp"
#include "rmtsense/quadrature.hpp"
#include "rmtsense/rmt_core.hpp"
#include "rmtsense/spectral_laws.hpp"

namespace rmtsense {
namespace {

std::string fmt_error(double err, double tol) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "max error %.3e (tolerance %.1e)", err, tol);
  return buf;
}

SelftestCheck run_check(const std::string& name, double tol, const std::function<double()>& error) {
  SelftestCheck check{name, false, {}};
  try {
    const double err = error();
    check.passed = err <= tol;
    check.detail = fmt_error(err, tol);
  } catch (const std::exception& e) {
    check.detail = std::string("threw: ") + e.what();
  }
  return check;
}

double quadrature_vs_closed() {
  double worst = 0.0;
  for (double c : {1.5, 2.0, 4.0, 10.0}) {
    for (double delta : {0.5, 1.0, 2.0}) {
      const SpikeModel spike({delta});
      const CltParams closed = lrt_clt_closed(c, spike);
      const CltParams quad = clt_quadrature(lrt_function(c), c, spike);
      worst = std::max({worst, std::abs(closed.mu - quad.mu), std::abs(closed.sigma2 - quad.sigma2),
                        std::abs(closed.mu_bar[0] - quad.mu_bar[0])});
    }
  }
  return worst;
}

double spike_shift_anchor() {
  const CltParams quad = clt_quadrature(lrt_function(2.0), 2.0, SpikeModel({1.0}));
  return std::abs(quad.mu_bar[0] - (1.0 - std::numbers::ln2));
}

double ginibre_k2_anchor() {
  double worst = 0.0;
  for (double x : {0.05, 0.3, 1.0, 2.5, 4.0, 6.0, 6.7}) {
    const double closed = ginibre_product_pdf_k2(x);
    worst = std::max(worst, std::abs(ginibre_product_pdf(x, 2) - closed) / closed);
  }
  return worst;
}

double ginibre_k1_anchor() {
  double worst = 0.0;
  for (double x : {0.05, 0.5, 1.0, 2.0, 3.5}) {
    const double mp = mp_pdf(x, 1.0);
    worst = std::max(worst, std::abs(ginibre_product_pdf(x, 1) - mp) / mp);
  }
  return worst;
}

double ginibre_normalization() {
  double worst = 0.0;
  for (std::size_t k = 1; k <= 6; ++k) {
    const auto mass = quad::integrate_on_support(
        [k](double x) { return ginibre_product_pdf(x, k); }, ginibre_support_max(k), 1e-8, 1e-8, k + 1);
    worst = std::max(worst, std::abs(mass.value - 1.0));
  }
  return worst;
}

double ring_normalization() {
  double worst = 0.0;
  for (double c : {0.25, 0.5, 0.9}) {
    for (std::size_t l : {1u, 5u, 20u}) {
      const RingLawParams params(c, l);
      // r = e^s turns the r^(2/L - 1) endpoint growth into a smooth exponential.
      const double lo = std::log(ring_inner_radius(params));
      const auto mass = quad::integrate_converged(
          [&](double s) { return ring_radial_pdf(std::exp(s), params) * std::exp(s); }, lo, 0.0,
          1e-12, 1e-12);
      worst = std::max(worst, std::abs(mass.value - 1.0));
    }
  }
  return worst;
}

double q_round_trip() {
  double worst = 0.0;
  for (double p : {1e-6, 0.01, 0.05, 0.1, 0.5, 0.9, 0.999}) {
    worst = std::max(worst, std::abs(q_function(q_inverse(p)) - p));
  }
  return worst;
}

double product_eig_2x2() {
  const CMatrix a = gen_ginibre(2, 2, 11).data();
  const CMatrix b = gen_ginibre(2, 2, 12).data();
  const CMatrix z = a * b;
  // Roots of lambda^2 - tr lambda + det.
  const Complex tr = z.trace();
  const Complex det = z.determinant();
  const Complex disc = std::sqrt(tr * tr - 4.0 * det);
  std::vector<Complex> expected = {(tr + disc) / 2.0, (tr - disc) / 2.0};
  const ComplexSpectrum got = eigenvalues_general(z);
  double worst = 0.0;
  for (const Complex& e : expected) {
    double nearest = std::abs(got.values[0] - e);
    for (const Complex& g : got.values) nearest = std::min(nearest, std::abs(g - e));
    worst = std::max(worst, nearest / std::max(1.0, std::abs(e)));
  }
  return worst;
}

double lrt_trace_logdet() {
  // S_n = diag(2, 1, 0.5) with p = 3, n = 6: Tr - ln det - p = 0.5.
  const std::vector<double> eigs = {12.0, 6.0, 3.0};
  return std::abs(lrt_statistic(eigs, 3, 2.0) - 0.5);
}

}  // namespace

bool SelftestReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const SelftestCheck& c) { return c.passed; });
}

SelftestReport run_selftest() {
  SelftestReport report;
  report.checks.push_back(run_check("clt quadrature matches LRT closed forms", 1e-6, quadrature_vs_closed));
  report.checks.push_back(run_check("spike shift at delta=1, c=2 is 1 - ln 2", 1e-6, spike_shift_anchor));
  report.checks.push_back(run_check("k=2 product density matches closed form", 1e-6, ginibre_k2_anchor));
  report.checks.push_back(run_check("k=1 product density matches Marchenko-Pastur", 1e-6, ginibre_k1_anchor));
  report.checks.push_back(run_check("product densities integrate to 1 (k <= 6)", 1e-5, ginibre_normalization));
  report.checks.push_back(run_check("ring radial density integrates to 1", 1e-10, ring_normalization));
  report.checks.push_back(run_check("Q(Qinv(p)) = p", 1e-12, q_round_trip));
  report.checks.push_back(run_check("2x2 eigenvalues match characteristic roots", 1e-12, product_eig_2x2));
  report.checks.push_back(run_check("LRT statistic equals Tr - ln det - p", 1e-12, lrt_trace_logdet));
  return report;
}

}  // namespace rmtsense
