#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "rmtsense/error.hpp"
#include "rmtsense/rmt_core.hpp"

namespace rmtsense::testing {

/// Runs `body` and checks that it throws rmtsense::Error with `code`.
template <typename Body>
::testing::AssertionResult throws_code(Body&& body, ErrorCode code) {
  try {
    body();
  } catch (const Error& e) {
    if (e.code() == code) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure()
           << "threw " << to_string(e.code()) << " (" << e.what() << "), expected " << to_string(code);
  } catch (const std::exception& e) {
    return ::testing::AssertionFailure() << "threw a foreign exception: " << e.what();
  }
  return ::testing::AssertionFailure() << "did not throw, expected " << to_string(code);
}

/// Largest distance from an expected eigenvalue to its greedily matched partner.
inline double matched_distance(std::vector<Complex> expected, std::vector<Complex> got) {
  if (expected.size() != got.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const Complex& e : expected) {
    auto best = std::min_element(got.begin(), got.end(), [&](const Complex& a, const Complex& b) {
      return std::abs(a - e) < std::abs(b - e);
    });
    worst = std::max(worst, std::abs(*best - e));
    got.erase(best);
  }
  return worst;
}

/// Tr(S) - ln det(S) - p through a Cholesky factor, independent of any eigensolver.
inline double trace_minus_logdet(const CMatrix& s) {
  const Eigen::LLT<CMatrix> llt(s);
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < s.rows(); ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i).real());
  return s.trace().real() - logdet - static_cast<double>(s.rows());
}

/// Matrix with orthogonal rows of squared norm n, so X X^H / n = I.
inline SnapshotMatrix orthogonal_rows(std::size_t p, std::size_t n) {
  CMatrix x(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(n));
  const double two_pi = 2.0 * std::acos(-1.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t t = 0; t < n; ++t) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) =
          std::polar(1.0, two_pi * static_cast<double>(i * t % n) / static_cast<double>(n));
    }
  }
  return SnapshotMatrix(x);
}

}  // namespace rmtsense::testing
