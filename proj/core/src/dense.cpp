#include "dense.hpp"

#include <string>

#include <Eigen/Eigenvalues>

#include "rmtsense/error.hpp"

#ifdef RMTSENSE_HAVE_LAPACKE
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <cblas.h>
#include <lapacke.h>
#endif

namespace rmtsense::dense {
namespace {

std::string shape(const CMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void mirror_lower(CMatrix& w) {
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    w(j, j) = Complex(w(j, j).real(), 0.0);
    for (Eigen::Index i = j + 1; i < w.rows(); ++i) w(j, i) = std::conj(w(i, j));
  }
}

}  // namespace

#ifdef RMTSENSE_HAVE_LAPACKE

CMatrix gram(const CMatrix& x) {
  const auto n = static_cast<blasint>(x.rows());
  const auto k = static_cast<blasint>(x.cols());
  CMatrix w = CMatrix::Zero(x.rows(), x.rows());
  cblas_zherk(CblasColMajor, CblasLower, CblasNoTrans, n, k, 1.0, x.data(), n, 0.0, w.data(), n);
  mirror_lower(w);
  return w;
}

CMatrix multiply(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    raise(ErrorCode::InvalidArgument, "cannot multiply " + shape(a) + " by " + shape(b));
  }
  CMatrix c(a.rows(), b.cols());
  const Complex one(1.0, 0.0);
  const Complex zero(0.0, 0.0);
  cblas_zgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, static_cast<blasint>(a.rows()),
              static_cast<blasint>(b.cols()), static_cast<blasint>(a.cols()), &one, a.data(),
              static_cast<blasint>(a.rows()), b.data(), static_cast<blasint>(b.rows()), &zero,
              c.data(), static_cast<blasint>(c.rows()));
  return c;
}

std::vector<Complex> general_eigenvalues(const CMatrix& m) {
  CMatrix work = m;
  std::vector<Complex> values(static_cast<std::size_t>(m.rows()));
  const auto n = static_cast<lapack_int>(m.rows());
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n,
                                        values.data(), nullptr, 1, nullptr, 1);
  if (info != 0) {
    raise(ErrorCode::NumericalFailure, "shifted QR failed (zgeev info " + std::to_string(info) +
                                           ") for a " + shape(m) + " matrix (norm " +
                                           std::to_string(m.norm()) + ")");
  }
  return values;
}

std::vector<double> hermitian_eigenvalues(const CMatrix& h) {
  CMatrix work = h;
  const auto n = static_cast<lapack_int>(h.rows());
  std::vector<double> values(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, work.data(), n, values.data());
  if (info != 0) {
    raise(ErrorCode::NumericalFailure,
          "Hermitian eigensolver failed (zheevd info " + std::to_string(info) + ")");
  }
  return values;
}

HermitianEigen hermitian_eigen(const CMatrix& h) {
  HermitianEigen out{std::vector<double>(static_cast<std::size_t>(h.rows())), h};
  const auto n = static_cast<lapack_int>(h.rows());
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, out.vectors.data(), n, out.values.data());
  if (info != 0) {
    raise(ErrorCode::NumericalFailure,
          "Hermitian eigensolver failed (zheevd info " + std::to_string(info) + ")");
  }
  return out;
}

QrFactors qr(const CMatrix& a) {
  QrFactors out{a, std::vector<Complex>(static_cast<std::size_t>(a.cols()))};
  const auto m = static_cast<lapack_int>(a.rows());
  const auto n = static_cast<lapack_int>(a.cols());
  std::vector<Complex> tau(static_cast<std::size_t>(std::min(m, n)));
  lapack_int info = LAPACKE_zgeqrf(LAPACK_COL_MAJOR, m, n, out.q.data(), m, tau.data());
  if (info == 0) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.r_diagonal[static_cast<std::size_t>(j)] = out.q(j, j);
    info = LAPACKE_zungqr(LAPACK_COL_MAJOR, m, n, n, out.q.data(), m, tau.data());
  }
  if (info != 0) raise(ErrorCode::NumericalFailure, "QR factorization failed (info " + std::to_string(info) + ")");
  return out;
}

#else

CMatrix gram(const CMatrix& x) {
  CMatrix w = CMatrix::Zero(x.rows(), x.rows());
  w.selfadjointView<Eigen::Lower>().rankUpdate(x);
  mirror_lower(w);
  return w;
}

CMatrix multiply(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    raise(ErrorCode::InvalidArgument, "cannot multiply " + shape(a) + " by " + shape(b));
  }
  return a * b;
}

std::vector<Complex> general_eigenvalues(const CMatrix& m) {
  Eigen::ComplexEigenSolver<CMatrix> solver;
  solver.setMaxIterations(100 * m.rows());
  solver.compute(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    raise(ErrorCode::NumericalFailure,
          "shifted QR did not converge within " + std::to_string(100 * m.rows()) +
              " iterations for a " + shape(m) + " matrix (norm " + std::to_string(m.norm()) + ")");
  }
  const auto& values = solver.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

std::vector<double> hermitian_eigenvalues(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    raise(ErrorCode::NumericalFailure, "Hermitian eigensolver did not converge");
  }
  const auto& values = solver.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

HermitianEigen hermitian_eigen(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    raise(ErrorCode::NumericalFailure, "Hermitian eigensolver did not converge");
  }
  const auto& values = solver.eigenvalues();
  return {{values.data(), values.data() + values.size()}, solver.eigenvectors()};
}

QrFactors qr(const CMatrix& a) {
  Eigen::HouseholderQR<CMatrix> factor(a);
  QrFactors out{factor.householderQ() * CMatrix::Identity(a.rows(), a.cols()),
                std::vector<Complex>(static_cast<std::size_t>(a.cols()))};
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    out.r_diagonal[static_cast<std::size_t>(j)] = factor.matrixQR()(j, j);
  }
  return out;
}

#endif

}  // namespace rmtsense::dense
