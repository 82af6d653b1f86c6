#pragma once

#include <vector>

#include "rmtsense/rmt_core.hpp"

// Dense complex kernels. Backed by BLAS/LAPACKE when the library is built with
// RMTSENSE_HAVE_LAPACKE, by Eigen otherwise.
namespace rmtsense::dense {

/// X X^H, both triangles filled, real diagonal.
CMatrix gram(const CMatrix& x);

/// A * B.
CMatrix multiply(const CMatrix& a, const CMatrix& b);

/// Eigenvalues of a general square matrix (Hessenberg + shifted QR).
std::vector<Complex> general_eigenvalues(const CMatrix& m);

/// Ascending eigenvalues of a Hermitian matrix (lower triangle referenced).
std::vector<double> hermitian_eigenvalues(const CMatrix& h);

struct HermitianEigen {
  std::vector<double> values;  ///< ascending
  CMatrix vectors;             ///< columns
};

HermitianEigen hermitian_eigen(const CMatrix& h);

/// Thin Q (m x n) and diag(R) of a Householder QR factorization, m >= n.
struct QrFactors {
  CMatrix q;
  std::vector<Complex> r_diagonal;
};

QrFactors qr(const CMatrix& a);

}  // namespace rmtsense::dense
