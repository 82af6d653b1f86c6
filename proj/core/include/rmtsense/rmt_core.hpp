#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace rmtsense {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

/// One N x T capture: N antennas (rows) by T samples (columns).
class SnapshotMatrix {
 public:
  SnapshotMatrix() = default;
  explicit SnapshotMatrix(CMatrix data, std::optional<std::size_t> label = std::nullopt);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(data_.cols()); }
  const CMatrix& data() const noexcept { return data_; }
  std::optional<std::size_t> label() const noexcept { return label_; }
  bool all_finite() const;

 private:
  CMatrix data_;
  std::optional<std::size_t> label_;
};

enum class AcquisitionMode { TimeEvolving, SpaceDistributed };

std::string_view to_string(AcquisitionMode mode) noexcept;

/// L snapshots of identical shape N x T with T >= N.
class SnapshotEnsemble {
 public:
  SnapshotEnsemble(std::vector<SnapshotMatrix> snapshots, AcquisitionMode mode);

  const std::vector<SnapshotMatrix>& snapshots() const noexcept { return snapshots_; }
  AcquisitionMode mode() const noexcept { return mode_; }
  std::size_t size() const noexcept { return snapshots_.size(); }
  std::size_t rows() const noexcept { return snapshots_.front().rows(); }
  std::size_t cols() const noexcept { return snapshots_.front().cols(); }
  /// N / T, in (0, 1].
  double c_ratio() const noexcept {
    return static_cast<double>(rows()) / static_cast<double>(cols());
  }

 private:
  std::vector<SnapshotMatrix> snapshots_;
  AcquisitionMode mode_;
};

/// Square matrix checked to be Hermitian on construction.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(CMatrix data);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  const CMatrix& data() const noexcept { return data_; }

 private:
  CMatrix data_;
};

enum class Pipeline { Raw, Product, GeometricMean, ArithmeticMean, Ginibre };

std::string_view to_string(Pipeline pipeline) noexcept;

struct ComplexSpectrum {
  std::vector<Complex> values;
  std::size_t source_dim = 0;
  Pipeline tag = Pipeline::Raw;
};

/// N x T matrix of i.i.d. circular complex Gaussians, E|z|^2 = 1.
SnapshotMatrix gen_ginibre(std::size_t rows, std::size_t cols, std::uint64_t seed);

/// Haar-distributed n x n unitary (phase-corrected QR of a Ginibre matrix).
CMatrix haar_unitary(std::size_t n, std::uint64_t seed);

/// S = (1/T) X X^H.
HermitianMatrix sample_covariance(const SnapshotMatrix& x);

/// All eigenvalues of a square complex matrix, with multiplicity. Uses
/// Hessenberg reduction and shifted QR, capped at 100*N sweeps.
ComplexSpectrum eigenvalues_general(const CMatrix& m);

/// Real eigenvalues of a Hermitian matrix in descending order.
std::vector<double> eigenvalues_hermitian(const HermitianMatrix& s);

/// Rows shifted to zero mean and scaled to unit variance (1/T normalization).
SnapshotMatrix standardize_rows(const SnapshotMatrix& x);

/// Square N x N matrix sqrt(X X^H) U with Haar U; shares X's singular values.
/// Without a seed a fresh unitary is drawn per call.
CMatrix sve_transform(const SnapshotMatrix& x, std::optional<std::uint64_t> seed = std::nullopt);

struct PipelineOptions {
  /// Scale eigenvalues so the second-moment outer ring radius is exactly 1.
  bool normalize = false;
  /// Skip row standardization (the caller supplies pre-conditioned data).
  bool raw = false;
  /// Root of the per-factor Haar seeds.
  std::uint64_t seed = 0;
};

/// Eigenvalues of Z = prod_j Xtilde_j / sqrt(T), factors in snapshot order.
/// Rectangular factors (T > N) go through sve_transform; square ones are used as-is.
ComplexSpectrum product_chain(const SnapshotEnsemble& ensemble, const PipelineOptions& options = {});

/// Eigenvalues (descending) of Z Z^H / N^k for Z a product of k independent
/// N x N Ginibre matrices; factor j uses derive_seed(seed, {j}).
std::vector<double> ginibre_product_squared_singular_values(std::size_t factors, std::size_t n,
                                                            std::uint64_t seed);

/// Principal L-th roots of the product_chain eigenvalues.
ComplexSpectrum geometric_mean_spectrum(const SnapshotEnsemble& ensemble,
                                        const PipelineOptions& options = {});

/// Eigenvalues of the single-matrix pipeline applied to sqrt(L) * mean_j X_j.
ComplexSpectrum arithmetic_mean_spectrum(const SnapshotEnsemble& ensemble,
                                         const PipelineOptions& options = {});

/// Principal L-th root: modulus r^(1/L), argument theta/L with theta in (-pi, pi].
Complex principal_root(Complex z, std::size_t order);

}  // namespace rmtsense
