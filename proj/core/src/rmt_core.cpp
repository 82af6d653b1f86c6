#include "rmtsense/rmt_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dense.hpp"

#include "rmtsense/error.hpp"
#include "rmtsense/random.hpp"

namespace rmtsense {
namespace {

std::string shape(std::size_t rows, std::size_t cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

/// One factor of the product/mean pipelines, already scaled by 1/sqrt(T).
CMatrix square_factor(const SnapshotMatrix& x, std::uint64_t seed) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(x.cols()));
  if (x.cols() == x.rows()) return x.data() * scale;
  return sve_transform(x, seed) * scale;
}

ComplexSpectrum single_matrix_pipeline(const SnapshotMatrix& x, const PipelineOptions& options,
                                       Pipeline tag) {
  const CMatrix factor = square_factor(x, derive_seed(options.seed, {0}));
  ComplexSpectrum spectrum = eigenvalues_general(factor);
  spectrum.tag = tag;
  if (options.normalize) {
    const double radius = factor.norm() / std::sqrt(static_cast<double>(factor.rows()));
    if (radius > 0.0) {
      for (Complex& v : spectrum.values) v /= radius;
    }
  }
  return spectrum;
}

}  // namespace

SnapshotMatrix::SnapshotMatrix(CMatrix data, std::optional<std::size_t> label)
    : data_(std::move(data)), label_(label) {
  if (data_.rows() < 1 || data_.cols() < 1) {
    raise(ErrorCode::InvalidArgument, "snapshot must have at least one row and one column");
  }
}

bool SnapshotMatrix::all_finite() const { return data_.allFinite(); }

std::string_view to_string(AcquisitionMode mode) noexcept {
  return mode == AcquisitionMode::TimeEvolving ? "time-evolving" : "space-distributed";
}

SnapshotEnsemble::SnapshotEnsemble(std::vector<SnapshotMatrix> snapshots, AcquisitionMode mode)
    : snapshots_(std::move(snapshots)), mode_(mode) {
  if (snapshots_.empty()) raise(ErrorCode::InvalidArgument, "ensemble needs at least one snapshot");
  const std::size_t n = snapshots_.front().rows();
  const std::size_t t = snapshots_.front().cols();
  for (std::size_t j = 0; j < snapshots_.size(); ++j) {
    const auto& s = snapshots_[j];
    if (s.rows() != n || s.cols() != t) {
      raise(ErrorCode::InvalidArgument, "snapshot " + std::to_string(j) + " is " +
                                            shape(s.rows(), s.cols()) + ", expected " +
                                            shape(n, t));
    }
  }
  if (t < n) {
    raise(ErrorCode::InvalidArgument,
          "ensemble requires T >= N (c = N/T in (0, 1]); got " + shape(n, t));
  }
}

HermitianMatrix::HermitianMatrix(CMatrix data) : data_(std::move(data)) {
  if (data_.rows() != data_.cols() || data_.rows() == 0) {
    raise(ErrorCode::InvalidArgument, "Hermitian matrix must be square and non-empty");
  }
  if (!data_.allFinite()) raise(ErrorCode::InvalidData, "Hermitian matrix has non-finite entries");
  const double scale = std::max(1.0, data_.cwiseAbs().maxCoeff());
  const double asymmetry = (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
  if (asymmetry > 1e-10 * scale) {
    raise(ErrorCode::InvalidArgument,
          "matrix is not Hermitian (max |A - A^H| = " + std::to_string(asymmetry) + ")");
  }
  data_ = (0.5 * (data_ + data_.adjoint())).eval();
}

std::string_view to_string(Pipeline pipeline) noexcept {
  switch (pipeline) {
    case Pipeline::Raw: return "raw";
    case Pipeline::Product: return "product";
    case Pipeline::GeometricMean: return "gmean";
    case Pipeline::ArithmeticMean: return "amean";
    case Pipeline::Ginibre: return "ginibre";
  }
  return "raw";
}

SnapshotMatrix gen_ginibre(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  if (rows == 0 || cols == 0) {
    raise(ErrorCode::InvalidArgument, "Ginibre matrix needs non-zero dimensions, got " +
                                          shape(rows, cols));
  }
  Engine engine(seed);
  ComplexGaussian gaussian;
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = gaussian(engine);
  }
  return SnapshotMatrix(std::move(m));
}

CMatrix haar_unitary(std::size_t n, std::uint64_t seed) {
  dense::QrFactors f = dense::qr(gen_ginibre(n, n, seed).data());
  // Scaling column j by the phase of R_jj makes the law exactly Haar.
  for (Eigen::Index j = 0; j < f.q.cols(); ++j) {
    const Complex d = f.r_diagonal[static_cast<std::size_t>(j)];
    const double mag = std::abs(d);
    if (mag > 0.0) f.q.col(j) *= d / mag;
  }
  return f.q;
}

HermitianMatrix sample_covariance(const SnapshotMatrix& x) {
  if (!x.all_finite()) raise(ErrorCode::InvalidData, "snapshot contains non-finite entries");
  CMatrix s = dense::gram(x.data());
  s /= static_cast<double>(x.cols());
  return HermitianMatrix(std::move(s));
}

ComplexSpectrum eigenvalues_general(const CMatrix& m) {
  if (m.rows() != m.cols()) {
    raise(ErrorCode::InvalidArgument,
          "eigenvalues need a square matrix, got " + shape(m.rows(), m.cols()));
  }
  if (!m.allFinite()) raise(ErrorCode::InvalidArgument, "matrix contains non-finite entries");
  ComplexSpectrum out;
  out.source_dim = static_cast<std::size_t>(m.rows());
  if (m.rows() == 0) return out;

  out.values = dense::general_eigenvalues(m);
  return out;
}

std::vector<double> eigenvalues_hermitian(const HermitianMatrix& s) {
  std::vector<double> out = dense::hermitian_eigenvalues(s.data());
  std::reverse(out.begin(), out.end());  // ascending -> descending
  return out;
}

SnapshotMatrix standardize_rows(const SnapshotMatrix& x) {
  if (x.cols() < 2) raise(ErrorCode::InvalidArgument, "standardization needs T >= 2");
  if (!x.all_finite()) raise(ErrorCode::InvalidData, "snapshot contains non-finite entries");
  CMatrix out = x.data();
  const double t = static_cast<double>(x.cols());
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    auto row = out.row(i);
    const double scale = row.cwiseAbs2().mean();
    const Complex mean = row.mean();
    row.array() -= mean;
    const double variance = row.squaredNorm() / t;
    if (!(variance > 1e-24 * std::max(scale, 1e-300))) {
      raise(ErrorCode::DegenerateRow, "row " + std::to_string(i) + " has zero variance");
    }
    row /= std::sqrt(variance);
  }
  return SnapshotMatrix(std::move(out), x.label());
}

CMatrix sve_transform(const SnapshotMatrix& x, std::optional<std::uint64_t> seed) {
  if (x.cols() < x.rows()) {
    raise(ErrorCode::InvalidArgument,
          "singular-value-equivalent transform needs T >= N, got " + shape(x.rows(), x.cols()));
  }
  // sqrt(X X^H) = B B^H with B = V diag(w^(1/4)).
  dense::HermitianEigen eig = dense::hermitian_eigen(dense::gram(x.data()));
  for (Eigen::Index j = 0; j < eig.vectors.cols(); ++j) {
    eig.vectors.col(j) *= std::sqrt(std::sqrt(std::max(eig.values[static_cast<std::size_t>(j)], 0.0)));
  }
  const CMatrix root_gram = dense::gram(eig.vectors);
  return dense::multiply(root_gram, haar_unitary(x.rows(), seed.value_or(fresh_seed())));
}

ComplexSpectrum product_chain(const SnapshotEnsemble& ensemble, const PipelineOptions& options) {
  const std::size_t n = ensemble.rows();
  CMatrix z;
  double outer_radius = 1.0;
  for (std::size_t j = 0; j < ensemble.size(); ++j) {
    const SnapshotMatrix& raw = ensemble.snapshots()[j];
    const SnapshotMatrix x = options.raw ? raw : standardize_rows(raw);
    const CMatrix factor = square_factor(x, derive_seed(options.seed, {j}));
    outer_radius *= factor.norm() / std::sqrt(static_cast<double>(n));
    z = (j == 0) ? factor : dense::multiply(z, factor);
  }
  ComplexSpectrum spectrum = eigenvalues_general(z);
  spectrum.tag = Pipeline::Product;
  if (options.normalize && outer_radius > 0.0) {
    for (Complex& v : spectrum.values) v /= outer_radius;
  }
  return spectrum;
}

Complex principal_root(Complex z, std::size_t order) {
  if (order == 0) raise(ErrorCode::InvalidArgument, "root order must be >= 1");
  if (order == 1) return z;
  const double inv = 1.0 / static_cast<double>(order);
  return std::polar(std::pow(std::abs(z), inv), std::arg(z) * inv);
}

ComplexSpectrum geometric_mean_spectrum(const SnapshotEnsemble& ensemble,
                                        const PipelineOptions& options) {
  ComplexSpectrum spectrum = product_chain(ensemble, options);
  const std::size_t order = ensemble.size();
  if (order > 1) {
    for (Complex& v : spectrum.values) v = principal_root(v, order);
  }
  spectrum.tag = Pipeline::GeometricMean;
  return spectrum;
}

ComplexSpectrum arithmetic_mean_spectrum(const SnapshotEnsemble& ensemble,
                                         const PipelineOptions& options) {
  const std::size_t count = ensemble.size();
  CMatrix sum = CMatrix::Zero(static_cast<Eigen::Index>(ensemble.rows()),
                              static_cast<Eigen::Index>(ensemble.cols()));
  for (const SnapshotMatrix& raw : ensemble.snapshots()) {
    sum += options.raw ? raw.data() : standardize_rows(raw).data();
  }
  // mean * sqrt(L) restores unit entry variance.
  const SnapshotMatrix rescaled(sum / std::sqrt(static_cast<double>(count)));
  return single_matrix_pipeline(rescaled, options, Pipeline::ArithmeticMean);
}

std::vector<double> ginibre_product_squared_singular_values(std::size_t factors, std::size_t n,
                                                            std::uint64_t seed) {
  if (factors == 0 || n == 0) {
    raise(ErrorCode::InvalidArgument, "Ginibre product needs k >= 1 factors of size N >= 1");
  }
  CMatrix z = gen_ginibre(n, n, derive_seed(seed, {0})).data();
  for (std::size_t j = 1; j < factors; ++j) z = dense::multiply(z, gen_ginibre(n, n, derive_seed(seed, {j})).data());
  CMatrix w = dense::gram(z);
  w /= std::pow(static_cast<double>(n), static_cast<double>(factors));
  return eigenvalues_hermitian(HermitianMatrix(std::move(w)));
}

}  // namespace rmtsense
