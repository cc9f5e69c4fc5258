#ifndef TNC_TENSOR_HPP
#define TNC_TENSOR_HPP

#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "tnc/common.hpp"

namespace tnc {

/// Arbitrary-rank dense complex tensor, row-major storage.
class DenseTensor {
 public:
  DenseTensor() = default;
  explicit DenseTensor(std::vector<Index> shape);
  DenseTensor(std::vector<Index> shape, std::vector<cplx> data);

  static DenseTensor scalar(cplx v);

  Index rank() const { return static_cast<Index>(shape_.size()); }
  const std::vector<Index>& shape() const { return shape_; }
  Index extent(Index axis) const { return shape_.at(static_cast<size_t>(axis)); }
  Index size() const;

  std::span<const cplx> data() const { return data_; }
  std::span<cplx> data() { return data_; }

  cplx at(std::initializer_list<Index> idx) const;
  cplx& at(std::initializer_list<Index> idx);

  std::vector<Index> strides() const;

 private:
  std::vector<Index> shape_;
  std::vector<cplx> data_;
};

/// Thin QR factorization q*r with isometric q and upper-triangular r.
/// The diagonal of r is normalized to be real and nonnegative.
struct ThinQr {
  DenseTensor q;  // M x k
  DenseTensor r;  // k x N
};

/// Rank-truncated SVD u * diag(s) * v^dagger.
struct TruncatedSvd {
  DenseTensor u;          // M x k, isometric
  std::vector<double> s;  // non-increasing, nonnegative
  DenseTensor v;          // N x k, isometric
  double discarded_weight = 0.0;  // sum of squared dropped singular values
};

/// Truncation rule for svd_truncated: rank cap and/or norm budget.
/// With a tolerance, the smallest rank k is kept such that
/// discarded_weight <= (abs_tol + tol * ||m||_F)^2.
struct SvdTrunc {
  std::optional<Index> max_rank;
  std::optional<double> tol;  // relative
  double abs_tol = 0.0;
};

/// Pairwise tensor contraction over the given axis pairs
/// (axis of a, axis of b). Result axes are the unpaired axes of a
/// followed by those of b.
DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     const std::vector<std::pair<Index, Index>>& axes);

DenseTensor transpose(const DenseTensor& t, const std::vector<Index>& perm);
DenseTensor reshape(const DenseTensor& t, std::vector<Index> new_shape);
DenseTensor conj(const DenseTensor& t);
DenseTensor dagger(const DenseTensor& m);  // rank-2 conjugate transpose

/// Matrix unfolding: rows indexed by row_axes (row-major combined),
/// columns by col_axes. A bijective reshape.
DenseTensor unfold(const DenseTensor& t, const std::vector<Index>& row_axes,
                   const std::vector<Index>& col_axes);

/// Inverse of unfold for the same (shape, row_axes, col_axes).
DenseTensor fold(const DenseTensor& m, const std::vector<Index>& shape,
                 const std::vector<Index>& row_axes,
                 const std::vector<Index>& col_axes);

ThinQr qr_thin(const DenseTensor& m);

TruncatedSvd svd_truncated(const DenseTensor& m, const SvdTrunc& policy);

/// Hermitian eigendecomposition, eigenvalues sorted descending.
/// Returns (eigenvalues, eigenvector matrix with matching columns).
std::pair<std::vector<double>, DenseTensor> eigh_descending(const DenseTensor& m);

double frob_norm(const DenseTensor& t);

}  // namespace tnc

#endif  // TNC_TENSOR_HPP
