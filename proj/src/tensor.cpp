#include "tnc/tensor.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace tnc {

using RowMat =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapRow = Eigen::Map<RowMat>;
using MapRowC = Eigen::Map<const RowMat>;

namespace {

Index shape_product(const std::vector<Index>& shape) {
  Index p = 1;
  for (Index e : shape) {
    if (e <= 0) throw ShapeError("tensor extent must be positive");
    p *= e;
  }
  return p;
}

MapRowC as_matrix(const DenseTensor& t, Index rows, Index cols) {
  return MapRowC(t.data().data(), rows, cols);
}

DenseTensor from_matrix(const RowMat& m, std::vector<Index> shape) {
  DenseTensor out(std::move(shape));
  MapRow(out.data().data(), m.rows(), m.cols()) = m;
  return out;
}

std::uint64_t u64(Index v) { return static_cast<std::uint64_t>(v); }

}  // namespace

DenseTensor::DenseTensor(std::vector<Index> shape)
    : shape_(std::move(shape)), data_(static_cast<size_t>(shape_product(shape_))) {}

DenseTensor::DenseTensor(std::vector<Index> shape, std::vector<cplx> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (static_cast<Index>(data_.size()) != shape_product(shape_))
    throw ShapeError("tensor data length does not match shape");
}

DenseTensor DenseTensor::scalar(cplx v) {
  DenseTensor t(std::vector<Index>{});
  t.data_ = {v};
  return t;
}

Index DenseTensor::size() const {
  return static_cast<Index>(data_.size());
}

std::vector<Index> DenseTensor::strides() const {
  std::vector<Index> s(shape_.size(), 1);
  for (Index i = static_cast<Index>(shape_.size()) - 2; i >= 0; --i)
    s[static_cast<size_t>(i)] =
        s[static_cast<size_t>(i) + 1] * shape_[static_cast<size_t>(i) + 1];
  return s;
}

cplx DenseTensor::at(std::initializer_list<Index> idx) const {
  return const_cast<DenseTensor*>(this)->at(idx);
}

cplx& DenseTensor::at(std::initializer_list<Index> idx) {
  if (static_cast<Index>(idx.size()) != rank())
    throw ShapeError("index rank mismatch");
  auto st = strides();
  Index off = 0;
  Index k = 0;
  for (Index i : idx) {
    if (i < 0 || i >= shape_[static_cast<size_t>(k)])
      throw ShapeError("index out of range");
    off += i * st[static_cast<size_t>(k)];
    ++k;
  }
  return data_[static_cast<size_t>(off)];
}

DenseTensor transpose(const DenseTensor& t, const std::vector<Index>& perm) {
  const Index r = t.rank();
  if (static_cast<Index>(perm.size()) != r)
    throw ShapeError("transpose: permutation rank mismatch");
  std::vector<bool> seen(static_cast<size_t>(r), false);
  std::vector<Index> new_shape(perm.size());
  for (size_t k = 0; k < perm.size(); ++k) {
    Index a = perm[k];
    if (a < 0 || a >= r || seen[static_cast<size_t>(a)])
      throw ShapeError("transpose: invalid permutation");
    seen[static_cast<size_t>(a)] = true;
    new_shape[k] = t.extent(a);
  }
  DenseTensor out(new_shape);
  if (t.size() == 0) return out;
  if (r == 0) {
    out.data()[0] = t.data()[0];
    return out;
  }

  const auto in_strides = t.strides();
  // stride in the input for each output axis
  std::vector<Index> stride(perm.size());
  for (size_t k = 0; k < perm.size(); ++k)
    stride[k] = in_strides[static_cast<size_t>(perm[k])];

  std::vector<Index> counter(static_cast<size_t>(r), 0);
  const cplx* src = t.data().data();
  cplx* dst = out.data().data();
  const Index total = t.size();
  Index src_off = 0;
  for (Index lin = 0; lin < total; ++lin) {
    dst[lin] = src[src_off];
    // odometer increment over the output shape
    for (Index ax = r - 1; ax >= 0; --ax) {
      auto a = static_cast<size_t>(ax);
      src_off += stride[a];
      if (++counter[a] < new_shape[a]) break;
      counter[a] = 0;
      src_off -= stride[a] * new_shape[a];
    }
  }
  return out;
}

DenseTensor reshape(const DenseTensor& t, std::vector<Index> new_shape) {
  if (shape_product(new_shape) != t.size())
    throw ShapeError("reshape: element count mismatch");
  return DenseTensor(std::move(new_shape),
                     std::vector<cplx>(t.data().begin(), t.data().end()));
}

DenseTensor conj(const DenseTensor& t) {
  DenseTensor out(t.shape());
  const auto src = t.data();
  auto dst = out.data();
  for (size_t i = 0; i < src.size(); ++i) dst[i] = std::conj(src[i]);
  return out;
}

DenseTensor dagger(const DenseTensor& m) {
  if (m.rank() != 2) throw ShapeError("dagger expects a matrix");
  return conj(transpose(m, {1, 0}));
}

DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     const std::vector<std::pair<Index, Index>>& axes) {
  std::vector<bool> a_used(static_cast<size_t>(a.rank()), false);
  std::vector<bool> b_used(static_cast<size_t>(b.rank()), false);
  for (auto [ax, bx] : axes) {
    if (ax < 0 || ax >= a.rank() || bx < 0 || bx >= b.rank())
      throw ShapeError("contract: axis out of range");
    if (a_used[static_cast<size_t>(ax)] || b_used[static_cast<size_t>(bx)])
      throw ShapeError("contract: repeated axis");
    a_used[static_cast<size_t>(ax)] = true;
    b_used[static_cast<size_t>(bx)] = true;
    if (a.extent(ax) != b.extent(bx)) {
      std::ostringstream msg;
      msg << "contract: extent mismatch, lhs axis " << ax << " (extent "
          << a.extent(ax) << ") vs rhs axis " << bx << " (extent "
          << b.extent(bx) << ")";
      throw ShapeError(msg.str());
    }
  }

  std::vector<Index> a_perm, b_perm, out_shape;
  for (Index i = 0; i < a.rank(); ++i)
    if (!a_used[static_cast<size_t>(i)]) {
      a_perm.push_back(i);
      out_shape.push_back(a.extent(i));
    }
  Index m_rows = 1;
  for (Index i : a_perm) m_rows *= a.extent(i);
  Index k_dim = 1;
  for (auto [ax, bx] : axes) {
    a_perm.push_back(ax);
    k_dim *= a.extent(ax);
  }
  for (auto [ax, bx] : axes) b_perm.push_back(bx);
  Index n_cols = 1;
  for (Index i = 0; i < b.rank(); ++i)
    if (!b_used[static_cast<size_t>(i)]) {
      b_perm.push_back(i);
      out_shape.push_back(b.extent(i));
      n_cols *= b.extent(i);
    }

  DenseTensor at = transpose(a, a_perm);
  DenseTensor bt = transpose(b, b_perm);
  flops::add(u64(m_rows) * u64(n_cols) * u64(k_dim));

  RowMat c = as_matrix(at, m_rows, k_dim) * as_matrix(bt, k_dim, n_cols);
  return from_matrix(c, std::move(out_shape));
}

DenseTensor unfold(const DenseTensor& t, const std::vector<Index>& row_axes,
                   const std::vector<Index>& col_axes) {
  std::vector<Index> perm = row_axes;
  perm.insert(perm.end(), col_axes.begin(), col_axes.end());
  if (static_cast<Index>(perm.size()) != t.rank())
    throw ShapeError("unfold: row and column axes must partition all axes");
  DenseTensor p = transpose(t, perm);  // validates the permutation
  Index rows = 1, cols = 1;
  for (Index a : row_axes) rows *= t.extent(a);
  for (Index a : col_axes) cols *= t.extent(a);
  return reshape(p, {rows, cols});
}

DenseTensor fold(const DenseTensor& m, const std::vector<Index>& shape,
                 const std::vector<Index>& row_axes,
                 const std::vector<Index>& col_axes) {
  std::vector<Index> perm = row_axes;
  perm.insert(perm.end(), col_axes.begin(), col_axes.end());
  if (static_cast<Index>(perm.size()) != static_cast<Index>(shape.size()))
    throw ShapeError("fold: axes must partition the target shape");
  std::vector<Index> permuted_shape;
  for (Index a : perm) permuted_shape.push_back(shape.at(static_cast<size_t>(a)));
  DenseTensor p = reshape(m, permuted_shape);
  // inverse permutation
  std::vector<Index> inv(perm.size());
  for (size_t k = 0; k < perm.size(); ++k)
    inv[static_cast<size_t>(perm[k])] = static_cast<Index>(k);
  return transpose(p, inv);
}

ThinQr qr_thin(const DenseTensor& m) {
  if (m.rank() != 2) throw ShapeError("qr_thin expects a matrix");
  const Index rows = m.extent(0), cols = m.extent(1);
  const Index k = std::min(rows, cols);
  Eigen::MatrixXcd a = as_matrix(m, rows, cols);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(rows, k);
  Eigen::MatrixXcd r = qr.matrixQR()
                           .topRows(k)
                           .template triangularView<Eigen::Upper>();
  // Fix the gauge: real nonnegative diagonal of r.
  for (Index i = 0; i < k; ++i) {
    cplx d = r(i, i);
    double mag = std::abs(d);
    if (mag > 0.0) {
      cplx phase = d / mag;
      r.row(i) *= std::conj(phase);
      r(i, i) = mag;  // exact
      q.col(i) *= phase;
    }
  }
  flops::add(2 * u64(rows) * u64(cols) * u64(cols));
  ThinQr out;
  out.q = from_matrix(RowMat(q), {rows, k});
  out.r = from_matrix(RowMat(r), {k, cols});
  return out;
}

TruncatedSvd svd_truncated(const DenseTensor& m, const SvdTrunc& policy) {
  if (m.rank() != 2) throw ShapeError("svd_truncated expects a matrix");
  const Index rows = m.extent(0), cols = m.extent(1);
  const Index mn = std::min(rows, cols);
  Eigen::MatrixXcd a = as_matrix(m, rows, cols);

  Eigen::MatrixXcd u_full, v_full;
  Eigen::VectorXd sv;
  if (mn <= 16) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
        a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u_full = svd.matrixU();
    v_full = svd.matrixV();
    sv = svd.singularValues();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(
        a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u_full = svd.matrixU();
    v_full = svd.matrixV();
    sv = svd.singularValues();
  }
  flops::add(14 * u64(std::max(rows, cols)) * u64(mn) * u64(mn));

  // tail(k) = sum of squared singular values beyond rank k
  std::vector<double> tail(static_cast<size_t>(mn) + 1, 0.0);
  for (Index i = mn - 1; i >= 0; --i)
    tail[static_cast<size_t>(i)] =
        tail[static_cast<size_t>(i) + 1] + sv(i) * sv(i);
  const double total = tail[0];

  Index num_rank = 0;
  const double rank_floor = 1e-14 * (mn > 0 ? sv(0) : 0.0);
  while (num_rank < mn && sv(num_rank) > rank_floor) ++num_rank;

  Index k_cap = policy.max_rank ? std::min<Index>(*policy.max_rank, mn) : mn;
  if (k_cap < 0) k_cap = 0;

  Index k;
  if (policy.tol || policy.abs_tol > 0.0) {
    double budget = policy.abs_tol +
                    (policy.tol ? *policy.tol * std::sqrt(total) : 0.0);
    double budget2 = budget * budget;
    k = 0;
    while (k < mn && tail[static_cast<size_t>(k)] > budget2) ++k;
    k = std::min(k, k_cap);
  } else {
    k = std::min(k_cap, num_rank);
  }

  TruncatedSvd out;
  out.u = from_matrix(RowMat(u_full.leftCols(k)), {rows, k});
  out.v = from_matrix(RowMat(v_full.leftCols(k)), {cols, k});
  out.s.assign(sv.data(), sv.data() + k);
  out.discarded_weight = tail[static_cast<size_t>(k)];
  return out;
}

std::pair<std::vector<double>, DenseTensor> eigh_descending(
    const DenseTensor& m) {
  if (m.rank() != 2 || m.extent(0) != m.extent(1))
    throw ShapeError("eigh_descending expects a square matrix");
  const Index n = m.extent(0);
  Eigen::MatrixXcd a = as_matrix(m, n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(a);
  flops::add(9 * u64(n) * u64(n) * u64(n));
  // Eigen sorts ascending; reverse.
  std::vector<double> vals(static_cast<size_t>(n));
  Eigen::MatrixXcd vecs(n, n);
  for (Index i = 0; i < n; ++i) {
    vals[static_cast<size_t>(i)] = eig.eigenvalues()(n - 1 - i);
    vecs.col(i) = eig.eigenvectors().col(n - 1 - i);
  }
  return {std::move(vals), from_matrix(RowMat(vecs), {n, n})};
}

double frob_norm(const DenseTensor& t) {
  double s = 0.0;
  for (const cplx& v : t.data()) s += std::norm(v);
  return std::sqrt(s);
}

}  // namespace tnc
