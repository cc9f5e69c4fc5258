#include "tnc/mps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace tnc {

namespace {

// min(run * factor, cap) without overflow
Index sat_mul(Index run, Index factor, Index cap) {
  if (run > cap / factor) return cap;
  return std::min(run * factor, cap);
}

std::vector<Index> clipped_bonds(Index n, Index step_dim, Index chi) {
  std::vector<Index> b(static_cast<size_t>(n) + 1, 1);
  Index run = 1;
  for (Index j = 1; j < n; ++j) {
    run = sat_mul(run, step_dim, chi);
    b[static_cast<size_t>(j)] = run;
  }
  run = 1;
  for (Index j = n - 1; j >= 1; --j) {
    run = sat_mul(run, step_dim, chi);
    b[static_cast<size_t>(j)] = std::min(b[static_cast<size_t>(j)], run);
  }
  return b;
}

void fill_uniform(DenseTensor& t, rng::Stream& stream, double alpha) {
  for (cplx& v : t.data()) v = cplx(stream.uniform(alpha, 1.0), 0.0);
}

// diag(s) * v^dagger as a k x N matrix
DenseTensor s_vdag(const std::vector<double>& s, const DenseTensor& v) {
  const Index nrows = static_cast<Index>(s.size());
  const Index ncols = v.extent(0);
  DenseTensor out({nrows, ncols});
  for (Index i = 0; i < nrows; ++i)
    for (Index j = 0; j < ncols; ++j)
      out.at({i, j}) = s[static_cast<size_t>(i)] * std::conj(v.at({j, i}));
  return out;
}

// u * diag(s) as an M x k matrix
DenseTensor u_s(const DenseTensor& u, const std::vector<double>& s) {
  const Index nrows = u.extent(0);
  const Index ncols = static_cast<Index>(s.size());
  DenseTensor out({nrows, ncols});
  for (Index i = 0; i < nrows; ++i)
    for (Index j = 0; j < ncols; ++j)
      out.at({i, j}) = u.at({i, j}) * s[static_cast<size_t>(j)];
  return out;
}

}  // namespace

Index Mps::bond(Index cut) const {
  if (cut < 0 || cut > n()) throw ShapeError("bond cut out of range");
  if (cut == 0) return sites.front().extent(0);
  return sites[static_cast<size_t>(cut) - 1].extent(2);
}

std::vector<Index> Mps::bonds() const {
  std::vector<Index> b;
  b.push_back(sites.front().extent(0));
  for (const auto& s : sites) b.push_back(s.extent(2));
  return b;
}

Index Mps::max_bond() const {
  Index m = 1;
  for (const auto& s : sites) m = std::max(m, std::max(s.extent(0), s.extent(2)));
  return m;
}

void Mps::check_consistent() const {
  if (sites.empty()) throw ShapeError("empty MPS");
  for (const auto& s : sites)
    if (s.rank() != 3) throw ShapeError("MPS site must have rank 3");
  if (sites.front().extent(0) != 1 || sites.back().extent(2) != 1)
    throw ShapeError("MPS boundary bonds must be 1");
  for (size_t j = 0; j + 1 < sites.size(); ++j)
    if (sites[j].extent(2) != sites[j + 1].extent(0))
      throw ShapeError("MPS bond mismatch between sites " + std::to_string(j) +
                       " and " + std::to_string(j + 1));
}

Index Mpo::bond(Index cut) const {
  if (cut < 0 || cut > n()) throw ShapeError("bond cut out of range");
  if (cut == 0) return sites.front().extent(0);
  return sites[static_cast<size_t>(cut) - 1].extent(3);
}

std::vector<Index> Mpo::bonds() const {
  std::vector<Index> b;
  b.push_back(sites.front().extent(0));
  for (const auto& s : sites) b.push_back(s.extent(3));
  return b;
}

Index Mpo::max_bond() const {
  Index m = 1;
  for (const auto& s : sites) m = std::max(m, std::max(s.extent(0), s.extent(3)));
  return m;
}

void Mpo::check_consistent() const {
  if (sites.empty()) throw ShapeError("empty MPO");
  for (const auto& s : sites) {
    if (s.rank() != 4) throw ShapeError("MPO site must have rank 4");
    if (s.extent(1) != s.extent(2))
      throw ShapeError("MPO local operators must be square");
  }
  if (sites.front().extent(0) != 1 || sites.back().extent(3) != 1)
    throw ShapeError("MPO boundary bonds must be 1");
  for (size_t j = 0; j + 1 < sites.size(); ++j)
    if (sites[j].extent(3) != sites[j + 1].extent(0))
      throw ShapeError("MPO bond mismatch between sites " + std::to_string(j) +
                       " and " + std::to_string(j + 1));
}

Index dense_cap() {
  static const Index cap = [] {
    if (const char* s = std::getenv("TN_DENSE_CAP")) {
      char* end = nullptr;
      long long v = std::strtoll(s, &end, 10);
      if (end != s && v > 0) return static_cast<Index>(v);
    }
    return static_cast<Index>(1) << 20;
  }();
  return cap;
}

Mps random_mps(Index n, Index d, Index chi, double alpha, std::uint64_t seed) {
  if (n < 2) throw ParamError("random_mps: n must be >= 2");
  if (d < 2) throw ParamError("random_mps: d must be >= 2");
  if (chi < 1) throw ParamError("random_mps: chi must be >= 1");
  if (alpha < -1.0 || alpha > 1.0)
    throw ParamError("random_mps: alpha must lie in [-1, 1]");
  auto b = clipped_bonds(n, d, chi);
  rng::Stream stream(seed);
  Mps psi;
  for (Index j = 0; j < n; ++j) {
    DenseTensor site(
        {b[static_cast<size_t>(j)], d, b[static_cast<size_t>(j) + 1]});
    fill_uniform(site, stream, alpha);
    psi.sites.push_back(std::move(site));
  }
  return psi;
}

Mpo random_mpo(Index n, Index d, Index bond_dim, double alpha,
               std::uint64_t seed) {
  if (n < 2) throw ParamError("random_mpo: n must be >= 2");
  if (d < 2) throw ParamError("random_mpo: d must be >= 2");
  if (bond_dim < 1) throw ParamError("random_mpo: bond dimension must be >= 1");
  if (alpha < -1.0 || alpha > 1.0)
    throw ParamError("random_mpo: alpha must lie in [-1, 1]");
  auto b = clipped_bonds(n, d * d, bond_dim);
  rng::Stream stream(seed);
  Mpo h;
  for (Index j = 0; j < n; ++j) {
    DenseTensor site(
        {b[static_cast<size_t>(j)], d, d, b[static_cast<size_t>(j) + 1]});
    fill_uniform(site, stream, alpha);
    h.sites.push_back(std::move(site));
  }
  return h;
}

Mpo identity_mpo(Index n, Index d) {
  Mpo h;
  DenseTensor site({1, d, d, 1});
  for (Index i = 0; i < d; ++i) site.at({0, i, i, 0}) = 1.0;
  h.sites.assign(static_cast<size_t>(n), site);
  return h;
}

Mps zero_mps(Index n, Index d) {
  Mps psi;
  psi.sites.assign(static_cast<size_t>(n), DenseTensor({1, d, 1}));
  return psi;
}

Mps apply_exact(const Mpo& h, const Mps& psi) {
  if (h.n() != psi.n()) throw ShapeError("apply_exact: site count mismatch");
  Mps out;
  for (Index j = 0; j < psi.n(); ++j) {
    const auto& w = h.sites[static_cast<size_t>(j)];
    const auto& p = psi.sites[static_cast<size_t>(j)];
    if (w.extent(2) != p.extent(1))
      throw ShapeError("apply_exact: physical dimension mismatch at site " +
                       std::to_string(j));
    // (l,o,i,r) x (a,i,b) -> (l,o,r,a,b) -> (l,a,o,r,b)
    DenseTensor t = contract(w, p, {{2, 1}});
    t = transpose(t, {0, 3, 1, 2, 4});
    out.sites.push_back(reshape(
        t, {w.extent(0) * p.extent(0), w.extent(1), w.extent(3) * p.extent(2)}));
  }
  return out;
}

DenseTensor to_dense(const Mps& psi) {
  const Index n = psi.n();
  const Index d = psi.phys_dim();
  Index total = 1;
  for (Index j = 0; j < n; ++j) {
    if (total > dense_cap() / d)
      throw CapError("to_dense: d^n exceeds the densification cap");
    total *= d;
  }
  DenseTensor acc = reshape(psi.sites[0], {d, psi.sites[0].extent(2)});
  for (Index j = 1; j < n; ++j) {
    const auto& s = psi.sites[static_cast<size_t>(j)];
    acc = contract(acc, s, {{1, 0}});
    acc = reshape(acc, {acc.extent(0) * d, s.extent(2)});
  }
  return reshape(acc, std::vector<Index>(static_cast<size_t>(n), d));
}

DenseTensor to_dense_matrix(const Mpo& h) {
  const Index n = h.n();
  const Index d = h.phys_dim_out();
  Index total = 1;
  for (Index j = 0; j < 2 * n; ++j) {
    if (total > dense_cap() / d)
      throw CapError("to_dense_matrix: d^(2n) exceeds the densification cap");
    total *= d;
  }
  const auto& first = h.sites[0];
  DenseTensor acc = reshape(first, {d, d, first.extent(3)});
  for (Index j = 1; j < n; ++j) {
    const auto& s = h.sites[static_cast<size_t>(j)];
    // (O,I,r) x (r,o,i,r') -> (O,I,o,i,r') -> (O,o,I,i,r')
    acc = contract(acc, s, {{2, 0}});
    acc = transpose(acc, {0, 2, 1, 3, 4});
    acc = reshape(acc, {acc.extent(0) * d, acc.extent(2) * d, s.extent(3)});
  }
  const Index dim = acc.extent(0);
  return reshape(acc, {dim, dim});
}

cplx inner(const Mps& a, const Mps& b) {
  if (a.n() != b.n()) throw ShapeError("inner: site count mismatch");
  DenseTensor env({1, 1});
  env.at({0, 0}) = 1.0;
  for (Index j = 0; j < a.n(); ++j) {
    const auto& sa = a.sites[static_cast<size_t>(j)];
    const auto& sb = b.sites[static_cast<size_t>(j)];
    if (sa.extent(1) != sb.extent(1))
      throw ShapeError("inner: physical dimension mismatch at site " +
                       std::to_string(j));
    DenseTensor t = contract(env, sb, {{1, 0}});       // (alpha, i, beta')
    env = contract(conj(sa), t, {{0, 0}, {1, 1}});     // (alpha', beta')
  }
  return env.at({0, 0});
}

double norm(const Mps& a) {
  double v = inner(a, a).real();
  return std::sqrt(std::max(0.0, v));
}

Mps canonicalize(const Mps& psi, CanonicalForm direction) {
  if (direction == CanonicalForm::None)
    throw ParamError("canonicalize: direction must be Left or Right");
  Mps out = psi;
  const Index n = out.n();
  if (direction == CanonicalForm::Left) {
    for (Index j = 0; j < n - 1; ++j) {
      auto& s = out.sites[static_cast<size_t>(j)];
      const Index a = s.extent(0), d = s.extent(1), b = s.extent(2);
      ThinQr qr = qr_thin(reshape(s, {a * d, b}));
      const Index k = qr.q.extent(1);
      s = reshape(qr.q, {a, d, k});
      out.sites[static_cast<size_t>(j) + 1] =
          contract(qr.r, out.sites[static_cast<size_t>(j) + 1], {{1, 0}});
    }
  } else {
    for (Index j = n - 1; j >= 1; --j) {
      auto& s = out.sites[static_cast<size_t>(j)];
      const Index a = s.extent(0), d = s.extent(1), b = s.extent(2);
      ThinQr qr = qr_thin(dagger(reshape(s, {a, d * b})));
      const Index k = qr.q.extent(1);
      s = reshape(dagger(qr.q), {k, d, b});
      // left neighbor absorbs r^dagger
      out.sites[static_cast<size_t>(j) - 1] = contract(
          out.sites[static_cast<size_t>(j) - 1], dagger(qr.r), {{2, 0}});
    }
  }
  out.canonical_form = direction;
  return out;
}

SvdTrunc svd_rule_for(const TruncationPolicy& policy) {
  SvdTrunc spec;
  switch (policy.kind) {
    case TruncationPolicy::Kind::FixedBond:
    case TruncationPolicy::Kind::Oversampled:
      spec.max_rank = policy.chi_bar;
      break;
    case TruncationPolicy::Kind::Adaptive:
      spec.max_rank = policy.chi_cap;
      if (policy.tau_rel > 0) spec.tol = policy.tau_rel;
      spec.abs_tol = policy.tau_abs;
      break;
  }
  return spec;
}

namespace {

Mps truncate_sweep_lr(Mps psi, const SvdTrunc& spec) {
  const Index n = psi.n();
  for (Index j = 0; j < n - 1; ++j) {
    auto& s = psi.sites[static_cast<size_t>(j)];
    const Index a = s.extent(0), d = s.extent(1), b = s.extent(2);
    TruncatedSvd svd = svd_truncated(reshape(s, {a * d, b}), spec);
    Index k = static_cast<Index>(svd.s.size());
    if (k == 0) {
      // fully truncated branch: zero state from here on
      s = DenseTensor({a, d, 1});
      auto& nxt = psi.sites[static_cast<size_t>(j) + 1];
      nxt = DenseTensor({1, nxt.extent(1), nxt.extent(2)});
      continue;
    }
    s = reshape(svd.u, {a, d, k});
    DenseTensor carry = s_vdag(svd.s, svd.v);  // k x b
    psi.sites[static_cast<size_t>(j) + 1] =
        contract(carry, psi.sites[static_cast<size_t>(j) + 1], {{1, 0}});
  }
  psi.canonical_form = CanonicalForm::Left;
  return psi;
}

Mps truncate_sweep_rl(Mps psi, const SvdTrunc& spec) {
  const Index n = psi.n();
  for (Index j = n - 1; j >= 1; --j) {
    auto& s = psi.sites[static_cast<size_t>(j)];
    const Index a = s.extent(0), d = s.extent(1), b = s.extent(2);
    TruncatedSvd svd = svd_truncated(reshape(s, {a, d * b}), spec);
    Index k = static_cast<Index>(svd.s.size());
    if (k == 0) {
      s = DenseTensor({1, d, b});
      auto& prv = psi.sites[static_cast<size_t>(j) - 1];
      prv = DenseTensor({prv.extent(0), prv.extent(1), 1});
      continue;
    }
    s = reshape(dagger(svd.v), {k, d, b});
    DenseTensor carry = u_s(svd.u, svd.s);  // a x k
    psi.sites[static_cast<size_t>(j) - 1] =
        contract(psi.sites[static_cast<size_t>(j) - 1], carry, {{2, 0}});
  }
  psi.canonical_form = CanonicalForm::Right;
  return psi;
}

}  // namespace

Mps truncate(const Mps& psi, const SvdTrunc& spec) {
  if (psi.canonical_form == CanonicalForm::Right)
    return truncate_sweep_lr(psi, spec);
  if (psi.canonical_form == CanonicalForm::Left)
    return truncate_sweep_rl(psi, spec);
  return truncate_sweep_lr(canonicalize(psi, CanonicalForm::Right), spec);
}

Mps truncate(const Mps& psi, const TruncationPolicy& policy) {
  return truncate(psi, svd_rule_for(policy));
}

Mps mps_from_dense(const DenseTensor& vec, Index n, Index d,
                   const SvdTrunc& spec) {
  Index total = 1;
  for (Index j = 0; j < n; ++j) total *= d;
  if (vec.size() != total)
    throw ShapeError("mps_from_dense: entry count must be d^n");
  Mps psi;
  DenseTensor m = reshape(vec, {d, total / d});
  Index left = 1;
  for (Index j = 0; j < n - 1; ++j) {
    TruncatedSvd svd = svd_truncated(m, spec);
    Index k = static_cast<Index>(svd.s.size());
    if (k == 0) {
      psi.sites.push_back(DenseTensor({left, d, 1}));
      Index rest = m.extent(1) / d;
      m = DenseTensor({d, rest});
      left = 1;
      continue;
    }
    psi.sites.push_back(reshape(svd.u, {left, d, k}));
    DenseTensor rem = s_vdag(svd.s, svd.v);  // k x (d^(n-j-1))
    left = k;
    if (j < n - 2) m = reshape(rem, {k * d, rem.extent(1) / d});
    else m = rem;
  }
  psi.sites.push_back(reshape(m, {left, d, 1}));
  psi.canonical_form = CanonicalForm::Left;
  return psi;
}

Mpo mpo_from_dense(const DenseTensor& mat, Index n, Index d,
                   const SvdTrunc& spec) {
  Index total = 1;
  for (Index j = 0; j < n; ++j) total *= d;
  if (mat.rank() != 2 || mat.extent(0) != total || mat.extent(1) != total)
    throw ShapeError("mpo_from_dense: matrix must be d^n x d^n");
  // (o_1..o_n, i_1..i_n) -> (o_1, i_1, ..., o_n, i_n)
  std::vector<Index> full_shape(static_cast<size_t>(2 * n), d);
  DenseTensor t = reshape(mat, full_shape);
  std::vector<Index> perm;
  for (Index j = 0; j < n; ++j) {
    perm.push_back(j);
    perm.push_back(n + j);
  }
  t = transpose(t, perm);
  Mps pairs = mps_from_dense(reshape(t, {t.size()}), n, d * d, spec);
  Mpo h;
  for (auto& site : pairs.sites)
    h.sites.push_back(
        reshape(site, {site.extent(0), d, d, site.extent(2)}));
  return h;
}

}  // namespace tnc
