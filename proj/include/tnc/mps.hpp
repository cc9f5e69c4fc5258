#ifndef TNC_MPS_HPP
#define TNC_MPS_HPP

#include <vector>

#include "tnc/policy.hpp"
#include "tnc/tensor.hpp"

namespace tnc {

enum class CanonicalForm { None, Left, Right };

/// Matrix product state. Site j is shaped (chi_{j-1}, d_j, chi_j) with
/// boundary bonds chi_0 = chi_n = 1.
struct Mps {
  std::vector<DenseTensor> sites;
  CanonicalForm canonical_form = CanonicalForm::None;

  Index n() const { return static_cast<Index>(sites.size()); }
  Index phys_dim() const { return sites.empty() ? 0 : sites[0].extent(1); }
  /// Bond extent at cut j, 0 <= j <= n.
  Index bond(Index cut) const;
  std::vector<Index> bonds() const;
  Index max_bond() const;

  void check_consistent() const;  // throws ShapeError on broken chain
};

/// Matrix product operator. Site j is shaped
/// (D_{j-1}, d_out, d_in, D_j) with D_0 = D_n = 1.
struct Mpo {
  std::vector<DenseTensor> sites;

  Index n() const { return static_cast<Index>(sites.size()); }
  Index phys_dim_out() const { return sites.empty() ? 0 : sites[0].extent(1); }
  Index phys_dim_in() const { return sites.empty() ? 0 : sites[0].extent(2); }
  Index bond(Index cut) const;
  std::vector<Index> bonds() const;
  Index max_bond() const;

  void check_consistent() const;
};

/// Densification guard, in tensor entries. Defaults to 2^20; the
/// TN_DENSE_CAP environment variable overrides it.
Index dense_cap();

/// Random MPS with entries i.i.d. uniform on [alpha, 1] (real values
/// stored as complex). Bond dimensions are clipped to the attainable
/// rank min(d^j, d^(n-j), chi) at each cut. Deterministic given seed.
Mps random_mps(Index n, Index d, Index chi, double alpha, std::uint64_t seed);

/// Same ensemble for a 4-index MPO; bonds clipped against d^2 per site.
Mpo random_mpo(Index n, Index d, Index bond_dim, double alpha,
               std::uint64_t seed);

/// MPO of identity operators, bond dimension 1.
Mpo identity_mpo(Index n, Index d);

/// All-zero state with bond dimension 1 everywhere.
Mps zero_mps(Index n, Index d);

/// Exact MPO-MPS product; output bond at cut j is D_j * chi_j.
Mps apply_exact(const Mpo& h, const Mps& psi);

/// Full contraction to a rank-n tensor of shape (d, ..., d).
/// Refuses above dense_cap().
DenseTensor to_dense(const Mps& psi);

/// Full contraction to a d^n x d^n matrix. Refuses above dense_cap().
DenseTensor to_dense_matrix(const Mpo& h);

/// <a|b> via left-to-right environment contraction (antilinear in a).
cplx inner(const Mps& a, const Mps& b);
double norm(const Mps& a);

Mps canonicalize(const Mps& psi, CanonicalForm direction);

/// SVD rounding sweep. A right-canonical input is swept left-to-right
/// (output left-canonical) and vice versa; unknown gauge is
/// right-canonicalized first. Each bond is truncated per the policy.
Mps truncate(const Mps& psi, const TruncationPolicy& policy);
Mps truncate(const Mps& psi, const SvdTrunc& spec);

/// Map a compression policy onto a per-bond SVD truncation rule.
SvdTrunc svd_rule_for(const TruncationPolicy& policy);

/// TT-SVD of a dense vector (d^n entries) into an MPS; by default keeps
/// the numerical rank at every cut.
Mps mps_from_dense(const DenseTensor& vec, Index n, Index d,
                   const SvdTrunc& spec = {});

/// TT-SVD of a dense d^n x d^n matrix into an MPO.
Mpo mpo_from_dense(const DenseTensor& mat, Index n, Index d,
                   const SvdTrunc& spec = {});

}  // namespace tnc

#endif  // TNC_MPS_HPP
