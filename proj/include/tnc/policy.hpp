#ifndef TNC_POLICY_HPP
#define TNC_POLICY_HPP

#include "tnc/common.hpp"

namespace tnc {

/// Bond-dimension control shared by the compression routines.
///
///  - FixedBond: truncate every bond to chi_bar.
///  - Oversampled: run at chi_prime (default max(ceil(1.5*chi_bar),
///    chi_bar + 10)), then round down to chi_bar.
///  - Adaptive: grow each bond from chi0 in steps of delta_chi until the
///    stochastic error estimate satisfies err <= tau_abs + tau_rel * norm,
///    capped at chi_cap. With final_round set, the growth loop runs at a
///    tenth of the requested tolerances and a rounding sweep at the
///    requested tolerance finishes the job.
struct TruncationPolicy {
  enum class Kind { FixedBond, Oversampled, Adaptive };

  Kind kind = Kind::FixedBond;

  // FixedBond / Oversampled
  Index chi_bar = 1;
  Index chi_prime = 0;  // 0: use the default formula

  // Adaptive
  double tau_abs = 0.0;
  double tau_rel = 0.0;
  Index chi0 = 2;
  Index delta_chi = 3;
  Index chi_cap = 1 << 20;
  bool final_round = true;

  static TruncationPolicy fixed_bond(Index chi_bar);
  static TruncationPolicy oversampled(Index chi_bar, Index chi_prime = 0);
  static TruncationPolicy adaptive(double tau_abs, double tau_rel,
                                   Index chi0 = 2, Index delta_chi = 3,
                                   Index chi_cap = 1 << 20,
                                   bool final_round = true);

  /// The oversampled run width for this policy.
  Index effective_chi_prime() const;

  void validate() const;
};

inline TruncationPolicy TruncationPolicy::fixed_bond(Index chi_bar) {
  TruncationPolicy p;
  p.kind = Kind::FixedBond;
  p.chi_bar = chi_bar;
  return p;
}

inline TruncationPolicy TruncationPolicy::oversampled(Index chi_bar,
                                                      Index chi_prime) {
  TruncationPolicy p;
  p.kind = Kind::Oversampled;
  p.chi_bar = chi_bar;
  p.chi_prime = chi_prime;
  return p;
}

inline TruncationPolicy TruncationPolicy::adaptive(double tau_abs,
                                                   double tau_rel, Index chi0,
                                                   Index delta_chi,
                                                   Index chi_cap,
                                                   bool final_round) {
  TruncationPolicy p;
  p.kind = Kind::Adaptive;
  p.tau_abs = tau_abs;
  p.tau_rel = tau_rel;
  p.chi0 = chi0;
  p.delta_chi = delta_chi;
  p.chi_cap = chi_cap;
  p.final_round = final_round;
  return p;
}

inline Index TruncationPolicy::effective_chi_prime() const {
  if (chi_prime > 0) return chi_prime;
  Index by_factor = (3 * chi_bar + 1) / 2;  // ceil(1.5 x)
  return std::max(by_factor, chi_bar + 10);
}

inline void TruncationPolicy::validate() const {
  switch (kind) {
    case Kind::FixedBond:
      if (chi_bar < 1) throw ParamError("chi_bar must be >= 1");
      break;
    case Kind::Oversampled:
      if (chi_bar < 1) throw ParamError("chi_bar must be >= 1");
      if (chi_prime != 0 && chi_prime < chi_bar)
        throw ParamError("chi_prime must be >= chi_bar");
      break;
    case Kind::Adaptive:
      if (tau_abs < 0 || tau_rel < 0)
        throw ParamError("tolerances must be nonnegative");
      if (tau_abs == 0 && tau_rel == 0)
        throw ParamError("at least one tolerance must be positive");
      if (chi0 < 1 || delta_chi < 1) throw ParamError("chi0, delta_chi >= 1");
      if (chi_cap < chi0) throw ParamError("chi_cap must be >= chi0");
      break;
  }
}

}  // namespace tnc

#endif  // TNC_POLICY_HPP
