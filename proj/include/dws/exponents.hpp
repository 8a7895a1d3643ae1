#pragma once

#include <stdexcept>
#include <utility>

#include "dws/scalar.hpp"

namespace dws {

struct SpaceParams {
  int n = 1;          // space dimension
  Scalar m = Scalar(1);  // additional-regularity index, in [1,2]

  SpaceParams() = default;
  SpaceParams(int n_, Scalar m_) : n(n_), m(std::move(m_)) {
    if (n < 1) throw std::invalid_argument("space dimension must be >= 1");
    if (m < Scalar(1) || m > Scalar(2))
      throw std::invalid_argument("regularity index m must lie in [1,2]");
  }
};

struct NonlinearityParams {
  Scalar p = Scalar(2), q = Scalar(2);
  Scalar gamma1 = Scalar(0), gamma2 = Scalar(0);

  NonlinearityParams() = default;
  NonlinearityParams(Scalar p_, Scalar q_, Scalar g1, Scalar g2)
      : p(std::move(p_)), q(std::move(q_)), gamma1(std::move(g1)), gamma2(std::move(g2)) {
    if (p <= Scalar(1) || q <= Scalar(1))
      throw std::invalid_argument("nonlinearity powers p, q must exceed 1");
    if (gamma1 < Scalar(-1) || gamma2 < Scalar(-1))
      throw std::invalid_argument("time-weight powers gamma must be >= -1");
  }
};

struct InterplayParams {
  Scalar alpha = Scalar(1), beta = Scalar(1);

  InterplayParams() = default;
  InterplayParams(Scalar a, Scalar b) : alpha(std::move(a)), beta(std::move(b)) {
    if (alpha <= Scalar(0) || beta <= Scalar(0))
      throw std::invalid_argument("interplay exponents alpha, beta must be positive");
  }
  // equivalent primitives; the coupled theory adds nothing over earlier work
  bool previously_studied() const { return max(alpha, beta) < Scalar(1); }
};

// One side of the modified-power map: exponent e >= 1 uses the affine form
// anchored at 1, e < 1 the form anchored at m/2.
inline Scalar modified_exponent(const Scalar& power, const Scalar& interplay_exp,
                                const Scalar& m) {
  if (interplay_exp <= Scalar(0))
    throw std::invalid_argument("interplay exponent must be positive");
  const Scalar one(1);
  if (interplay_exp >= one) return (power - one) * interplay_exp + one;
  const Scalar half_m = m / Scalar(2);
  return (power - half_m) * interplay_exp + half_m;
}

// (p~, q~): p pairs with beta, q with alpha.
inline std::pair<Scalar, Scalar> modified_exponents(const Scalar& p, const Scalar& q,
                                                    const InterplayParams& ip,
                                                    const Scalar& m) {
  return {modified_exponent(p, ip.beta, m), modified_exponent(q, ip.alpha, m)};
}

// Modified Fujita threshold 1 + 2m(gamma+1)/n.
inline Scalar fujita_threshold(const SpaceParams& space, const Scalar& gamma) {
  if (gamma < Scalar(-1)) throw std::invalid_argument("gamma must be >= -1");
  return Scalar(1) + Scalar(2) * space.m * (gamma + Scalar(1)) / Scalar(space.n);
}

// Gagliardo-Nirenberg cap n/(n-2); unconstrained below three dimensions.
inline Scalar gn_upper_bound(int n) {
  if (n < 1) throw std::invalid_argument("dimension must be >= 1");
  if (n <= 2) return Scalar::infinity();
  return Scalar(Rational(n, n - 2));
}

// Loss of decay kappa = gamma1 - (n/2m)(p~ - 1) + 1; zero exactly at the
// Fujita threshold.
inline Scalar loss_of_decay(const SpaceParams& space, const Scalar& gamma1,
                            const Scalar& p_tilde) {
  return gamma1 - Scalar(space.n) / (Scalar(2) * space.m) * (p_tilde - Scalar(1)) + Scalar(1);
}

struct GnTheta {
  Scalar theta;
  bool feasible = false;
};

// Interpolation parameter of the fractional Gagliardo-Nirenberg inequality
// || |D|^s u ||_{L^pt} <= ||u||_{L^p0}^{1-theta} || |D|^sigma u ||_{L^p1}^theta.
inline GnTheta gn_theta(const Scalar& p_target, const Scalar& p0, const Scalar& p1,
                        const Scalar& s, const Scalar& sigma, int n) {
  const Scalar one(1);
  if (p_target <= one || p0 <= one || p1 <= one)
    throw std::invalid_argument("gn_theta requires Lebesgue exponents > 1");
  if (s < Scalar(0) || sigma <= Scalar(0) || s > sigma)
    throw std::invalid_argument("gn_theta requires 0 <= s <= sigma, sigma > 0");
  const Scalar dim(n);
  const Scalar num = one / p0 - one / p_target + s / dim;
  const Scalar den = one / p0 - one / p1 + sigma / dim;
  if (den == Scalar(0)) throw std::domain_error("gn_theta: degenerate parameters");
  GnTheta out{num / den, false};
  out.feasible = s / sigma <= out.theta && out.theta <= one;
  return out;
}

}  // namespace dws
