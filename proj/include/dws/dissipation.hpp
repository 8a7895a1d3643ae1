#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dws/fitting.hpp"
#include "dws/quadrature.hpp"

namespace dws {

enum class DissipationFamily { constant, pure_power, power_log_growth, power_log_decay };

inline const char* family_name(DissipationFamily f) {
  switch (f) {
    case DissipationFamily::constant: return "constant";
    case DissipationFamily::pure_power: return "pure-power";
    case DissipationFamily::power_log_growth: return "power-log-growth";
    case DissipationFamily::power_log_decay: return "power-log-decay";
  }
  return "?";
}

struct DissipationParams {
  DissipationFamily family = DissipationFamily::constant;
  double mu = 1.0;     // amplitude, > 0
  double r = 0.0;      // power exponent, in (-1,1) for validated specs
  double gamma = 0.0;  // log power, > 0 for the log families
  double c = M_E;      // log offset, >= e
};

struct DerivativeValue {
  double value = 0.0;
  double error_bound = 0.0;  // zero on the closed-form path
};

// A dissipation coefficient b(t) from one of the four closed-form families,
// with its derivatives and the primitive B(t,tau) = int_tau^t dr/b(r).
// Immutable after construction; the primitive cache is shared between
// copies and internally synchronized.
class Dissipation {
 public:
  static Dissipation constant(double mu) {
    return make({DissipationFamily::constant, mu, 0.0, 0.0, M_E}, true);
  }
  static Dissipation pure_power(double mu, double r) {
    return make({DissipationFamily::pure_power, mu, r, 0.0, M_E}, true);
  }
  // Passing c = 0 asks the constructor to pick the smallest offset >= e
  // (doubling from e) that keeps b monotonic on the sampled horizon.
  static Dissipation power_log_growth(double mu, double r, double gamma, double c = 0.0) {
    return make({DissipationFamily::power_log_growth, mu, r, gamma, c}, true);
  }
  static Dissipation power_log_decay(double mu, double r, double gamma, double c = 0.0) {
    return make({DissipationFamily::power_log_decay, mu, r, gamma, c}, true);
  }
  static Dissipation from_params(const DissipationParams& p) { return make(p, true); }
  // Validation bypass, for negative tests only (e.g. r outside (-1,1)).
  static Dissipation unchecked(const DissipationParams& p) { return make(p, false); }

  const DissipationParams& params() const { return p_; }

  // b(t); the families extend smoothly to slightly negative t, which the
  // finite-difference stencils rely on near t = 0.
  double value(double t) const {
    switch (p_.family) {
      case DissipationFamily::constant:
        return p_.mu;
      case DissipationFamily::pure_power:
        return p_.mu * std::pow(1.0 + t, -p_.r);
      case DissipationFamily::power_log_growth:
        return p_.mu * std::pow(1.0 + t, -p_.r) * std::pow(std::log(p_.c + t), p_.gamma);
      case DissipationFamily::power_log_decay:
        return p_.mu * std::pow(1.0 + t, -p_.r) * std::pow(std::log(p_.c + t), -p_.gamma);
    }
    return 0.0;
  }

  double derivative(double t, int k) const { return derivative_with_error(t, k).value; }

  DerivativeValue derivative_with_error(double t, int k) const {
    if (k < 1 || k > 3) throw std::invalid_argument("derivative order must be 1, 2 or 3");
    switch (p_.family) {
      case DissipationFamily::constant:
        return {0.0, 0.0};
      case DissipationFamily::pure_power: {
        const double r = p_.r;
        double coeff = -r;
        if (k >= 2) coeff *= -(r + 1.0);
        if (k >= 3) coeff *= -(r + 2.0);
        return {p_.mu * coeff * std::pow(1.0 + t, -r - k), 0.0};
      }
      default:
        return finite_difference(t, k);
    }
  }

  // B(t,0). Closed form for the constant and pure-power families,
  // cached adaptive quadrature (abs tol 1e-10 per increment) otherwise.
  double primitive_from_zero(double t) const {
    if (t < 0) throw std::invalid_argument("primitive requires t >= 0");
    switch (p_.family) {
      case DissipationFamily::constant:
        return t / p_.mu;
      case DissipationFamily::pure_power: {
        const double e = 1.0 + p_.r;
        return (std::pow(1.0 + t, e) - 1.0) / (p_.mu * e);
      }
      default:
        return cached_quadrature(t);
    }
  }

  // B(t,tau) = B(t,0) - B(tau,0); additive by construction.
  double primitive(double tau, double t) const {
    if (tau > t) throw std::invalid_argument("primitive requires tau <= t");
    if (tau == 0.0) return primitive_from_zero(t);
    return primitive_from_zero(t) - primitive_from_zero(tau);
  }

  double quadrature_tolerance() const { return kQuadTol; }

  std::string describe() const {
    std::string s = family_name(p_.family);
    s += " mu=" + std::to_string(p_.mu);
    if (p_.family != DissipationFamily::constant) s += " r=" + std::to_string(p_.r);
    if (p_.family == DissipationFamily::power_log_growth ||
        p_.family == DissipationFamily::power_log_decay) {
      s += " gamma=" + std::to_string(p_.gamma) + " c=" + std::to_string(p_.c);
    }
    return s;
  }

 private:
  static constexpr double kQuadTol = 1e-10;

  struct Cache {
    std::mutex mu;
    std::map<double, double> nodes;  // t -> B(t,0), monotone
  };

  static Dissipation make(DissipationParams p, bool validate) {
    const bool log_family = p.family == DissipationFamily::power_log_growth ||
                            p.family == DissipationFamily::power_log_decay;
    if (validate) {
      if (!(p.mu > 0)) throw std::invalid_argument("dissipation amplitude mu must be positive");
      if (p.family == DissipationFamily::constant) {
        p.r = 0.0;
        p.gamma = 0.0;
      }
      if (p.family == DissipationFamily::pure_power || log_family) {
        if (!(p.r > -1.0 && p.r < 1.0))
          throw std::invalid_argument(
              "power exponent r must lie in (-1,1); outside it the dissipation "
              "is not effective");
      }
      if (log_family) {
        if (!(p.gamma > 0)) throw std::invalid_argument("log power gamma must be positive");
        if (p.c == 0.0) {
          p.c = choose_offset(p);
        } else if (!(p.c >= M_E)) {
          throw std::invalid_argument("log offset c must be >= e");
        } else if (!monotonic_on_horizon(p)) {
          throw std::invalid_argument("log offset c too small: b changes monotonicity");
        }
      }
    }
    Dissipation d;
    d.p_ = p;
    d.cache_ = std::make_shared<Cache>();
    d.cache_->nodes.emplace(0.0, 0.0);
    return d;
  }

  // sign of b'(t)/b(t) from the closed-form logarithmic derivative
  static double log_derivative(const DissipationParams& p, double t) {
    double v = 0.0;
    if (p.family != DissipationFamily::constant) v -= p.r / (1.0 + t);
    if (p.family == DissipationFamily::power_log_growth)
      v += p.gamma / ((p.c + t) * std::log(p.c + t));
    if (p.family == DissipationFamily::power_log_decay)
      v -= p.gamma / ((p.c + t) * std::log(p.c + t));
    return v;
  }

  static bool monotonic_on_horizon(const DissipationParams& p) {
    bool pos = false, neg = false;
    for (double t = 0.0; t <= 1e8; t = t == 0.0 ? 1e-3 : t * 1.5) {
      const double d = log_derivative(p, t);
      if (d > 1e-15) pos = true;
      if (d < -1e-15) neg = true;
      if (pos && neg) return false;
    }
    return true;
  }

  static double choose_offset(DissipationParams p) {
    for (double c = M_E; c <= std::ldexp(M_E, 40); c *= 2.0) {
      p.c = c;
      if (monotonic_on_horizon(p)) return c;
    }
    throw std::invalid_argument("no log offset c keeps b monotonic for these parameters");
  }

  DerivativeValue finite_difference(double t, int k) const {
    static constexpr double c1[7] = {-1, 9, -45, 0, 45, -9, 1};     // order 6
    static constexpr double c2[7] = {2, -27, 270, -490, 270, -27, 2};  // order 6
    static constexpr double c3[7] = {1, -8, 13, 0, -13, 8, -1};     // order 4
    const double* c = k == 1 ? c1 : (k == 2 ? c2 : c3);
    const double denom_scale = k == 1 ? 60.0 : (k == 2 ? 180.0 : 8.0);
    const int order = k == 3 ? 4 : 6;
    const double eps = 2.220446049250313e-16;
    const double h = (1.0 + t) * std::pow(eps, 1.0 / double(k + order));

    auto stencil = [&](double hh) {
      double acc = 0.0;
      for (int j = -3; j <= 3; ++j)
        if (c[j + 3] != 0.0) acc += c[j + 3] * value(t + j * hh);
      return acc / (denom_scale * std::pow(hh, k));
    };
    const double d1 = stencil(h);
    const double d2 = stencil(2.0 * h);
    const double trunc = std::fabs(d1 - d2) / (std::pow(2.0, order) - 1.0);
    const double round = 8.0 * eps * value(t) / std::pow(h, k);
    return {d1, std::max(trunc, round)};
  }

  double cached_quadrature(double t) const {
    auto inv_b = [this](double s) { return 1.0 / value(s); };
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->nodes.find(t);
    if (it != cache_->nodes.end()) return it->second;
    auto below = cache_->nodes.upper_bound(t);
    --below;  // nodes always contain 0.0
    const double base_t = below->first;
    const double base_v = below->second;
    // tighter tolerance on short increments keeps the accumulated error of a
    // node chain well under the documented per-call tolerance
    const double tol = std::min(kQuadTol, 1e-12 * (1.0 + base_v));
    const double inc = integrate_adaptive(inv_b, base_t, t, tol).value;
    const double result = base_v + inc;
    // grow the monotone node grid sparsely so that stage-level solver
    // queries do not flood the cache
    if (t - base_t >= 0.05 * (1.0 + base_t)) cache_->nodes.emplace(t, result);
    return result;
  }

  DissipationParams p_;
  std::shared_ptr<Cache> cache_;
};

// ---------------------------------------------------------------------------
// Effectiveness conditions
// ---------------------------------------------------------------------------

struct EffectivenessReport {
  // b positive and monotonic with t*b(t) -> infinity
  bool monotone_tb = false;
  std::vector<std::pair<double, double>> tb_witness;  // sampled (t, t*b(t))
  // ((1+t)^2 b(t))^{-1} integrable on (0, infinity)
  bool weight_integrable = false;
  // |b^(k)(t)| <= C b(t)/(1+t)^k for k = 1,2,3
  std::array<bool, 3> derivative_bounded{false, false, false};
  std::array<double, 3> derivative_worst_ratio{0, 0, 0};
  // 1/b not integrable (B(t,0) -> infinity)
  bool inv_b_diverges = false;
  // smallest sampled a with t b'(t) <= a b(t); absent when >= 1
  std::optional<double> a_witness;
  double horizon = 0;

  bool pass() const {
    return monotone_tb && weight_integrable && derivative_bounded[0] && derivative_bounded[1] &&
           derivative_bounded[2] && inv_b_diverges;
  }
};

namespace detail {

// Asymptotically b(t) ~ mu * t^{-r} * (log t)^{g}; the three tail conditions
// are decided from (r, g) exactly.
struct TailExponents {
  double r = 0.0;
  double g = 0.0;  // signed log power
};

inline TailExponents tail_exponents(const DissipationParams& p) {
  switch (p.family) {
    case DissipationFamily::constant: return {0.0, 0.0};
    case DissipationFamily::pure_power: return {p.r, 0.0};
    case DissipationFamily::power_log_growth: return {p.r, p.gamma};
    case DissipationFamily::power_log_decay: return {p.r, -p.gamma};
  }
  return {};
}

}  // namespace detail

inline EffectivenessReport check_effective(const Dissipation& b, double horizon = 1e4) {
  if (!(horizon >= 1e3)) throw std::invalid_argument("check_effective: horizon must be >= 1e3");
  EffectivenessReport rep;
  rep.horizon = horizon;
  const auto tail = detail::tail_exponents(b.params());

  // positivity and monotonicity on the sampled horizon
  const auto grid = geometric_grid(1e-3, horizon, 200);
  bool positive = b.value(0.0) > 0.0;
  bool up = false, down = false;
  double prev = b.value(0.0);
  for (const double t : grid) {
    const double v = b.value(t);
    if (!(v > 0.0)) positive = false;
    if (v > prev * (1 + 1e-13)) up = true;
    if (v < prev * (1 - 1e-13)) down = true;
    prev = v;
  }
  const bool monotone = positive && !(up && down);

  // t b(t) -> infinity iff the tail exponent of t*b is positive (log power
  // breaks the tie at r = 1)
  const bool tb_diverges = (1.0 - tail.r > 0.0) || (1.0 - tail.r == 0.0 && tail.g > 0.0);
  rep.monotone_tb = monotone && tb_diverges;
  for (const double t : {1.0, horizon / 100, horizon / 10, horizon / 2, horizon})
    rep.tb_witness.emplace_back(t, t * b.value(t));

  // ((1+t)^2 b)^{-1} ~ t^{r-2} (log t)^{-g}
  rep.weight_integrable = (tail.r < 1.0) || (tail.r == 1.0 && tail.g > 1.0);

  // 1/b ~ t^{r} (log t)^{-g}
  rep.inv_b_diverges = (tail.r > -1.0) || (tail.r == -1.0 && tail.g <= 1.0);

  // derivative bounds: worst sampled ratio |b^(k)|(1+t)^k / b, with a
  // no-growth check on the last decade of the horizon
  double a_sup = 0.0;
  for (int k = 1; k <= 3; ++k) {
    double worst = 0.0, worst_tail = 0.0, worst_head = 0.0;
    bool finite = true;
    for (const double t : grid) {
      const double ratio = std::fabs(b.derivative(t, k)) * std::pow(1.0 + t, k) / b.value(t);
      if (!std::isfinite(ratio)) finite = false;
      worst = std::max(worst, ratio);
      (t >= horizon / 10 ? worst_tail : worst_head) = std::max(
          t >= horizon / 10 ? worst_tail : worst_head, ratio);
      if (k == 1) a_sup = std::max(a_sup, t * b.derivative(t, 1) / b.value(t));
    }
    rep.derivative_worst_ratio[k - 1] = worst;
    rep.derivative_bounded[k - 1] = finite && worst_tail <= 1.25 * std::max(worst_head, 1e-12);
  }
  if (a_sup < 1.0) rep.a_witness = a_sup;
  return rep;
}

// ---------------------------------------------------------------------------
// Interplay exponents of the pair (B1, B2)
// ---------------------------------------------------------------------------

struct InterplayEstimate {
  double alpha_hat = 1.0;
  double beta_hat = 1.0;
  double constant = 1.0;     // C realizing both comparison bounds on the horizon
  double residual_trend = 0.0;
  bool log_correction = false;
  double t_min = 0.0, t_max = 0.0;
};

// Fits (1+B1)^{1/alpha} <~ (1+B2) <~ (1+B1)^{beta} on [10, horizon].
// beta_hat is the least-squares slope of log(1+B2) against log(1+B1);
// alpha_hat the reciprocal of the lower-envelope (windowed minimum) slope.
inline InterplayEstimate fit_interplay(const Dissipation& b1, const Dissipation& b2,
                                       double horizon = 1e6) {
  if (!check_effective(b1).pass() || !check_effective(b2).pass())
    throw std::invalid_argument("fit_interplay requires effective dissipation specs");

  const auto ts = geometric_grid(10.0, horizon, 240);
  std::vector<double> x(ts.size()), y(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    x[i] = std::log1p(b1.primitive_from_zero(ts[i]));
    y[i] = std::log1p(b2.primitive_from_zero(ts[i]));
  }

  InterplayEstimate est;
  est.t_min = ts.front();
  est.t_max = ts.back();
  const LineFit full = fit_line(x, y);
  est.beta_hat = full.slope;

  // windowed slopes over the asymptotic (second) half of the sample
  constexpr std::size_t kWindows = 8;
  double lo_slope = full.slope;
  const std::size_t per = ts.size() / kWindows;
  for (std::size_t w = kWindows / 2; w < kWindows; ++w) {
    const std::size_t a = w * per;
    const std::size_t b_ = std::min(ts.size(), a + per + 1);
    std::vector<double> wx(x.begin() + a, x.begin() + b_);
    std::vector<double> wy(y.begin() + a, y.begin() + b_);
    lo_slope = std::min(lo_slope, fit_line(wx, wy).slope);
  }
  est.alpha_hat = 1.0 / lo_slope;

  // reported comparison constant: worst violation of either bound
  double c_needed = 1.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    c_needed = std::max(c_needed, std::exp(x[i] / est.alpha_hat - y[i]));
    c_needed = std::max(c_needed, std::exp(y[i] - est.beta_hat * x[i]));
  }
  est.constant = c_needed;

  // Residual drift against log log t, separated from the power-law part by
  // a bivariate fit y ~ a + s*x + d*z on the most asymptotic quarter of the
  // sample; d recovers the log-correction power and vanishes for pure
  // power-law pairs.
  {
    const std::size_t start = (3 * ts.size()) / 4;
    double Sx = 0, Sz = 0, Sy = 0, Sxx = 0, Sxz = 0, Szz = 0, Sxy = 0, Szy = 0;
    const double N = double(ts.size() - start);
    for (std::size_t i = start; i < ts.size(); ++i) {
      const double z = std::log(std::log(ts[i]));
      Sx += x[i]; Sz += z; Sy += y[i];
      Sxx += x[i] * x[i]; Sxz += x[i] * z; Szz += z * z;
      Sxy += x[i] * y[i]; Szy += z * y[i];
    }
    const double a11 = N, a12 = Sx, a13 = Sz;
    const double a22 = Sxx, a23 = Sxz, a33 = Szz;
    const double det = a11 * (a22 * a33 - a23 * a23) - a12 * (a12 * a33 - a23 * a13) +
                       a13 * (a12 * a23 - a22 * a13);
    if (std::fabs(det) > 1e-12) {
      const double dz = a11 * (a22 * Szy - a23 * Sxy) - a12 * (a12 * Szy - a13 * Sxy) +
                        Sy * (a12 * a23 - a13 * a22);
      est.residual_trend = dz / det;
    }
  }
  est.log_correction = std::fabs(est.residual_trend) > 0.05;
  return est;
}

// ---------------------------------------------------------------------------
// Primitive comparison properties (the two-sided bounds and the weighted
// tail integral used throughout the decay estimates)
// ---------------------------------------------------------------------------

struct PrimitivePropertyReport {
  double p6_constant = 0.0;  // sup B(t,0)/B(t,tau), tau in [0, t/2]
  double p7_constant = 0.0;  // sup B(t,0)/B(tau,0), tau in [t/2, t]
  // sup over t of int_{t/2}^t (1/b)(1+B(t,tau))^{-j/2-l} dtau over
  // (1+B(t,0))^{1-j/2-l} log(1+B(t,0))^l, for (j,l) = (0,0),(1,0),(0,1)
  std::array<double, 3> p8_constants{0, 0, 0};
  double horizon = 0;

  bool finite() const {
    return std::isfinite(p6_constant) && std::isfinite(p7_constant) &&
           std::isfinite(p8_constants[0]) && std::isfinite(p8_constants[1]) &&
           std::isfinite(p8_constants[2]);
  }
};

inline PrimitivePropertyReport check_primitive_properties(const Dissipation& b,
                                                          double horizon = 1e4) {
  if (!check_effective(b, std::max(horizon, 1e3)).pass())
    throw std::invalid_argument("check_primitive_properties requires an effective spec");

  PrimitivePropertyReport rep;
  rep.horizon = horizon;
  const auto ts = geometric_grid(1.0, horizon, 40);
  static constexpr std::array<std::pair<int, int>, 3> kOrders{{{0, 0}, {1, 0}, {0, 1}}};

  for (const double t : ts) {
    const double B_t0 = b.primitive_from_zero(t);
    for (int i = 0; i <= 16; ++i) {
      const double tau_lo = t / 2.0 * double(i) / 16.0;      // [0, t/2]
      const double tau_hi = t / 2.0 + t / 2.0 * double(i) / 16.0;  // [t/2, t]
      const double B_ttau = b.primitive(tau_lo, t);
      if (B_ttau > 0) rep.p6_constant = std::max(rep.p6_constant, B_t0 / B_ttau);
      const double B_tau0 = b.primitive_from_zero(tau_hi);
      if (B_tau0 > 0) rep.p7_constant = std::max(rep.p7_constant, B_t0 / B_tau0);
    }
    for (std::size_t idx = 0; idx < kOrders.size(); ++idx) {
      const auto [j, l] = kOrders[idx];
      const double expo = -0.5 * j - l;
      auto integrand = [&](double tau) {
        return std::pow(1.0 + b.primitive(tau, t), expo) / b.value(tau);
      };
      const double integral = integrate_adaptive(integrand, t / 2.0, t, 1e-10).value;
      const double denom = std::pow(1.0 + B_t0, 1.0 + expo) *
                           std::pow(std::log(1.0 + B_t0), double(l));
      if (denom > 0)
        rep.p8_constants[idx] = std::max(rep.p8_constants[idx], integral / denom);
    }
  }
  return rep;
}

}  // namespace dws
