#pragma once

#include <cmath>
#include <stdexcept>

namespace dws {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
inline void gk15(const F& f, double a, double b, double& kronrod, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double gauss = fc * kGaussWeights[3];
  kronrod = fc * kKronrodWeights[7];
  for (int i = 0; i < 7; ++i) {
    const double x = h * kKronrodNodes[i];
    const double fsum = f(c - x) + f(c + x);
    kronrod += fsum * kKronrodWeights[i];
    if (i % 2 == 1) gauss += fsum * kGaussWeights[i / 2];
  }
  kronrod *= h;
  gauss *= h;
  const double diff = std::fabs(kronrod - gauss);
  // QUADPACK-style sharpened estimate
  err = diff;
  if (diff > 0.0) {
    const double scaled = std::pow(200.0 * diff, 1.5);
    if (scaled < diff) err = scaled;
  }
}

template <class F>
inline void integrate_recursive(const F& f, double a, double b, double tol, int depth,
                                QuadratureResult& out) {
  double val, err;
  gk15(f, a, b, val, err);
  out.evaluations += 15;
  if (err <= tol || depth >= 60 || b - a < 1e-14 * (std::fabs(a) + 1.0)) {
    out.value += val;
    out.error_estimate += err;
    return;
  }
  const double mid = 0.5 * (a + b);
  integrate_recursive(f, a, mid, 0.5 * tol, depth + 1, out);
  integrate_recursive(f, mid, b, 0.5 * tol, depth + 1, out);
}

}  // namespace detail

// Adaptive Gauss-Kronrod integration to an absolute tolerance.
template <class F>
QuadratureResult integrate_adaptive(const F& f, double a, double b, double abs_tol = 1e-10) {
  if (b < a) throw std::invalid_argument("integrate_adaptive: b < a");
  QuadratureResult out;
  if (a == b) return out;
  detail::integrate_recursive(f, a, b, abs_tol, 0, out);
  return out;
}

}  // namespace dws
