#pragma once

// Test-side reference computations, kept independent of the library's own
// numerical paths on purpose.

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracles {

// Composite Simpson rule with fixed panel count.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::size_t panels = 1 << 14) {
  const double h = (b - a) / double(2 * panels);
  double odd = 0.0, even = 0.0;
  for (std::size_t i = 1; i < 2 * panels; i += 2) odd += f(a + h * double(i));
  for (std::size_t i = 2; i < 2 * panels; i += 2) even += f(a + h * double(i));
  return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

// Adaptive Simpson to an absolute tolerance (recursive Richardson form).
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12) {
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, int depth) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (depth > 48 || std::fabs(left + right - whole) < 15.0 * tol)
          return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, flo, flm, fmid, left, depth + 1) +
               rec(mid, hi, fmid, frm, fhi, right, depth + 1);
      };
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return rec(a, b, fa, fm, fb, whole, 0);
}

// d^k/dt^k of mu (1+t)^{-r} log(c+t)^{g}, k = 0..2, by symbolic
// differentiation of the product form.
inline double power_log_derivative(double mu, double r, double g, double c, double t, int k) {
  const double P = std::pow(1.0 + t, -r);
  const double L = std::log(c + t);
  const double Lg = std::pow(L, g);
  if (k == 0) return mu * P * Lg;
  if (k == 1)
    return mu * P * Lg * (-r / (1.0 + t) + g / ((c + t) * L));
  // k == 2
  const double term1 = r * (r + 1.0) * std::pow(1.0 + t, -r - 2.0) * Lg;
  const double term2 = -2.0 * r * g * std::pow(1.0 + t, -r - 1.0) * std::pow(L, g - 1.0) / (c + t);
  const double term3 = g * (g - 1.0) * P * std::pow(L, g - 2.0) / ((c + t) * (c + t));
  const double term4 = -g * P * std::pow(L, g - 1.0) / ((c + t) * (c + t));
  return mu * (term1 + term2 + term3 + term4);
}

}  // namespace oracles
