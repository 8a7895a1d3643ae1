#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace dws {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double r_squared = 1.0;
  std::size_t points = 0;
};

// Ordinary least squares y = a + s*x.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need at least two matched samples");
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0) throw std::invalid_argument("fit_line: degenerate abscissa");
  LineFit f;
  f.points = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += e * e;
  }
  f.r_squared = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  if (n > 2) f.stderr_slope = std::sqrt(ss_res / double(n - 2) / sxx);
  return f;
}

// n log-spaced samples of [a, b], a > 0.
inline std::vector<double> geometric_grid(double a, double b, std::size_t n) {
  if (!(a > 0) || !(b > a) || n < 2) throw std::invalid_argument("geometric_grid: bad range");
  std::vector<double> g(n);
  const double la = std::log(a), lb = std::log(b);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = std::exp(la + (lb - la) * double(i) / double(n - 1));
  g.front() = a;
  g.back() = b;
  return g;
}

}  // namespace dws
