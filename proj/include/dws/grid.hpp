#pragma once

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace dws {

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

struct GridSpec {
  int dim = 1;              // 1, 2 or 3
  int points_per_axis = 64; // power of two, >= 64
  double half_length = 1.0; // box is [-L, L)^dim, periodic

  GridSpec() = default;
  GridSpec(int dim_, int n_, double L_) : dim(dim_), points_per_axis(n_), half_length(L_) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("grid dimension must be 1, 2 or 3");
    if (points_per_axis < 64 || (points_per_axis & (points_per_axis - 1)) != 0)
      throw std::invalid_argument("points per axis must be a power of two >= 64");
    if (!(half_length > 0)) throw std::invalid_argument("box half-length must be positive");
  }

  std::size_t physical_size() const {
    std::size_t s = 1;
    for (int d = 0; d < dim; ++d) s *= std::size_t(points_per_axis);
    return s;
  }
  std::size_t spectral_size() const {
    std::size_t s = std::size_t(points_per_axis) / 2 + 1;
    for (int d = 1; d < dim; ++d) s *= std::size_t(points_per_axis);
    return s;
  }
  double step() const { return 2.0 * half_length / points_per_axis; }
  double cell_volume() const {
    double v = 1.0;
    for (int d = 0; d < dim; ++d) v *= step();
    return v;
  }
  // physical coordinate along one axis
  double coordinate(int i) const { return -half_length + step() * i; }

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.dim == b.dim && a.points_per_axis == b.points_per_axis &&
           a.half_length == b.half_length;
  }
};

// Discrete (u, u_t, v, v_t) snapshot on the grid.
struct FieldState {
  std::vector<double> u, u_t, v, v_t;
  double time = 0.0;

  static FieldState zero(const GridSpec& g) {
    FieldState s;
    const std::size_t n = g.physical_size();
    s.u.assign(n, 0.0);
    s.u_t.assign(n, 0.0);
    s.v.assign(n, 0.0);
    s.v_t.assign(n, 0.0);
    return s;
  }

  bool finite() const {
    for (const auto* a : {&u, &u_t, &v, &v_t})
      for (const double x : *a)
        if (!std::isfinite(x)) return false;
    return true;
  }

  bool shape_matches(const GridSpec& g) const {
    const std::size_t n = g.physical_size();
    return u.size() == n && u_t.size() == n && v.size() == n && v_t.size() == n;
  }
};

// Wavenumber magnitudes, dealias mask (2/3 rule) and Parseval weights for
// the half-complex layout.
struct SpectralGeometry {
  std::vector<double> k_squared;
  std::vector<std::uint8_t> keep;       // 0 past the dealias cutoff
  std::vector<double> parseval_weight;  // 1 or 2 (conjugate pair counted once)
  double l2_factor = 0.0;               // ||u||_L2^2 = l2_factor * sum w |u_k|^2

  explicit SpectralGeometry(const GridSpec& g) {
    const int n = g.points_per_axis;
    const int nc = n / 2 + 1;
    const int cutoff = n / 3;
    const double k0 = M_PI / g.half_length;
    const std::size_t total = g.spectral_size();
    k_squared.resize(total);
    keep.resize(total);
    parseval_weight.resize(total);
    // ||u||_L2^2 = h^dim sum|u_j|^2 = (h^dim / N^dim) sum_k w_k |u_k|^2
    l2_factor = g.cell_volume() / double(g.physical_size());

    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rest = idx;
      const int ic = int(rest % nc);
      rest /= nc;
      double k2 = 0.0;
      bool ok = ic <= cutoff;
      {
        const double k = k0 * ic;
        k2 += k * k;
      }
      for (int d = 1; d < g.dim; ++d) {
        const int i = int(rest % n);
        rest /= n;
        const int si = i <= n / 2 ? i : i - n;
        ok = ok && std::abs(si) <= cutoff;
        const double k = k0 * si;
        k2 += k * k;
      }
      k_squared[idx] = k2;
      keep[idx] = ok ? 1 : 0;
      parseval_weight[idx] = (ic == 0 || ic == n / 2) ? 1.0 : 2.0;
    }
  }
};

// Real-to-complex transforms for one grid. Plan creation is serialized
// globally; execution uses per-instance buffers, so distinct instances can
// run on distinct threads.
class SpectralWorkspace {
 public:
  explicit SpectralWorkspace(const GridSpec& g) : grid_(g) {
    const std::size_t np = g.physical_size();
    const std::size_t ns = g.spectral_size();
    phys_ = fftw_alloc_real(np);
    spec_ = fftw_alloc_complex(ns);
    int dims[3] = {g.points_per_axis, g.points_per_axis, g.points_per_axis};
    std::lock_guard<std::mutex> lock(plan_mutex());
    fwd_ = fftw_plan_dft_r2c(g.dim, dims, phys_, spec_, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r(g.dim, dims, spec_, phys_, FFTW_ESTIMATE);
    if (!fwd_ || !bwd_) throw std::runtime_error("fftw plan creation failed");
  }

  ~SpectralWorkspace() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(phys_);
    fftw_free(spec_);
  }

  SpectralWorkspace(const SpectralWorkspace&) = delete;
  SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

  const GridSpec& grid() const { return grid_; }

  // physical -> spectral, unnormalized
  void forward(const double* in, std::complex<double>* out) const {
    const std::size_t np = grid_.physical_size();
    std::copy(in, in + np, phys_);
    fftw_execute(fwd_);
    const std::size_t ns = grid_.spectral_size();
    std::copy(reinterpret_cast<std::complex<double>*>(spec_),
              reinterpret_cast<std::complex<double>*>(spec_) + ns, out);
  }

  // spectral -> physical, normalized by N^dim
  void backward(const std::complex<double>* in, double* out) const {
    const std::size_t ns = grid_.spectral_size();
    std::copy(in, in + ns, reinterpret_cast<std::complex<double>*>(spec_));
    fftw_execute(bwd_);
    const std::size_t np = grid_.physical_size();
    const double scale = 1.0 / double(np);
    for (std::size_t i = 0; i < np; ++i) out[i] = phys_[i] * scale;
  }

 private:
  static std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
  }

  GridSpec grid_;
  double* phys_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan fwd_ = nullptr, bwd_ = nullptr;
};

}  // namespace dws
