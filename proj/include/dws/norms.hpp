#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "dws/grid.hpp"

namespace dws {

enum class RunStatus { completed, blowup_suspected, stiffness_error };

inline const char* run_status_name(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::blowup_suspected: return "blowup-suspected";
    case RunStatus::stiffness_error: return "stiffness-error";
  }
  return "?";
}

// Norms of one component (field, velocity) at one instant.
struct NormRecord {
  double t = 0.0;
  double l2 = 0.0;       // grid quadrature
  double lm = 0.0;       // L^m, grid quadrature
  double grad_l2 = 0.0;  // |k| multiplier
  double dt_l2 = 0.0;    // L^2 of the velocity field
  std::map<double, double> hs;     // homogeneous |k|^s multiplier norms of the field
  std::map<double, double> hs_dt;  // same multipliers applied to the velocity
};

struct TrajectorySample {
  double t = 0.0;
  double B1 = 0.0, B2 = 0.0;  // primitives of the two clocks at t
  double b1 = 0.0, b2 = 0.0;  // coefficient values at t
  NormRecord u, v;
};

struct NormTrajectory {
  std::vector<TrajectorySample> samples;
  RunStatus status = RunStatus::completed;
  double last_time = 0.0;  // last finite time reached by the integrator
  bool completed() const { return status == RunStatus::completed; }
};

// Norms of a single component from its field and velocity arrays. L^2 and
// L^m come from grid quadrature, gradient and |D|^s norms from Fourier
// multipliers, the velocity norm from the stored velocity field.
inline NormRecord compute_norms(const SpectralWorkspace& ws, const SpectralGeometry& geom,
                                const std::vector<double>& field,
                                const std::vector<double>& velocity, double m,
                                const std::vector<double>& s_orders, double t = 0.0) {
  const GridSpec& g = ws.grid();
  if (field.size() != g.physical_size() || velocity.size() != g.physical_size())
    throw std::invalid_argument("compute_norms: array shape does not match the grid");
  if (!(m >= 1.0 && m <= 2.0)) throw std::invalid_argument("compute_norms: m must be in [1,2]");
  constexpr double kMaxOrder = 32.0;
  for (const double s : s_orders)
    if (s < 0.0 || s > kMaxOrder)
      throw std::invalid_argument("compute_norms: unresolvable Sobolev order");

  NormRecord rec;
  rec.t = t;
  const double dv = g.cell_volume();
  double sum2 = 0.0, summ = 0.0, sumv = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    sum2 += field[i] * field[i];
    summ += std::pow(std::fabs(field[i]), m);
    sumv += velocity[i] * velocity[i];
  }
  rec.l2 = std::sqrt(dv * sum2);
  rec.lm = std::pow(dv * summ, 1.0 / m);
  rec.dt_l2 = std::sqrt(dv * sumv);

  std::vector<std::complex<double>> spec(g.spectral_size());
  ws.forward(field.data(), spec.data());
  double grad2 = 0.0;
  std::vector<double> hs_acc(s_orders.size(), 0.0);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double mag2 = std::norm(spec[k]) * geom.parseval_weight[k];
    grad2 += geom.k_squared[k] * mag2;
    for (std::size_t j = 0; j < s_orders.size(); ++j)
      hs_acc[j] += std::pow(geom.k_squared[k], s_orders[j]) * mag2;
  }
  rec.grad_l2 = std::sqrt(geom.l2_factor * grad2);
  for (std::size_t j = 0; j < s_orders.size(); ++j)
    rec.hs[s_orders[j]] = std::sqrt(geom.l2_factor * hs_acc[j]);

  if (!s_orders.empty()) {
    ws.forward(velocity.data(), spec.data());
    std::vector<double> acc(s_orders.size(), 0.0);
    for (std::size_t k = 0; k < spec.size(); ++k) {
      const double mag2 = std::norm(spec[k]) * geom.parseval_weight[k];
      for (std::size_t j = 0; j < s_orders.size(); ++j)
        acc[j] += std::pow(geom.k_squared[k], s_orders[j]) * mag2;
    }
    for (std::size_t j = 0; j < s_orders.size(); ++j)
      rec.hs_dt[s_orders[j]] = std::sqrt(geom.l2_factor * acc[j]);
  }
  return rec;
}

}  // namespace dws
