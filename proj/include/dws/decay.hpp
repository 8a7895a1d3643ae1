#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dws/fitting.hpp"
#include "dws/norms.hpp"
#include "dws/theorems.hpp"

namespace dws {

// Predicted power of (1 + B(t,0)) for the norm of order `order` spatial and
// l time derivatives; kappa shifts the whole envelope (loss of decay).
inline double predicted_exponent(double order, int l, int n, double m, double kappa = 0.0) {
  return -0.5 * n * (1.0 / m - 0.5) - 0.5 * order - double(l) + kappa;
}

// ---------------------------------------------------------------------------
// Decay-slope fitting
// ---------------------------------------------------------------------------

struct DecayFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
  double r_squared = 1.0;
  double t_min = 0.0, t_max = 0.0;
  std::size_t points = 0;
};

// Least squares of log(value) against log(1 + B(t,0)) over [t_min, t_max].
inline DecayFit fit_decay(const std::vector<std::pair<double, double>>& series,
                          const std::function<double(double)>& B_of_t, double t_min,
                          double t_max) {
  std::vector<double> x, y;
  for (const auto& [t, value] : series) {
    if (t < t_min || t > t_max) continue;
    if (!(value > 0.0))
      throw std::invalid_argument(
          "fit_decay: nonpositive value in the window (divergence or underflow?)");
    x.push_back(std::log1p(B_of_t(t)));
    y.push_back(std::log(value));
  }
  if (x.size() < 8)
    throw std::invalid_argument("fit_decay: need at least 8 samples in the window");
  const LineFit f = fit_line(x, y);
  DecayFit out;
  out.slope = f.slope;
  out.stderr_slope = f.stderr_slope;
  out.r_squared = f.r_squared;
  out.t_min = t_min;
  out.t_max = t_max;
  out.points = x.size();
  return out;
}

// Default window: skip the initial transient (first tenth of the samples),
// then keep the last decade of log(1 + B).
inline std::pair<double, double> default_fit_window(const NormTrajectory& traj,
                                                    const std::function<double(double)>& B_of_t) {
  if (traj.samples.size() < 2) throw std::invalid_argument("trajectory too short for a window");
  const std::size_t skip = traj.samples.size() / 10;
  const double t_last = traj.samples.back().t;
  const double x_last = std::log1p(B_of_t(t_last));
  double t_min = traj.samples[skip].t;
  for (std::size_t i = skip; i < traj.samples.size(); ++i) {
    if (std::log1p(B_of_t(traj.samples[i].t)) >= x_last - std::log(10.0)) {
      t_min = traj.samples[i].t;
      break;
    }
  }
  return {t_min, t_last};
}

// value accessor for one envelope entry applied to a component record
inline double norm_for_entry(const NormRecord& rec, const EnvelopeEntry& entry,
                             bool* available = nullptr) {
  if (available) *available = true;
  const double order = entry.order.value();
  if (entry.l == 0) {
    if (order == 0.0) return rec.l2;
    if (order == 1.0) return rec.grad_l2;
    const auto it = rec.hs.find(order);
    if (it != rec.hs.end()) return it->second;
  } else if (entry.l == 1) {
    if (order == 0.0) return rec.dt_l2;
    const auto it = rec.hs_dt.find(order);
    if (it != rec.hs_dt.end()) return it->second;
  }
  if (available) *available = false;
  return 0.0;
}

// ---------------------------------------------------------------------------
// Envelope verification
// ---------------------------------------------------------------------------

struct EnvelopeCheckReport {
  bool pass = true;
  double max_ratio = 0.0;
  double worst_t = 0.0;
  std::string worst_norm;
  double c_max = 10.0;
  double data_scale = 1.0;
  std::size_t entries_checked = 0;
  std::size_t entries_skipped = 0;  // norms not recorded in the trajectory
};

// The theorem scale ||(u0,u1)||_A + ||(v0,v1)||_A read off the first sample.
inline double data_scale_from_sample(const TrajectorySample& s0) {
  auto one = [](const NormRecord& r) {
    return std::sqrt(r.l2 * r.l2 + r.grad_l2 * r.grad_l2) + r.lm + r.dt_l2;
  };
  return one(s0.u) + one(s0.v);
}

// Checks every sampled norm against C_max * scale * b(t)^{-l} (1+B)^{exponent}.
inline EnvelopeCheckReport envelope_check(const NormTrajectory& traj,
                                          const DecayEnvelope& envelope, char side,
                                          double data_scale, double c_max = 10.0) {
  if (traj.samples.empty()) throw std::invalid_argument("envelope_check: empty trajectory");
  EnvelopeCheckReport rep;
  rep.c_max = c_max;
  rep.data_scale = data_scale;
  for (const auto& sample : traj.samples) {
    const NormRecord& rec = side == 'v' ? sample.v : sample.u;
    const double B = side == 'v' ? sample.B2 : sample.B1;
    const double b = side == 'v' ? sample.b2 : sample.b1;
    for (const auto& entry : envelope.entries) {
      bool available = false;
      const double measured = norm_for_entry(rec, entry, &available);
      if (!available) {
        ++rep.entries_skipped;
        continue;
      }
      ++rep.entries_checked;
      if (measured == 0.0) continue;  // ratio zero
      const double value = data_scale * std::pow(b, -double(entry.l)) *
                           std::pow(1.0 + B, entry.exponent.value());
      const double ratio = value > 0.0 ? measured / value
                                       : std::numeric_limits<double>::infinity();
      if (ratio > rep.max_ratio) {
        rep.max_ratio = ratio;
        rep.worst_t = sample.t;
        rep.worst_norm = entry.norm_label;
      }
    }
  }
  rep.pass = rep.max_ratio <= c_max;
  return rep;
}

// ---------------------------------------------------------------------------
// Weighted solution-space norms
// ---------------------------------------------------------------------------

struct WeightedSupNorm {
  double value = 0.0;
  std::vector<double> running;  // running sup after each sample
};

// Running sup over samples of the solution-space weight. In the energy
// class (s_order = 0):
//   (1+B)^{A-kappa} ||w|| + (1+B)^{A+1/2-kappa} ||grad w||
//     + b(t) (1+B)^{A+1-kappa} ||w_t||,
// with A = (n/2)(1/m - 1/2). For higher regularity s_order > 1 the
// displayed norm replaces the gradient term by the |D|^s field term and the
// |D|^{s-1} velocity term (their records must be present in the trajectory).
inline WeightedSupNorm weighted_sup_norm(const NormTrajectory& traj, char side, int n, double m,
                                         double kappa = 0.0, double s_order = 0.0) {
  if (traj.samples.empty()) throw std::invalid_argument("weighted_sup_norm: empty trajectory");
  const double A = 0.5 * n * (1.0 / m - 0.5);
  WeightedSupNorm out;
  double sup = 0.0;
  for (const auto& sample : traj.samples) {
    const NormRecord& rec = side == 'v' ? sample.v : sample.u;
    const double B = side == 'v' ? sample.B2 : sample.B1;
    const double b = side == 'v' ? sample.b2 : sample.b1;
    const double w = 1.0 + B;
    double val = std::pow(w, A - kappa) * rec.l2 +
                 b * std::pow(w, A + 1.0 - kappa) * rec.dt_l2;
    if (s_order > 0.0) {
      const auto hs = rec.hs.find(s_order);
      if (hs != rec.hs.end()) val += std::pow(w, A + 0.5 * s_order - kappa) * hs->second;
      const auto hsdt = rec.hs_dt.find(s_order - 1.0);
      if (hsdt != rec.hs_dt.end())
        val += b * std::pow(w, A + 0.5 * (s_order - 1.0) + 1.0 - kappa) * hsdt->second;
    } else {
      val += std::pow(w, A + 0.5 - kappa) * rec.grad_l2;
    }
    sup = std::max(sup, val);
    out.running.push_back(sup);
  }
  out.value = sup;
  return out;
}

}  // namespace dws
