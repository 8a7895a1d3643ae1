#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "dws/norms.hpp"

namespace dws {

// Fixed column order:
// t,B1,B2,L2_u,L2_grad_u,L2_ut,Hs1_u,L2_v,L2_grad_v,L2_vt,Hs2_v,Lm_u,Lm_v
inline void write_trajectory_csv(std::ostream& out, const NormTrajectory& traj, double s1,
                                 double s2) {
  out << "t,B1,B2,L2_u,L2_grad_u,L2_ut,Hs1_u,L2_v,L2_grad_v,L2_vt,Hs2_v,Lm_u,Lm_v\n";
  char buf[64];
  auto emit = [&](double v, char sep) {
    std::snprintf(buf, sizeof(buf), "%.17g%c", v, sep);
    out << buf;
  };
  auto hs_or = [](const NormRecord& r, double s, double fallback) {
    const auto it = r.hs.find(s);
    return it != r.hs.end() ? it->second : fallback;
  };
  for (const auto& s : traj.samples) {
    emit(s.t, ',');
    emit(s.B1, ',');
    emit(s.B2, ',');
    emit(s.u.l2, ',');
    emit(s.u.grad_l2, ',');
    emit(s.u.dt_l2, ',');
    emit(hs_or(s.u, s1, s.u.grad_l2), ',');
    emit(s.v.l2, ',');
    emit(s.v.grad_l2, ',');
    emit(s.v.dt_l2, ',');
    emit(hs_or(s.v, s2, s.v.grad_l2), ',');
    emit(s.u.lm, ',');
    emit(s.v.lm, '\n');
  }
}

}  // namespace dws
