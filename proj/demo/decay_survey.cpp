// Minimal library walkthrough: build a coefficient pair, check the
// effectiveness conditions, classify a scenario, run a short linear wave
// evolution and fit the observed decay slope against the prediction.

#include <cstdio>

#include "dws/decay.hpp"
#include "dws/solver.hpp"
#include "dws/theorems.hpp"

int main() {
  using namespace dws;

  const auto b1 = Dissipation::pure_power(1.0, 0.5);
  const auto b2 = Dissipation::pure_power(1.0, -0.5);

  const auto eff = check_effective(b1);
  std::printf("b1 effective: %s (a witness %.3f)\n", eff.pass() ? "yes" : "no",
              eff.a_witness.value_or(-1.0));

  const auto interplay = fit_interplay(b1, b2);
  std::printf("fitted interplay: alpha ~ %.3f, beta ~ %.3f\n", interplay.alpha_hat,
              interplay.beta_hat);

  const Scenario scenario(SpaceParams(2, Scalar(Rational(2))),
                          NonlinearityParams(Scalar(Rational(6, 5)), Scalar(Rational(3, 2)),
                                             Scalar(Rational(-1)), Scalar(Rational(-1, 3))),
                          InterplayParams(Scalar(3), Scalar(Rational(1, 3))), Scalar(1),
                          Scalar(1));
  const Verdict verdict = classify(scenario);
  std::printf("theorem: %s, satisfied: %s, ranges: %s; %s\n", theorem_name(verdict.id),
              verdict.satisfied ? "yes" : "no", verdict.admissible_p->str("p").c_str(),
              verdict.admissible_q->str("q").c_str());

  const GridSpec grid(1, 1024, 100.0);
  SystemSpec sys(b1, b2, 2.5, 2.5, -1.0, -1.0 / 3.0, 1e-3, BumpProfile{0.0, 8.0}, false);
  EvolveOptions opts;
  for (double t = 0.5; t <= 80.0; t *= 1.12) opts.output_times.push_back(t);
  const auto run = evolve(sys, grid, 80.0, opts);

  std::vector<std::pair<double, double>> series;
  for (const auto& s : run.trajectory.samples) series.emplace_back(s.t, s.u.grad_l2);
  auto B = [&](double t) { return b1.primitive_from_zero(t); };
  const auto [lo, hi] = default_fit_window(run.trajectory, B);
  const auto fit = fit_decay(series, B, lo, hi);
  std::printf("gradient decay slope %.4f (prediction %.4f)\n", fit.slope,
              predicted_exponent(1, 0, grid.dim, 1.0));
  return 0;
}
