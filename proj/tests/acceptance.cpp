// Acceptance suite: one line per criterion, every tolerance pinned in code.
// argv: <path-to-cli> <configs-dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "dws/decay.hpp"
#include "dws/dissipation.hpp"
#include "dws/solver.hpp"
#include "dws/theorems.hpp"
#include "oracles.hpp"

namespace {

int g_failures = 0;
std::string g_cli;

void criterion(int number, bool pass, const std::string& label, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", number, label.c_str(),
              detail.c_str());
  if (!pass) ++g_failures;
}

struct CliResult {
  int exit_code = -1;
  std::string output;
  double seconds = 0.0;
};

CliResult run_cli(const std::string& args) {
  const std::string out_file = "acceptance_cli_output.tmp";
  const auto start = std::chrono::steady_clock::now();
  const int status = std::system((g_cli + " " + args + " > " + out_file + " 2>&1").c_str());
  const auto stop = std::chrono::steady_clock::now();
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.seconds = std::chrono::duration<double>(stop - start).count();
  std::ifstream in(out_file);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

// value of `key = ...` inside section [section] of a nested key-value report
double report_value(const std::string& text, const std::string& section,
                    const std::string& key, bool* found = nullptr) {
  if (found) *found = false;
  const auto sec = text.find("[" + section + "]");
  if (sec == std::string::npos) return 0.0;
  const auto end = text.find('[', sec + 1);
  const auto window = text.substr(sec, end == std::string::npos ? end : end - sec);
  const auto pos = window.find(key + " = ");
  if (pos == std::string::npos) return 0.0;
  if (found) *found = true;
  return std::atof(window.c_str() + pos + key.size() + 3);
}

std::string report_string(const std::string& text, const std::string& section,
                          const std::string& key) {
  const auto sec = text.find("[" + section + "]");
  if (sec == std::string::npos) return "";
  const auto end = text.find('[', sec + 1);
  const auto window = text.substr(sec, end == std::string::npos ? end : end - sec);
  const auto pos = window.find(key + " = ");
  if (pos == std::string::npos) return "";
  const auto eol = window.find('\n', pos);
  const auto start = pos + key.size() + 3;
  return window.substr(start, eol - start);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

char g_detail[256];

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <cli-path> <configs-dir>\n");
    return 2;
  }
  g_cli = argv[1];
  const std::string configs = argv[2];
  using namespace dws;

  // 1. power-pair scenario: exact ranges p > 1, q > 13/9 from the CLI
  {
    const auto r = run_cli("check --config " + configs + "/check_power_pair.cfg");
    const bool ok = r.exit_code == 0 && contains(r.output, "p_range = p > 1") &&
                    contains(r.output, "q_range = q > 13/9") && r.seconds < 1.0;
    std::snprintf(g_detail, sizeof(g_detail), "exit %d, %.2f s", r.exit_code, r.seconds);
    criterion(1, ok, "power-pair check emits exact ranges p > 1, q > 13/9", g_detail);
  }

  // 2. log-pair scenario: exact ranges p > 1, q > 7/3
  {
    const auto r = run_cli("check --config " + configs + "/check_power_log_pair.cfg");
    const bool ok = r.exit_code == 0 && contains(r.output, "p_range = p > 1") &&
                    contains(r.output, "q_range = q > 7/3") && r.seconds < 1.0;
    std::snprintf(g_detail, sizeof(g_detail), "exit %d, %.2f s", r.exit_code, r.seconds);
    criterion(2, ok, "log-pair check emits exact ranges p > 1, q > 7/3", g_detail);
  }

  // 3. single-clock reduction: the balance clause equals the classical
  //    two-exponent condition on 10^4 sampled triples
  {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937 rng(20240801);
    long agree = 0;
    const long total = 10000;
    for (long i = 0; i < total; ++i) {
      const int n = 1 + int(rng() % 8);
      std::uniform_real_distribution<double> up(1.0 + 1e-6, 1.0 + 2.0 / n - 1e-9);
      std::uniform_real_distribution<double> uq(1.0 + 2.0 / n + 1e-9, 4.0 + 2.0 / n);
      const double p = up(rng), q = uq(rng);
      const Scenario scn(SpaceParams(n, Scalar(1)),
                         NonlinearityParams(Scalar::from_double(p), Scalar::from_double(q),
                                            Scalar(0), Scalar(0)),
                         InterplayParams(Scalar(1), Scalar(1)), Scalar(1), Scalar(1));
      const Verdict v = check_energy_loss(scn);
      bool clause = false;
      for (const auto& c : v.clauses)
        if (c.name == "balance") clause = c.pass;
      const bool reference = (std::max(p, q) + 1.0) / (p * q - 1.0) < 0.5 * n;
      if (clause == reference) ++agree;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::snprintf(g_detail, sizeof(g_detail), "%ld/%ld agree, %.2f s", agree, total, secs);
    criterion(3, agree == total && secs < 5.0,
              "loss-checker balance clause matches the single-clock condition", g_detail);
  }

  // 4. loss of decay vanishes at the exact threshold, 10^3 random samples
  {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> um(1.0, 2.0), ug(-1.0, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const int n = 1 + int(rng() % 10);
      const double m = um(rng), g1 = ug(rng);
      const SpaceParams sp(n, Scalar::from_double(m));
      const Scalar threshold = fujita_threshold(sp, Scalar::from_double(g1));
      const double kappa = loss_of_decay(sp, Scalar::from_double(g1), threshold).value();
      worst = std::max(worst, std::fabs(kappa));
    }
    std::snprintf(g_detail, sizeof(g_detail), "worst |kappa| = %.3g", worst);
    criterion(4, worst <= 1e-14, "loss of decay vanishes at the Fujita threshold", g_detail);
  }

  // 5. linear decay slope of ||grad u|| within 0.1 of -3/4
  {
    const auto r = run_cli("simulate --config " + configs +
                           "/linear_decay_power.cfg --out acceptance_linear");
    const std::string summary = slurp("acceptance_linear/summary.txt");
    bool found = false;
    const double slope = report_value(summary, "summary.fit.grad_u", "slope", &found);
    const bool ok =
        r.exit_code == 0 && found && std::fabs(slope - (-0.75)) <= 0.1 && r.seconds < 120.0;
    std::snprintf(g_detail, sizeof(g_detail), "slope %.4f vs -0.75, %.1f s", slope, r.seconds);
    criterion(5, ok, "linear 1D run reproduces the gradient decay exponent", g_detail);
  }

  // 6. solver against the closed-form mode oracle at t = 10
  {
    const GridSpec g(1, 64, M_PI);
    auto init = FieldState::zero(g);
    for (std::size_t i = 0; i < init.u.size(); ++i) init.u[i] = std::cos(g.coordinate(int(i)));
    SystemSpec sys(Dissipation::constant(2.0), Dissipation::constant(2.0), 2.0, 2.0, 0.0, 0.0,
                   1.0, BumpProfile{0.0, 1.0}, false);
    const auto res = evolve_from(sys, g, init, 10.0, EvolveOptions{});
    const double want = mode_oracle(2.0, 1.0, 1.0, 0.0, 10.0);
    double err = 0.0;
    for (std::size_t i = 0; i < res.final_state.u.size(); ++i)
      err = std::max(err,
                     std::fabs(res.final_state.u[i] - want * std::cos(g.coordinate(int(i)))));
    const double rel = err / std::fabs(want);
    std::snprintf(g_detail, sizeof(g_detail), "relative error %.3g", rel);
    criterion(6, res.status == RunStatus::completed && rel <= 1e-6,
              "single-mode run matches the oracle at t = 10", g_detail);
  }

  // 7. primitives against an independent Simpson oracle, all three families
  {
    const Dissipation specs[] = {Dissipation::pure_power(2.0, 0.5),
                                 Dissipation::power_log_growth(1.0, 0.25, 1.0),
                                 Dissipation::power_log_decay(1.0, -0.25, 1.5)};
    double worst = 0.0;
    for (const auto& b : specs) {
      for (const double t : {0.5, 1.0, 10.0, 100.0, 1000.0, 10000.0}) {
        const double ref = oracles::adaptive_simpson(
            [&](double s) { return 1.0 / b.value(s); }, 0.0, t, 1e-13);
        worst = std::max(worst, std::fabs(b.primitive_from_zero(t) - ref) / ref);
      }
    }
    std::snprintf(g_detail, sizeof(g_detail), "worst relative error %.3g", worst);
    criterion(7, worst <= 1e-8, "primitive B agrees with quadrature for all families", g_detail);
  }

  // 8. tail-comparison constants finite, and stable under each doubling of
  //    the horizon across [1e3, 1e4]
  {
    bool ok = true;
    double worst_change = 0.0;
    for (const auto& b : {Dissipation::constant(1.0), Dissipation::pure_power(1.0, 0.5),
                          Dissipation::pure_power(1.0, -0.5)}) {
      auto prev = check_primitive_properties(b, 1e3);
      ok = ok && prev.finite();
      for (const double horizon : {2e3, 4e3, 8e3, 1e4}) {
        const auto cur = check_primitive_properties(b, horizon);
        ok = ok && cur.finite();
        const double pairs[5][2] = {{prev.p6_constant, cur.p6_constant},
                                    {prev.p7_constant, cur.p7_constant},
                                    {prev.p8_constants[0], cur.p8_constants[0]},
                                    {prev.p8_constants[1], cur.p8_constants[1]},
                                    {prev.p8_constants[2], cur.p8_constants[2]}};
        for (const auto& pr : pairs) {
          const double change = std::fabs(pr[1] - pr[0]) / std::max(pr[0], 1e-30);
          worst_change = std::max(worst_change, change);
          ok = ok && change < 0.05;
        }
        prev = cur;
      }
    }
    std::snprintf(g_detail, sizeof(g_detail), "worst relative change per doubling %.3g",
                  worst_change);
    criterion(8, ok, "comparison constants stable under horizon doubling", g_detail);
  }

  // 9. supercritical nonlinear run stays within a decade of the linear envelope
  {
    const auto r = run_cli("simulate --config " + configs +
                           "/nonlinear_power_pair.cfg --out acceptance_nonlinear");
    const std::string summary = slurp("acceptance_nonlinear/summary.txt");
    const bool pass_u = report_string(summary, "summary.envelope.u", "pass") == "true";
    const bool pass_v = report_string(summary, "summary.envelope.v", "pass") == "true";
    bool found = false;
    const double ratio = report_value(summary, "summary.envelope.u", "max_ratio", &found);
    const bool ok = r.exit_code == 0 && pass_u && pass_v && found;
    std::snprintf(g_detail, sizeof(g_detail), "exit %d, u max ratio %.3g, %.1f s", r.exit_code,
                  ratio, r.seconds);
    criterion(9, ok, "nonlinear run stays within the linear decay envelope", g_detail);
  }

  // 10. linearity scaling and zero-data trajectory
  {
    const GridSpec g(1, 128, 10.0);
    SystemSpec sys(Dissipation::constant(1.0), Dissipation::constant(1.0), 2.0, 2.0, 0.0, 0.0,
                   0.4, BumpProfile{0.0, 2.0}, false);
    EvolveOptions opts;
    opts.output_times = {1.0, 3.0, 5.0};
    const auto a = evolve(sys, g, 5.0, opts);
    sys.epsilon = 0.8;
    const auto b = evolve(sys, g, 5.0, opts);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.trajectory.samples.size(); ++i) {
      const auto rel = [&](double two_x, double x) {
        return x == 0.0 ? std::fabs(two_x) : std::fabs(two_x - 2.0 * x) / std::fabs(2.0 * x);
      };
      worst = std::max({worst,
                        rel(b.trajectory.samples[i].u.l2, a.trajectory.samples[i].u.l2),
                        rel(b.trajectory.samples[i].u.grad_l2, a.trajectory.samples[i].u.grad_l2),
                        rel(b.trajectory.samples[i].v.lm, a.trajectory.samples[i].v.lm)});
    }
    sys.epsilon = 0.0;
    sys.nonlinear = true;
    const auto z = evolve(sys, g, 5.0, opts);
    bool zero_ok = z.status == RunStatus::completed;
    for (const auto& s : z.trajectory.samples)
      zero_ok = zero_ok && s.u.l2 == 0.0 && s.v.l2 == 0.0 && s.u.dt_l2 == 0.0;
    std::snprintf(g_detail, sizeof(g_detail), "worst scaling error %.3g, zero trajectory %s",
                  worst, zero_ok ? "exact" : "violated");
    criterion(10, worst <= 1e-10 && zero_ok, "linearity scaling and zero-data properties",
              g_detail);
  }

  std::printf("%s\n",
              g_failures == 0 ? "acceptance: all criteria passed"
                              : "acceptance: criteria failed");
  return g_failures == 0 ? 0 : 1;
}
