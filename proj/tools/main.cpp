// Command-line front end: theorem checking, admissible-range tables,
// pseudo-spectral simulation runs, the built-in oracle suite, and interplay
// fitting. Exit codes: 0 satisfied/ok, 1 violated or oracle failure,
// 2 configuration or internal error, 3 suspected blow-up.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dws/config.hpp"
#include "dws/decay.hpp"
#include "dws/dissipation.hpp"
#include "dws/report.hpp"
#include "dws/setup.hpp"
#include "dws/solver.hpp"
#include "dws/theorems.hpp"
#include "dws/trajectory_io.hpp"

namespace {

using namespace dws;

constexpr int kExitSatisfied = 0;
constexpr int kExitViolated = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBlowUp = 3;

Verdict run_checker(const Scenario& scn, const std::string& which) {
  if (which == "auto") return classify(scn);
  if (which == "energy") return check_energy(scn);
  if (which == "energy-loss") return check_energy_loss(scn);
  if (which == "sobolev") return check_sobolev(scn);
  if (which == "large-data") return check_large(scn);
  throw ConfigError("checks.theorem: unknown checker '" + which + "'");
}

void write_output(const std::string& out_dir, const std::string& name,
                  const std::string& content) {
  if (out_dir.empty()) return;
  std::filesystem::create_directories(out_dir);
  std::ofstream f(std::filesystem::path(out_dir) / name);
  f << content;
}

// ---------------------------------------------------------------------------

int cmd_check(const std::string& config_path, const std::string& out_dir) {
  const Config cfg = Config::parse_file(config_path);
  cfg.validate(run_config_schema());
  const auto built = scenario_from_config(cfg);
  Verdict verdict = run_checker(built.scenario, cfg.get_string("checks", "theorem", "auto"));
  if (built.fitted && built.scenario.source == InterplaySource::user_supplied)
    attach_interplay_provenance(verdict, built.scenario.interplay, *built.fitted);

  ReportWriter w;
  write_verdict(w, verdict);
  w.section("interplay");
  w.kv("alpha", built.scenario.interplay.alpha);
  w.kv("beta", built.scenario.interplay.beta);
  w.kv("source", built.scenario.source == InterplaySource::fitted ? "fitted" : "user-supplied");
  if (built.fitted) {
    w.kv("fitted_alpha", built.fitted->alpha_hat);
    w.kv("fitted_beta", built.fitted->beta_hat);
    w.kv("fitted_log_correction", built.fitted->log_correction);
  }
  std::cout << w.str();
  write_output(out_dir, "verdict.txt", w.str());
  return verdict.satisfied ? kExitSatisfied : kExitViolated;
}

// ---------------------------------------------------------------------------

int cmd_table(const std::vector<std::string>& betas, const std::vector<std::string>& gammas,
              int n, const std::string& m_text, bool csv, const std::string& out_dir) {
  const auto m = parse_scalar(m_text);
  if (!m) throw ConfigError("--m: not a number: " + m_text);
  const SpaceParams space(n, *m);

  std::ostringstream out;
  if (csv)
    out << "beta,gamma1,regime,p_lower\n";
  else
    out << "admissible lower bounds for p  (n = " << n << ", m = " << m->str() << ")\n";
  for (const auto& bt : betas) {
    for (const auto& gt : gammas) {
      const auto beta = parse_scalar(bt);
      const auto gamma = parse_scalar(gt);
      if (!beta || !gamma) throw ConfigError("table: not a number: " + bt + " / " + gt);
      const Scalar threshold = *beta >= Scalar(1)
                                   ? Scalar(-1) + Scalar(n) * *beta / Scalar(2)
                                   : Scalar(-1) + Scalar(n) / Scalar(2);
      const std::string regime = std::string(*beta >= Scalar(1) ? "beta>=1" : "beta<1") +
                                 (*gamma >= threshold ? " and gamma1 above row threshold"
                                                      : " and gamma1 below row threshold");
      const Scalar bound = admissible_lower_bound(*beta, *gamma, space);
      if (csv)
        out << beta->str() << "," << gamma->str() << "," << regime << "," << bound.str() << "\n";
      else
        out << "  beta = " << beta->str() << ", gamma1 = " << gamma->str() << "  [" << regime
            << "]  ->  p > " << bound.str() << "\n";
    }
  }
  std::cout << out.str();
  write_output(out_dir, "table.csv", out.str());
  return kExitSatisfied;
}

// ---------------------------------------------------------------------------

std::vector<double> output_times_from_config(const Config& cfg, double t_end) {
  const long count = cfg.get_int("run", "outputs", 120);
  if (count < 2) throw ConfigError("run.outputs must be at least 2");
  const std::string spacing = cfg.get_string("run", "output_spacing", "geometric");
  const double start = cfg.get_double("run", "output_start", std::min(0.5, t_end / 100.0));
  std::vector<double> times{0.0};
  if (spacing == "linear") {
    for (long i = 1; i <= count; ++i) times.push_back(t_end * double(i) / double(count));
  } else if (spacing == "geometric") {
    if (!(start > 0.0) || start >= t_end)
      throw ConfigError("run.output_start must lie in (0, t_end)");
    for (long i = 0; i < count; ++i)
      times.push_back(start * std::pow(t_end / start, double(i) / double(count - 1)));
    times.back() = t_end;
  } else {
    throw ConfigError("run.output_spacing: expected linear or geometric");
  }
  return times;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir, long seed_flag) {
  const Config cfg = Config::parse_file(config_path);
  cfg.validate(run_config_schema());
  for (const char* s : {"dissipation.b1", "dissipation.b2", "scenario", "grid", "run"})
    if (!cfg.has_section(s)) throw ConfigError(std::string("missing section [") + s + "]");

  const GridSpec grid(int(cfg.get_int("grid", "dim", 1)), int(cfg.get_int("grid", "points")),
                      cfg.get_double("grid", "half_length"));
  const auto b1 = dissipation_from_config(cfg, "dissipation.b1");
  const auto b2 = dissipation_from_config(cfg, "dissipation.b2");
  SystemSpec sys(b1, b2, cfg.get_double("scenario", "p"), cfg.get_double("scenario", "q"),
                 cfg.get_double("scenario", "gamma1", 0.0),
                 cfg.get_double("scenario", "gamma2", 0.0), cfg.get_double("run", "epsilon"),
                 BumpProfile{cfg.get_double("run", "profile_center", 0.0),
                             cfg.get_double("run", "profile_width")},
                 cfg.get_bool("run", "nonlinear", true));
  sys.signed_form = cfg.get_bool("run", "signed_form", false);
  sys.velocity_data = cfg.get_bool("run", "velocity_data", false);
  const double t_end = cfg.get_double("run", "t_end");
  const long seed = seed_flag >= 0 ? seed_flag : cfg.get_int("run", "seed", 0);

  EvolveOptions opts;
  opts.output_times = output_times_from_config(cfg, t_end);
  opts.rtol = cfg.get_double("checks", "rtol", 1e-8);
  opts.m = cfg.get_double("scenario", "m", 1.0);
  const double s1 = cfg.get_double("scenario", "s1", 1.0);
  const double s2 = cfg.get_double("scenario", "s2", 1.0);
  opts.s_orders = {s1, s2};

  const auto res = evolve(sys, grid, t_end, opts);

  std::ostringstream csv;
  write_trajectory_csv(csv, res.trajectory, s1, s2);
  write_output(out_dir.empty() ? "." : out_dir, "trajectory.csv", csv.str());
  save_checkpoint((std::filesystem::path(out_dir.empty() ? "." : out_dir) / "state.ckpt")
                      .string(),
                  grid, res.final_state);

  ReportWriter w;
  w.section("summary");
  w.kv("config", config_path);
  w.kv("status", run_status_name(res.status));
  w.kv("last_time", res.last_time);
  w.kv("t_end", t_end);
  w.kv("epsilon", sys.epsilon);
  w.kv("seed", seed);
  w.kv("samples", long(res.trajectory.samples.size()));

  // theorem classification and predicted envelopes
  std::optional<Verdict> verdict;
  try {
    const auto built = scenario_from_config(cfg);
    verdict = run_checker(built.scenario, cfg.get_string("checks", "theorem", "auto"));
    if (built.fitted && built.scenario.source == InterplaySource::user_supplied)
      attach_interplay_provenance(*verdict, built.scenario.interplay, *built.fitted);
    w.section("summary.theorem");
    w.kv("theorem", theorem_name(verdict->id));
    w.kv("satisfied", verdict->satisfied);
    if (built.scenario.space.n != grid.dim)
      w.kv("note", "scenario judged for n = " + std::to_string(built.scenario.space.n) +
                       "; simulation runs in dim = " + std::to_string(grid.dim));
  } catch (const std::exception& e) {
    w.section("summary.theorem");
    w.kv("note", std::string("classification unavailable: ") + e.what());
  }

  if (res.status == RunStatus::completed && res.trajectory.samples.size() >= 2) {
    const double m = opts.m;
    const int dim = grid.dim;
    const std::function<double(double)> B1 = [&](double t) {
      return b1.primitive_from_zero(t);
    };
    const std::function<double(double)> B2 = [&](double t) {
      return b2.primitive_from_zero(t);
    };
    const bool full_window = cfg.get_string("checks", "fit_window", "last-decade") == "full";

    struct FitSpec {
      const char* label;
      char side;
      double order;
      int l;
    };
    const FitSpec fits[] = {{"L2_u", 'u', 0, 0},   {"grad_u", 'u', 1, 0}, {"dt_u", 'u', 0, 1},
                            {"L2_v", 'v', 0, 0},   {"grad_v", 'v', 1, 0}, {"dt_v", 'v', 0, 1}};
    std::ostringstream fits_csv;
    fits_csv << "norm,slope,stderr,predicted,difference,window_t_min,window_t_max,points\n";
    for (const auto& fs : fits) {
      std::vector<std::pair<double, double>> series;
      for (const auto& s : res.trajectory.samples) {
        const NormRecord& rec = fs.side == 'v' ? s.v : s.u;
        const double val = fs.l == 1 ? rec.dt_l2 : (fs.order == 1 ? rec.grad_l2 : rec.l2);
        series.emplace_back(s.t, val);
      }
      const auto& B = fs.side == 'v' ? B2 : B1;
      w.section(std::string("summary.fit.") + fs.label);
      try {
        double lo, hi;
        if (full_window) {
          lo = res.trajectory.samples.front().t;
          hi = res.trajectory.samples.back().t;
        } else {
          std::tie(lo, hi) = default_fit_window(res.trajectory, B);
        }
        const auto fit = fit_decay(series, B, lo, hi);
        const double predicted = predicted_exponent(fs.order, fs.l, dim, m);
        w.kv("slope", fit.slope);
        w.kv("stderr", fit.stderr_slope);
        w.kv("predicted", predicted);
        w.kv("difference", fit.slope - predicted);
        w.kv("window_t_min", fit.t_min);
        w.kv("window_t_max", fit.t_max);
        w.kv("points", long(fit.points));
        char row[256];
        std::snprintf(row, sizeof(row), "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%zu\n",
                      fs.label, fit.slope, fit.stderr_slope, predicted, fit.slope - predicted,
                      fit.t_min, fit.t_max, fit.points);
        fits_csv << row;
      } catch (const std::exception& e) {
        w.kv("skipped", e.what());
      }
    }
    write_output(out_dir.empty() ? "." : out_dir, "fits.csv", fits_csv.str());

    if (verdict) {
      const double c_max = cfg.get_double("checks", "c_max", 10.0);
      const double scale = data_scale_from_sample(res.trajectory.samples.front());
      for (const char side : {'u', 'v'}) {
        const auto& env = side == 'u' ? verdict->envelope_u : verdict->envelope_v;
        w.section(std::string("summary.envelope.") + side);
        if (!verdict->satisfied)
          w.kv("note", "theorem clauses not satisfied; envelope is not predictive here");
        try {
          const auto rep = envelope_check(res.trajectory, env, side, scale, c_max);
          w.kv("pass", rep.pass);
          w.kv("max_ratio", rep.max_ratio);
          w.kv("worst_t", rep.worst_t);
          w.kv("worst_norm", rep.worst_norm.empty() ? "-" : rep.worst_norm);
          w.kv("c_max", rep.c_max);
          w.kv("data_scale", rep.data_scale);
          w.kv("entries_checked", long(rep.entries_checked));
        } catch (const std::exception& e) {
          w.kv("skipped", e.what());
        }
      }
    }
  } else if (res.status != RunStatus::completed) {
    w.section("summary.failure");
    w.kv("status", run_status_name(res.status));
    w.kv("last_finite_time", res.last_time);
  }

  std::cout << w.str();
  write_output(out_dir.empty() ? "." : out_dir, "summary.txt", w.str());

  if (res.status == RunStatus::blowup_suspected) return kExitBlowUp;
  if (res.status == RunStatus::stiffness_error) return kExitConfig;
  return kExitSatisfied;
}

// ---------------------------------------------------------------------------

int cmd_verify(const std::string& config_path, double tolerance_flag) {
  Config cfg;
  if (!config_path.empty()) {
    cfg = Config::parse_file(config_path);
    cfg.validate(run_config_schema());
  }
  const double rtol = tolerance_flag > 0 ? tolerance_flag
                                         : cfg.get_double("checks", "rtol", 1e-8);
  const double pass_tol = cfg.get_double("checks", "tolerance", 1e-6);
  int failures = 0;
  auto item = [&](const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %s: %s\n", ok ? "ok" : "FAIL", name.c_str(), detail.c_str());
    if (!ok) ++failures;
  };
  char detail[256];

  {  // single-mode solver against the closed-form oracle
    const GridSpec g(1, 64, M_PI);
    auto init = FieldState::zero(g);
    for (std::size_t i = 0; i < init.u.size(); ++i) init.u[i] = std::cos(g.coordinate(int(i)));
    SystemSpec sys(Dissipation::constant(2.0), Dissipation::constant(2.0), 2.0, 2.0, 0.0, 0.0,
                   1.0, BumpProfile{0.0, 1.0}, false);
    EvolveOptions opts;
    opts.rtol = rtol;
    const auto res = evolve_from(sys, g, init, 10.0, opts);
    const double want = mode_oracle(2.0, 1.0, 1.0, 0.0, 10.0);
    double err = 0.0;
    for (std::size_t i = 0; i < res.final_state.u.size(); ++i)
      err = std::max(err,
                     std::fabs(res.final_state.u[i] - want * std::cos(g.coordinate(int(i)))));
    const double rel = err / std::fabs(want);
    std::snprintf(detail, sizeof(detail), "relative error %.3g (tolerance %.3g, rtol %.3g)",
                  rel, pass_tol, rtol);
    item("mode-oracle", res.status == RunStatus::completed && rel <= pass_tol, detail);
  }

  {  // primitives: closed forms / cached quadrature vs one-shot quadrature
    const Dissipation specs[] = {Dissipation::pure_power(1.0, 0.5),
                                 Dissipation::power_log_growth(1.0, 0.0, 1.0),
                                 Dissipation::power_log_decay(1.0, 0.5, 1.0)};
    for (const auto& b : specs) {
      double worst = 0.0;
      for (double t = 1.0; t <= 1e4; t *= 2.0) {
        const double ref =
            integrate_adaptive([&](double s) { return 1.0 / b.value(s); }, 0.0, t, 1e-13).value;
        worst = std::max(worst, std::fabs(b.primitive_from_zero(t) - ref) / ref);
      }
      std::snprintf(detail, sizeof(detail), "%s: worst relative error %.3g",
                    b.describe().c_str(), worst);
      item("primitive-quadrature", worst <= 1e-8, detail);
    }
  }

  {  // primitive comparison properties
    Dissipation b = Dissipation::constant(1.0);
    if (!config_path.empty() && cfg.has_section("dissipation.b1"))
      b = dissipation_from_config(cfg, "dissipation.b1");
    const auto rep = check_primitive_properties(b, 1e4);
    const bool constant = b.params().family == DissipationFamily::constant;
    bool ok = rep.finite();
    if (constant)
      ok = ok && std::fabs(rep.p6_constant - 2.0) < 1e-9 &&
           std::fabs(rep.p7_constant - 2.0) < 1e-9 && rep.p8_constants[2] <= 1.0 + 1e-9;
    std::snprintf(detail, sizeof(detail),
                  "%s: two-sided constants %.6g / %.6g, tail constants %.3g %.3g %.3g",
                  b.describe().c_str(), rep.p6_constant, rep.p7_constant, rep.p8_constants[0],
                  rep.p8_constants[1], rep.p8_constants[2]);
    item("primitive-properties", ok, detail);
  }

  {  // parameter-family estimates: measured norms against their envelopes
    const GridSpec g(1, 128, 40.0);
    const auto bump = make_initial_data(g, {0.0, 4.0}, 1.0);
    const Dissipation b = Dissipation::constant(2.0);
    const double tau = 1.0;
    EvolveOptions opts;
    opts.rtol = rtol;
    for (double t = tau; t <= 30.0; t += 1.0) opts.output_times.push_back(t);
    const auto res = duhamel_run(b, tau, bump.u, g, opts);
    SpectralWorkspace ws(g);
    SpectralGeometry geom(g);
    const auto v1 = compute_norms(ws, geom, bump.u, bump.u, 1.0, {});
    const double data = v1.l2 + v1.lm;
    const double A = 0.5 * 1 * (1.0 / 1.0 - 0.5);
    double sup0 = 0.0, sup1 = 0.0;
    for (const auto& s : res.trajectory.samples) {
      const double env0 = (1.0 / b.value(tau)) * std::pow(1.0 + s.B1, -A) * data;
      const double env1 =
          (1.0 / b.value(tau)) * (1.0 / b.value(s.t)) * std::pow(1.0 + s.B1, -A - 1.0) * data;
      sup0 = std::max(sup0, s.u.l2 / env0);
      sup1 = std::max(sup1, s.u.dt_l2 / env1);
    }
    std::snprintf(detail, sizeof(detail), "sup ratios %.3g (value), %.3g (velocity)", sup0,
                  sup1);
    item("duhamel-envelope", res.status == RunStatus::completed && std::isfinite(sup0) &&
                                 sup0 <= 10.0 && std::isfinite(sup1) && sup1 <= 10.0,
         detail);
  }

  std::printf("%s\n", failures == 0 ? "verify: all items passed" : "verify: failures detected");
  return failures == 0 ? kExitSatisfied : kExitViolated;
}

// ---------------------------------------------------------------------------

int cmd_fit(const std::string& config_path, double horizon) {
  const Config cfg = Config::parse_file(config_path);
  cfg.validate(run_config_schema());
  for (const char* s : {"dissipation.b1", "dissipation.b2"})
    if (!cfg.has_section(s)) throw ConfigError(std::string("missing section [") + s + "]");
  const auto b1 = dissipation_from_config(cfg, "dissipation.b1");
  const auto b2 = dissipation_from_config(cfg, "dissipation.b2");
  if (horizon <= 0) horizon = cfg.get_double("checks", "fit_horizon", 1e6);
  const auto est = fit_interplay(b1, b2, horizon);

  ReportWriter w;
  write_dissipation(w, "dissipation.b1", b1);
  write_dissipation(w, "dissipation.b2", b2);
  w.section("interplay");
  w.kv("alpha_hat", est.alpha_hat);
  w.kv("beta_hat", est.beta_hat);
  w.kv("comparison_constant", est.constant);
  w.kv("log_correction", est.log_correction);
  w.kv("residual_trend", est.residual_trend);
  w.kv("t_min", est.t_min);
  w.kv("t_max", est.t_max);
  std::cout << w.str();
  return kExitSatisfied;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toolkit for weakly coupled effectively damped wave systems"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  long seed = -1;
  double tolerance = -1.0, horizon = -1.0;
  bool csv = false;
  std::vector<std::string> betas, gammas;
  int n = 1;
  std::string m_text = "1";

  auto* check = app.add_subcommand("check", "evaluate theorem applicability for a scenario");
  check->add_option("--config", config_path, "run configuration file")->required();
  check->add_option("--out", out_dir, "directory for the verdict report");

  auto* table = app.add_subcommand("table", "admissible-range table rows");
  table->add_option("--beta", betas, "interplay exponents (comma separated)")
      ->required()
      ->delimiter(',');
  table->add_option("--gamma1", gammas, "weight powers (comma separated)")
      ->required()
      ->delimiter(',');
  table->add_option("--n", n, "space dimension")->required();
  table->add_option("--m", m_text, "regularity index");
  table->add_flag("--csv", csv, "emit CSV instead of text");
  table->add_option("--out", out_dir, "directory for the table file");

  auto* simulate = app.add_subcommand("simulate", "evolve the coupled system and analyse decay");
  simulate->add_option("--config", config_path, "run configuration file")->required();
  simulate->add_option("--out", out_dir, "output directory");
  simulate->add_option("--seed", seed, "reproducibility tag recorded in the summary");

  auto* verify = app.add_subcommand("verify", "run the built-in oracle suite");
  verify->add_option("--config", config_path, "optional configuration file");
  verify->add_option("--tolerance", tolerance, "solver relative tolerance for the suite");

  auto* fit = app.add_subcommand("fit", "fit interplay exponents for a coefficient pair");
  fit->add_option("--config", config_path, "run configuration file")->required();
  fit->add_option("--horizon", horizon, "fit horizon (default 1e6)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(config_path, out_dir);
    if (table->parsed()) return cmd_table(betas, gammas, n, m_text, csv, out_dir);
    if (simulate->parsed()) return cmd_simulate(config_path, out_dir, seed);
    if (verify->parsed()) return cmd_verify(config_path, tolerance);
    if (fit->parsed()) return cmd_fit(config_path, horizon);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const CheckerMismatch& e) {
    std::cerr << "checker mismatch: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
