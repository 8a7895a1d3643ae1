#pragma once

// Bindings between the config schema and the domain types, shared by the
// command-line tool and tests.

#include <optional>
#include <string>

#include "dws/config.hpp"
#include "dws/dissipation.hpp"
#include "dws/report.hpp"
#include "dws/theorems.hpp"

namespace dws {

inline Dissipation dissipation_from_config(const Config& cfg, const std::string& section) {
  const std::string family = cfg.get_string(section, "family");
  const double mu = cfg.get_double(section, "mu", 1.0);
  const double r = cfg.get_double(section, "r", 0.0);
  const double gamma = cfg.get_double(section, "gamma", 0.0);
  const double c = cfg.get_double(section, "c", 0.0);  // 0 = pick automatically
  if (family == "constant") return Dissipation::constant(mu);
  if (family == "pure-power") return Dissipation::pure_power(mu, r);
  if (family == "power-log-growth") return Dissipation::power_log_growth(mu, r, gamma, c);
  if (family == "power-log-decay") return Dissipation::power_log_decay(mu, r, gamma, c);
  throw ConfigError("[" + section + "] family: unknown family '" + family + "'");
}

// Writes a coefficient spec back out in the config schema, so reports can be
// re-parsed as configs.
inline void write_dissipation(ReportWriter& w, const std::string& section,
                              const Dissipation& b) {
  const auto& p = b.params();
  w.section(section);
  w.kv("family", family_name(p.family));
  w.kv("mu", p.mu);
  if (p.family != DissipationFamily::constant) w.kv("r", p.r);
  if (p.family == DissipationFamily::power_log_growth ||
      p.family == DissipationFamily::power_log_decay) {
    w.kv("gamma", p.gamma);
    w.kv("c", p.c);
  }
}

struct ScenarioBuild {
  Scenario scenario;
  std::optional<InterplayEstimate> fitted;
};

// Builds the scenario from [scenario]; interplay exponents come from the
// config when given, otherwise they are fitted from the coefficient pair.
inline ScenarioBuild scenario_from_config(const Config& cfg) {
  if (!cfg.has_section("scenario")) throw ConfigError("missing section [scenario]");
  const int n = int(cfg.get_int("scenario", "n"));
  const Scalar m = cfg.get_scalar("scenario", "m", Scalar(1));
  const Scalar p = cfg.get_scalar("scenario", "p");
  const Scalar q = cfg.get_scalar("scenario", "q");
  const Scalar g1 = cfg.get_scalar("scenario", "gamma1", Scalar(0));
  const Scalar g2 = cfg.get_scalar("scenario", "gamma2", Scalar(0));
  const Scalar s1 = cfg.get_scalar("scenario", "s1", Scalar(1));
  const Scalar s2 = cfg.get_scalar("scenario", "s2", Scalar(1));

  ScenarioBuild out;
  const bool has_user = cfg.has("scenario", "alpha") && cfg.has("scenario", "beta");
  const bool has_coeffs = cfg.has_section("dissipation.b1") && cfg.has_section("dissipation.b2");
  if (has_coeffs) {
    const auto b1 = dissipation_from_config(cfg, "dissipation.b1");
    const auto b2 = dissipation_from_config(cfg, "dissipation.b2");
    out.fitted = fit_interplay(b1, b2, cfg.get_double("checks", "fit_horizon", 1e6));
  }
  InterplayParams interplay;
  InterplaySource source = InterplaySource::user_supplied;
  if (has_user) {
    interplay = InterplayParams(cfg.get_scalar("scenario", "alpha"),
                                cfg.get_scalar("scenario", "beta"));
  } else if (out.fitted) {
    interplay = InterplayParams(Scalar::from_double(out.fitted->alpha_hat),
                                Scalar::from_double(out.fitted->beta_hat));
    source = InterplaySource::fitted;
  } else {
    throw ConfigError(
        "scenario needs either alpha and beta or both [dissipation.b1]/[dissipation.b2] "
        "sections to fit them from");
  }
  out.scenario = Scenario(SpaceParams(n, m), NonlinearityParams(p, q, g1, g2), interplay, s1,
                          s2, source);
  return out;
}

}  // namespace dws
