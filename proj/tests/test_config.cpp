#include <catch2/catch.hpp>

#include "dws/config.hpp"
#include "dws/report.hpp"
#include "dws/setup.hpp"

using dws::Config;
using dws::ConfigError;
using dws::Rational;

TEST_CASE("config parsing: sections, comments, fractions") {
  const auto cfg = Config::parse_string(
      "# leading comment\n"
      "[dissipation.b1]\n"
      "family = pure-power   # trailing comment\n"
      "mu = 2\n"
      "r = 1/2\n"
      "\n"
      "[scenario]\n"
      "n = 2\n"
      "gamma2 = -1/3\n"
      "epsilonish = 1e-3\n");
  CHECK(cfg.has_section("dissipation.b1"));
  CHECK(cfg.get_string("dissipation.b1", "family") == "pure-power");
  CHECK(cfg.get_scalar("dissipation.b1", "r").rational() == Rational(1, 2));
  CHECK(cfg.get_scalar("scenario", "gamma2").rational() == Rational(-1, 3));
  CHECK(cfg.get_scalar("scenario", "epsilonish").rational() == Rational(1, 1000));
  CHECK(cfg.get_int("scenario", "n") == 2);
  CHECK(cfg.get_double("scenario", "missing", 7.5) == 7.5);
}

TEST_CASE("config parsing errors carry location and offender") {
  CHECK_THROWS_AS(Config::parse_string("key = 1\n"), ConfigError);          // outside section
  CHECK_THROWS_AS(Config::parse_string("[s]\nnovalue\n"), ConfigError);     // no '='
  CHECK_THROWS_AS(Config::parse_string("[broken\nk = 1\n"), ConfigError);   // bad header
  const auto cfg = Config::parse_string("[scenario]\nn = two\n");
  CHECK_THROWS_AS(cfg.get_scalar("scenario", "n"), ConfigError);
  CHECK_THROWS_AS(cfg.get_string("scenario", "absent"), ConfigError);
  CHECK_THROWS_AS(cfg.get_string("nosection", "k"), ConfigError);
}

TEST_CASE("schema validation rejects unknown sections and keys by name") {
  const auto cfg = Config::parse_string("[scenario]\nn = 2\nbogus = 1\n");
  try {
    cfg.validate(dws::run_config_schema());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }
  const auto cfg2 = Config::parse_string("[mystery]\nk = 1\n");
  CHECK_THROWS_AS(cfg2.validate(dws::run_config_schema()), ConfigError);
}

TEST_CASE("booleans and integers are validated") {
  const auto cfg = Config::parse_string("[run]\nnonlinear = true\nepsilon = 0.5\nseed = 3\n");
  CHECK(cfg.get_bool("run", "nonlinear", false));
  CHECK(cfg.get_bool("run", "absent", true));
  CHECK(cfg.get_int("run", "seed") == 3);
  CHECK_THROWS_AS(cfg.get_int("run", "epsilon"), ConfigError);
  const auto bad = Config::parse_string("[run]\nnonlinear = maybe\n");
  CHECK_THROWS_AS(bad.get_bool("run", "nonlinear", false), ConfigError);
}

TEST_CASE("reports parse back as configs (shared nested key-value format)") {
  dws::ReportWriter w;
  w.section("verdict");
  w.kv("theorem", "energy");
  w.kv("satisfied", true);
  w.kv("kappa", dws::Scalar(Rational(1, 4)));
  w.section("verdict.clause.balance");
  w.kv("pass", false);
  const auto cfg = Config::parse_string(w.str());
  CHECK(cfg.get_string("verdict", "theorem") == "energy");
  CHECK(cfg.get_bool("verdict", "satisfied", false));
  CHECK(cfg.get_scalar("verdict", "kappa").rational() == Rational(1, 4));
  CHECK_FALSE(cfg.get_bool("verdict.clause.balance", "pass", true));
}

TEST_CASE("coefficient specs round-trip through the config schema") {
  dws::ReportWriter w;
  dws::write_dissipation(w, "dissipation.b1", dws::Dissipation::power_log_decay(1.5, 0.3, 2.0, 4.0));
  dws::write_dissipation(w, "dissipation.b2", dws::Dissipation::pure_power(2.0, -0.5));
  const auto cfg = Config::parse_string(w.str());
  const auto b1 = dws::dissipation_from_config(cfg, "dissipation.b1");
  const auto b2 = dws::dissipation_from_config(cfg, "dissipation.b2");
  CHECK(b1.params().family == dws::DissipationFamily::power_log_decay);
  CHECK(b1.params().mu == 1.5);
  CHECK(b1.params().r == 0.3);
  CHECK(b1.params().gamma == 2.0);
  CHECK(b1.params().c == 4.0);
  CHECK(b2.params().r == -0.5);
  // values survive exactly: evaluate both at a few points
  const auto orig = dws::Dissipation::power_log_decay(1.5, 0.3, 2.0, 4.0);
  for (const double t : {0.0, 1.0, 100.0}) CHECK(b1.value(t) == orig.value(t));
}
