#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "dws/dissipation.hpp"
#include "oracles.hpp"

using dws::Dissipation;
using dws::DissipationFamily;
using dws::DissipationParams;

TEST_CASE("coefficient values follow the family formulas") {
  CHECK(Dissipation::pure_power(2.0, 0.5).value(3.0) == Approx(1.0).epsilon(1e-15));
  CHECK(Dissipation::constant(1.0).value(17.3) == 1.0);
  CHECK(Dissipation::power_log_growth(1.0, 0.0, 1.0, M_E).value(0.0) == Approx(1.0));
  // decay family divides by the log factor
  CHECK(Dissipation::power_log_decay(3.0, 0.0, 1.0, M_E).value(0.0) == Approx(3.0));
}

TEST_CASE("construction rejects non-effective or malformed parameters") {
  CHECK_THROWS_AS(Dissipation::pure_power(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Dissipation::pure_power(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(Dissipation::pure_power(0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(Dissipation::power_log_growth(1.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Dissipation::power_log_growth(1.0, 0.0, 1.0, 1.5), std::invalid_argument);
  // the bypass accepts anything
  CHECK_NOTHROW(Dissipation::unchecked({DissipationFamily::pure_power, 1.0, 1.0, 0.0, M_E}));
}

TEST_CASE("automatic log offset keeps b monotonic") {
  // growth family with r > 0 needs a large offset before the power factor wins
  const auto b = Dissipation::power_log_growth(1.0, 0.5, 2.0);
  CHECK(b.params().c >= M_E);
  double prev = b.value(0.0);
  bool up = false, down = false;
  for (double t = 0.01; t < 1e6; t *= 1.7) {
    const double v = b.value(t);
    up = up || v > prev * (1 + 1e-13);
    down = down || v < prev * (1 - 1e-13);
    prev = v;
  }
  CHECK_FALSE((up && down));
}

TEST_CASE("derivatives: closed forms for power families") {
  CHECK(Dissipation::pure_power(1.0, 0.5).derivative(0.0, 1) == Approx(-0.5));
  CHECK(Dissipation::constant(3.0).derivative(5.0, 2) == 0.0);
  // |b'(3)| = b(3)/(1+3) * 1/2 for r = -1/2
  const auto b = Dissipation::pure_power(1.0, -0.5);
  CHECK(b.derivative(3.0, 1) == Approx(0.25));
  CHECK(std::fabs(b.derivative(3.0, 1)) * 4.0 / b.value(3.0) == Approx(0.5));
  CHECK_THROWS_AS(b.derivative(1.0, 4), std::invalid_argument);
}

TEST_CASE("derivatives: finite differences match the symbolic oracle") {
  const double mu = 1.3, r = 0.4, gamma = 1.2, c = 4.0;
  const auto growth = Dissipation::power_log_growth(mu, r, gamma, c);
  const auto decay = Dissipation::power_log_decay(mu, -0.3, 0.8, 6.0);
  for (const double t : {0.0, 0.7, 3.0, 50.0, 2000.0}) {
    for (int k = 1; k <= 2; ++k) {
      const double want = oracles::power_log_derivative(mu, r, gamma, c, t, k);
      const auto got = growth.derivative_with_error(t, k);
      CHECK(got.value == Approx(want).epsilon(1e-7));
      CHECK(std::fabs(got.value - want) <= 100.0 * got.error_bound + 1e-13);

      const double want2 = oracles::power_log_derivative(1.3, -0.3, -0.8, 6.0, t, k);
      const auto got2 = decay.derivative_with_error(t, k);
      CHECK(got2.value == Approx(want2).epsilon(1e-7));
    }
    // third derivative: sanity against a first-difference of the oracle's k=2
    const double h = 1e-4 * (1.0 + t);
    const double want3 = (oracles::power_log_derivative(mu, r, gamma, c, t + h, 2) -
                          oracles::power_log_derivative(mu, r, gamma, c, t - h, 2)) /
                         (2.0 * h);
    CHECK(growth.derivative(t, 3) == Approx(want3).epsilon(1e-4));
  }
}

TEST_CASE("primitive closed forms and quadrature agree with the Simpson oracle") {
  const auto cons = Dissipation::constant(1.0);
  CHECK(cons.primitive(0.0, 7.0) == Approx(7.0));

  const auto power = Dissipation::pure_power(1.0, 0.5);
  CHECK(power.primitive(0.0, 3.0) == Approx(14.0 / 3.0).epsilon(1e-12));
  const double oracle = oracles::adaptive_simpson(
      [&](double s) { return 1.0 / power.value(s); }, 0.0, 3.0, 1e-13);
  CHECK(power.primitive(0.0, 3.0) == Approx(oracle).epsilon(1e-10));

  const auto growth = Dissipation::power_log_growth(1.0, 0.2, 1.0);  // auto offset
  for (const double t : {0.5, 2.0, 40.0, 900.0}) {
    const double want = oracles::adaptive_simpson(
        [&](double s) { return 1.0 / growth.value(s); }, 0.0, t, 1e-13);
    CHECK(growth.primitive(0.0, t) == Approx(want).epsilon(1e-8));
  }
}

TEST_CASE("primitive additivity is exact and B(t,0) is strictly increasing") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> uni(0.0, 100.0);
  const auto specs = {Dissipation::pure_power(2.0, 0.5),
                      Dissipation::power_log_decay(1.0, 0.3, 1.0, M_E)};
  for (const auto& b : specs) {
    for (int i = 0; i < 50; ++i) {
      double x = uni(rng), y = uni(rng), z = uni(rng);
      if (x > y) std::swap(x, y);
      if (y > z) std::swap(y, z);
      if (x > y) std::swap(x, y);
      const double lhs = b.primitive(x, z);
      const double rhs = b.primitive(y, z) + b.primitive(x, y);
      CHECK(std::fabs(lhs - rhs) <= 1e-12 * (1.0 + lhs));
    }
    double prev = -1.0;
    for (double t = 0.0; t < 500.0; t += 7.3) {
      const double B = b.primitive_from_zero(t);
      CHECK(B > prev);
      prev = B;
    }
    CHECK_THROWS_AS(b.primitive(2.0, 1.0), std::invalid_argument);
  }
}

TEST_CASE("effectiveness: the validated families pass all four conditions") {
  for (const auto& b : {Dissipation::pure_power(1.0, 0.5),
                        Dissipation::pure_power(1.0, -0.5),
                        Dissipation::constant(5.0),
                        Dissipation::power_log_growth(1.0, 0.0, 1.0, M_E),
                        Dissipation::power_log_decay(1.0, 0.5, 1.0, M_E)}) {
    const auto rep = dws::check_effective(b);
    INFO(b.describe());
    CHECK(rep.monotone_tb);
    CHECK(rep.weight_integrable);
    CHECK(rep.derivative_bounded[0]);
    CHECK(rep.derivative_bounded[1]);
    CHECK(rep.derivative_bounded[2]);
    CHECK(rep.inv_b_diverges);
    CHECK(rep.pass());
  }
  const auto cons = dws::check_effective(Dissipation::constant(5.0));
  REQUIRE(cons.a_witness.has_value());
  CHECK(*cons.a_witness == 0.0);
}

TEST_CASE("effectiveness: r = 1 fails divergence of t*b and weight integrability") {
  const auto b = Dissipation::unchecked({DissipationFamily::pure_power, 1.0, 1.0, 0.0, M_E});
  const auto rep = dws::check_effective(b);
  CHECK_FALSE(rep.monotone_tb);
  CHECK_FALSE(rep.weight_integrable);
  CHECK(rep.inv_b_diverges);           // 1/b ~ (1+t) still diverges
  CHECK(rep.derivative_bounded[0]);    // derivative ratios stay bounded
  CHECK_FALSE(rep.pass());
}

TEST_CASE("interplay fit recovers the power-pair exponents") {
  const auto b1 = Dissipation::pure_power(1.0, 0.5);   // B1 ~ t^{3/2}
  const auto b2 = Dissipation::pure_power(1.0, -0.5);  // B2 ~ t^{1/2}
  const auto est = dws::fit_interplay(b1, b2, 1e6);
  CHECK(est.alpha_hat == Approx(3.0).epsilon(0.05));
  CHECK(est.beta_hat == Approx(1.0 / 3.0).epsilon(0.05));
  CHECK_FALSE(est.log_correction);
  CHECK(est.constant < 10.0);
}

TEST_CASE("interplay fit of a spec against itself is exactly (1,1)") {
  const auto b = Dissipation::power_log_decay(1.0, 0.25, 1.0, M_E);
  const auto est = dws::fit_interplay(b, b, 1e5);
  CHECK(est.alpha_hat == Approx(1.0).margin(1e-12));
  CHECK(est.beta_hat == Approx(1.0).margin(1e-12));
}

TEST_CASE("interplay fit flags logarithmic corrections") {
  const auto b1 = Dissipation::pure_power(1.0, 0.5);
  // b2 = (1+t)^{1/2} / log(e+t): B2 ~ 2 sqrt(t) log t
  const auto b2 = Dissipation::power_log_decay(1.0, -0.5, 1.0, M_E);
  const auto est = dws::fit_interplay(b1, b2, 1e6);
  CHECK(est.log_correction);
  // slope sits above the asymptotic 1/3 at this horizon and decreases with it
  CHECK(est.beta_hat > 1.0 / 3.0);
  CHECK(est.beta_hat < 0.55);
  const auto further = dws::fit_interplay(b1, b2, 1e8);
  CHECK(further.beta_hat < est.beta_hat);
}

TEST_CASE("interplay fit transposes under swapping the pair") {
  const auto b1 = Dissipation::pure_power(1.0, 0.5);
  const auto b2 = Dissipation::pure_power(2.0, -0.25);
  const auto ab = dws::fit_interplay(b1, b2, 1e6);
  const auto ba = dws::fit_interplay(b2, b1, 1e6);
  CHECK(ba.alpha_hat == Approx(ab.beta_hat).epsilon(0.05));
  CHECK(ba.beta_hat == Approx(ab.alpha_hat).epsilon(0.05));
}

TEST_CASE("interplay fit rejects non-effective inputs") {
  const auto bad = Dissipation::unchecked({DissipationFamily::pure_power, 1.0, 1.0, 0.0, M_E});
  CHECK_THROWS_AS(dws::fit_interplay(bad, Dissipation::constant(1.0)), std::invalid_argument);
}

TEST_CASE("primitive properties: constant coefficient gives the exact constants") {
  const auto rep = dws::check_primitive_properties(Dissipation::constant(1.0), 1e4);
  REQUIRE(rep.finite());
  CHECK(rep.p6_constant == Approx(2.0).epsilon(1e-12));
  CHECK(rep.p7_constant == Approx(2.0).epsilon(1e-12));
  // (j,l) = (0,1): log(1 + t/2) / log(1 + t) <= 1, approaching 1 from below
  CHECK(rep.p8_constants[2] <= 1.0 + 1e-9);
  CHECK(rep.p8_constants[2] > 0.85);
  // closed-form check of the (0,0) entry: B(t,t/2)/(1+B(t,0)) -> 1/2
  CHECK(rep.p8_constants[0] == Approx(0.5).epsilon(0.05));
}

TEST_CASE("primitive properties: power families stay finite and stable") {
  for (const double r : {0.5, -0.5}) {
    const auto rep = dws::check_primitive_properties(Dissipation::pure_power(1.0, r), 1e4);
    INFO("r = " << r);
    REQUIRE(rep.finite());
    CHECK(rep.p6_constant < 10.0);
    CHECK(rep.p7_constant < 10.0);
    for (const double c : rep.p8_constants) CHECK(c < 10.0);
  }
}

TEST_CASE("primitive properties against the substitution oracle") {
  // With w = B(t,tau) the tail integral reduces to closed forms in B.
  const auto b = Dissipation::pure_power(1.0, 0.5);
  const double t = 64.0;
  const double Bh = b.primitive(t / 2.0, t);
  auto integral = [&](int j, int l) {
    return oracles::adaptive_simpson(
        [&](double tau) {
          return std::pow(1.0 + b.primitive(tau, t), -0.5 * j - l) / b.value(tau);
        },
        t / 2.0, t, 1e-12);
  };
  CHECK(integral(0, 0) == Approx(Bh).epsilon(1e-9));
  CHECK(integral(1, 0) == Approx(2.0 * (std::sqrt(1.0 + Bh) - 1.0)).epsilon(1e-9));
  CHECK(integral(0, 1) == Approx(std::log1p(Bh)).epsilon(1e-9));
}
