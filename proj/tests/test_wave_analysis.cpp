#include <catch_amalgamated.hpp>

#include <cmath>

#include "carpet/wave_analysis.hpp"

using namespace carpet;
using Catch::Approx;

TEST_CASE("roots of r^2 + c r - mu") {
  for (double c : {0.0, -0.3, -1.0, -2.2, 0.7}) {
    for (double mu : {0.1, 1.0, 4.0}) {
      const KillingAnalytic an(c, mu);
      CHECK(an.lambda_minus < 0.0);
      CHECK(an.lambda_plus > 0.0);
      CHECK(an.lambda_plus * an.lambda_minus == Approx(-mu).epsilon(1e-14));
      CHECK(an.lambda_plus + an.lambda_minus == Approx(-c).margin(1e-14));
    }
  }
}

TEST_CASE("zone solution end conditions") {
  const KillingAnalytic an(-0.8, 1.0);
  const double L = 2.5;
  const double gamma = 0.3;
  CHECK(v1_profile(an, gamma, L, L) == Approx(gamma).epsilon(1e-15));
  CHECK(std::abs(v1_slope(an, gamma, L, L)) <= 1e-15);
  for (double w : {0.1, 1.0, 5.0}) CHECK(v1_slope(an, gamma, w, 0.0) < 0.0);
}

TEST_CASE("zone solution is a hyperbolic cosine when the frame is at rest") {
  const KillingAnalytic an(0.0, 2.0);
  for (double x : {0.0, 0.4, 1.3, 2.0}) {
    CHECK(v1_profile(an, 0.2, 2.0, x) == Approx(0.2 * std::cosh(std::sqrt(2.0) * (x - 2.0))).epsilon(1e-13));
  }
}

TEST_CASE("zone solution satisfies its ODE") {
  const KillingAnalytic an(-1.3, 1.0);
  const double L = 3.0;
  const double gamma = 0.1;
  for (int i = 0; i <= 1000; ++i) {
    const double x = L * i / 1000.0;
    const double r = -an.c * v1_slope(an, gamma, L, x) - v1_curvature(an, gamma, L, x) +
                     an.mu * v1_profile(an, gamma, L, x);
    REQUIRE(std::abs(r) <= 1e-9);
  }
}

TEST_CASE("super-solution width inverts the cosh profile") {
  const KillingAnalytic an(0.0, 1.0);
  const double alpha1 = derive_info(CubicReaction{0.25}).alpha1;
  const double L = solve_super_width(an, 0.1, alpha1);
  CHECK(L == Approx(std::acosh(10.0)).epsilon(1e-10));
  CHECK(std::abs(v1_profile(an, 0.1, L, 0.0) - 1.0) <= 1e-10);
}

TEST_CASE("faster sweeps need a wider super-solution") {
  const double alpha1 = derive_info(CubicReaction{0.25}).alpha1;
  double prev = 0.0;
  for (double c : {0.0, -0.5, -1.0, -2.0}) {
    const double L = solve_super_width(KillingAnalytic(c, 1.0), 0.1, alpha1);
    CHECK(L > prev);
    prev = L;
  }
}

TEST_CASE("no width is needed once the interface value reaches 1") {
  try {
    unit_width(KillingAnalytic(0.0, 1.0), 1.0);
    FAIL("expected NoBracket");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoBracket);
  }
}

TEST_CASE("left tail at rest satisfies the energy identity") {
  const CubicReaction g{0.25};
  const double k = std::sqrt(std::abs(g.derivative(1.0)));
  const double e = 1e-6;
  const PhasePath path = phase_tail(g, 0.0, 1.0 - e, 0.0, -k * e);
  REQUIRE(path.u.size() > 10);
  const double G1 = potential(g, 1.0);
  for (std::size_t i = 0; i < path.u.size(); ++i) {
    CHECK(path.p[i] < 0.0);
    if (i > 0) CHECK(path.u[i] < path.u[i - 1]);
    CHECK(std::abs(path.p[i] * path.p[i] - 2.0 * (G1 - potential(g, path.u[i]))) <= 1e-8);
  }
  CHECK(path.p.back() == Approx(-std::sqrt(1.0 / 12.0)).epsilon(1e-6));
  CHECK(left_tail_slope(g, 0.0, 0.0) == Approx(-std::sqrt(1.0 / 12.0)).epsilon(1e-6));
}

TEST_CASE("standing orbit through beta lands at the origin") {
  const CubicReaction g{0.25};
  const double beta = derive_info(g).beta;
  const double u_start = beta - 1e-7;
  const double p_start = -std::sqrt(-2.0 * potential(g, u_start));
  try {
    phase_tail(g, 0.0, u_start, -0.1, p_start);
    FAIL("expected PathTerminates");
  } catch (const PathTerminates& e) {
    CHECK(std::abs(e.u_stop()) <= 1e-3);
  }
}

TEST_CASE("tail decay rate") {
  const CubicReaction g{0.25};
  CHECK(tail_decay_rate(g, 0.0) == Approx(0.5).epsilon(1e-15));
  const double far = tail_decay_rate(g, -1e3);
  CHECK(far > 0.0);
  CHECK(far < 1e-3);
  CHECK(tail_decay_rate(g, -1.0) < tail_decay_rate(g, -0.5));
}

TEST_CASE("natural speed of the cubic front") {
  const double exact = 0.5 / std::sqrt(2.0);
  const SpeedResult r = natural_speed(CubicReaction{0.25});
  CHECK(r.speed > 0.0);
  CHECK(std::abs(r.speed - exact) / exact <= 0.02);

  SpeedSettings shifted;
  shifted.margin = 30.0;
  CHECK(natural_speed(CubicReaction{0.25}, shifted).speed == Approx(r.speed).epsilon(1e-3));
}

TEST_CASE("natural speed near the balanced threshold") {
  const double exact = 0.1 / std::sqrt(2.0);
  const SpeedResult r = natural_speed(CubicReaction{0.45});
  CHECK(r.speed > 0.0);
  CHECK(std::abs(r.speed - exact) / exact <= 0.05);
}

TEST_CASE("regime of the critical solution") {
  const CubicReaction g{0.25};
  CHECK(critical_regime(g, -0.5) == CriticalRegime::CriticalSolutionExists);
  CHECK(critical_regime(g, 0.0) == CriticalRegime::CriticalSolutionExists);
  CHECK(critical_regime(g, -std::sqrt(3.0) / 2.0) == CriticalRegime::CriticalSolutionAbsent);
  CHECK(critical_regime(g, -1.0) == CriticalRegime::CriticalSolutionAbsent);
}

TEST_CASE("local maximum of the critical profile") {
  const CubicReaction g{0.25};
  const ReactionInfo info = derive_info(g);
  CHECK(critical_local_max(g, 0.0).phi0 == info.beta);
  const LocalMax m = critical_local_max(g, -0.5);
  CHECK(m.phi0 > info.alpha);
  CHECK(m.phi0 < info.beta);
  // Energy balance along the right orbit: G(phi0) = c * integral of u'^2.
  CHECK(potential(g, m.phi0) == Approx(-0.5 * m.cross_integral).epsilon(1e-6));
  try {
    critical_local_max(g, -1.0);
    FAIL("expected NoCrossing");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoCrossing);
  }
}

TEST_CASE("matching residual changes sign on its bracket") {
  const CubicReaction g{0.25};
  for (double c : {0.0, -0.5}) {
    const double phi0 = critical_local_max(g, c).phi0;
    const double L1 = unit_width(KillingAnalytic(c, 1.0), phi0);
    CHECK(critical_matching_residual(g, c, 1.0, 0.0, phi0).residual > 0.0);
    CHECK(critical_matching_residual(g, c, 1.0, L1, phi0).residual < 0.0);
    const MatchingRoot root = matching_root(g, c, 1.0);
    CHECK(root.monotone);
    CHECK(root.width > 0.0);
    CHECK(root.width < root.bracket_high);
    CHECK(std::abs(critical_matching_residual(g, c, 1.0, root.width, phi0).residual) <= 1e-8);
  }
}

TEST_CASE("matching widths grow with the sweep speed") {
  const CubicReaction g{0.25};
  CHECK(matching_root(g, 0.0, 1.0).width < matching_root(g, -0.5, 1.0).width);
}

TEST_CASE("turning point is a member of the matching family") {
  const CubicReaction g{0.25};
  const MatchingRoot root = matching_root(g, -0.5, 1.0);
  CHECK(family_width(g, -0.5, 1.0, root.phi0) == Approx(root.width).epsilon(1e-6));
  CHECK(matching_family_minimum(g, -0.5, 1.0).width <= root.width + 1e-9);
}
