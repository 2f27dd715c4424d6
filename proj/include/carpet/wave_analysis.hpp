#pragma once

#include <vector>

#include "carpet/fd_solver.hpp"
#include "carpet/reaction.hpp"

namespace carpet {

/// Roots of r^2 + c r - mu = 0 and the quantities of the explicit zone solution.
struct KillingAnalytic {
  double c = 0.0;
  double mu = 1.0;
  double Delta = 0.0;
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;

  KillingAnalytic(double c, double mu);
  /// e^{cL} [ -c sinh(sqrt(Delta) L) + sqrt(Delta) cosh(sqrt(Delta) L) ]
  double psi1(double L) const;
};

/// Zone solution with value gamma and zero slope at x = L, evaluated for x in [0, L].
double v1_profile(const KillingAnalytic& an, double gamma, double L, double x);
double v1_slope(const KillingAnalytic& an, double gamma, double L, double x);
double v1_curvature(const KillingAnalytic& an, double gamma, double L, double x);

/// L with v1(0) = 1. NoBracket when gamma >= 1 (v1(0) = gamma already at L = 0).
double unit_width(const KillingAnalytic& an, double gamma);

/// Width of the explicit super-solution for gamma0 in (0, alpha1).
double solve_super_width(const KillingAnalytic& an, double gamma0, double alpha1);

/// Orbit samples in the (u, u') plane, u strictly decreasing, u' < 0.
struct PhasePath {
  std::vector<double> u;
  std::vector<double> p;
  double cross_integral = 0.0;  ///< integral of u'^2 dx along the path
  double length = 0.0;          ///< spatial extent of the path
};

/// Follows u'' = -c u' - g(u) from (u_start, p_start) until u = u_end.
/// Throws PathTerminates when u' reaches 0 first.
PhasePath phase_tail(const CubicReaction& term, double c, double u_start, double u_end, double p_start);

/// Exponential decay rate of the right tail: (sqrt(c^2 + 4|g'(0)|) - |c|) / 2.
double tail_decay_rate(const CubicReaction& term, double c);

struct SpeedSettings {
  double x_min = -75.0;
  double x_max = 75.0;
  double dx = 0.03;
  double dt = 0.05;
  double D = 1.0;
  double level = 0.5;
  double margin = 25.0;  ///< start offset from x_min and stop distance from x_max
  double t_max = 3000.0;
  double residual_tol = 1e-2;
};

struct SpeedResult {
  double speed = 0.0;
  double rms_residual = 0.0;
  double duration = 0.0;
  long samples = 0;
};

/// Lab-frame speed of the front issued from a step datum, by regression over the second half of the run.
SpeedResult natural_speed(const CubicReaction& term, const SpeedSettings& settings = {});

/// Local maximum value of the critical profile and the dissipation along its right orbit.
struct LocalMax {
  double phi0 = 0.0;
  double cross_integral = 0.0;  ///< integral of u'^2 over the right orbit
};

/// c = 0: phi0 = beta. c < 0: end point of the stable manifold of (0, 0) traced backward to u' = 0.
/// Throws NoCrossing when the manifold never turns (no critical solution).
LocalMax critical_local_max(const CubicReaction& term, double c);

/// Slope u'(0) of the solution on x < 0 that leaves 1 at -infinity and reaches u0 at x = 0.
double left_tail_slope(const CubicReaction& term, double c, double u0, PhasePath* path = nullptr);

struct MatchingEval {
  double u0 = 0.0;          ///< zone solution at x = 0
  double zone_slope = 0.0;  ///< zone solution slope at x = 0+
  double left_slope = 0.0;  ///< left-tail slope at u0
  double residual = 0.0;    ///< zone_slope - left_slope
};

MatchingEval critical_matching_residual(const CubicReaction& term, double c, double mu, double L, double phi0);

struct MatchingRoot {
  double width = 0.0;
  double phi0 = 0.0;
  double bracket_high = 0.0;  ///< width where the zone solution reaches 1 at x = 0
  bool monotone = true;       ///< residual sampled monotone on the bracket
};

/// Root of the matching residual in L on [0, L1].
MatchingRoot matching_root(const CubicReaction& term, double c, double mu);

/// Matching width for the zone solution that joins the right orbit at (gamma, p(gamma)).
double family_width(const CubicReaction& term, double c, double mu, double gamma);

struct FamilyMinimum {
  double width = 0.0;
  double gamma = 0.0;
};

/// Smallest matching width over the whole right orbit, not only its turning point.
FamilyMinimum matching_family_minimum(const CubicReaction& term, double c, double mu);

enum class CriticalRegime { CriticalSolutionExists, CriticalSolutionAbsent };

/// Exists iff |c| < 2 sqrt(g'(alpha)).
CriticalRegime critical_regime(const CubicReaction& term, double c);

}  // namespace carpet
