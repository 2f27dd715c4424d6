#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "carpet/fd_solver.hpp"
#include "carpet/reaction.hpp"

namespace carpet {

enum class Verdict { Eradication, Invasion, Undecided };

std::string_view to_string(Verdict v);

/// Kill zone (0, L) with rate mu, seen in the frame moving at speed c <= 0.
struct KillingConfig {
  double c = -1.0;
  double L = 10.0;
  double mu = 1.0;
  CubicReaction term;
  double x_min = -75.0;
  double x_max = 75.0;
  double dx = 0.03;
  double dt = 0.5;
  double D = 1.0;
  SteadySettings steady;
  double slope_tol = 1e-6;
  double boundary_clearance = 20.0;

  void validate() const;
};

struct SteadyOutcome {
  Field profile{Grid1D(0.0, 1.0, 3), Vector::Zero(3)};
  Verdict verdict = Verdict::Undecided;
  double u_at_L = 0.0;
  double du_at_L = 0.0;
  std::optional<double> interior_min_location;
  bool converged = false;
  double residual = 0.0;
  double elapsed = 0.0;
};

/// Shape of the profile past the zone. Decaying: below alpha and nonincreasing.
/// Rising: nondecreasing from its lowest point on and above alpha at x_max.
/// Either way the limit is fixed even if x_max is too close to show it.
enum class TailTrend { Unknown, Decaying, Rising };

/// Invasion when the far field is at 1 or the tail is rising. Close to the
/// threshold the minimum sits on L to within a cell, so the discrete slope there
/// can come out slightly negative. Eradication when the profile is not increasing at L (slope_tol of
/// slack) and the far field is at 0 or the tail is decaying.
Verdict classify(double u_far, double du_at_L, bool converged, double slope_tol = 1e-6,
                 TailTrend tail = TailTrend::Unknown);

SteadyOutcome run_killing(const KillingConfig& cfg, const SemiImplicitSolver::Observer& observer = nullptr);

struct CriticalStep {
  double parameter = 0.0;
  Verdict verdict = Verdict::Undecided;
};

struct CriticalResult {
  double threshold = 0.0;
  double bracket_low = 0.0;
  double bracket_high = 0.0;
  int iterations = 0;
  double tolerance = 0.0;
  std::vector<CriticalStep> verdicts;
};

/// Bisection on the zone width. The low end must invade and the high end must eradicate.
CriticalResult lambda_of_c(double c, double L_low, double L_high, double tol, const KillingConfig& base);

struct InterfaceRow {
  double c = 0.0;
  CriticalResult lambda;
  double width = 0.0;  ///< lambda threshold + offset, where the interface value is read
  double u_interface = 0.0;
  double g_interface = 0.0;
  SteadyOutcome outcome;  ///< steady state at `width`
};

/// Lambda(c) for every c, plus the interface value u(L) at L = Lambda(c) + 10 dx.
std::vector<InterfaceRow> interface_value_sweep(const std::vector<double>& cs, double L_low, double L_high,
                                                double tol, const KillingConfig& base, int workers = 1);

/// Largest increase u(i+1) - u(i) over the mesh; 0 for a nonincreasing profile.
double max_increase(const Field& u);

/// Positions of strict interior local minima of the nodal values inside (a, b), ignoring
/// wiggles smaller than noise.
std::vector<double> interior_minima(const Field& u, double a, double b, double noise = 1e-9);

/// Decay rate -d(log u)/dx fitted over nodes right of x_from with u in [floor, 10 floor].
double fitted_tail_rate(const Field& u, double x_from, double floor);

}  // namespace carpet
