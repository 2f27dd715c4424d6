#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "carpet/errors.hpp"
#include "carpet/grid.hpp"
#include "carpet/tridiagonal.hpp"

namespace carpet {

/// Time step, frame speed and diffusivity of u_t - c u_x - D u_xx = R.
struct SchemeParams {
  double dt = 0.5;
  double c = 0.0;
  double D = 1.0;

  void validate() const;
};

/// |c| dx / (2D); the centered scheme is monotone when this is at most 1.
inline double mesh_peclet(const SchemeParams& scheme, const Grid1D& grid) {
  return std::abs(scheme.c) * grid.dx() / (2.0 * scheme.D);
}

/// Diagonals of I - dt (D Lap_h + c Grad_h) with mirrored ghost nodes at both ends.
template <typename Scalar = double>
Tridiagonal<Scalar> build_operator(const SchemeParams& scheme, const Grid1D& grid) {
  const Index n = grid.size();
  const Scalar a = Scalar(scheme.dt * scheme.D / (grid.dx() * grid.dx()));
  const Scalar b = Scalar(scheme.dt * scheme.c / (2.0 * grid.dx()));
  Tridiagonal<Scalar> op(n);
  op.diag.setConstant(Scalar(1) + Scalar(2) * a);
  op.lower.tail(n - 1).setConstant(-a + b);
  op.upper.head(n - 1).setConstant(-a - b);
  op.upper(0) = (-a + b) + (-a - b);
  op.lower(n - 1) = (-a + b) + (-a - b);
  return op;
}

struct SteadySettings {
  double eps = 1e-8;
  double t_check = 0.0;  ///< 0 means 50 dt
  double t_max = 20000.0;
};

/// Result of run_until_steady. converged == false means the horizon was hit first.
struct SteadyRun {
  Field profile;
  bool converged = false;
  double residual = 0.0;
  double elapsed = 0.0;
  long steps = 0;
};

/// Semi-implicit integrator: transport and diffusion implicit, reaction explicit.
/// The operator is factored once at construction and is immutable afterwards.
class SemiImplicitSolver {
 public:
  SemiImplicitSolver(const Grid1D& grid, const SchemeParams& scheme);

  const Grid1D& grid() const { return grid_; }
  const SchemeParams& scheme() const { return scheme_; }
  const Tridiagonal<double>& matrix() const { return op_; }

  /// u <- A^{-1} (u + dt * source); source is evaluated by the caller at the old state.
  void advance(Field& u, const Vector& source) const;

  /// One step with reaction(u_values) -> rate vector.
  template <typename Reaction>
  void step(Field& u, Reaction&& reaction) const {
    advance(u, reaction(u.values));
  }

  using Observer = std::function<void(const Field&, long step)>;

  template <typename Reaction>
  SteadyRun run_until_steady(Field u, Reaction&& reaction, const SteadySettings& settings,
                             const Observer& observer = nullptr) const {
    if (!(settings.eps > 0.0)) throw ValidationError("steady.eps", "must be positive");
    const double t_check = settings.t_check > 0.0 ? settings.t_check : 50.0 * scheme_.dt;
    if (t_check < scheme_.dt) throw ValidationError("steady.t_check", "must be at least dt");
    const long every = std::max(1L, std::lround(t_check / scheme_.dt));
    const long max_steps = std::lround(settings.t_max / scheme_.dt);
    const double t0 = u.time;
    Vector snapshot = u.values;
    SteadyRun run{u, false, std::numeric_limits<double>::infinity(), 0.0, 0};
    if (observer) observer(u, 0);
    for (long s = 1; s <= max_steps; ++s) {
      step(u, reaction);
      if (observer) observer(u, s);
      if (s % every == 0) {
        run.residual = (u.values - snapshot).cwiseAbs().maxCoeff();
        snapshot = u.values;
        if (run.residual <= settings.eps) {
          run.converged = true;
          run.steps = s;
          break;
        }
      }
      run.steps = s;
    }
    run.elapsed = u.time - t0;
    run.profile = std::move(u);
    return run;
  }

 private:
  Grid1D grid_;
  SchemeParams scheme_;
  Tridiagonal<double> op_;
  ThomasSolver<double> thomas_;
};

/// Largest x where the piecewise-linear interpolant of u crosses level.
double measure_front_position(const Field& u, double level);

}  // namespace carpet
