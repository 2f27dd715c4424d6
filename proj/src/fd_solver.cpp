#include "carpet/fd_solver.hpp"

#include <sstream>

namespace carpet {

namespace {
const SchemeParams& checked(const SchemeParams& s) {
  s.validate();
  return s;
}
}  // namespace

void SchemeParams::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("scheme.dt", "must be positive");
  if (!(D > 0.0) || !std::isfinite(D)) throw ValidationError("scheme.D", "must be positive");
  if (!std::isfinite(c)) throw ValidationError("scheme.c", "must be finite");
}

SemiImplicitSolver::SemiImplicitSolver(const Grid1D& grid, const SchemeParams& scheme)
    : grid_(grid), scheme_(checked(scheme)), op_(build_operator<double>(scheme, grid)), thomas_(op_) {
  if (mesh_peclet(scheme, grid) > 1.0) {
    std::ostringstream msg;
    msg << "mesh Peclet number |c| dx / (2D) = " << mesh_peclet(scheme, grid) << " exceeds 1";
    throw ValidationError("scheme.c", msg.str());
  }
}

void SemiImplicitSolver::advance(Field& u, const Vector& source) const {
  u.values += scheme_.dt * source;
  thomas_.solve_in_place(u.values);
  u.time += scheme_.dt;
  if (!u.values.allFinite()) {
    std::ostringstream msg;
    msg << "non-finite state at t=" << u.time;
    throw Error(ErrorKind::NonFiniteState, msg.str());
  }
}

double measure_front_position(const Field& u, double level) {
  const Vector& v = u.values;
  for (Index i = v.size() - 2; i >= 0; --i) {
    const double a = v(i) - level;
    const double b = v(i + 1) - level;
    if (a == 0.0 && b == 0.0) continue;
    if ((a <= 0.0 && b >= 0.0) || (a >= 0.0 && b <= 0.0)) {
      const double w = a / (a - b);
      return u.grid.node(i) + w * u.grid.dx();
    }
  }
  std::ostringstream msg;
  msg << "profile never crosses level " << level;
  throw Error(ErrorKind::NoCrossing, msg.str());
}

}  // namespace carpet
