#include "carpet/wave_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "carpet/ode.hpp"
#include "carpet/roots.hpp"

namespace carpet {

namespace {

using State3 = Eigen::Vector3d;

constexpr double kManifoldOffset = 1e-6;  // distance from 1 where the left tail starts
constexpr double kRightOffset = 1e-8;     // distance from 0 where the right orbit starts

OdeOptions phase_options() {
  OdeOptions opt;
  opt.rtol = 1e-10;
  opt.atol = 1e-14;
  return opt;
}

auto phase_rhs(const CubicReaction& term, double c) {
  return [&term, c](double, const State3& y) {
    return State3(y(1), -c * y(1) - term(y(0)), y(1) * y(1));
  };
}

/// Negative eigenvalue of the linearization at 0 (slope of the stable manifold).
double stable_slope_at_zero(const CubicReaction& term, double c) {
  return (-c - std::sqrt(c * c + 4.0 * std::abs(term.derivative(0.0)))) / 2.0;
}

/// Positive eigenvalue of the linearization at 1 (u' = -k (1 - u) on the unstable manifold).
double unstable_rate_at_one(const CubicReaction& term, double c) {
  return (-c + std::sqrt(c * c + 4.0 * std::abs(term.derivative(1.0)))) / 2.0;
}

/// Point (gamma, p) on the stable manifold of (0, 0), reached by integrating backward in x.
/// Returns p; throws PathTerminates if the orbit turns (p = 0) below gamma.
double right_orbit_slope(const CubicReaction& term, double c, double gamma) {
  const double r = stable_slope_at_zero(term, c);
  const double e = std::min(kRightOffset, 0.5 * gamma);
  std::vector<OdeEvent<3>> events{{[gamma](double, const State3& y) { return y(0) - gamma; }, +1},
                                  {[](double, const State3& y) { return y(1); }, +1}};
  const auto res = dopri5<3>(phase_rhs(term, c), 0.0, State3(e, r * e, 0.0), -1e4, events, phase_options());
  if (res.event == 0) return res.y(1);
  if (res.event == 1) throw PathTerminates(res.y(0), "right orbit turns before reaching gamma");
  throw Error(ErrorKind::NoCrossing, "right orbit did not reach gamma");
}

}  // namespace

KillingAnalytic::KillingAnalytic(double c_, double mu_) : c(c_), mu(mu_) {
  if (!(mu > 0.0)) throw Error(ErrorKind::Domain, "KillingAnalytic: kill rate must be positive");
  Delta = c * c + 4.0 * mu;
  const double s = std::sqrt(Delta);
  lambda_plus = (-c + s) / 2.0;
  lambda_minus = (-c - s) / 2.0;
}

double KillingAnalytic::psi1(double L) const {
  const double s = std::sqrt(Delta);
  return std::exp(c * L) * (-c * std::sinh(s * L) + s * std::cosh(s * L));
}

double v1_profile(const KillingAnalytic& an, double gamma, double L, double x) {
  const double s = x - L;
  return gamma / std::sqrt(an.Delta) *
         (an.lambda_plus * std::exp(an.lambda_minus * s) - an.lambda_minus * std::exp(an.lambda_plus * s));
}

double v1_slope(const KillingAnalytic& an, double gamma, double L, double x) {
  const double s = x - L;
  return gamma * an.lambda_plus * an.lambda_minus / std::sqrt(an.Delta) *
         (std::exp(an.lambda_minus * s) - std::exp(an.lambda_plus * s));
}

double v1_curvature(const KillingAnalytic& an, double gamma, double L, double x) {
  const double s = x - L;
  return gamma * an.lambda_plus * an.lambda_minus / std::sqrt(an.Delta) *
         (an.lambda_minus * std::exp(an.lambda_minus * s) - an.lambda_plus * std::exp(an.lambda_plus * s));
}

double unit_width(const KillingAnalytic& an, double gamma) {
  if (!(gamma > 0.0)) throw Error(ErrorKind::Domain, "unit_width: gamma must be positive");
  const double scale = gamma / std::sqrt(an.Delta);
  if (scale * an.psi1(0.0) >= 1.0) {
    throw Error(ErrorKind::NoBracket, "zone solution already reaches 1 at zero width");
  }
  auto f = [&](double L) { return scale * an.psi1(0.5 * L) - 1.0; };
  double hi = 1.0;
  while (f(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e6) throw Error(ErrorKind::NoBracket, "zone solution never reaches 1");
  }
  return bisect(f, 0.0, hi, 1e-14);
}

double solve_super_width(const KillingAnalytic& an, double gamma0, double alpha1) {
  if (gamma0 >= 1.0) return unit_width(an, gamma0);
  if (!(gamma0 > 0.0 && gamma0 < alpha1)) {
    std::ostringstream msg;
    msg << "solve_super_width: gamma0 = " << gamma0 << " outside (0, " << alpha1 << ")";
    throw Error(ErrorKind::Domain, msg.str());
  }
  return unit_width(an, gamma0);
}

PhasePath phase_tail(const CubicReaction& term, double c, double u_start, double u_end, double p_start) {
  if (!(p_start < 0.0)) throw Error(ErrorKind::Domain, "phase_tail: p_start must be negative");
  if (!(u_end < u_start)) throw Error(ErrorKind::Domain, "phase_tail: u_end must be below u_start");
  std::vector<OdeEvent<3>> events{{[u_end](double, const State3& y) { return y(0) - u_end; }, -1},
                                  {[](double, const State3& y) { return y(1); }, +1}};
  OdeOptions opt = phase_options();
  opt.record = true;
  const auto res = dopri5<3>(phase_rhs(term, c), 0.0, State3(u_start, p_start, 0.0), 1e5, events, opt);
  if (res.event == 1) {
    std::ostringstream msg;
    msg << "phase path reaches u' = 0 at u = " << res.y(0) << " before u = " << u_end;
    throw PathTerminates(res.y(0), msg.str());
  }
  if (res.event != 0) throw Error(ErrorKind::NoCrossing, "phase path did not reach its end density");
  PhasePath path;
  path.u.reserve(res.ys.size());
  path.p.reserve(res.ys.size());
  for (const auto& y : res.ys) {
    if (!path.u.empty() && !(y(0) < path.u.back())) continue;
    path.u.push_back(y(0));
    path.p.push_back(y(1));
  }
  path.cross_integral = res.y(2);
  path.length = res.x;
  return path;
}

double tail_decay_rate(const CubicReaction& term, double c) {
  return (std::sqrt(c * c + 4.0 * std::abs(term.derivative(0.0))) - std::abs(c)) / 2.0;
}

SpeedResult natural_speed(const CubicReaction& term, const SpeedSettings& st) {
  const Grid1D grid = Grid1D::with_spacing(st.x_min, st.x_max, st.dx);
  SchemeParams scheme{st.dt, 0.0, st.D};
  SemiImplicitSolver solver(grid, scheme);
  Field u = step_profile(grid, st.x_min + st.margin);
  auto reaction = [&term](const Vector& v) { return v.unaryExpr([&term](double s) { return term(s); }).eval(); };

  std::vector<double> ts;
  std::vector<double> xs;
  const long max_steps = std::lround(st.t_max / st.dt);
  for (long s = 0; s < max_steps; ++s) {
    solver.step(u, reaction);
    const double pos = measure_front_position(u, st.level);
    ts.push_back(u.time);
    xs.push_back(pos);
    if (pos > st.x_max - st.margin || pos < st.x_min + 0.5 * st.margin) break;
  }
  const auto half = static_cast<Index>(ts.size() / 2);
  const auto count = static_cast<Index>(ts.size()) - half;
  if (count < 10) throw UndecidedVerdict(term.alpha, "natural_speed: too few front samples");
  const Vector t = Eigen::Map<const Vector>(ts.data() + half, count);
  const Vector x = Eigen::Map<const Vector>(xs.data() + half, count);
  const LineFit fit = fit_line(t, x);
  SpeedResult out{fit.slope, fit.rms_residual, u.time, static_cast<long>(count)};
  if (fit.rms_residual > st.residual_tol) {
    std::ostringstream msg;
    msg << "natural_speed: regression residual " << fit.rms_residual << " exceeds " << st.residual_tol;
    throw UndecidedVerdict(term.alpha, msg.str());
  }
  return out;
}

LocalMax critical_local_max(const CubicReaction& term, double c) {
  if (c > 0.0) throw Error(ErrorKind::Domain, "critical_local_max: frame speed must be <= 0");
  if (c == 0.0) return {derive_info(term).beta, 0.0};
  // alpha is a node here; the orbit creeps into it and p only hits 0 through round-off.
  if (c * c >= 4.0 * term.derivative(term.alpha)) {
    throw Error(ErrorKind::NoCrossing, "stable manifold of 0 ends at alpha: no local maximum");
  }
  const double r = stable_slope_at_zero(term, c);
  const double e = kRightOffset;
  std::vector<OdeEvent<3>> events{{[](double, const State3& y) { return y(1); }, +1}};
  const auto res = dopri5<3>(phase_rhs(term, c), 0.0, State3(e, r * e, 0.0), -2e3, events, phase_options());
  if (res.event != 0) {
    throw Error(ErrorKind::NoCrossing, "stable manifold of 0 never turns: no local maximum");
  }
  // Backward integration accumulates a negative integral; add the linear tail beyond e.
  return {res.y(0), -res.y(2) + std::abs(r) * e * e / 2.0};
}

double left_tail_slope(const CubicReaction& term, double c, double u0, PhasePath* path) {
  const double k = unstable_rate_at_one(term, c);
  const double e = kManifoldOffset;
  if (u0 >= 1.0 - e) return -k * std::max(0.0, 1.0 - u0);
  PhasePath tail = phase_tail(term, c, 1.0 - e, u0, -k * e);
  const double cross = tail.cross_integral + k * e * e / 2.0;
  const double energy = 2.0 * (potential(term, 1.0) - potential(term, u0)) - 2.0 * c * cross;
  if (path) *path = std::move(tail);
  return -std::sqrt(std::max(0.0, energy));
}

MatchingEval critical_matching_residual(const CubicReaction& term, double c, double mu, double L,
                                        double phi0) {
  const KillingAnalytic an(c, mu);
  MatchingEval ev;
  ev.u0 = v1_profile(an, phi0, L, 0.0);
  ev.zone_slope = v1_slope(an, phi0, L, 0.0);
  ev.left_slope = left_tail_slope(term, c, ev.u0);
  ev.residual = ev.zone_slope - ev.left_slope;
  return ev;
}

MatchingRoot matching_root(const CubicReaction& term, double c, double mu) {
  MatchingRoot out;
  out.phi0 = critical_local_max(term, c).phi0;
  out.bracket_high = unit_width(KillingAnalytic(c, mu), out.phi0);
  auto f = [&](double L) { return critical_matching_residual(term, c, mu, L, out.phi0).residual; };
  constexpr int kSamples = 50;
  double prev = f(0.0);
  for (int i = 1; i <= kSamples; ++i) {
    const double v = f(out.bracket_high * i / kSamples);
    if (v > prev) out.monotone = false;
    prev = v;
  }
  out.width = bisect(f, 0.0, out.bracket_high, 1e-12);
  return out;
}

double family_width(const CubicReaction& term, double c, double mu, double gamma) {
  const KillingAnalytic an(c, mu);
  const double phi0 = critical_local_max(term, c).phi0;
  if (!(gamma > 0.0 && gamma <= phi0)) throw Error(ErrorKind::Domain, "family_width: gamma outside the right orbit");
  double pg = 0.0;
  if (gamma < phi0) {
    try {
      pg = right_orbit_slope(term, c, gamma);
    } catch (const PathTerminates& e) {
      // gamma sits at the turning point up to integration error
      if (gamma - e.u_stop() > 1e-6) throw;
    }
  }
  const double lp = an.lambda_plus;
  const double lm = an.lambda_minus;
  const double B = (lp * gamma - pg) / (lp - lm);
  const double A = gamma - B;
  auto value = [&](double L) { return A * std::exp(-lp * L) + B * std::exp(-lm * L); };
  auto h = [&](double L) {
    const double u0 = value(L);
    const double du0 = lp * A * std::exp(-lp * L) + lm * B * std::exp(-lm * L);
    return du0 - left_tail_slope(term, c, u0);
  };
  if (h(0.0) <= 0.0) return 0.0;
  constexpr double kStep = 0.01;
  double lo = 0.0;
  for (;;) {
    const double hi = lo + kStep;
    if (h(hi) <= 0.0) return bisect(h, lo, hi, 1e-12);
    if (value(hi) >= 1.0 || hi > 1e3) break;
    lo = hi;
  }
  throw Error(ErrorKind::NoBracket, "family_width: no matching width before the zone solution reaches 1");
}

FamilyMinimum matching_family_minimum(const CubicReaction& term, double c, double mu) {
  const double phi0 = critical_local_max(term, c).phi0;
  auto width = [&](double gamma) { return family_width(term, c, mu, gamma); };
  constexpr int kScan = 50;
  std::vector<double> gs(kScan);
  std::vector<double> ws(kScan);
  int best = 0;
  for (int i = 0; i < kScan; ++i) {
    gs[i] = phi0 * (0.02 + 0.98 * i / (kScan - 1));
    ws[i] = width(gs[i]);
    if (ws[i] < ws[best]) best = i;
  }
  double a = gs[std::max(0, best - 1)];
  double b = gs[std::min(kScan - 1, best + 1)];
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = width(x1);
  double f2 = width(x2);
  while (b - a > 1e-8) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = width(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = width(x2);
    }
  }
  FamilyMinimum out{ws[best], gs[best]};
  const double g = 0.5 * (a + b);
  const double w = width(g);
  if (w < out.width) out = {w, g};
  return out;
}

CriticalRegime critical_regime(const CubicReaction& term, double c) {
  const double threshold = 2.0 * std::sqrt(term.derivative(term.alpha));
  return std::abs(c) < threshold ? CriticalRegime::CriticalSolutionExists : CriticalRegime::CriticalSolutionAbsent;
}

}  // namespace carpet
