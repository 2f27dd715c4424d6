#include "carpet/sterile.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "carpet/fd_solver.hpp"
#include "carpet/parallel.hpp"
#include "carpet/roots.hpp"
#include "carpet/tridiagonal.hpp"

namespace carpet {

SterileAnalytic::SterileAnalytic(double c_, double L_, double M_, double mus_) : c(c_), L(L_), M(M_), mus(mus_) {
  if (!(mus > 0.0)) throw Error(ErrorKind::Domain, "SterileAnalytic: mus must be positive");
  if (!(L > 0.0)) throw Error(ErrorKind::Domain, "SterileAnalytic: L must be positive");
  const double s = std::sqrt(c * c + 4.0 * mus);
  r_plus = (-c + s) / 2.0;
  r_minus = (-c - s) / 2.0;
  const double level = M / mus;
  Dc = -r_plus * level / (r_plus - r_minus);
  C = r_minus * level * std::exp(-r_plus * L) / (r_plus - r_minus);
  A = level + C + Dc;
  B = level + C * std::exp(r_plus * L) + Dc * std::exp(r_minus * L);
}

double SterileAnalytic::value(double x) const {
  if (x <= 0.0) return A * std::exp(r_plus * x);
  if (x >= L) return B * std::exp(r_minus * (x - L));
  return M / mus + C * std::exp(r_plus * x) + Dc * std::exp(r_minus * x);
}

double SterileAnalytic::slope(double x) const {
  if (x <= 0.0) return r_plus * A * std::exp(r_plus * x);
  if (x >= L) return r_minus * B * std::exp(r_minus * (x - L));
  return r_plus * C * std::exp(r_plus * x) + r_minus * Dc * std::exp(r_minus * x);
}

double SterileAnalytic::curvature(double x) const {
  if (x <= 0.0) return r_plus * r_plus * A * std::exp(r_plus * x);
  if (x >= L) return r_minus * r_minus * B * std::exp(r_minus * (x - L));
  return r_plus * r_plus * C * std::exp(r_plus * x) + r_minus * r_minus * Dc * std::exp(r_minus * x);
}

double SterileAnalytic::argmax() const {
  return std::log(-Dc * r_minus / (C * r_plus)) / (r_plus - r_minus);
}

double ms_closed_form(double x, const SterileAnalytic& params) { return params.value(x); }

namespace {

double sinc(double y) { return y == 0.0 ? 1.0 : std::sin(y) / y; }

double spectral_sum(double x, const SterileAnalytic& p, double W, int panels) {
  using cd = std::complex<double>;
  constexpr double pi = std::numbers::pi;
  const cd I(0.0, 1.0);
  auto integrand = [&](double xi) {
    const cd forcing = p.M * p.L * std::exp(-I * (pi * p.L * xi)) * sinc(pi * p.L * xi);
    const cd symbol = 4.0 * pi * pi * xi * xi - 2.0 * pi * I * p.c * xi + p.mus;
    return (forcing * std::exp(2.0 * pi * I * xi * x) / symbol).real();
  };
  const double h = W / panels;
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double a = k * h;
    const double mid = a + 0.5 * h;
    double s = 0.0;
    for (std::size_t j = 0; j < detail::kGaussNodes.size(); ++j) {
      s += detail::kGaussWeights[j] * integrand(mid + 0.5 * h * detail::kGaussNodes[j]);
    }
    sum += 0.5 * h * s;
  }
  return 2.0 * sum;
}

}  // namespace

double ms_spectral(double x, const SterileAnalytic& params, const QuadratureSettings& quad) {
  int panels = quad.panels;
  double prev = spectral_sum(x, params, quad.half_width, panels);
  for (int d = 0; d < quad.max_doublings; ++d) {
    panels *= 2;
    const double next = spectral_sum(x, params, quad.half_width, panels);
    if (std::abs(next - prev) <= quad.tol) return next;
    prev = next;
  }
  std::ostringstream msg;
  msg << "ms_spectral: no convergence at x=" << x << " after " << quad.max_doublings << " doublings";
  throw Error(ErrorKind::QuadratureNotConverged, msg.str());
}

ReleaseProfile ReleaseProfile::homogeneous(double L, double M) { return {{{0.0, L, M}}}; }

ReleaseProfile ReleaseProfile::heterogeneous(double L, double M) {
  return {{{0.0, 2.0 * L / 3.0, M}, {2.0 * L / 3.0, 7.0 * L / 6.0, M / 2.0}}};
}

ReleaseProfile ReleaseProfile::heterogeneous_swapped(double L, double M) {
  return {{{0.0, L / 2.0, M / 2.0}, {L / 2.0, 7.0 * L / 6.0, M}}};
}

void ReleaseProfile::validate() const {
  if (segments.empty()) throw ValidationError("strategy.release", "at least one segment required");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (!(s.end > s.start)) throw ValidationError("strategy.release", "segment end must exceed start");
    if (!(s.density >= 0.0)) throw ValidationError("strategy.release", "densities must be nonnegative");
    if (i > 0 && s.start < segments[i - 1].end) {
      throw ValidationError("strategy.release", "segments must be sorted and disjoint");
    }
  }
}

double ReleaseProfile::total() const {
  double n = 0.0;
  for (const auto& s : segments) n += s.density * (s.end - s.start);
  return n;
}

double ReleaseProfile::left() const { return segments.front().start; }
double ReleaseProfile::right() const { return segments.back().end; }

Vector ReleaseProfile::source(const Grid1D& grid, double shift) const {
  Vector s = Vector::Zero(grid.size());
  for (const auto& seg : segments) {
    if (seg.density != 0.0) s += seg.density * overlap_fractions(grid, seg.start + shift, seg.end + shift);
  }
  return s;
}

void SterileConfig::validate() const {
  if (!std::isfinite(c)) throw ValidationError("strategy.c", "must be finite");
  if (!(mus > 0.0)) throw ValidationError("reaction.mus", "must be positive");
  if (!(dx > 0.0)) throw ValidationError("grid.dx", "must be positive");
  if (!(horizon > 0.0)) throw ValidationError("strategy.horizon", "must be positive");
  if (!(leak_margin >= 0.0)) throw ValidationError("strategy.leak_margin", "must be nonnegative");
  if (!(extinction_ratio > 0.0 && extinction_ratio < 1.0)) {
    throw ValidationError("strategy.extinction_ratio", "must lie in (0, 1)");
  }
  SchemeParams{dt, 0.0, D}.validate();
}

Grid1D sterile_grid(const SterileConfig& cfg, const ReleaseProfile& release) {
  const double drift = cfg.c * cfg.horizon;
  const double lo = std::min(cfg.front_start, release.left() + std::min(0.0, drift)) - cfg.margin_left;
  const double hi = std::max(cfg.front_start, release.right() + std::max(0.0, drift)) + cfg.margin_right;
  return Grid1D::with_spacing(lo, hi, cfg.dx);
}

namespace {

/// Backward-Euler stepper for the sterile density with a moving window source.
class SterileStepper {
 public:
  SterileStepper(const Grid1D& grid, const SterileConfig& cfg, const ReleaseProfile& release)
      : grid_(grid), release_(release), c_(cfg.c), dt_(cfg.dt), op_(make_operator(grid, cfg)), thomas_(op_) {}

  /// Advances m from t_new - dt to t_new; the window is taken at the midpoint of the step.
  void step(Vector& m, double t_new) const {
    m += dt_ * release_.source(grid_, c_ * (t_new - 0.5 * dt_));
    thomas_.solve_in_place(m);
  }

 private:
  static Tridiagonal<double> make_operator(const Grid1D& grid, const SterileConfig& cfg) {
    Tridiagonal<double> op = build_operator<double>(SchemeParams{cfg.dt, 0.0, cfg.D}, grid);
    op.diag.array() += cfg.dt * cfg.mus;
    return op;
  }

  Grid1D grid_;
  const ReleaseProfile& release_;
  double c_;
  double dt_;
  Tridiagonal<double> op_;
  ThomasSolver<double> thomas_;
};

double wake_maximum(const Grid1D& grid, const Vector& f, double from) {
  double w = 0.0;
  for (Index i = grid.size() - 1; i >= 0 && grid.node(i) > from; --i) w = std::max(w, f(i));
  return w;
}

// Leaked females that thin out monotonically toward the far end: a settled leak, not a front.
bool wake_decays(const Grid1D& grid, const Vector& f, double from, double floor) {
  const Index last = grid.size() - 1;
  if (!(f(last) < floor)) return false;
  for (Index i = last; i > 0 && grid.node(i - 1) > from; --i) {
    if (f(i) > f(i - 1)) return false;
  }
  return true;
}

double front_or_minus_inf(const Grid1D& grid, const Vector& f, double level) {
  for (Index i = grid.size() - 2; i >= 0; --i) {
    const double a = f(i) - level;
    const double b = f(i + 1) - level;
    if (a >= 0.0 && b < 0.0) return grid.node(i) + a / (a - b) * grid.dx();
  }
  return -std::numeric_limits<double>::infinity();
}

}  // namespace

SterileOutcome run_sterile(const SterileConfig& cfg, const ReleaseProfile& release) {
  cfg.validate();
  release.validate();
  const Grid1D grid = sterile_grid(cfg, release);
  const double F = derive_info(cfg.term).F;
  const SemiImplicitSolver female(grid, SchemeParams{cfg.dt, 0.0, cfg.D});
  const SterileStepper sterile(grid, cfg, release);

  SterileOutcome out;
  out.grid = grid;
  out.female_equilibrium = F;
  Field f = step_profile(grid, cfg.front_start, F);
  Vector m = release.source(grid, 0.0);
  const MosquitoReaction term = cfg.term;
  auto record = [&](double t) {
    out.times.push_back(t);
    out.f_history.push_back(f.values);
    out.m_history.push_back(m);
  };
  if (cfg.record_stride > 0) record(0.0);

  const long steps = std::lround(cfg.horizon / cfg.dt);
  const long check_step = std::max(0L, steps - std::lround(cfg.growth_window / cfg.dt));
  double wake_before = std::numeric_limits<double>::infinity();
  Vector rate(grid.size());
  bool invaded = false;
  for (long s = 1; s <= steps; ++s) {
    const double t = s * cfg.dt;
    sterile.step(m, t);
    for (Index i = 0; i < grid.size(); ++i) rate(i) = term(f.values(i), m(i));
    female.advance(f, rate);
    if (cfg.record_stride > 0 && s % cfg.record_stride == 0) record(t);

    const double window_right = cfg.c * t + release.right();
    out.front_position = front_or_minus_inf(grid, f.values, 0.5 * F);
    if (!invaded && out.front_position > window_right + cfg.leak_margin) {
      invaded = true;
      out.verdict = Verdict::Invasion;
      out.t_end = t;
      out.wake_max = wake_maximum(grid, f.values, window_right + cfg.leak_margin);
      out.f = f.values;
      out.m = m;
      if (cfg.stop_on_invasion) return out;
    }
    if (s == check_step) wake_before = wake_maximum(grid, f.values, window_right + cfg.leak_margin);
  }
  if (invaded) return out;
  out.t_end = steps * cfg.dt;
  const double wake_from = cfg.c * out.t_end + release.right() + cfg.leak_margin;
  out.wake_max = wake_maximum(grid, f.values, wake_from);
  const bool small = out.wake_max < cfg.extinction_ratio * F ||
                     wake_decays(grid, f.values, wake_from, cfg.extinction_ratio * F);
  const bool shrinking = out.wake_max <= (1.0 + cfg.growth_tol) * wake_before;
  out.verdict = small && shrinking ? Verdict::Eradication : Verdict::Undecided;
  out.f = f.values;
  out.m = m;
  return out;
}

Field ms_lab_frame(const SterileConfig& cfg, double L, double M, double T) {
  const ReleaseProfile release = ReleaseProfile::homogeneous(L, M);
  SterileConfig local = cfg;
  local.horizon = T;
  const Grid1D grid = sterile_grid(local, release);
  const SterileStepper sterile(grid, local, release);
  Vector m = release.source(grid, 0.0);
  const long steps = std::lround(T / cfg.dt);
  for (long s = 1; s <= steps; ++s) sterile.step(m, s * cfg.dt);
  return Field(grid, m, steps * cfg.dt);
}

namespace {

template <typename Eval, typename Mid>
CriticalResult bisect_verdicts(double lo, double hi, double tol, bool relative, Eval&& eval, Mid&& midpoint,
                               const char* what) {
  CriticalResult res;
  res.tolerance = tol;
  auto verdict_at = [&](double p) {
    const Verdict v = eval(p);
    res.verdicts.push_back({p, v});
    return v;
  };
  const Verdict vlo = verdict_at(lo);
  const Verdict vhi = verdict_at(hi);
  if (vlo != Verdict::Invasion || vhi != Verdict::Eradication) {
    std::ostringstream msg;
    msg << what << ": bracket [" << lo << ", " << hi << "] classifies as (" << to_string(vlo) << ", "
        << to_string(vhi) << "), expected (Invasion, Eradication)";
    throw Error(ErrorKind::BadBracket, msg.str());
  }
  auto wide = [&]() { return relative ? (hi - lo) > tol * lo : (hi - lo) > tol; };
  while (wide()) {
    const double mid = midpoint(lo, hi);
    ++res.iterations;
    const Verdict v = verdict_at(mid);
    if (v == Verdict::Invasion) {
      lo = mid;
    } else if (v == Verdict::Eradication) {
      hi = mid;
    } else {
      std::ostringstream msg;
      msg << what << ": undecided verdict at " << mid;
      throw UndecidedVerdict(mid, msg.str());
    }
  }
  res.bracket_low = lo;
  res.bracket_high = hi;
  res.threshold = midpoint(lo, hi);
  return res;
}

}  // namespace

CriticalResult pi_dichotomy(double L, double M_low, double M_high, double rel_tol, const SterileConfig& cfg) {
  if (!(M_low > 0.0 && M_low < M_high)) throw Error(ErrorKind::BadBracket, "pi_dichotomy: need 0 < M_low < M_high");
  return bisect_verdicts(
      M_low, M_high, rel_tol, true,
      [&](double M) { return run_sterile(cfg, ReleaseProfile::homogeneous(L, M)).verdict; },
      [](double a, double b) { return std::sqrt(a * b); }, "pi_dichotomy");
}

CriticalResult critical_width(double M, double L_low, double L_high, double tol, const SterileConfig& cfg) {
  if (!(L_low > 0.0 && L_low < L_high)) throw Error(ErrorKind::BadBracket, "critical_width: need 0 < L_low < L_high");
  return bisect_verdicts(
      L_low, L_high, tol, false,
      [&](double L) { return run_sterile(cfg, ReleaseProfile::homogeneous(L, M)).verdict; },
      [](double a, double b) { return 0.5 * (a + b); }, "critical_width");
}

HeteroReport hetero_compare(double M, double L_star, const SterileConfig& cfg, int workers) {
  const std::vector<ReleaseProfile> profiles{ReleaseProfile::homogeneous(L_star, M),
                                             ReleaseProfile::heterogeneous(L_star, M),
                                             ReleaseProfile::heterogeneous_swapped(L_star, M)};
  const auto verdicts = parallel_map<Verdict>(profiles.size(), workers,
                                              [&](std::size_t i) { return run_sterile(cfg, profiles[i]).verdict; });
  HeteroReport rep;
  rep.L_star = L_star;
  rep.M = M;
  rep.homogeneous = verdicts[0];
  rep.heterogeneous = verdicts[1];
  rep.swapped = verdicts[2];
  rep.N_hom = profiles[0].total();
  rep.N_het = profiles[1].total();
  rep.ratio = rep.N_het / rep.N_hom;
  return rep;
}

}  // namespace carpet
