#include "carpet/killing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "carpet/parallel.hpp"
#include "carpet/roots.hpp"

namespace carpet {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Eradication: return "Eradication";
    case Verdict::Invasion: return "Invasion";
    case Verdict::Undecided: return "Undecided";
  }
  return "Undecided";
}

void KillingConfig::validate() const {
  if (c > 0.0) throw ValidationError("strategy.c", "frame speed must be <= 0");
  if (!(L > 0.0)) throw ValidationError("strategy.L", "zone width must be positive");
  if (!(mu >= 0.0)) throw ValidationError("strategy.mu", "kill rate must be nonnegative");
  if (!(term.alpha > 0.0 && term.alpha < 0.5)) throw ValidationError("reaction.alpha", "must lie in (0, 1/2)");
  if (!(dx > 0.0)) throw ValidationError("grid.dx", "must be positive");
  if (!(x_max > x_min)) throw ValidationError("grid.x_max", "must exceed x_min");
  if (0.0 - x_min < boundary_clearance || x_max - L < boundary_clearance) {
    throw ValidationError("strategy.L", "zone must stay at least " + std::to_string(boundary_clearance) +
                                            " away from both grid ends");
  }
  SchemeParams{dt, c, D}.validate();
}

Verdict classify(double u_far, double du_at_L, bool converged, double slope_tol, TailTrend tail) {
  if (!converged) return Verdict::Undecided;
  if ((u_far < 1e-3 || tail == TailTrend::Decaying) && du_at_L <= slope_tol) return Verdict::Eradication;
  if (u_far > 1.0 - 1e-3 || tail == TailTrend::Rising) return Verdict::Invasion;
  return Verdict::Undecided;
}

SteadyOutcome run_killing(const KillingConfig& cfg, const SemiImplicitSolver::Observer& observer) {
  cfg.validate();
  const Grid1D grid = Grid1D::with_spacing(cfg.x_min, cfg.x_max, cfg.dx);
  const SemiImplicitSolver solver(grid, SchemeParams{cfg.dt, cfg.c, cfg.D});
  const Vector zone = overlap_fractions(grid, 0.0, cfg.L);
  const Vector outside = Vector::Ones(grid.size()) - zone;
  const CubicReaction term = cfg.term;
  const double mu = cfg.mu;
  auto reaction = [&](const Vector& u) -> Vector {
    return outside.cwiseProduct(u.unaryExpr([&term](double s) { return term(s); })) - mu * zone.cwiseProduct(u);
  };
  SteadyRun run = solver.run_until_steady(step_profile(grid, 0.0), reaction, cfg.steady, observer);

  SteadyOutcome out;
  out.profile = run.profile;
  out.converged = run.converged;
  out.residual = run.residual;
  out.elapsed = run.elapsed;
  out.u_at_L = out.profile.at(cfg.L);
  out.du_at_L = out.profile.slope_at(cfg.L);
  // Fast frames leave tails that linger near 0 or alpha well past x_max.
  const Index iL = std::min<Index>(grid.size() - 2, static_cast<Index>(std::ceil((cfg.L - cfg.x_min) / cfg.dx)));
  const Vector tail = out.profile.values.tail(grid.size() - iL);
  TailTrend trend = TailTrend::Unknown;
  Index imin = 0;
  tail.minCoeff(&imin);
  const Vector after = tail.tail(tail.size() - imin);
  const double rise = cfg.slope_tol * cfg.dx;
  auto steps = [](const Vector& v) { return (v.tail(v.size() - 1) - v.head(v.size() - 1)).eval(); };
  if (tail.maxCoeff() < term.alpha && steps(tail).maxCoeff() <= rise) {
    trend = TailTrend::Decaying;
  } else if (after.size() > 1 && after(after.size() - 1) > term.alpha && steps(after).minCoeff() >= -rise) {
    trend = TailTrend::Rising;
  }
  out.verdict = classify(out.profile.values(grid.size() - 1), out.du_at_L, run.converged, cfg.slope_tol, trend);
  // Near the threshold the discrete minimum can land on the first node past L.
  const auto mins = interior_minima(out.profile, 0.0, cfg.L + 2.0 * cfg.dx);
  if (!mins.empty()) out.interior_min_location = mins.front();
  return out;
}

CriticalResult lambda_of_c(double c, double L_low, double L_high, double tol, const KillingConfig& base) {
  if (!(L_low < L_high)) throw Error(ErrorKind::BadBracket, "lambda_of_c: need L_low < L_high");
  CriticalResult res;
  res.tolerance = tol;
  auto verdict_at = [&](double L) {
    KillingConfig cfg = base;
    cfg.c = c;
    cfg.L = L;
    const Verdict v = run_killing(cfg).verdict;
    res.verdicts.push_back({L, v});
    return v;
  };
  const Verdict vlo = verdict_at(L_low);
  const Verdict vhi = verdict_at(L_high);
  if (vlo != Verdict::Invasion || vhi != Verdict::Eradication) {
    std::ostringstream msg;
    msg << "lambda_of_c(c=" << c << "): bracket [" << L_low << ", " << L_high << "] classifies as ("
        << to_string(vlo) << ", " << to_string(vhi) << "), expected (Invasion, Eradication)";
    throw Error(ErrorKind::BadBracket, msg.str());
  }
  double lo = L_low;
  double hi = L_high;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    ++res.iterations;
    const Verdict v = verdict_at(mid);
    if (v == Verdict::Invasion) {
      lo = mid;
    } else if (v == Verdict::Eradication) {
      hi = mid;
    } else {
      std::ostringstream msg;
      msg << "lambda_of_c(c=" << c << "): undecided verdict at L=" << mid;
      throw UndecidedVerdict(mid, msg.str());
    }
  }
  res.bracket_low = lo;
  res.bracket_high = hi;
  res.threshold = 0.5 * (lo + hi);
  return res;
}

std::vector<InterfaceRow> interface_value_sweep(const std::vector<double>& cs, double L_low, double L_high,
                                                double tol, const KillingConfig& base, int workers) {
  return parallel_map<InterfaceRow>(cs.size(), workers, [&](std::size_t i) {
    InterfaceRow row;
    row.c = cs[i];
    row.lambda = lambda_of_c(cs[i], L_low, L_high, tol, base);
    KillingConfig cfg = base;
    cfg.c = cs[i];
    cfg.L = row.lambda.threshold + 10.0 * base.dx;
    row.width = cfg.L;
    row.outcome = run_killing(cfg);
    row.u_interface = row.outcome.u_at_L;
    row.g_interface = base.term(row.u_interface);
    return row;
  });
}

double max_increase(const Field& u) {
  const Index n = u.values.size();
  const Vector d = u.values.tail(n - 1) - u.values.head(n - 1);
  return std::max(0.0, d.maxCoeff());
}

std::vector<double> interior_minima(const Field& u, double a, double b, double noise) {
  std::vector<double> found;
  int trend = 0;
  double lo = 0.0;
  double hi = 0.0;
  Index lo_idx = -1;
  bool started = false;
  for (Index i = 0; i < u.values.size(); ++i) {
    const double x = u.grid.node(i);
    if (x <= a || x >= b) continue;
    const double v = u.values(i);
    if (!started) {
      lo = hi = v;
      lo_idx = i;
      started = true;
      continue;
    }
    if (trend >= 0) {
      if (v > hi) hi = v;
      if (v < hi - noise) {
        trend = -1;
        lo = v;
        lo_idx = i;
      }
    } else {
      if (v < lo) {
        lo = v;
        lo_idx = i;
      }
      if (v > lo + noise) {
        found.push_back(u.grid.node(lo_idx));
        trend = +1;
        hi = v;
      }
    }
  }
  return found;
}

double fitted_tail_rate(const Field& u, double x_from, double floor) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (Index i = 0; i < u.values.size(); ++i) {
    const double x = u.grid.node(i);
    const double v = u.values(i);
    if (x > x_from && v >= floor && v <= 10.0 * floor) {
      xs.push_back(x);
      ys.push_back(std::log(v));
    }
  }
  if (xs.size() < 3) throw Error(ErrorKind::NoCrossing, "fitted_tail_rate: decade not resolved on the mesh");
  const auto n = static_cast<Index>(xs.size());
  return -fit_line(Eigen::Map<const Vector>(xs.data(), n), Eigen::Map<const Vector>(ys.data(), n)).slope;
}

}  // namespace carpet
