// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "carpet/killing.hpp"
#include "carpet/parallel.hpp"
#include "carpet/sterile.hpp"
#include "carpet/wave_analysis.hpp"

using namespace carpet;

namespace {

using Clock = std::chrono::steady_clock;

struct Line {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const Line& line, double seconds, double budget) {
  const bool in_time = seconds <= budget;
  const bool ok = line.pass && in_time;
  if (!ok) ++failures;
  std::printf("criterion %2d %-28s %s  %s; %.1f s (budget %.0f s)%s\n", id, name, ok ? "PASS" : "FAIL",
              line.detail.c_str(), seconds, budget, in_time ? "" : " OVER BUDGET");
  std::fflush(stdout);
}

template <typename Fn>
void criterion(int id, const char* name, double budget, Fn&& fn) {
  const auto t0 = Clock::now();
  Line line;
  try {
    line = fn();
  } catch (const std::exception& e) {
    line = {false, std::string("error: ") + e.what()};
  }
  report(id, name, line, std::chrono::duration<double>(Clock::now() - t0).count(), budget);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

const CubicReaction kCubic{0.25};

// Shared between criteria 3, 4 and 10.
std::vector<InterfaceRow> sweep_rows;
std::vector<SteadyOutcome> invasion_side;
double sweep_seconds = 0.0;

// Shared between criteria 7 and 8.
std::optional<double> critical_L;

}  // namespace

int main() {
  criterion(1, "natural speed", 30.0, [] {
    const SpeedResult r = natural_speed(kCubic);
    const double exact = 0.5 / std::sqrt(2.0);
    const double rel = std::abs(r.speed - exact) / exact;
    return Line{rel <= 0.02, fmt("speed %.6f", r.speed) + fmt(" vs %.6f", exact) + fmt(", rel err %.2e", rel)};
  });

  criterion(2, "beta", 1.0, [] {
    const double beta = derive_info(kCubic).beta;
    const double err = std::abs(beta - (5.0 - std::sqrt(7.0)) / 6.0);
    return Line{err <= 1e-10, fmt("beta %.12f", beta) + fmt(", error %.1e", err)};
  });

  criterion(3, "lambda trend and regimes", 1800.0, [] {
    const std::vector<double> cs{0.0, -0.5, -1.0, -1.5, -2.0};
    const KillingConfig base;
    const auto t0 = Clock::now();
    sweep_rows = interface_value_sweep(cs, 0.1, 39.0, 0.02, base, workers());
    invasion_side = parallel_map<SteadyOutcome>(sweep_rows.size(), workers(), [&](std::size_t i) {
      KillingConfig cfg = base;
      cfg.c = sweep_rows[i].c;
      cfg.L = sweep_rows[i].lambda.bracket_low;
      return run_killing(cfg);
    });
    sweep_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    const ReactionInfo info = derive_info(kCubic);
    bool ok = true;
    std::ostringstream d;
    for (std::size_t i = 0; i < sweep_rows.size(); ++i) {
      const auto& r = sweep_rows[i];
      if (i > 0 && !(r.lambda.threshold > sweep_rows[i - 1].lambda.threshold)) ok = false;
      bool row_ok;
      if (std::abs(r.c) < 0.75) {
        row_ok = r.u_interface > info.alpha && r.u_interface <= info.beta;
      } else {
        row_ok = std::abs(r.u_interface - info.alpha) <= 0.05;
      }
      ok = ok && row_ok;
      d << fmt("c=%g", r.c) << fmt(" L=%.3f", r.lambda.threshold) << fmt(" u=%.4f", r.u_interface)
        << (row_ok ? "" : "(x)") << (i + 1 < sweep_rows.size() ? ", " : "");
    }
    return Line{ok, d.str()};
  });

  criterion(4, "ODE/PDE cross-validation", 600.0, [] {
    if (sweep_rows.empty()) return Line{false, "no sweep from criterion 3"};
    const double dx = KillingConfig{}.dx;
    const double beta = derive_info(kCubic).beta;
    bool ok = true;
    std::ostringstream d;
    for (std::size_t i = 0; i < 2; ++i) {
      const auto& r = sweep_rows[i];
      const MatchingRoot m = matching_root(kCubic, r.c, 1.0);
      const double gap = std::abs(m.width - r.lambda.threshold);
      ok = ok && gap <= 2.0 * dx;
      d << fmt("c=%g", r.c) << fmt(" PDE %.4f", r.lambda.threshold) << fmt(" ODE %.4f", m.width)
        << fmt(" gap %.4f", gap) << (gap <= 2.0 * dx ? "" : "(x)") << "; ";
    }
    const double off = std::abs(sweep_rows[0].u_interface - beta);
    ok = ok && off <= 0.02;
    d << fmt("|u(L0+10dx) - beta| = %.4f", off) << (off <= 0.02 ? "" : "(x)");
    return Line{ok, d.str()};
  });

  criterion(5, "sterile density three ways", 120.0, [] {
    const SterileAnalytic an(-0.05, 10.0, 1.0, 0.1);
    double spectral_gap = 0.0;
    double sup = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double x = -20.0 + 50.0 * i / 100.0;
      spectral_gap = std::max(spectral_gap, std::abs(ms_spectral(x, an) - ms_closed_form(x, an)));
    }
    for (int i = 0; i <= 200000; ++i) sup = std::max(sup, ms_closed_form(-50.0 + 110.0 * i / 200000.0, an));
    SterileConfig cfg;
    cfg.c = an.c;
    cfg.mus = an.mus;
    cfg.dt = 0.01;
    const Field lab = ms_lab_frame(cfg, an.L, an.M, 400.0);
    double lab_gap = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double x = -20.0 + 50.0 * i / 1000.0;
      lab_gap = std::max(lab_gap, std::abs(lab.at(x + an.c * lab.time) - ms_closed_form(x, an)));
    }
    const bool ok = spectral_gap <= 1e-6 && lab_gap <= 1e-3 && sup <= an.M / an.mus;
    return Line{ok, fmt("spectral gap %.2e", spectral_gap) + fmt(", lab-frame gap %.2e", lab_gap) +
                        fmt(", sup %.6f", sup) + fmt(" <= %.1f", an.M / an.mus)};
  });

  criterion(6, "comparison principle", 600.0, [] {
    SterileConfig cfg;
    cfg.record_stride = 20;
    cfg.stop_on_invasion = false;
    const std::vector<double> Ms{5000.0, 20000.0};
    const auto runs = parallel_map<SterileOutcome>(2, workers(), [&](std::size_t i) {
      return run_sterile(cfg, ReleaseProfile::homogeneous(17.45, Ms[i]));
    });
    const std::size_t common = std::min(runs[0].times.size(), runs[1].times.size());
    double m_violation = -1e300;
    double f_violation = -1e300;
    for (std::size_t k = 0; k < common; ++k) {
      m_violation = std::max(m_violation, (runs[0].m_history[k] - runs[1].m_history[k]).maxCoeff());
      f_violation = std::max(f_violation, (runs[1].f_history[k] - runs[0].f_history[k]).maxCoeff());
    }
    const bool ok = common > 10 && m_violation <= 1e-8 && f_violation <= 1e-8;
    return Line{ok, std::to_string(common) + " common times" + fmt(", max(m5k - m20k) %.2e", m_violation) +
                        fmt(", max(f20k - f5k) %.2e", f_violation)};
  });

  criterion(7, "mosquito critical width", 2700.0, [] {
    const SterileConfig cfg;
    const CriticalResult r = critical_width(20000.0, 5.0, 80.0, 0.05, cfg);
    critical_L = r.threshold;
    const auto flips = parallel_map<Verdict>(2, workers(), [&](std::size_t i) {
      return run_sterile(cfg, ReleaseProfile::homogeneous(r.threshold + (i ? 0.5 : -0.5), 20000.0)).verdict;
    });
    const double rel = std::abs(r.threshold - 17.45) / 17.45;
    const bool flip = flips[0] == Verdict::Invasion && flips[1] == Verdict::Eradication;
    return Line{rel <= 0.35 && flip, fmt("L* %.3f", r.threshold) + fmt(" (rel dev %.2f from 17.45)", rel) +
                                         ", L*-0.5 " + std::string(to_string(flips[0])) + ", L*+0.5 " +
                                         std::string(to_string(flips[1]))};
  });

  criterion(8, "heterogeneous release", 900.0, [] {
    if (!critical_L) return Line{false, "no critical width from criterion 7"};
    const SterileConfig cfg;
    const HeteroReport rep = hetero_compare(20000.0, *critical_L + 10.0 * cfg.dx, cfg, workers());
    const double ratio_err = std::abs(rep.ratio - 11.0 / 12.0);
    const bool ok = rep.homogeneous == Verdict::Eradication && rep.heterogeneous == Verdict::Eradication &&
                    ratio_err <= 1e-15;
    return Line{ok, "homogeneous " + std::string(to_string(rep.homogeneous)) + ", heterogeneous " +
                        std::string(to_string(rep.heterogeneous)) + ", swapped " +
                        std::string(to_string(rep.swapped)) + fmt(", N ratio %.17g", rep.ratio)};
  });

  criterion(9, "release threshold trends", 2700.0, [] {
    struct Point {
      double c;
      double L;
    };
    const std::vector<Point> pts{{-0.05, 5.0}, {-0.05, 20.0}, {-0.05, 50.0}, {-0.5, 20.0}};
    // A point that still invades at the cap only gives a lower bound on Pi (more males never hurt).
    struct Pi {
      double value;
      bool lower_bound;
    };
    constexpr double kCap = 1e14;
    const auto pis = parallel_map<Pi>(pts.size(), workers(), [&](std::size_t i) {
      SterileConfig cfg;
      cfg.c = pts[i].c;
      double hi = 1e6;
      while (run_sterile(cfg, ReleaseProfile::homogeneous(pts[i].L, hi)).verdict != Verdict::Eradication) {
        if (hi >= kCap) return Pi{kCap, true};
        hi *= 100.0;
      }
      return Pi{pi_dichotomy(pts[i].L, 10.0, hi, 0.01, cfg).threshold, false};
    });
    auto above = [](const Pi& a, const Pi& b) { return !b.lower_bound && (a.lower_bound ? a.value >= b.value : a.value > b.value); };
    auto show = [](const Pi& p) { return (p.lower_bound ? std::string(">") : std::string()) + fmt("%.4g", p.value); };
    const bool ok = above(pis[0], pis[1]) && above(pis[1], pis[2]) && above(pis[3], pis[1]);
    return Line{ok, "Pi(-0.05,5) " + show(pis[0]) + ", Pi(-0.05,20) " + show(pis[1]) + ", Pi(-0.05,50) " +
                        show(pis[2]) + ", Pi(-0.5,20) " + show(pis[3])};
  });

  criterion(10, "structural invariants", 60.0, [] {
    if (sweep_rows.empty()) return Line{false, "no sweep from criterion 3"};
    bool ok = true;
    double worst_rise = 0.0;
    double worst_rate = 0.0;
    std::ostringstream d;
    for (std::size_t i = 0; i < sweep_rows.size(); ++i) {
      const auto& r = sweep_rows[i];
      const SteadyOutcome& e = r.outcome;
      const SteadyOutcome& inv = invasion_side[i];
      if (e.verdict != Verdict::Eradication || inv.verdict != Verdict::Invasion) {
        ok = false;
        d << fmt("c=%g unexpected verdicts; ", r.c);
        continue;
      }
      const double dx = e.profile.grid.dx();
      // A rise above one cell's worth of slope tolerance counts as a real increase.
      const double rise = max_increase(e.profile);
      worst_rise = std::max(worst_rise, rise);
      if (rise > KillingConfig{}.slope_tol * dx) ok = false;

      // Near the threshold the discrete minimum lands on the first node past L.
      const auto mins = interior_minima(inv.profile, 0.0, r.lambda.bracket_low + 2.0 * dx);
      if (mins.size() != 1) {
        ok = false;
        d << fmt("c=%g", r.c) << " minima " << mins.size() << "; ";
      }

      // Last resolved decade before the Neumann end: the rate is an asymptotic one.
      const double floor = std::max(e.profile.at(e.profile.grid.x_max() - 5.0), 1e-8);
      const double rate = fitted_tail_rate(e.profile, r.width + 5.0, floor);
      const double expected = tail_decay_rate(kCubic, r.c);
      const double rel = std::abs(rate - expected) / expected;
      worst_rate = std::max(worst_rate, rel);
      if (rel > 0.05) {
        ok = false;
        d << fmt("c=%g", r.c) << fmt(" tail rate %.4f", rate) << fmt(" vs %.4f; ", expected);
      }
    }
    d << fmt("max rise %.1e", worst_rise) << fmt(", worst tail-rate rel err %.3f", worst_rate)
      << fmt(", reused %.0f s of sweep", sweep_seconds);
    return Line{ok, d.str()};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
