#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "carpet/errors.hpp"

namespace carpet {

/// Zero crossing of a scalar function of (x, y) watched during integration.
/// direction: +1 only rising crossings, -1 only falling, 0 both.
template <int N>
struct OdeEvent {
  std::function<double(double, const Eigen::Matrix<double, N, 1>&)> fn;
  int direction = 0;
};

template <int N>
struct OdeResult {
  using State = Eigen::Matrix<double, N, 1>;
  double x = 0.0;
  State y;
  int event = -1;  ///< index of the event that stopped integration, -1 if x_end was reached
  std::vector<double> xs;
  std::vector<State> ys;
};

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-13;
  double max_step = 0.0;  ///< 0 means unbounded
  int max_steps = 2000000;
  bool record = false;
};

/// Dormand-Prince 5(4) with Hairer's dense output. Integrates from x0 towards x_end
/// (either direction) and stops at the first event crossing, located on the interpolant.
template <int N, typename Rhs>
OdeResult<N> dopri5(Rhs&& rhs, double x0, const Eigen::Matrix<double, N, 1>& y0, double x_end,
                    const std::vector<OdeEvent<N>>& events = {}, const OdeOptions& opt = {}) {
  using State = Eigen::Matrix<double, N, 1>;
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                   a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                   d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                   d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  OdeResult<N> out;
  const double dir = x_end >= x0 ? 1.0 : -1.0;
  double x = x0;
  State y = y0;
  State k1 = rhs(x, y);
  double h = 1e-3 * std::max(1.0, std::abs(x_end - x0)) * 1e-2;
  if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
  if (opt.record) {
    out.xs.push_back(x);
    out.ys.push_back(y);
  }
  std::vector<double> ev_prev(events.size());
  for (std::size_t k = 0; k < events.size(); ++k) ev_prev[k] = events[k].fn(x, y);

  for (int step = 0; step < opt.max_steps; ++step) {
    if (dir * (x_end - x) <= 0.0) break;
    h = std::min(h, std::abs(x_end - x));
    const double hs = dir * h;
    const State k2 = rhs(x + c2 * hs, State(y + hs * a21 * k1));
    const State k3 = rhs(x + c3 * hs, State(y + hs * (a31 * k1 + a32 * k2)));
    const State k4 = rhs(x + c4 * hs, State(y + hs * (a41 * k1 + a42 * k2 + a43 * k3)));
    const State k5 = rhs(x + c5 * hs, State(y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
    const State k6 =
        rhs(x + hs, State(y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
    const State y1 = y + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const State k7 = rhs(x + hs, y1);
    const State err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const State scale = (opt.atol + opt.rtol * y.cwiseAbs().cwiseMax(y1.cwiseAbs()).array()).matrix();
    const double en = std::sqrt(err.cwiseQuotient(scale).squaredNorm() / N);
    if (!std::isfinite(en)) {
      h *= 0.1;
      if (h < 1e-300) throw Error(ErrorKind::NonFiniteState, "dopri5: non-finite derivative");
      continue;
    }
    if (en > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
      continue;
    }

    const double x1 = x + hs;
    // Dense output coefficients.
    const State r1 = y;
    const State r2 = y1 - y;
    const State r3 = hs * k1 - r2;
    const State r4 = r2 - hs * k7 - r3;
    const State r5 = hs * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
    auto dense = [&](double xi) -> State {
      const double th = (xi - x) / hs;
      const double th1 = 1.0 - th;
      return r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
    };

    int hit = -1;
    double x_hit = x1;
    for (std::size_t k = 0; k < events.size(); ++k) {
      const double v1 = events[k].fn(x1, y1);
      const double v0 = ev_prev[k];
      const bool rising = v0 < 0.0 && v1 >= 0.0;
      const bool falling = v0 > 0.0 && v1 <= 0.0;
      const bool match = (events[k].direction >= 0 && rising) || (events[k].direction <= 0 && falling);
      if (match) {
        double lo = x, hi = x1;
        for (int it = 0; it < 200 && std::abs(hi - lo) > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
          const double mid = 0.5 * (lo + hi);
          const double vm = events[k].fn(mid, dense(mid));
          if ((vm < 0.0) == (v0 < 0.0) && vm != 0.0) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        if (hit < 0 || dir * (hi - x_hit) < 0.0) {
          hit = static_cast<int>(k);
          x_hit = hi;
        }
      }
      ev_prev[k] = v1;
    }
    if (hit >= 0) {
      out.x = x_hit;
      out.y = dense(x_hit);
      out.event = hit;
      if (opt.record) {
        out.xs.push_back(out.x);
        out.ys.push_back(out.y);
      }
      return out;
    }

    x = x1;
    y = y1;
    k1 = k7;
    if (opt.record) {
      out.xs.push_back(x);
      out.ys.push_back(y);
    }
    h *= std::min(10.0, 0.9 * std::pow(std::max(en, 1e-10), -0.2));
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
  }
  out.x = x;
  out.y = y;
  return out;
}

}  // namespace carpet
