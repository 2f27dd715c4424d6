#include "carpet/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "carpet/errors.hpp"

namespace carpet {

Grid1D::Grid1D(double x_min, double x_max, Index n) : x_min_(x_min), x_max_(x_max), n_(n) {
  if (n < 3) throw ValidationError("grid.n", "need at least 3 nodes, got " + std::to_string(n));
  if (!(x_max > x_min)) throw ValidationError("grid.x_max", "must exceed x_min");
  dx_ = (x_max - x_min) / static_cast<double>(n - 1);
}

Grid1D Grid1D::with_spacing(double x_min, double x_max, double dx) {
  if (!(dx > 0.0)) throw ValidationError("grid.dx", "must be positive");
  const auto n = static_cast<Index>(std::llround((x_max - x_min) / dx)) + 1;
  return Grid1D(x_min, x_max, n);
}

Vector Grid1D::nodes() const { return Vector::LinSpaced(n_, x_min_, x_max_); }

Index Grid1D::nearest(double x) const {
  const auto i = static_cast<Index>(std::llround((x - x_min_) / dx_));
  return std::clamp<Index>(i, 0, n_ - 1);
}

Field::Field(Grid1D g, Vector v, double t) : grid(g), values(std::move(v)), time(t) {
  if (values.size() != grid.size()) {
    throw ValidationError("field.values", "length does not match grid");
  }
}

double Field::at(double x) const {
  const double s = (x - grid.x_min()) / grid.dx();
  if (s <= 0.0) return values(0);
  const Index last = grid.size() - 1;
  if (s >= static_cast<double>(last)) return values(last);
  const auto i = static_cast<Index>(std::floor(s));
  const double w = s - static_cast<double>(i);
  return (1.0 - w) * values(i) + w * values(i + 1);
}

double Field::slope_at(double x) const {
  const double h = grid.dx();
  return (at(x + h) - at(x - h)) / (2.0 * h);
}

Vector overlap_fractions(const Grid1D& grid, double a, double b) {
  const double h = grid.dx();
  Vector w(grid.size());
  for (Index i = 0; i < grid.size(); ++i) {
    const double x = grid.node(i);
    const double lo = std::max(x - 0.5 * h, a);
    const double hi = std::min(x + 0.5 * h, b);
    w(i) = std::max(0.0, hi - lo) / h;
  }
  return w;
}

Field step_profile(const Grid1D& grid, double x0, double value) {
  Vector v(grid.size());
  for (Index i = 0; i < grid.size(); ++i) v(i) = grid.node(i) < x0 ? value : 0.0;
  return Field(grid, std::move(v));
}

}  // namespace carpet
