#pragma once

#include <Eigen/Core>

namespace carpet {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using Vector = VectorX<double>;
using Index = Eigen::Index;

/// Uniform mesh x_i = x_min + i*dx, i = 0..n-1.
class Grid1D {
 public:
  Grid1D(double x_min, double x_max, Index n);

  /// Node count chosen so the spacing is as close as possible to `dx`; x_max is kept.
  static Grid1D with_spacing(double x_min, double x_max, double dx);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  Index size() const { return n_; }
  double dx() const { return dx_; }
  double node(Index i) const { return x_min_ + static_cast<double>(i) * dx_; }
  Vector nodes() const;

  /// Index of the node nearest to x, clamped to the mesh.
  Index nearest(double x) const;

 private:
  double x_min_;
  double x_max_;
  Index n_;
  double dx_;
};

/// Nodal profile on a grid at a given time.
struct Field {
  Grid1D grid;
  Vector values;
  double time = 0.0;

  Field(Grid1D g, Vector v, double t = 0.0);

  /// Piecewise-linear interpolant, constant extension outside the mesh.
  double at(double x) const;
  /// Centered finite-difference derivative of the interpolant at x.
  double slope_at(double x) const;
  bool all_finite() const { return values.allFinite(); }
};

/// Fraction of each node's control volume [x_i - dx/2, x_i + dx/2] covered by [a, b].
Vector overlap_fractions(const Grid1D& grid, double a, double b);

/// Step datum value * 1_{x < x0}.
Field step_profile(const Grid1D& grid, double x0, double value = 1.0);

}  // namespace carpet
