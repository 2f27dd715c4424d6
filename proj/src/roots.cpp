#include "carpet/roots.hpp"

#include <Eigen/Dense>

namespace carpet {

LineFit fit_line(const Vector& x, const Vector& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorKind::Domain, "fit_line: need at least two paired samples");
  }
  Eigen::MatrixX2d design(x.size(), 2);
  design.col(0).setOnes();
  design.col(1) = x;
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(y);
  LineFit fit;
  fit.intercept = coef(0);
  fit.slope = coef(1);
  fit.rms_residual = std::sqrt((design * coef - y).squaredNorm() / static_cast<double>(x.size()));
  return fit;
}

}  // namespace carpet
