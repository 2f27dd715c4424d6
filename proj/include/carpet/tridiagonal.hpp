#pragma once

#include <cassert>

#include "carpet/grid.hpp"

namespace carpet {

/// Tridiagonal matrix stored by diagonals. Row i reads
/// lower(i) * x(i-1) + diag(i) * x(i) + upper(i) * x(i+1);
/// lower(0) and upper(n-1) are unused and kept at zero.
template <typename Scalar>
struct Tridiagonal {
  VectorX<Scalar> lower;
  VectorX<Scalar> diag;
  VectorX<Scalar> upper;

  explicit Tridiagonal(Index n = 0)
      : lower(VectorX<Scalar>::Zero(n)), diag(VectorX<Scalar>::Zero(n)), upper(VectorX<Scalar>::Zero(n)) {}

  Index size() const { return diag.size(); }

  template <typename Derived>
  VectorX<Scalar> apply(const Eigen::MatrixBase<Derived>& x) const {
    const Index n = size();
    VectorX<Scalar> y = diag.cwiseProduct(x);
    y.tail(n - 1) += lower.tail(n - 1).cwiseProduct(x.head(n - 1));
    y.head(n - 1) += upper.head(n - 1).cwiseProduct(x.tail(n - 1));
    return y;
  }

  VectorX<Scalar> row_sums() const { return lower + diag + upper; }

  /// Off-diagonals nonpositive and weak diagonal dominance: the inverse is entrywise nonnegative.
  bool is_m_matrix() const {
    const Index n = size();
    for (Index i = 0; i < n; ++i) {
      if (lower(i) > Scalar(0) || upper(i) > Scalar(0)) return false;
      if (diag(i) < -(lower(i) + upper(i))) return false;
    }
    return true;
  }
};

/// LU factorization of a constant tridiagonal matrix (Thomas algorithm).
/// Factor once, then each solve is one forward and one backward sweep.
template <typename Scalar>
class ThomasSolver {
 public:
  explicit ThomasSolver(const Tridiagonal<Scalar>& a)
      : lower_(a.lower), inv_pivot_(a.size()), c_prime_(a.size()) {
    const Index n = a.size();
    assert(n >= 2);
    Scalar pivot = a.diag(0);
    inv_pivot_(0) = Scalar(1) / pivot;
    c_prime_(0) = a.upper(0) * inv_pivot_(0);
    for (Index i = 1; i < n; ++i) {
      pivot = a.diag(i) - a.lower(i) * c_prime_(i - 1);
      inv_pivot_(i) = Scalar(1) / pivot;
      c_prime_(i) = a.upper(i) * inv_pivot_(i);
    }
  }

  Index size() const { return inv_pivot_.size(); }

  /// Overwrites rhs with the solution of A x = rhs.
  void solve_in_place(Eigen::Ref<VectorX<Scalar>> rhs) const {
    const Index n = size();
    assert(rhs.size() == n);
    rhs(0) *= inv_pivot_(0);
    for (Index i = 1; i < n; ++i) {
      rhs(i) = (rhs(i) - lower_(i) * rhs(i - 1)) * inv_pivot_(i);
    }
    for (Index i = n - 1; i > 0; --i) {
      rhs(i - 1) -= c_prime_(i - 1) * rhs(i);
    }
  }

  template <typename Derived>
  VectorX<Scalar> solve(const Eigen::MatrixBase<Derived>& rhs) const {
    VectorX<Scalar> x = rhs;
    solve_in_place(x);
    return x;
  }

 private:
  VectorX<Scalar> lower_;
  VectorX<Scalar> inv_pivot_;
  VectorX<Scalar> c_prime_;
};

}  // namespace carpet
