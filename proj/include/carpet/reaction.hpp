#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Core>
#include <unsupported/Eigen/AutoDiff>

#include "carpet/grid.hpp"

namespace carpet {

using AutoDiff1 = Eigen::AutoDiffScalar<Eigen::Matrix<double, 1, 1>>;

template <typename Scalar>
Scalar eval_cubic(const Scalar& u, double alpha) {
  return u * (Scalar(1) - u) * (u - Scalar(alpha));
}

/// g(u) = u(1-u)(u-alpha), bistable for alpha in (0, 1/2).
struct CubicReaction {
  double alpha = 0.25;

  template <typename Scalar>
  Scalar operator()(const Scalar& u) const {
    return eval_cubic(u, alpha);
  }
  double derivative(double u) const;
  /// Upper end of the interval scanned for zeros.
  double scan_upper() const { return 1.5; }
};

/// Female reproduction with sterile-male interference; the reaction of the SIT model.
struct MosquitoReaction {
  double r = 0.49;
  double nuE = 0.7;
  double muE = 0.03;
  double K = 1440.0;
  double b = 10.0;
  double tau = 0.41;
  double gammaS = 1.0;
  double muF = 0.04;

  /// Rate without domain checks; used by the solver hot loop. Works for double and AutoDiff.
  template <typename Scalar>
  Scalar operator()(const Scalar& f, const Scalar& m) const {
    using std::exp;
    using std::expm1;
    const Scalar s = tau * f + gammaS * m;
    Scalar mated;
    if constexpr (std::is_same_v<Scalar, double>) {
      mated = -expm1(-s);
    } else {
      mated = Scalar(1) - exp(-s);
    }
    const Scalar num = r * nuE * K * b * tau * f * f * mated;
    const Scalar den = b * tau * f * f * mated + K * (nuE + muE) * s;
    if (den == Scalar(0)) return -muF * f;
    return num / den - muF * f;
  }

  /// Slice without sterile males.
  template <typename Scalar>
  Scalar operator()(const Scalar& f) const {
    return (*this)(f, Scalar(0));
  }

  double derivative(double f, double m = 0.0) const;
  double derivative_m(double f, double m) const;
  double scan_upper() const { return 2.0 * r * nuE * K / muF; }
};

/// Checked evaluation: throws Domain on negative densities.
double eval_mosquito(double f, double m, const MosquitoReaction& params);

/// Derived constants. For the cubic F_prime = alpha and F = 1.
struct ReactionInfo {
  double alpha = 0.0;
  double beta = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double F_prime = 0.0;
  double F = 0.0;
  double integral01 = 0.0;
};

ReactionInfo derive_info(const CubicReaction& term);
ReactionInfo derive_info(const MosquitoReaction& term);

/// G(u) = integral of g over [0, u] (cubic: closed form).
double potential(const CubicReaction& term, double u);
double potential(const MosquitoReaction& term, double u);

struct HypothesisCheck {
  std::string name;
  bool applicable = true;
  bool passed = true;
  std::string detail;
  std::optional<double> violating_sample;
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;
  bool all_passed() const;
  const HypothesisCheck& get(const std::string& name) const;
};

/// Checks H1..H5 on the sample densities (and m_samples for the mosquito term). The H2
/// check uses kill_rate; pass std::nullopt to skip it.
HypothesisReport check_hypotheses(const CubicReaction& term, const Vector& samples,
                                  std::optional<double> kill_rate);
HypothesisReport check_hypotheses(const MosquitoReaction& term, const Vector& samples,
                                  const Vector& m_samples, std::optional<double> kill_rate);

}  // namespace carpet
