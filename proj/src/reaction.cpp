#include "carpet/reaction.hpp"

#include <algorithm>
#include <sstream>

#include "carpet/errors.hpp"
#include "carpet/roots.hpp"

namespace carpet {

namespace {

template <typename Term>
double slope(const Term& term, double u) {
  AutoDiff1 x(u, 1, 0);
  return term(x).derivatives()(0);
}

/// Linear and log-spaced points on (0, upper], merged.
Vector scan_points(double upper) {
  constexpr Index kCount = 10000;
  Vector lin = Vector::LinSpaced(kCount, 0.0, upper).tail(kCount - 1);
  Vector logs(kCount);
  const double lo = std::log(upper * 1e-12);
  const double hi = std::log(upper);
  for (Index i = 0; i < kCount; ++i) {
    logs(i) = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(kCount - 1));
  }
  std::vector<double> all(lin.data(), lin.data() + lin.size());
  all.insert(all.end(), logs.data(), logs.data() + logs.size());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return Eigen::Map<Vector>(all.data(), static_cast<Index>(all.size()));
}

template <typename Term>
double numeric_potential(const Term& term, double a, double b) {
  auto g = [&](double u) { return term(u); };
  const double rough = std::abs(detail::gauss5(g, a, b)) + 1e-300;
  return integrate(g, a, b, 1e-13 * std::max(rough, 1e-3));
}

template <typename Term>
ReactionInfo derive_generic(const Term& term) {
  const Vector pts = scan_points(term.scan_upper());
  auto g = [&](double u) { return term(u); };
  const std::vector<double> zeros = scan_roots(g, pts);
  if (zeros.size() != 2) {
    throw Error(ErrorKind::HypothesisViolation,
                "expected two positive zeros (threshold and carrying state), found " +
                    std::to_string(zeros.size()));
  }
  ReactionInfo info;
  info.alpha = info.F_prime = zeros[0];
  info.F = zeros[1];

  auto G = [&](double u) {
    if (u <= info.alpha) return numeric_potential(term, 0.0, u);
    return numeric_potential(term, 0.0, info.alpha) + numeric_potential(term, info.alpha, u);
  };
  info.integral01 = G(info.F);
  const double scale = std::abs(numeric_potential(term, info.alpha, info.F));
  if (!(info.integral01 > 1e-10 * scale)) {
    std::ostringstream msg;
    msg << "integral of g over [0, " << info.F << "] is " << info.integral01 << ", not positive";
    throw Error(ErrorKind::HypothesisViolation, msg.str());
  }
  info.beta = bisect(G, info.alpha, info.F, 1e-12 * std::max(1.0, info.F));

  auto dg = [&](double u) { return slope(term, u); };
  const std::vector<double> crit = scan_roots(dg, pts);
  bool have1 = false;
  bool have2 = false;
  for (double z : crit) {
    if (!have1 && z < info.alpha) {
      info.alpha1 = z;
      have1 = true;
    } else if (!have2 && z > info.alpha && z < info.F) {
      info.alpha2 = z;
      have2 = true;
    }
  }
  if (!have1 || !have2) {
    throw Error(ErrorKind::HypothesisViolation, "critical points of g not found on both sides of the threshold");
  }
  return info;
}

}  // namespace

double CubicReaction::derivative(double u) const { return slope(*this, u); }

double MosquitoReaction::derivative(double f, double m) const {
  AutoDiff1 x(f, 1, 0);
  return (*this)(x, AutoDiff1(m)).derivatives()(0);
}

double MosquitoReaction::derivative_m(double f, double m) const {
  AutoDiff1 y(m, 1, 0);
  return (*this)(AutoDiff1(f), y).derivatives()(0);
}

double eval_mosquito(double f, double m, const MosquitoReaction& params) {
  if (f < 0.0 || m < 0.0 || !std::isfinite(f) || !std::isfinite(m)) {
    std::ostringstream msg;
    msg << "eval_mosquito: densities must be nonnegative (f=" << f << ", m=" << m << ")";
    throw Error(ErrorKind::Domain, msg.str());
  }
  return params(f, m);
}

ReactionInfo derive_info(const CubicReaction& term) { return derive_generic(term); }
ReactionInfo derive_info(const MosquitoReaction& term) { return derive_generic(term); }

double potential(const CubicReaction& term, double u) {
  const double a = term.alpha;
  return -0.25 * u * u * u * u + (1.0 + a) * u * u * u / 3.0 - 0.5 * a * u * u;
}

double potential(const MosquitoReaction& term, double u) { return numeric_potential(term, 0.0, u); }

bool HypothesisReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const HypothesisCheck& c) { return c.passed; });
}

const HypothesisCheck& HypothesisReport::get(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw Error(ErrorKind::Domain, "no hypothesis named " + name);
}

namespace {

template <typename Term>
void common_checks(const Term& term, const Vector& samples, std::optional<double> kill_rate,
                   HypothesisReport& report) {
  std::optional<ReactionInfo> info;
  std::string info_error;
  try {
    info = derive_info(term);
  } catch (const Error& e) {
    info_error = e.what();
  }

  HypothesisCheck h1{"H1"};
  if (info) {
    const double d0 = term.derivative(0.0);
    const double d1 = term.derivative(info->F);
    h1.passed = d0 < 0.0 && d1 < 0.0;
    std::ostringstream s;
    s << "g'(0)=" << d0 << ", g'(F)=" << d1;
    h1.detail = s.str();
    if (!h1.passed) h1.violating_sample = d0 < 0.0 ? info->F : 0.0;
  } else {
    h1.passed = false;
    h1.detail = info_error;
  }
  report.checks.push_back(h1);

  HypothesisCheck h2{"H2"};
  if (kill_rate) {
    double worst = -std::numeric_limits<double>::infinity();
    double where = 0.0;
    for (Index i = 0; i < samples.size(); ++i) {
      const double u = samples(i);
      if (u <= 0.0) continue;
      const double q = -term(u) / u;
      if (q > worst) {
        worst = q;
        where = u;
      }
    }
    h2.passed = *kill_rate >= worst;
    std::ostringstream s;
    s << "kill rate " << *kill_rate << " vs max -g(u)/u = " << worst << " at u=" << where;
    h2.detail = s.str();
    if (!h2.passed) h2.violating_sample = where;
  } else {
    h2.applicable = false;
    h2.detail = "no kill rate given";
  }
  report.checks.push_back(h2);

  HypothesisCheck h3{"H3"};
  if (info) {
    bool ok = true;
    for (Index i = 0; i < samples.size() && ok; ++i) {
      const double u = samples(i);
      const double v = term(u);
      const bool neg = (u > 0.0 && u < info->alpha) || u > info->F;
      const bool pos = u > info->alpha && u < info->F;
      if ((neg && !(v < 0.0)) || (pos && !(v > 0.0))) {
        ok = false;
        h3.violating_sample = u;
      }
    }
    h3.passed = ok && info->F_prime > 0.0 && info->F_prime < info->F && info->integral01 > 0.0;
    std::ostringstream s;
    s << "zeros 0 < " << info->F_prime << " < " << info->F << ", integral " << info->integral01;
    h3.detail = s.str();
  } else {
    h3.passed = false;
    h3.detail = info_error;
  }
  report.checks.push_back(h3);
}

}  // namespace

HypothesisReport check_hypotheses(const CubicReaction& term, const Vector& samples,
                                  std::optional<double> kill_rate) {
  HypothesisReport report;
  common_checks(term, samples, kill_rate, report);
  report.checks.push_back({"H4", false, true, "no sterile coupling in the cubic term", std::nullopt});
  HypothesisCheck h5{"H5"};
  h5.passed = term(0.0) == 0.0;
  h5.detail = "g(0) = 0";
  report.checks.push_back(h5);
  return report;
}

HypothesisReport check_hypotheses(const MosquitoReaction& term, const Vector& samples,
                                  const Vector& m_samples, std::optional<double> kill_rate) {
  HypothesisReport report;
  common_checks(term, samples, kill_rate, report);

  HypothesisCheck h4{"H4"};
  for (Index i = 0; i < samples.size() && h4.passed; ++i) {
    const double f = samples(i);
    if (f <= 0.0) continue;
    for (Index j = 0; j < m_samples.size(); ++j) {
      if (!(term.derivative_m(f, m_samples(j)) < 0.0)) {
        h4.passed = false;
        h4.violating_sample = f;
        break;
      }
    }
    // The excess over -muF f decays like f / m, so the probe density scales with f.
    const double far = term(f, 1e6 * std::max(1.0, f));
    const double limit = -term.muF * f;
    if (std::abs(far - limit) > 1e-3 * std::abs(limit)) {
      h4.passed = false;
      h4.violating_sample = f;
    }
  }
  h4.detail = "dg/dm < 0 and g(f, 1e6 max(1, f)) within 1e-3 of -muF f";
  report.checks.push_back(h4);

  HypothesisCheck h5{"H5"};
  for (Index j = 0; j < m_samples.size(); ++j) {
    if (term(0.0, m_samples(j)) != 0.0) {
      h5.passed = false;
      h5.violating_sample = m_samples(j);
    }
  }
  h5.detail = "g(0, m) = 0";
  report.checks.push_back(h5);
  return report;
}

}  // namespace carpet
