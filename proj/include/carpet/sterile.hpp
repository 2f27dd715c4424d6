#pragma once

#include <vector>

#include "carpet/killing.hpp"
#include "carpet/reaction.hpp"

namespace carpet {

/// Steady sterile density in the moving frame: -c m' - m'' + mus m = M 1_(0,L).
struct SterileAnalytic {
  double c = 0.0;
  double L = 0.0;
  double M = 0.0;
  double mus = 0.0;
  double r_plus = 0.0;
  double r_minus = 0.0;
  double A = 0.0;   ///< left piece A e^{r+ x}
  double B = 0.0;   ///< right piece B e^{r- (x - L)}
  double C = 0.0;   ///< inside M/mus + C e^{r+ x} + Dc e^{r- x}
  double Dc = 0.0;

  SterileAnalytic(double c, double L, double M, double mus);

  double value(double x) const;
  double slope(double x) const;
  double curvature(double x) const;
  /// Location of the maximum, inside (0, L).
  double argmax() const;
};

double ms_closed_form(double x, const SterileAnalytic& params);

struct QuadratureSettings {
  double half_width = 200.0;  ///< truncation of the frequency axis
  int panels = 4000;          ///< initial number of Gauss panels on [0, half_width]
  int max_doublings = 6;
  double tol = 1e-8;
};

/// Inverse Fourier integral of the indicator forcing over the symbol 4 pi^2 xi^2 - 2 i pi c xi + mus.
/// Throws QuadratureNotConverged if doubling the panel count keeps moving the value by more than tol.
double ms_spectral(double x, const SterileAnalytic& params, const QuadratureSettings& quad = {});

struct ReleaseSegment {
  double start = 0.0;  ///< moving-frame coordinates
  double end = 0.0;
  double density = 0.0;
};

struct ReleaseProfile {
  std::vector<ReleaseSegment> segments;

  static ReleaseProfile homogeneous(double L, double M);
  /// M on (0, 2L/3), M/2 on (2L/3, 7L/6).
  static ReleaseProfile heterogeneous(double L, double M);
  /// Same count as heterogeneous, low density first: M/2 on (0, L/2), M on (L/2, 7L/6).
  static ReleaseProfile heterogeneous_swapped(double L, double M);

  void validate() const;
  double total() const;  ///< sum of density * width
  double left() const;
  double right() const;
  /// Source density on the grid for the window shifted by `shift` (cell-averaged).
  Vector source(const Grid1D& grid, double shift) const;
};

struct SterileConfig {
  double c = -0.05;
  MosquitoReaction term;
  double mus = 0.1;
  double D = 1.0;
  double dx = 0.05;
  double dt = 0.5;
  double horizon = 2000.0;
  double margin_left = 60.0;   ///< grid extends this far left of the final window
  double margin_right = 80.0;  ///< and this far right of the initial window
  double front_start = 0.0;    ///< initial females on x < front_start
  double leak_margin = 5.0;
  double extinction_ratio = 1e-3;
  double growth_window = 100.0;  ///< the wake maximum must not grow over this last stretch
  double growth_tol = 0.01;      ///< relative slack on that growth test
  long record_stride = 0;        ///< store (f, m) every this many steps; 0 disables
  bool stop_on_invasion = true;  ///< false keeps recording to the horizon; the outcome fields stay at detection

  void validate() const;
};

struct SterileOutcome {
  Verdict verdict = Verdict::Undecided;
  Grid1D grid{0.0, 1.0, 3};
  Vector f;
  Vector m;
  double t_end = 0.0;
  double female_equilibrium = 0.0;
  double front_position = 0.0;  ///< last F/2 crossing
  double wake_max = 0.0;        ///< max f beyond window end + leak margin at t_end
  std::vector<double> times;
  std::vector<Vector> f_history;
  std::vector<Vector> m_history;
};

/// Lab-frame grid used by run_sterile for this release.
Grid1D sterile_grid(const SterileConfig& cfg, const ReleaseProfile& release);

/// Coupled lab-frame run: the release window sits at (c t + start, c t + end).
/// Invasion once the F/2 crossing gets leak_margin past the window. Eradication at the
/// horizon if the wake past that point is not growing and is either below
/// extinction_ratio * F or falls monotonically to below it by the grid end.
SterileOutcome run_sterile(const SterileConfig& cfg, const ReleaseProfile& release);

/// Sterile density alone after time T in the lab frame, on a grid centred on the final window.
Field ms_lab_frame(const SterileConfig& cfg, double L, double M, double T);

CriticalResult pi_dichotomy(double L, double M_low, double M_high, double rel_tol, const SterileConfig& cfg);

CriticalResult critical_width(double M, double L_low, double L_high, double tol, const SterileConfig& cfg);

struct HeteroReport {
  double L_star = 0.0;
  double M = 0.0;
  Verdict homogeneous = Verdict::Undecided;
  Verdict heterogeneous = Verdict::Undecided;
  Verdict swapped = Verdict::Undecided;
  double N_hom = 0.0;
  double N_het = 0.0;
  double ratio = 0.0;
};

HeteroReport hetero_compare(double M, double L_star, const SterileConfig& cfg, int workers = 1);

}  // namespace carpet
