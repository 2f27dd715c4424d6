#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "carpet/killing.hpp"
#include "carpet/sterile.hpp"
#include "carpet/wave_analysis.hpp"

namespace carpet {

enum class Experiment {
  LambdaSweep,
  KillingRun,
  SterileRun,
  PiSearch,
  WidthSearch,
  MsProfile,
  HeteroCompare,
  SpeedCheck,
};

std::string_view to_string(Experiment e);
/// Throws ValidationError("experiment") for an unknown name.
Experiment parse_experiment(std::string_view name);
const std::vector<std::string>& experiment_names();

enum class ReleaseKind { Homogeneous, Heterogeneous, Swapped };

ReleaseProfile make_release(ReleaseKind kind, double L, double M);

struct SearchSettings {
  std::vector<double> c_values;
  double L_low = 0.0;
  double L_high = 0.0;
  double tol = 0.0;
  double M_low = 0.0;
  double M_high = 0.0;
  double rel_tol = 0.0;
  double L_star = 0.0;  ///< hetero-compare: 0 means find it with critical_width first
};

struct MsGrid {
  double x_min = 0.0;
  double x_max = 0.0;
  double dx = 0.0;
};

/// Fully resolved configuration. `resolved` holds the same values as JSON, with every
/// default filled in; `defaulted` lists the dotted paths that came from defaults.
struct ExperimentConfig {
  Experiment experiment = Experiment::KillingRun;
  nlohmann::json resolved;
  std::vector<std::string> defaulted;

  KillingConfig killing;
  SterileConfig sterile;
  SpeedSettings speed;
  SearchSettings search;
  QuadratureSettings quadrature;
  MsGrid ms_grid;
  ReleaseKind release = ReleaseKind::Homogeneous;
  double L = 0.0;  ///< zone width for single runs (sterile side)
  double M = 0.0;  ///< release density

  std::string out_dir = "out";
  long stride = 100;  ///< space-time output keeps every stride-th step
};

/// Defaults for an experiment, as the JSON document a user would write.
nlohmann::json default_config(Experiment e);

/// Merges `doc` over the defaults of its experiment and validates the result.
/// `experiment` overrides (or must agree with) doc["experiment"].
ExperimentConfig resolve_config(const nlohmann::json& doc, std::string_view experiment = {});

/// Parses a JSON file; syntax errors become ParseError with the 1-based line.
ExperimentConfig load_config(const std::string& path, std::string_view experiment = {});

/// Same as load_config for an in-memory document.
ExperimentConfig parse_config(const std::string& text, std::string_view experiment = {});

}  // namespace carpet
