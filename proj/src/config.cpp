#include "carpet/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

namespace carpet {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Experiment, std::string_view>, 8> kNames{{
    {Experiment::LambdaSweep, "lambda-sweep"},
    {Experiment::KillingRun, "killing-run"},
    {Experiment::SterileRun, "sterile-run"},
    {Experiment::PiSearch, "pi-search"},
    {Experiment::WidthSearch, "width-search"},
    {Experiment::MsProfile, "ms-profile"},
    {Experiment::HeteroCompare, "hetero-compare"},
    {Experiment::SpeedCheck, "speed-check"},
}};

bool killing_side(Experiment e) { return e == Experiment::LambdaSweep || e == Experiment::KillingRun; }

bool sterile_side(Experiment e) {
  return e == Experiment::SterileRun || e == Experiment::PiSearch || e == Experiment::WidthSearch ||
         e == Experiment::HeteroCompare;
}

json mosquito_block() {
  const MosquitoReaction m;
  return {{"r", m.r},   {"nuE", m.nuE},       {"muE", m.muE}, {"K", m.K},     {"b", m.b},
          {"tau", m.tau}, {"gammaS", m.gammaS}, {"muF", m.muF}, {"mus", 0.1}};
}

json sterile_strategy_block() {
  const SterileConfig s;
  return {{"c", s.c},
          {"L", 17.45},
          {"M", 20000.0},
          {"release", "homogeneous"},
          {"front_start", s.front_start},
          {"horizon", s.horizon},
          {"leak_margin", s.leak_margin},
          {"extinction_ratio", s.extinction_ratio},
          {"growth_window", s.growth_window},
          {"growth_tol", s.growth_tol}};
}

std::string type_name(const json& v) {
  if (v.is_number()) return "number";
  if (v.is_string()) return "string";
  if (v.is_array()) return "array";
  if (v.is_object()) return "object";
  if (v.is_boolean()) return "boolean";
  return "null";
}

bool same_kind(const json& want, const json& got) {
  if (want.is_number()) return got.is_number();
  if (want.is_array()) {
    if (!got.is_array()) return false;
    for (const auto& x : got) {
      if (!x.is_number()) return false;
    }
    return true;
  }
  return type_name(want) == type_name(got);
}

double num(const json& block, const char* key) { return block.at(key).get<double>(); }

ReleaseKind parse_release(const std::string& s) {
  if (s == "homogeneous") return ReleaseKind::Homogeneous;
  if (s == "heterogeneous") return ReleaseKind::Heterogeneous;
  if (s == "heterogeneous-swapped") return ReleaseKind::Swapped;
  throw ValidationError("strategy.release", "expected homogeneous, heterogeneous or heterogeneous-swapped");
}

void require(bool ok, const std::string& field, const std::string& msg) {
  if (!ok) throw ValidationError(field, msg);
}

void materialize(ExperimentConfig& cfg) {
  const json& r = cfg.resolved;
  const Experiment e = cfg.experiment;
  const json& out = r.at("output");
  cfg.out_dir = out.at("dir").get<std::string>();
  cfg.stride = std::lround(num(out, "stride"));
  require(cfg.stride >= 1, "output.stride", "must be at least 1");

  if (killing_side(e)) {
    KillingConfig& k = cfg.killing;
    const json& g = r.at("grid");
    k.x_min = num(g, "x_min");
    k.x_max = num(g, "x_max");
    k.dx = num(g, "dx");
    k.dt = num(r.at("scheme"), "dt");
    k.D = num(r.at("scheme"), "D");
    SchemeParams{k.dt, 0.0, k.D}.validate();
    k.steady.eps = num(r.at("steady"), "eps");
    k.steady.t_check = num(r.at("steady"), "t_check");
    k.steady.t_max = num(r.at("steady"), "t_max");
    require(k.steady.eps > 0.0, "steady.eps", "must be positive");
    require(k.steady.t_check >= k.dt, "steady.t_check", "must be at least scheme.dt");
    require(k.steady.t_max > 0.0, "steady.t_max", "must be positive");
    k.term.alpha = num(r.at("reaction"), "alpha");
    const json& s = r.at("strategy");
    k.c = num(s, "c");
    k.L = num(s, "L");
    k.mu = num(s, "mu");
    k.slope_tol = num(s, "slope_tol");
    k.boundary_clearance = num(s, "boundary_clearance");
    k.validate();
  }

  if (sterile_side(e)) {
    SterileConfig& st = cfg.sterile;
    const json& g = r.at("grid");
    st.dx = num(g, "dx");
    st.margin_left = num(g, "margin_left");
    st.margin_right = num(g, "margin_right");
    st.dt = num(r.at("scheme"), "dt");
    st.D = num(r.at("scheme"), "D");
    const json& re = r.at("reaction");
    st.term = MosquitoReaction{num(re, "r"),   num(re, "nuE"), num(re, "muE"),    num(re, "K"),
                               num(re, "b"),   num(re, "tau"), num(re, "gammaS"), num(re, "muF")};
    for (const char* key : {"r", "nuE", "muE", "K", "b", "tau", "gammaS", "muF"}) {
      require(num(re, key) > 0.0, std::string("reaction.") + key, "must be positive");
    }
    st.mus = num(re, "mus");
    const json& s = r.at("strategy");
    st.c = num(s, "c");
    st.front_start = num(s, "front_start");
    st.horizon = num(s, "horizon");
    st.leak_margin = num(s, "leak_margin");
    st.extinction_ratio = num(s, "extinction_ratio");
    st.growth_window = num(s, "growth_window");
    st.growth_tol = num(s, "growth_tol");
    require(st.growth_window >= st.dt && st.growth_window < st.horizon, "strategy.growth_window",
            "must lie in [dt, horizon)");
    require(st.growth_tol >= 0.0, "strategy.growth_tol", "must be nonnegative");
    cfg.L = num(s, "L");
    cfg.M = num(s, "M");
    cfg.release = parse_release(s.at("release").get<std::string>());
    require(cfg.L > 0.0, "strategy.L", "must be positive");
    require(cfg.M >= 0.0, "strategy.M", "must be nonnegative");
    st.validate();
  }

  if (e == Experiment::MsProfile) {
    const json& g = r.at("grid");
    cfg.ms_grid = {num(g, "x_min"), num(g, "x_max"), num(g, "dx")};
    require(cfg.ms_grid.dx > 0.0, "grid.dx", "must be positive");
    require(cfg.ms_grid.x_max > cfg.ms_grid.x_min, "grid.x_max", "must exceed x_min");
    const json& s = r.at("strategy");
    cfg.sterile.c = num(s, "c");
    cfg.sterile.mus = num(r.at("reaction"), "mus");
    cfg.sterile.horizon = num(s, "horizon");
    cfg.sterile.dt = num(r.at("scheme"), "dt");
    cfg.sterile.D = num(r.at("scheme"), "D");
    cfg.sterile.dx = cfg.ms_grid.dx;
    cfg.L = num(s, "L");
    cfg.M = num(s, "M");
    require(cfg.L > 0.0, "strategy.L", "must be positive");
    require(cfg.M >= 0.0, "strategy.M", "must be nonnegative");
    require(cfg.sterile.mus > 0.0, "reaction.mus", "must be positive");
    require(cfg.sterile.horizon >= 0.0, "strategy.horizon", "must be nonnegative");
    SchemeParams{cfg.sterile.dt, 0.0, cfg.sterile.D}.validate();
    const json& q = r.at("quadrature");
    cfg.quadrature.half_width = num(q, "half_width");
    cfg.quadrature.panels = static_cast<int>(std::lround(num(q, "panels")));
    cfg.quadrature.max_doublings = static_cast<int>(std::lround(num(q, "max_doublings")));
    cfg.quadrature.tol = num(q, "tol");
    require(cfg.quadrature.half_width > 0.0, "quadrature.half_width", "must be positive");
    require(cfg.quadrature.panels >= 1, "quadrature.panels", "must be at least 1");
    require(cfg.quadrature.tol > 0.0, "quadrature.tol", "must be positive");
  }

  if (e == Experiment::SpeedCheck) {
    SpeedSettings& sp = cfg.speed;
    const json& g = r.at("grid");
    sp.x_min = num(g, "x_min");
    sp.x_max = num(g, "x_max");
    sp.dx = num(g, "dx");
    sp.dt = num(r.at("scheme"), "dt");
    sp.D = num(r.at("scheme"), "D");
    const json& s = r.at("speed");
    sp.level = num(s, "level");
    sp.margin = num(s, "margin");
    sp.t_max = num(s, "t_max");
    sp.residual_tol = num(s, "residual_tol");
    cfg.killing.term.alpha = num(r.at("reaction"), "alpha");
    require(cfg.killing.term.alpha > 0.0 && cfg.killing.term.alpha < 0.5, "reaction.alpha", "must lie in (0, 1/2)");
    require(sp.dx > 0.0, "grid.dx", "must be positive");
    require(sp.x_max - sp.x_min > 2.0 * sp.margin, "speed.margin", "leaves no room for the front to travel");
    require(sp.level > 0.0 && sp.level < 1.0, "speed.level", "must lie in (0, 1)");
    SchemeParams{sp.dt, 0.0, sp.D}.validate();
  }

  if (r.contains("search")) {
    const json& s = r.at("search");
    SearchSettings& se = cfg.search;
    if (s.contains("c_values")) {
      se.c_values = s.at("c_values").get<std::vector<double>>();
      require(!se.c_values.empty(), "search.c_values", "must not be empty");
      for (double c : se.c_values) require(c <= 0.0, "search.c_values", "frame speeds must be <= 0");
    }
    if (s.contains("L_low")) {
      se.L_low = num(s, "L_low");
      se.L_high = num(s, "L_high");
      se.tol = num(s, "tol");
      require(se.L_low > 0.0, "search.L_low", "must be positive");
      require(se.L_high > se.L_low, "search.L_high", "must exceed L_low");
      require(se.tol > 0.0, "search.tol", "must be positive");
    }
    if (s.contains("M_low")) {
      se.M_low = num(s, "M_low");
      se.M_high = num(s, "M_high");
      se.rel_tol = num(s, "rel_tol");
      require(se.M_low > 0.0, "search.M_low", "must be positive");
      require(se.M_high > se.M_low, "search.M_high", "must exceed M_low");
      require(se.rel_tol > 0.0, "search.rel_tol", "must be positive");
    }
    if (s.contains("L_star")) {
      se.L_star = num(s, "L_star");
      require(se.L_star >= 0.0, "search.L_star", "must be nonnegative");
    }
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("config", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string_view to_string(Experiment e) {
  for (const auto& [k, name] : kNames) {
    if (k == e) return name;
  }
  return "unknown";
}

Experiment parse_experiment(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  throw ValidationError("experiment", "unknown experiment '" + std::string(name) + "'");
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, n] : kNames) v.emplace_back(n);
    return v;
  }();
  return names;
}

ReleaseProfile make_release(ReleaseKind kind, double L, double M) {
  switch (kind) {
    case ReleaseKind::Homogeneous: return ReleaseProfile::homogeneous(L, M);
    case ReleaseKind::Heterogeneous: return ReleaseProfile::heterogeneous(L, M);
    case ReleaseKind::Swapped: return ReleaseProfile::heterogeneous_swapped(L, M);
  }
  return ReleaseProfile::homogeneous(L, M);
}

json default_config(Experiment e) {
  json d;
  d["experiment"] = std::string(to_string(e));
  d["output"] = {{"dir", "out"}, {"stride", 100}};
  if (killing_side(e)) {
    const KillingConfig k;
    d["grid"] = {{"x_min", k.x_min}, {"x_max", k.x_max}, {"dx", k.dx}};
    d["scheme"] = {{"dt", k.dt}, {"D", k.D}};
    d["steady"] = {{"eps", 1e-8}, {"t_check", 50.0 * k.dt}, {"t_max", 20000.0}};
    d["reaction"] = {{"alpha", k.term.alpha}};
    d["strategy"] = {{"c", k.c},
                     {"L", k.L},
                     {"mu", k.mu},
                     {"slope_tol", k.slope_tol},
                     {"boundary_clearance", k.boundary_clearance}};
    if (e == Experiment::LambdaSweep) {
      d["search"] = {{"c_values", {0.0, -0.25, -0.5, -0.75, -1.0, -1.25, -1.5, -1.75, -2.0, -2.2}},
                     {"L_low", 0.1},
                     {"L_high", 39.0},
                     {"tol", 0.02}};
    }
  } else if (sterile_side(e)) {
    const SterileConfig s;
    d["grid"] = {{"dx", s.dx}, {"margin_left", s.margin_left}, {"margin_right", s.margin_right}};
    d["scheme"] = {{"dt", s.dt}, {"D", s.D}};
    d["reaction"] = mosquito_block();
    d["strategy"] = sterile_strategy_block();
    if (e == Experiment::PiSearch) {
      d["search"] = {{"M_low", 10.0}, {"M_high", 1e8}, {"rel_tol", 0.01}};
    } else if (e == Experiment::WidthSearch) {
      d["search"] = {{"L_low", 5.0}, {"L_high", 80.0}, {"tol", 0.05}};
    } else if (e == Experiment::HeteroCompare) {
      d["search"] = {{"L_low", 5.0}, {"L_high", 80.0}, {"tol", 0.05}, {"L_star", 0.0}};
    }
  } else if (e == Experiment::MsProfile) {
    const QuadratureSettings q;
    d["grid"] = {{"x_min", -20.0}, {"x_max", 30.0}, {"dx", 0.05}};
    d["scheme"] = {{"dt", 0.01}, {"D", 1.0}};
    d["reaction"] = {{"mus", 0.1}};
    d["strategy"] = {{"c", -0.05}, {"L", 10.0}, {"M", 1.0}, {"horizon", 0.0}};
    d["quadrature"] = {
        {"half_width", q.half_width}, {"panels", q.panels}, {"max_doublings", q.max_doublings}, {"tol", q.tol}};
  } else {
    const SpeedSettings s;
    d["grid"] = {{"x_min", s.x_min}, {"x_max", s.x_max}, {"dx", s.dx}};
    d["scheme"] = {{"dt", s.dt}, {"D", s.D}};
    d["reaction"] = {{"alpha", 0.25}};
    d["speed"] = {{"level", s.level}, {"margin", s.margin}, {"t_max", s.t_max}, {"residual_tol", s.residual_tol}};
  }
  return d;
}

ExperimentConfig resolve_config(const json& doc, std::string_view experiment) {
  if (!doc.is_object()) throw ValidationError("config", "top level must be an object");
  std::string name(experiment);
  if (doc.contains("experiment")) {
    if (!doc["experiment"].is_string()) throw ValidationError("experiment", "must be a string");
    const std::string in_doc = doc["experiment"].get<std::string>();
    if (!name.empty() && name != in_doc) {
      throw ValidationError("experiment", "config names '" + in_doc + "' but '" + name + "' was requested");
    }
    name = in_doc;
  }
  if (name.empty()) throw ValidationError("experiment", "missing");

  ExperimentConfig cfg;
  cfg.experiment = parse_experiment(name);
  json resolved = default_config(cfg.experiment);
  if (!doc.contains("experiment")) cfg.defaulted.push_back("experiment");

  for (const auto& [section, body] : doc.items()) {
    if (section == "experiment") continue;
    if (!resolved.contains(section)) throw ValidationError(section, "unknown section for " + name);
    if (!body.is_object()) throw ValidationError(section, "must be an object");
    for (const auto& [key, value] : body.items()) {
      const std::string path = section + "." + key;
      if (!resolved[section].contains(key)) throw ValidationError(path, "unknown key");
      const json& want = resolved[section][key];
      if (!same_kind(want, value)) {
        throw ValidationError(path, "expected " + type_name(want) + ", got " + type_name(value));
      }
      if (value.is_number() && !std::isfinite(value.get<double>())) throw ValidationError(path, "must be finite");
    }
  }
  for (auto& [section, body] : resolved.items()) {
    if (!body.is_object()) continue;
    for (auto& [key, value] : body.items()) {
      const json* given = nullptr;
      if (doc.contains(section) && doc[section].contains(key)) given = &doc[section][key];
      if (given) {
        value = *given;
      } else {
        cfg.defaulted.push_back(section + "." + key);
      }
    }
  }
  // The Cauchy check interval follows dt unless it was given explicitly.
  if (resolved.contains("steady") && !(doc.contains("steady") && doc["steady"].contains("t_check"))) {
    resolved["steady"]["t_check"] = 50.0 * resolved["scheme"]["dt"].get<double>();
  }
  cfg.resolved = std::move(resolved);
  materialize(cfg);
  return cfg;
}

ExperimentConfig parse_config(const std::string& text, std::string_view experiment) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n'));
    std::ostringstream msg;
    msg << "line " << line << ": " << e.what();
    throw ParseError(line, msg.str());
  }
  return resolve_config(doc, experiment);
}

ExperimentConfig load_config(const std::string& path, std::string_view experiment) {
  return parse_config(read_file(path), experiment);
}

}  // namespace carpet
