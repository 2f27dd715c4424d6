#include "carpet/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <thread>

#include "carpet/output.hpp"
#include "carpet/parallel.hpp"

namespace carpet {

using nlohmann::json;

namespace {

json critical_json(const CriticalResult& r) {
  json steps = json::array();
  for (const auto& s : r.verdicts) steps.push_back({{"parameter", s.parameter}, {"verdict", to_string(s.verdict)}});
  return {{"threshold", r.threshold},   {"bracket_low", r.bracket_low}, {"bracket_high", r.bracket_high},
          {"iterations", r.iterations}, {"tolerance", r.tolerance},     {"verdicts", steps}};
}

json outcome_json(const SteadyOutcome& o) {
  json j = {{"verdict", to_string(o.verdict)}, {"u_at_L", o.u_at_L},   {"du_at_L", o.du_at_L},
            {"converged", o.converged},        {"residual", o.residual}, {"elapsed", o.elapsed}};
  j["interior_min_location"] = o.interior_min_location ? json(*o.interior_min_location) : json(nullptr);
  return j;
}

std::string label(const char* prefix, double v) { return std::string(prefix) + "=" + format_number(v); }

RunArtifacts killing_run(const ExperimentConfig& cfg) {
  const KillingConfig& k = cfg.killing;
  std::vector<double> times;
  std::vector<Vector> rows;
  const SemiImplicitSolver::Observer keep = [&](const Field& u, long step) {
    if (step % cfg.stride == 0) {
      times.push_back(u.time);
      rows.push_back(u.values);
    }
  };
  const SteadyOutcome o = run_killing(k, keep);
  RunArtifacts a;
  a.summary = outcome_json(o);
  a.summary["c"] = k.c;
  a.summary["L"] = k.L;
  a.summary["mu"] = k.mu;
  a.undecided = o.verdict == Verdict::Undecided;
  a.files["profiles.csv"] = csv_columns({"x", "u"}, {o.profile.grid.nodes(), o.profile.values});
  a.files["spacetime.csv"] = csv_spacetime(o.profile.grid.nodes(), times, rows);
  return a;
}

RunArtifacts lambda_sweep(const ExperimentConfig& cfg, int workers) {
  const auto& s = cfg.search;
  const auto table = interface_value_sweep(s.c_values, s.L_low, s.L_high, s.tol, cfg.killing, workers);
  const ReactionInfo info = derive_info(cfg.killing.term);
  RunArtifacts a;
  json rows = json::array();
  bool monotone = true;
  std::vector<std::string> header{"x"};
  std::vector<Vector> columns{table.front().outcome.profile.grid.nodes()};
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& r = table[i];
    if (i > 0 && std::abs(r.c) > std::abs(table[i - 1].c) && !(r.lambda.threshold > table[i - 1].lambda.threshold)) {
      monotone = false;
    }
    rows.push_back({{"c", r.c},
                    {"lambda", critical_json(r.lambda)},
                    {"width", r.width},
                    {"u_interface", r.u_interface},
                    {"g_interface", r.g_interface},
                    {"regime", critical_regime(cfg.killing.term, r.c) == CriticalRegime::CriticalSolutionExists
                                   ? "critical-solution-exists"
                                   : "critical-solution-absent"},
                    {"outcome", outcome_json(r.outcome)}});
    header.push_back(label("u_c", r.c));
    columns.push_back(r.outcome.profile.values);
  }
  a.summary = {{"alpha", info.alpha}, {"beta", info.beta}, {"rows", rows}, {"lambda_monotone_in_abs_c", monotone}};
  a.files["profiles.csv"] = csv_columns(header, columns);
  return a;
}

json sterile_outcome_json(const SterileOutcome& o) {
  return {{"verdict", to_string(o.verdict)},
          {"t_end", o.t_end},
          {"female_equilibrium", o.female_equilibrium},
          {"front_position", o.front_position},
          {"wake_max", o.wake_max}};
}

RunArtifacts sterile_run(const ExperimentConfig& cfg) {
  SterileConfig sc = cfg.sterile;
  sc.record_stride = cfg.stride;
  const ReleaseProfile release = make_release(cfg.release, cfg.L, cfg.M);
  const SterileOutcome o = run_sterile(sc, release);
  RunArtifacts a;
  a.summary = sterile_outcome_json(o);
  a.summary["c"] = sc.c;
  a.summary["L"] = cfg.L;
  a.summary["M"] = cfg.M;
  a.summary["released_total"] = release.total();
  a.undecided = o.verdict == Verdict::Undecided;
  const Vector x = o.grid.nodes();
  a.files["profiles.csv"] = csv_columns({"x", "f", "m"}, {x, o.f, o.m});
  a.files["spacetime.csv"] = csv_spacetime(x, o.times, o.f_history);
  a.files["spacetime_m.csv"] = csv_spacetime(x, o.times, o.m_history);
  return a;
}

RunArtifacts pi_search(const ExperimentConfig& cfg) {
  const auto& s = cfg.search;
  const CriticalResult r = pi_dichotomy(cfg.L, s.M_low, s.M_high, s.rel_tol, cfg.sterile);
  RunArtifacts a;
  a.summary = {{"c", cfg.sterile.c}, {"L", cfg.L}, {"pi", critical_json(r)}};
  return a;
}

RunArtifacts width_search(const ExperimentConfig& cfg) {
  const auto& s = cfg.search;
  const CriticalResult r = critical_width(cfg.M, s.L_low, s.L_high, s.tol, cfg.sterile);
  RunArtifacts a;
  a.summary = {{"c", cfg.sterile.c}, {"M", cfg.M}, {"L_star", critical_json(r)}};
  return a;
}

RunArtifacts hetero(const ExperimentConfig& cfg, int workers) {
  const auto& s = cfg.search;
  RunArtifacts a;
  double L_star = s.L_star;
  if (L_star == 0.0) {
    const CriticalResult r = critical_width(cfg.M, s.L_low, s.L_high, s.tol, cfg.sterile);
    a.summary["critical_width"] = critical_json(r);
    L_star = r.threshold;
  }
  const double width = L_star + 10.0 * cfg.sterile.dx;
  const HeteroReport rep = hetero_compare(cfg.M, width, cfg.sterile, workers);
  a.summary["L_star"] = L_star;
  a.summary["width"] = width;
  a.summary["M"] = cfg.M;
  a.summary["homogeneous"] = to_string(rep.homogeneous);
  a.summary["heterogeneous"] = to_string(rep.heterogeneous);
  a.summary["heterogeneous_swapped"] = to_string(rep.swapped);
  a.summary["N_hom"] = rep.N_hom;
  a.summary["N_het"] = rep.N_het;
  a.summary["ratio"] = rep.ratio;
  return a;
}

RunArtifacts ms_profile(const ExperimentConfig& cfg, int workers) {
  const SterileAnalytic an(cfg.sterile.c, cfg.L, cfg.M, cfg.sterile.mus);
  const Grid1D grid = Grid1D::with_spacing(cfg.ms_grid.x_min, cfg.ms_grid.x_max, cfg.ms_grid.dx);
  const Vector x = grid.nodes();
  Vector closed(grid.size());
  for (Index i = 0; i < grid.size(); ++i) closed(i) = ms_closed_form(x(i), an);
  const std::vector<double> sp = parallel_map<double>(static_cast<std::size_t>(grid.size()), workers, [&](std::size_t i) {
    return ms_spectral(x(static_cast<Index>(i)), an, cfg.quadrature);
  });
  const Vector spectral = Eigen::Map<const Vector>(sp.data(), grid.size());
  std::vector<std::string> header{"x", "m", "m_spectral"};
  std::vector<Vector> columns{x, closed, spectral};
  RunArtifacts a;
  a.summary = {{"c", an.c},
               {"L", an.L},
               {"M", an.M},
               {"mus", an.mus},
               {"max", closed.maxCoeff()},
               {"bound", an.M / an.mus},
               {"argmax", an.argmax()},
               {"max_abs_spectral_diff", (spectral - closed).cwiseAbs().maxCoeff()}};
  if (cfg.sterile.horizon > 0.0) {
    const Field lab = ms_lab_frame(cfg.sterile, cfg.L, cfg.M, cfg.sterile.horizon);
    const double shift = cfg.sterile.c * lab.time;
    Vector moved(grid.size());
    for (Index i = 0; i < grid.size(); ++i) moved(i) = lab.at(x(i) + shift);
    header.emplace_back("m_lab");
    columns.push_back(moved);
    a.summary["lab_time"] = lab.time;
    a.summary["max_abs_lab_diff"] = (moved - closed).cwiseAbs().maxCoeff();
  }
  a.files["profiles.csv"] = csv_columns(header, columns);
  return a;
}

RunArtifacts speed_check(const ExperimentConfig& cfg) {
  const SpeedResult r = natural_speed(cfg.killing.term, cfg.speed);
  const double exact = (1.0 - 2.0 * cfg.killing.term.alpha) / std::sqrt(2.0);
  RunArtifacts a;
  a.summary = {{"alpha", cfg.killing.term.alpha},
               {"speed", r.speed},
               {"exact", exact},
               {"relative_error", std::abs(r.speed - exact) / exact},
               {"rms_residual", r.rms_residual},
               {"duration", r.duration},
               {"samples", r.samples}};
  return a;
}

json file_entries(const std::map<std::string, std::string>& files) {
  json out = json::object();
  for (const auto& [name, content] : files) out[name] = {{"sha256", sha256_hex(content)}, {"bytes", content.size()}};
  return out;
}

}  // namespace

RunArtifacts compute_experiment(const ExperimentConfig& cfg, int workers) {
  RunArtifacts a;
  switch (cfg.experiment) {
    case Experiment::LambdaSweep: a = lambda_sweep(cfg, workers); break;
    case Experiment::KillingRun: a = killing_run(cfg); break;
    case Experiment::SterileRun: a = sterile_run(cfg); break;
    case Experiment::PiSearch: a = pi_search(cfg); break;
    case Experiment::WidthSearch: a = width_search(cfg); break;
    case Experiment::MsProfile: a = ms_profile(cfg, workers); break;
    case Experiment::HeteroCompare: a = hetero(cfg, workers); break;
    case Experiment::SpeedCheck: a = speed_check(cfg); break;
  }
  a.summary["experiment"] = std::string(to_string(cfg.experiment));
  a.files["summary.json"] = dump_json(a.summary);
  return a;
}

RunResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, int workers) {
  const auto start = std::chrono::steady_clock::now();
  RunResult res;
  res.out_dir = out_dir;
  res.artifacts = compute_experiment(cfg, workers);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::filesystem::create_directories(out_dir);
  for (const auto& [name, content] : res.artifacts.files) write_atomic(out_dir / name, content);

  res.manifest = {{"version", CARPET_VERSION},
                  {"experiment", std::string(to_string(cfg.experiment))},
                  {"config", cfg.resolved},
                  {"defaulted", cfg.defaulted},
                  {"workers", workers},
                  {"wall_clock_seconds", wall},
                  {"files", file_entries(res.artifacts.files)},
                  {"diagnostics", res.artifacts.diagnostics}};
  write_atomic(out_dir / "manifest.json", dump_json(res.manifest));
  return res;
}

ReplayReport replay(const std::filesystem::path& manifest_path, int workers) {
  std::ifstream in(manifest_path);
  if (!in) throw Error(ErrorKind::Mismatch, "cannot open manifest " + manifest_path.string());
  json manifest;
  try {
    manifest = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Mismatch, std::string("manifest is not valid JSON: ") + e.what());
  }
  const ExperimentConfig cfg = resolve_config(manifest.at("config"));
  const RunArtifacts fresh = compute_experiment(cfg, workers);
  const std::filesystem::path dir = manifest_path.parent_path();

  ReplayReport rep;
  const json& recorded = manifest.at("files");
  std::set<std::string> names;
  for (const auto& [name, entry] : recorded.items()) names.insert(name);
  for (const auto& [name, content] : fresh.files) names.insert(name);
  for (const auto& name : names) {
    bool ok = recorded.contains(name) && fresh.files.count(name) > 0;
    if (ok) {
      const std::string want = recorded[name].at("sha256").get<std::string>();
      ok = sha256_hex(fresh.files.at(name)) == want;
      if (ok) {
        const auto path = dir / name;
        ok = std::filesystem::exists(path) && sha256_file(path) == want;
      }
    }
    (ok ? rep.matched : rep.mismatched).push_back(name);
  }
  if (!rep.mismatched.empty()) {
    std::string msg = "replay mismatch:";
    for (const auto& n : rep.mismatched) msg += " " + n;
    throw Error(ErrorKind::Mismatch, msg);
  }
  return rep;
}

int resolve_workers(std::optional<int> flag) {
  if (flag) {
    if (*flag < 1) throw ValidationError("workers", "must be at least 1");
    return *flag;
  }
  if (const char* env = std::getenv("CARPET_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1) throw ValidationError("CARPET_WORKERS", "must be a positive integer");
    return static_cast<int>(n);
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

int exit_code_for(const std::exception& e) {
  const auto* err = dynamic_cast<const Error*>(&e);
  if (!err) return 1;
  switch (err->kind()) {
    case ErrorKind::Parse:
    case ErrorKind::Validation: return 2;
    case ErrorKind::UndecidedVerdict:
    case ErrorKind::BadBracket:
    case ErrorKind::NoBracket: return 4;
    case ErrorKind::Mismatch: return 1;
    default: return 3;
  }
}

json error_object(const std::exception& e) {
  json j = {{"message", e.what()}};
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    j["kind"] = std::string(to_string(err->kind()));
    if (const auto* p = dynamic_cast<const ParseError*>(err)) j["line"] = p->line();
    if (const auto* v = dynamic_cast<const ValidationError*>(err)) j["field"] = v->field();
    if (const auto* u = dynamic_cast<const UndecidedVerdict*>(err)) j["parameter"] = u->parameter();
    if (const auto* t = dynamic_cast<const PathTerminates*>(err)) j["u_stop"] = t->u_stop();
  } else {
    j["kind"] = "Internal";
  }
  return {{"error", j}};
}

}  // namespace carpet
