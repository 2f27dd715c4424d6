#pragma once

#include <exception>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "carpet/config.hpp"

namespace carpet {

/// Artifacts of one experiment before they touch the disk. File contents are
/// deterministic; `diagnostics` may hold wall-clock figures and goes to the manifest only.
struct RunArtifacts {
  nlohmann::json summary;
  std::map<std::string, std::string> files;  ///< name -> content, summary.json included
  nlohmann::json diagnostics = nlohmann::json::object();
  bool undecided = false;  ///< a single run ended without a verdict
};

RunArtifacts compute_experiment(const ExperimentConfig& cfg, int workers);

struct RunResult {
  std::filesystem::path out_dir;
  RunArtifacts artifacts;
  nlohmann::json manifest;
};

/// Computes, writes every artifact, then writes manifest.json last.
RunResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, int workers);

struct ReplayReport {
  std::vector<std::string> matched;
  std::vector<std::string> mismatched;
};

/// Re-runs the manifest's config and compares digests with the manifest and the files on disk.
/// Throws Error(Mismatch) naming the divergent files.
ReplayReport replay(const std::filesystem::path& manifest_path, int workers);

/// --workers wins, then CARPET_WORKERS, then the hardware thread count.
int resolve_workers(std::optional<int> flag);

/// 0 ok, 2 config, 3 numeric, 4 undecided or bracket, 1 anything else.
int exit_code_for(const std::exception& e);

nlohmann::json error_object(const std::exception& e);

}  // namespace carpet
