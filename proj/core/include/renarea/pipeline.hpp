#pragma once

#include "renarea/verify.hpp"

namespace renarea {

struct RunConfig {
  std::string scenario_id;
  std::string output_dir = "out";
  std::vector<std::string> verifications;  // identity ids; empty = all applicable
  unsigned long long seed = 2024;
  // overrides, non-positive keeps the catalog value
  double r_min = 0.0, r0 = 0.0;
  int ladder_count = 0;
  double ladder_eps_max_frac = 0.0;
  int nr_dense = 0;
  int pinned_axis = -1;
  bool emit_csv = true;
  bool emit_json = true;
};

// exit status values of the orchestration layer
enum class RunStatus : int {
  ok = 0,
  bad_config = 2,
  solver_failure = 3,
  verification_failure = 4,
};

struct RunOutput {
  RunStatus status = RunStatus::ok;
  std::vector<VerificationReport> reports;
  std::string solve_summary;
  std::vector<std::string> written_files;
  std::string error;
};

RunOutput run_pipeline(const RunConfig& config);

// catalog table with validation status, one line per entry
std::string catalog_table();

// identity ids applicable to a scenario
std::vector<std::string> applicable_verifications(const std::string& scenario_id);

RunConfig config_from_file(const std::string& path);

}  // namespace renarea
