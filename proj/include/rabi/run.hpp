#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rabi/config.hpp"

namespace rabi {

struct ExecuteOptions {
  int workers = 0;
  bool verbose = false;
};

struct ExecuteResult {
  int exit_status = 0;
  std::vector<std::filesystem::path> files;
  std::string error;
};

/// Column headers of the CSV outputs. These are a stable interface.
inline const std::vector<std::string> kPhaseDiagramHeader = {
    "g", "omega_c", "omega_q", "gap", "occupation", "qfi", "negativity", "mutual_info",
    "min_variance", "converged", "flag_reason"};
inline const std::vector<std::string> kGroundStateHeader = {
    "g", "omega_c", "omega_q", "energy", "gap", "occupation", "qfi", "negativity",
    "mutual_info", "min_variance", "converged", "flag_reason"};
inline const std::vector<std::string> kQuenchHeader = {
    "t", "f", "occupation", "qfi", "negativity", "mutual_info", "min_variance"};
inline const std::vector<std::string> kWignerHeader = {"x", "p", "W"};

/// Runs the configured computation and writes metadata.json plus CSV data into `output_dir`.
/// On failure every file written by this call is removed and a nonzero status returned.
ExecuteResult execute(const RunConfig& config, const std::filesystem::path& output_dir,
                      const ExecuteOptions& options = {});

/// "%.17g" formatting used for every CSV number.
std::string format_number(double v);

/// File name of a quench Wigner snapshot, e.g. "wigner_t10.csv".
std::string snapshot_file_name(double t);

}  // namespace rabi
