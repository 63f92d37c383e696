#pragma once

#include <filesystem>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "bpch/config.hpp"

namespace bpch {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitPicard = 3;
inline constexpr int kExitIo = 4;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kSeriesHeader =
    "step,time,energy,volume,min_phi,max_phi,int_G_eps,int_J_eps,neg_part_sq,over_part_sq,"
    "picard_iters";

void write_series(const std::filesystem::path& path, const std::vector<SeriesRecord>& series);
/// Columns x[,y],phi,mu.
void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);

/// Runs one simulation into config.output_dir: series.csv, phi_<step>.csv
/// and manifest.txt. Returns kExitOk or kExitPicard.
int cmd_run(const RunConfig& config, std::ostream& log);

/// Writes convergence.csv (scheme,N,e2,r2) into config.output_dir.
int cmd_converge(const RunConfig& config, std::ostream& log);

/// Runs every scheme of config.scheme_list() into output_dir/<SCHEME>/ and
/// writes the merged compare.csv (step,time,min_phi_<S>,max_phi_<S>,...).
int cmd_compare(const RunConfig& config, std::ostream& log);

/// Calls fn and maps ConfigError (and invalid arguments) to kExitConfig,
/// SolverError to kExitPicard, I/O and field-file errors to kExitIo. The
/// message goes to err.
int guarded(const std::function<int()>& fn, std::ostream& err);

}  // namespace bpch
