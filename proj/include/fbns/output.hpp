#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fbns/config.hpp"
#include "fbns/simulate.hpp"

namespace fbns {

const char* program_version();

// Full-precision scalar formatting used by every writer (%.17g).
std::string format_g17(double x);

// 64-bit FNV-1a over the file bytes; manifest content hashes.
std::uint64_t fnv1a64(const std::string& bytes);

std::string render_trajectory_csv(const std::vector<DiagnosticsRecord>& recs);
std::string render_trajectory_json(const std::vector<DiagnosticsRecord>& recs);
// One snapshot: header row, then x, v, xi, rho = 1/xi, r columns.
std::string render_snapshot(const GalerkinState& s, const Discretization& d);

struct WrittenFile {
    std::string name;  // relative to the output directory
    std::size_t bytes = 0;
    std::uint64_t hash = 0;
};

// Write trajectory file(s), requested snapshots, and manifest.json into
// cfg.output.directory (created if missing). `monitor_status` is echoed into
// the manifest ("ok" or the violation description). Returns everything
// written, manifest last.
std::vector<WrittenFile> write_outputs(const RunConfig& cfg, const Trajectory& traj,
                                       const Discretization& d,
                                       const std::string& monitor_status);

} // namespace fbns
