#pragma once

#include <string>
#include <vector>

#include "fbns/model.hpp"
#include "fbns/simulate.hpp"

namespace fbns {

// Initial-condition registry. Exactly one of the presets below; `custom`
// reads sampled (x, v, xi) rows from a file.
struct InitialSpec {
    std::string preset = "stationary";
    int k = 1;                        // single_mode
    double amplitude = 0.0;           // single_mode
    std::string target = "velocity";  // single_mode: velocity | volume
    double pi0 = 1.0;                 // boundary_relax
    std::string file;                 // custom
};

struct OutputSpec {
    std::string directory = "out";
    bool csv = true;
    bool json = false;
    std::vector<double> snapshot_times;
};

struct RunConfig {
    int schema_version = 1;
    ModelParams model;        // tol_ode lives here, set from the time block
    double t_end = 1.0;
    double output_dt = 0.1;
    bool fixed_dt = false;
    double dt = 1e-3;
    InitialSpec initial;
    OutputSpec output;
    MonitorConfig monitors;
};

// Parse a JSON config file. Throws ConfigError naming the offending field
// (e.g. "model.a: must be > 0 (A1)").
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);

// Canonical serialization of the parsed config (echoed into the manifest;
// reparsing it reproduces the same RunConfig).
std::string canonical_json(const RunConfig& cfg);

// Materialize initial fields on the model's uniform grid.
InitialData build_initial(const InitialSpec& spec, const ModelParams& p);

RunOptions to_run_options(const RunConfig& cfg);

} // namespace fbns
