#pragma once

#include <functional>
#include <vector>

#include "fbns/diagnostics.hpp"
#include "fbns/galerkin.hpp"

namespace fbns {

// Hard monitors abort the run via MonitorViolation; soft ones only record.
struct MonitorConfig {
    double mean_v_tol = 1e-12;
    // Energy budget: the corrected residual must stay within
    //   abs_floor + scale * 1e3 * tol * (1 + t) * (1 + |E0|),
    // a loose ceiling tied to the trajectory tolerance. The acceptance suite
    // pins much tighter thresholds on dedicated fixed-step runs.
    double energy_budget_scale = 1.0;
    double energy_abs_floor = 1e-10;
    bool energy_hard = true;
    double eta_rel_slack = 1e-6;
    bool eta_hard = true;
    bool endpoint_hard = true;
};

struct RunOptions {
    double t_end = 1.0;
    double output_dt = 0.1;          // record cadence; 0 means only t=0 and t_end
    std::vector<double> extra_output_times;
    bool fixed_dt = false;
    double dt = 1e-3;                // fixed step, or initial step when adaptive
    double tol = 0.0;                // 0 means params.tol_ode
    double max_dt = 0.0;             // 0 means output interval
    MonitorConfig monitors;
    RhsMutation mutation = RhsMutation::None;
};

struct Trajectory {
    std::vector<GalerkinState> states;         // at output times
    std::vector<DiagnosticsRecord> records;    // parallel to states
    StepStats stats;
    double e0 = 0.0;
    double eta0 = 0.0;
    double sup0 = 0.0;  // sup_x (xi0(x) - U(x,0)/mu), for the upper-bound report

    const GalerkinState& final_state() const { return states.back(); }
    const DiagnosticsRecord& final_record() const { return records.back(); }
};

// Integrate from projected initial data. Records diagnostics at every output
// time, running the hard monitors there. Deterministic for fixed inputs.
Trajectory run(const InitialData& init, std::shared_ptr<const Discretization> disc,
               const RunOptions& opt);

// Same loop, starting from an explicit coefficient state at t=0 (used by
// twin-run probes that perturb single coefficients).
Trajectory run_from_state(GalerkinState s0, std::shared_ptr<const Discretization> disc,
                          const RunOptions& opt);

} // namespace fbns
