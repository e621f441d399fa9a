#include "fbns/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fbns/boundary.hpp"
#include "fbns/errors.hpp"

namespace fbns {

namespace {

std::vector<double> output_schedule(const RunOptions& opt) {
    std::vector<double> times;
    times.push_back(0.0);
    if (opt.output_dt > 0.0) {
        const long n = static_cast<long>(std::floor(opt.t_end / opt.output_dt + 1e-9));
        for (long i = 1; i <= n; ++i) times.push_back(i * opt.output_dt);
    }
    for (double t : opt.extra_output_times)
        if (t > 0.0 && t < opt.t_end) times.push_back(t);
    times.push_back(opt.t_end);
    std::sort(times.begin(), times.end());
    const double eps = 1e-12 * std::max(1.0, opt.t_end);
    times.erase(std::unique(times.begin(), times.end(),
                            [eps](double a, double b) { return std::abs(a - b) < eps; }),
                times.end());
    return times;
}

double energy_tolerance(const MonitorConfig& mc, double tol, double t, double e0) {
    return mc.energy_abs_floor +
           mc.energy_budget_scale * 1e3 * tol * (1.0 + t) * (1.0 + std::abs(e0));
}

void check_monitors(const DiagnosticsRecord& rec, const MonitorConfig& mc, double tol,
                    double e0, double eta0, const ModelParams& p) {
    if (rec.xi_min < p.xi_floor) throw VacuumApproach(rec.xi_min, rec.t);
    if (rec.mean_v_residual > mc.mean_v_tol)
        throw MonitorViolation("mean_velocity", rec.mean_v_residual, rec.t);
    if (mc.endpoint_hard && rec.endpoint_gap != 0.0)
        throw MonitorViolation("xi_endpoint", rec.endpoint_gap, rec.t);
    if (mc.energy_hard) {
        const double budget = energy_tolerance(mc, tol, rec.t, e0);
        if (std::abs(rec.energy_residual_corrected) > budget)
            throw MonitorViolation("energy_identity", rec.energy_residual_corrected, rec.t);
    }
    if (mc.eta_hard) {
        // Local bound: eta(t) <= e^t (eta(0) + integral of chi).
        const double bound = std::exp(rec.t) * (eta0 + rec.chi_cum);
        const double slack = mc.eta_rel_slack * std::abs(bound) + 1e-12 * (1.0 + std::abs(eta0));
        if (rec.eta > bound + slack)
            throw MonitorViolation("eta_gronwall_local", rec.eta - bound, rec.t);
    }
}

Trajectory integrate(GalerkinState s, std::shared_ptr<const Discretization> disc,
                     const RunOptions& opt) {
    const ModelParams& p = disc->params;
    if (!(opt.t_end > 0.0)) throw ConfigError("t_end must be positive");
    if (opt.fixed_dt && !(opt.dt > 0.0)) throw ConfigError("dt must be positive");

    const double tol = opt.tol > 0.0 ? opt.tol : p.tol_ode;
    const std::vector<double> schedule = output_schedule(opt);
    const double snap = 1e-12 * std::max(1.0, opt.t_end);

    double max_dt = opt.max_dt;
    if (max_dt <= 0.0)
        max_dt = opt.output_dt > 0.0 ? opt.output_dt : opt.t_end;

    Stepper stepper(disc, opt.mutation);
    BoundaryPath bp(s.pi, p);

    Trajectory traj;
    {
        DiagnosticsRecord r0 = evaluate_diagnostics(s, *disc, 0.0, 0.0);
        traj.e0 = r0.total_energy;
        traj.eta0 = r0.eta;
        // sup_x (xi0 - U0/mu) feeds the volume upper-bound report.
        const int M = p.grid_size();
        const GridField xi0 = reconstruct_xi(s, *disc, M);
        const GridField u0 = flow_potential(s, *disc, M);
        double sup0 = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < xi0.size(); ++j)
            sup0 = std::max(sup0, xi0.v[j] - u0.v[j] / p.mu);
        traj.sup0 = sup0;
        r0 = evaluate_diagnostics(s, *disc, traj.e0, 0.0);
        check_monitors(r0, opt.monitors, tol, traj.e0, traj.eta0, p);
        traj.states.push_back(s);
        traj.records.push_back(r0);
    }

    double dt_next = opt.fixed_dt ? opt.dt : std::min(opt.dt, max_dt);
    double m_u = traj.records.front().M_U;

    for (std::size_t i = 1; i < schedule.size(); ++i) {
        const double target = schedule[i];
        while (s.t < target - snap) {
            double h = std::min(dt_next, target - s.t);
            if (opt.fixed_dt) {
                h = std::min(opt.dt, target - s.t);
                s = stepper.fixed_step(s, bp, h);
            } else {
                double taken = 0.0;
                s = stepper.adaptive_step(s, bp, h, tol, taken, dt_next);
                dt_next = std::min(dt_next, max_dt);
            }
            if (std::abs(s.t - target) <= snap) s.t = target;
        }
        DiagnosticsRecord rec = evaluate_diagnostics(s, *disc, traj.e0, m_u);
        m_u = rec.M_U;
        check_monitors(rec, opt.monitors, tol, traj.e0, traj.eta0, p);
        traj.states.push_back(s);
        traj.records.push_back(rec);
    }

    traj.stats = stepper.stats();
    traj.stats.boundary_substeps = bp.substeps();
    return traj;
}

} // namespace

Trajectory run(const InitialData& init, std::shared_ptr<const Discretization> disc,
               const RunOptions& opt) {
    GalerkinState s0 = initial_state(init, *disc);
    return integrate(std::move(s0), std::move(disc), opt);
}

Trajectory run_from_state(GalerkinState s0, std::shared_ptr<const Discretization> disc,
                          const RunOptions& opt) {
    s0.t = 0.0;
    return integrate(std::move(s0), std::move(disc), opt);
}

} // namespace fbns
