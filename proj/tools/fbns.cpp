#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fbns/boundary.hpp"
#include "fbns/config.hpp"
#include "fbns/errors.hpp"
#include "fbns/output.hpp"
#include "fbns/simulate.hpp"
#include "fbns/verification.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitMonitor = 2;
constexpr int kExitSolver = 3;

void apply_output_override(fbns::RunConfig& cfg) {
    if (const char* dir = std::getenv("FBNS_OUTPUT_DIR"))
        if (*dir) cfg.output.directory = dir;
}

int cmd_run(const std::string& config_path) {
    fbns::RunConfig cfg = fbns::parse_config_file(config_path);
    apply_output_override(cfg);

    auto disc = std::make_shared<const fbns::Discretization>(cfg.model);
    const fbns::InitialData init = fbns::build_initial(cfg.initial, cfg.model);
    const fbns::Trajectory traj = fbns::run(init, disc, fbns::to_run_options(cfg));

    const auto files = fbns::write_outputs(cfg, traj, *disc, "ok");
    const fbns::DiagnosticsRecord& last = traj.final_record();
    std::printf("run %s: t = %.6g, E = %.9g, cumulative dissipation = %.9g, pi = %.9g\n",
                init.label.c_str(), last.t, last.total_energy, last.dissipation_cum, last.pi);
    std::printf("steps: %ld accepted, %ld rejected, %ld rhs evaluations, %ld boundary substeps\n",
                traj.stats.accepted, traj.stats.rejected, traj.stats.rhs_evals,
                traj.stats.boundary_substeps);
    for (const fbns::WrittenFile& f : files)
        std::printf("wrote %s/%s (%zu bytes, fnv1a64 %016llx)\n", cfg.output.directory.c_str(),
                    f.name.c_str(), f.bytes, static_cast<unsigned long long>(f.hash));
    return kExitOk;
}

int cmd_verify(const std::string& config_path, const std::string& mutate) {
    fbns::RhsMutation mutation = fbns::RhsMutation::None;
    if (mutate == "flip_pressure_sign") mutation = fbns::RhsMutation::FlipPressureSign;
    else if (mutate == "disable_truncation") mutation = fbns::RhsMutation::DisableTruncation;
    else if (!mutate.empty() && mutate != "none")
        throw fbns::ConfigError("--mutate: unknown mutation '" + mutate + "'");

    fbns::VerifyReport rep = fbns::run_verification_suite(mutation);

    if (!config_path.empty()) {
        // Additionally run the user's configuration under the hard monitors
        // and report its viscosity-smallness status.
        fbns::CheckResult extra;
        extra.name = "config_run";
        try {
            fbns::RunConfig cfg = fbns::parse_config_file(config_path);
            auto disc = std::make_shared<const fbns::Discretization>(cfg.model);
            const fbns::InitialData init = fbns::build_initial(cfg.initial, cfg.model);
            fbns::RunOptions opt = fbns::to_run_options(cfg);
            const fbns::Trajectory traj = fbns::run(init, disc, opt);
            const fbns::GronwallReport g =
                fbns::gronwall_monitor(traj.records, cfg.model, cfg.monitors.eta_rel_slack);
            extra.pass = g.local_ok && (!g.global_applicable || g.global_ok);
            extra.margin = g.local_min_margin;
            char buf[256];
            std::snprintf(buf, sizeof buf,
                          "viscosity smallness mu <= a*gamma/xi+^(gamma+1): mu = %.6g vs "
                          "threshold %.6g -> global form %s",
                          cfg.model.mu, g.mu_threshold,
                          g.global_applicable ? (g.global_ok ? "applicable, holds" : "VIOLATED")
                                              : "not applicable");
            extra.detail = buf;
        } catch (const std::exception& e) {
            extra.pass = false;
            extra.detail = std::string("aborted: ") + e.what();
        }
        rep.checks.push_back(extra);
    }

    for (const fbns::CheckResult& c : rep.checks)
        std::printf("%s\n", fbns::format_check_line(c).c_str());
    std::printf("%s\n", rep.all_pass() ? "verification: all checks passed"
                                       : "verification: FAILURES present");
    return rep.all_pass() ? kExitOk : kExitMonitor;
}

int cmd_stationary(double a, double P, double gamma, double mu, double pi0, double xi_plus) {
    fbns::ModelParams p;
    p.a = a;
    p.P = P;
    p.gamma = gamma;
    p.mu = mu > 0 ? mu : p.mu;
    p.validate();

    const double xs = fbns::stationary_xi(p);
    std::printf("xi* = (a/P)^(1/gamma) = %.9g\n", xs);
    std::printf("pressure check: p(1/xi*) = a xi*^-gamma = %.17g (P = %.17g, gap %.3g)\n",
                fbns::pressure(xs, p), P, std::abs(fbns::pressure(xs, p) - P));
    if (pi0 > 0) {
        const auto [lo, hi] = fbns::pi_bounds(pi0, p);
        std::printf("boundary bracket for pi(0) = %.9g: [%.9g, %.9g]\n", pi0, lo, hi);
    }
    const double xp = xi_plus > 0 ? xi_plus : (pi0 > 0 ? std::max(pi0, xs) : xs);
    const double threshold = p.gamma * p.a / std::pow(xp, p.gamma + 1.0);
    std::printf("smallness threshold a*gamma/xi+^(gamma+1) at xi+ = %.9g: %.9g\n", xp, threshold);
    if (mu > 0)
        std::printf("mu = %.9g %s threshold (global eta bound %s)\n", mu,
                    mu <= threshold ? "<=" : ">", mu <= threshold ? "applicable" : "not applicable");
    return kExitOk;
}

struct SweepRow {
    double value = 0.0;
    double final_energy = 0.0;
    double max_xi = 0.0;
    double min_xi = 0.0;
    double dissipation_cum = 0.0;
    std::string status;
};

SweepRow sweep_one(fbns::RunConfig cfg, const std::string& axis, double value) {
    SweepRow row;
    row.value = value;
    try {
        if (axis == "mu") {
            cfg.model.mu = value;
        } else if (axis == "N") {
            if (value != std::floor(value) || value < 1)
                throw fbns::ConfigError("sweep: N values must be positive integers");
            cfg.model.N = static_cast<int>(value);
            if (cfg.model.R >= cfg.model.N) cfg.model.R = cfg.model.N - 1;
        } else {
            if (value != std::floor(value) || value < 0)
                throw fbns::ConfigError("sweep: R values must be nonnegative integers");
            cfg.model.R = static_cast<int>(value);
        }
        cfg.model.validate();

        char sub[64];
        std::snprintf(sub, sizeof sub, "%s_%g", axis.c_str(), value);
        cfg.output.directory += std::string("/") + sub;

        auto disc = std::make_shared<const fbns::Discretization>(cfg.model);
        const fbns::InitialData init = fbns::build_initial(cfg.initial, cfg.model);
        const fbns::Trajectory traj = fbns::run(init, disc, fbns::to_run_options(cfg));
        fbns::write_outputs(cfg, traj, *disc, "ok");

        row.final_energy = traj.final_record().total_energy;
        row.dissipation_cum = traj.final_record().dissipation_cum;
        row.max_xi = traj.records.front().xi_max;
        row.min_xi = traj.records.front().xi_min;
        for (const fbns::DiagnosticsRecord& r : traj.records) {
            row.max_xi = std::max(row.max_xi, r.xi_max);
            row.min_xi = std::min(row.min_xi, r.xi_min);
        }
        row.status = "ok";
    } catch (const std::exception& e) {
        row.status = std::string("failed: ") + e.what();
    }
    return row;
}

int cmd_sweep(const std::string& config_path, const std::string& axis,
              const std::vector<double>& values) {
    if (values.empty()) throw fbns::ConfigError("sweep: at least one value required");
    fbns::RunConfig base = fbns::parse_config_file(config_path);
    apply_output_override(base);

    std::vector<std::future<SweepRow>> jobs;
    jobs.reserve(values.size());
    for (double v : values)
        jobs.push_back(std::async(std::launch::async, sweep_one, base, axis, v));

    std::string csv = "value,final_energy,max_xi,min_xi,dissipation_cum,status\n";
    for (auto& job : jobs) {
        const SweepRow row = job.get();
        csv += fbns::format_g17(row.value) + "," + fbns::format_g17(row.final_energy) + "," +
               fbns::format_g17(row.max_xi) + "," + fbns::format_g17(row.min_xi) + "," +
               fbns::format_g17(row.dissipation_cum) + "," + row.status + "\n";
        std::printf("%s = %g: %s\n", axis.c_str(), row.value, row.status.c_str());
    }

    namespace fs = std::filesystem;
    fs::create_directories(base.output.directory);
    const fs::path summary = fs::path(base.output.directory) / "sweep_summary.csv";
    std::FILE* f = std::fopen(summary.string().c_str(), "wb");
    if (!f) throw fbns::SolverError("cannot write " + summary.string());
    std::fwrite(csv.data(), 1, csv.size(), f);
    std::fclose(f);
    std::printf("wrote %s\n", summary.string().c_str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral Galerkin simulator for a free-boundary viscous gas column"};
    app.require_subcommand(1);

    std::string run_config;
    CLI::App* runcmd = app.add_subcommand("run", "integrate one configuration and write outputs");
    runcmd->add_option("config", run_config, "JSON config file")->required();

    std::string verify_config, mutate;
    CLI::App* verifycmd =
        app.add_subcommand("verify", "run the acceptance/invariant suite");
    verifycmd->add_option("config", verify_config, "optional config to check as well");
    verifycmd->add_option("--mutate", mutate,
                          "inject a defect: none|flip_pressure_sign|disable_truncation");

    double a = 1.0, P = 1.0, gamma = 5.0, mu = 0.0, pi0 = 0.0, xi_plus = 0.0;
    CLI::App* statcmd = app.add_subcommand("stationary", "print the stationary state analysis");
    statcmd->add_option("--a", a, "pressure coefficient");
    statcmd->add_option("--P", P, "external pressure");
    statcmd->add_option("--gamma", gamma, "adiabatic exponent");
    statcmd->add_option("--mu", mu, "viscosity (for the smallness check)");
    statcmd->add_option("--pi0", pi0, "initial endpoint volume (prints its bracket)");
    statcmd->add_option("--xi-plus", xi_plus, "upper volume bound for the smallness threshold");

    std::string sweep_config, axis;
    std::vector<double> values;
    CLI::App* sweepcmd = app.add_subcommand("sweep", "parallel parameter sweep");
    sweepcmd->add_option("config", sweep_config, "JSON config file")->required();
    sweepcmd->add_option("--axis", axis, "mu|N|R")
        ->required()
        ->check(CLI::IsMember({"mu", "N", "R"}));
    sweepcmd->add_option("--values", values, "axis values")->required()->delimiter(',');

    try {
        app.parse(argc, argv);
        if (runcmd->parsed()) return cmd_run(run_config);
        if (verifycmd->parsed()) return cmd_verify(verify_config, mutate);
        if (statcmd->parsed()) return cmd_stationary(a, P, gamma, mu, pi0, xi_plus);
        if (sweepcmd->parsed()) return cmd_sweep(sweep_config, axis, values);
        return kExitConfig;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    } catch (const fbns::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const fbns::InvalidInitialData& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const fbns::MonitorViolation& e) {
        std::fprintf(stderr, "monitor failure: %s\n", e.what());
        return kExitMonitor;
    } catch (const fbns::SolverError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return kExitSolver;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSolver;
    }
}
