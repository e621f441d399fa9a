#include "fbns/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fbns/errors.hpp"
#include "json.hpp"

namespace fbns {

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr const char* kCsvHeader =
    "t,kinetic,internal,pv,total_energy,dissipation_rate,dissipation_cum,"
    "energy_residual,eta,chi,volume,S,pi,pi_t,xi_min,xi_max,mean_v_residual,"
    "f_norm,M_U";

std::vector<double> record_row(const DiagnosticsRecord& r) {
    return {r.t,  r.kinetic, r.internal, r.pv,     r.total_energy,
            r.dissipation_rate, r.dissipation_cum, r.energy_residual,
            r.eta, r.chi,     r.volume,  r.S,      r.pi,
            r.pi_t, r.xi_min, r.xi_max,  r.mean_v_residual,
            r.f_norm, r.M_U};
}

void write_file(const std::filesystem::path& dir, const std::string& name,
                const std::string& content, std::vector<WrittenFile>& files) {
    const std::filesystem::path full = dir / name;
    std::ofstream out(full, std::ios::binary | std::ios::trunc);
    if (!out) throw SolverError("cannot write " + full.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw SolverError("short write to " + full.string());
    files.push_back({name, content.size(), fnv1a64(content)});
}

std::string snapshot_name(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "snapshot_t%.6f.csv", t);
    return buf;
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace

const char* program_version() { return kVersion; }

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string render_trajectory_csv(const std::vector<DiagnosticsRecord>& recs) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const DiagnosticsRecord& r : recs) {
        const std::vector<double> row = record_row(r);
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_g17(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string render_trajectory_json(const std::vector<DiagnosticsRecord>& recs) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json cols = nlohmann::ordered_json::array();
    {
        std::string header = kCsvHeader;
        std::size_t pos = 0;
        while (pos != std::string::npos) {
            std::size_t next = header.find(',', pos);
            cols.push_back(header.substr(pos, next == std::string::npos ? next : next - pos));
            pos = next == std::string::npos ? next : next + 1;
        }
    }
    j["columns"] = cols;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const DiagnosticsRecord& r : recs) rows.push_back(record_row(r));
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

std::string render_snapshot(const GalerkinState& s, const Discretization& d) {
    const int M = d.params.grid_size();
    const GridField v = reconstruct_v(s, d, M);
    const GridField xi = reconstruct_xi(s, d, M);
    const EulerianMap map = eulerian_map(s, d, M);
    std::string out = "x,v,xi,rho,r\n";
    for (int j = 0; j < M; ++j) {
        const std::size_t u = static_cast<std::size_t>(j);
        out += format_g17(xi.x(j));
        out += ',';
        out += format_g17(v.v[u]);
        out += ',';
        out += format_g17(xi.v[u]);
        out += ',';
        out += format_g17(1.0 / xi.v[u]);
        out += ',';
        out += format_g17(map.r.v[u]);
        out += '\n';
    }
    return out;
}

std::vector<WrittenFile> write_outputs(const RunConfig& cfg, const Trajectory& traj,
                                       const Discretization& d,
                                       const std::string& monitor_status) {
    namespace fs = std::filesystem;
    const fs::path dir(cfg.output.directory);
    fs::create_directories(dir);

    std::vector<WrittenFile> files;
    if (cfg.output.csv)
        write_file(dir, "trajectory.csv", render_trajectory_csv(traj.records), files);
    if (cfg.output.json)
        write_file(dir, "trajectory.json", render_trajectory_json(traj.records), files);

    const double snap_tol = 1e-9 * std::max(1.0, cfg.t_end);
    for (double t_req : cfg.output.snapshot_times) {
        std::size_t best = 0;
        double best_gap = std::abs(traj.states.front().t - t_req);
        for (std::size_t i = 1; i < traj.states.size(); ++i) {
            const double gap = std::abs(traj.states[i].t - t_req);
            if (gap < best_gap) {
                best = i;
                best_gap = gap;
            }
        }
        if (best_gap > snap_tol) continue;  // run aborted before reaching it
        write_file(dir, snapshot_name(traj.states[best].t),
                   render_snapshot(traj.states[best], d), files);
    }

    nlohmann::ordered_json man;
    man["program"] = {{"name", "fbns"}, {"version", kVersion}};
    man["schema_version"] = cfg.schema_version;
    man["config"] = nlohmann::ordered_json::parse(canonical_json(cfg));
    man["monitors"]["status"] = monitor_status;
    {
        const GronwallReport g = gronwall_monitor(traj.records, d.params);
        nlohmann::ordered_json& gj = man["monitors"]["gronwall"];
        gj["local_ok"] = g.local_ok;
        gj["local_min_margin"] = g.local_min_margin;
        gj["global_applicable"] = g.global_applicable;
        gj["global_ok"] = g.global_ok;
        gj["global_min_margin"] = g.global_min_margin;
        gj["M_bound"] = g.M_bound;
        gj["mu_threshold"] = g.mu_threshold;

        const XiBoundReport x = xi_bound_monitor(traj.records, d.params, traj.sup0);
        nlohmann::ordered_json& xj = man["monitors"]["xi_upper_bound"];
        xj["hypothesis_met"] = x.hypothesis_met;
        xj["hypothesis_margin"] = x.hypothesis_margin;
        xj["bound_ok"] = x.bound_ok;
        xj["min_margin"] = x.min_margin;
        xj["xi_threshold"] = x.xi_threshold;
        xj["t_min"] = x.t_min;
    }
    man["stats"] = {{"accepted", traj.stats.accepted},
                    {"rejected", traj.stats.rejected},
                    {"rhs_evals", traj.stats.rhs_evals},
                    {"boundary_substeps", traj.stats.boundary_substeps}};
    nlohmann::ordered_json fj = nlohmann::ordered_json::array();
    for (const WrittenFile& f : files)
        fj.push_back({{"name", f.name},
                      {"bytes", f.bytes},
                      {"fnv1a64", hash_hex(f.hash)}});
    man["files"] = fj;
    write_file(dir, "manifest.json", man.dump(2) + "\n", files);
    return files;
}

} // namespace fbns
