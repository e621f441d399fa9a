#include "fbns/config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "fbns/errors.hpp"
#include "json.hpp"

namespace fbns {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

const json* find(const json& j, const std::string& key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

void reject_unknown(const json& j, const std::string& block,
                    const std::set<std::string>& allowed) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            fail(block.empty() ? it.key() : block + "." + it.key(), "unknown field");
}

double get_num(const json& j, const std::string& block, const std::string& key,
               double fallback, bool* present = nullptr) {
    const json* v = find(j, key);
    if (present) *present = v != nullptr;
    if (!v) return fallback;
    if (!v->is_number()) fail(block + "." + key, "expected a number");
    return v->get<double>();
}

long get_int(const json& j, const std::string& block, const std::string& key, long fallback) {
    const json* v = find(j, key);
    if (!v) return fallback;
    if (!v->is_number_integer()) fail(block + "." + key, "expected an integer");
    return v->get<long>();
}

bool get_bool(const json& j, const std::string& block, const std::string& key, bool fallback) {
    const json* v = find(j, key);
    if (!v) return fallback;
    if (!v->is_boolean()) fail(block + "." + key, "expected a boolean");
    return v->get<bool>();
}

std::string get_str(const json& j, const std::string& block, const std::string& key,
                    const std::string& fallback) {
    const json* v = find(j, key);
    if (!v) return fallback;
    if (!v->is_string()) fail(block + "." + key, "expected a string");
    return v->get<std::string>();
}

void parse_model(const json& j, ModelParams& m) {
    reject_unknown(j, "model",
                   {"a", "gamma", "mu", "P", "R", "N", "oversample", "M", "xi_floor"});
    m.a = get_num(j, "model", "a", m.a);
    m.gamma = get_num(j, "model", "gamma", m.gamma);
    m.mu = get_num(j, "model", "mu", m.mu);
    m.P = get_num(j, "model", "P", m.P);
    m.R = static_cast<int>(get_int(j, "model", "R", m.R));
    m.N = static_cast<int>(get_int(j, "model", "N", m.N));
    m.oversample = static_cast<int>(get_int(j, "model", "oversample", m.oversample));
    m.M = static_cast<int>(get_int(j, "model", "M", m.M));
    m.xi_floor = get_num(j, "model", "xi_floor", m.xi_floor);
}

void parse_time(const json& j, RunConfig& cfg) {
    reject_unknown(j, "time", {"t_end", "tol_ode", "output_dt", "dt", "fixed_dt"});
    cfg.t_end = get_num(j, "time", "t_end", cfg.t_end);
    cfg.model.tol_ode = get_num(j, "time", "tol_ode", cfg.model.tol_ode);
    cfg.output_dt = get_num(j, "time", "output_dt", cfg.output_dt);
    cfg.dt = get_num(j, "time", "dt", cfg.dt);
    cfg.fixed_dt = get_bool(j, "time", "fixed_dt", cfg.fixed_dt);
    if (!(cfg.t_end > 0.0)) fail("time.t_end", "must be > 0");
    if (cfg.output_dt < 0.0) fail("time.output_dt", "must be >= 0");
    if (cfg.fixed_dt && !(cfg.dt > 0.0)) fail("time.dt", "must be > 0 when fixed_dt");
}

void parse_initial(const json& j, InitialSpec& spec, const ModelParams& m) {
    reject_unknown(j, "initial", {"preset", "k", "amplitude", "target", "pi0", "file"});
    spec.preset = get_str(j, "initial", "preset", "");
    if (spec.preset == "stationary") {
        // no parameters
    } else if (spec.preset == "single_mode") {
        spec.k = static_cast<int>(get_int(j, "initial", "k", 1));
        spec.amplitude = get_num(j, "initial", "amplitude", 0.0);
        spec.target = get_str(j, "initial", "target", "velocity");
        if (spec.k < 1 || spec.k > m.N) fail("initial.k", "must be in [1, N]");
        if (!std::isfinite(spec.amplitude)) fail("initial.amplitude", "must be finite");
        if (spec.target != "velocity" && spec.target != "volume")
            fail("initial.target", "must be 'velocity' or 'volume'");
    } else if (spec.preset == "boundary_relax") {
        spec.pi0 = get_num(j, "initial", "pi0", 0.0);
        if (!(spec.pi0 > 0.0)) fail("initial.pi0", "must be > 0");
    } else if (spec.preset == "custom") {
        spec.file = get_str(j, "initial", "file", "");
        if (spec.file.empty()) fail("initial.file", "required for preset 'custom'");
    } else {
        fail("initial.preset",
             "unknown preset '" + spec.preset +
                 "' (expected stationary, single_mode, boundary_relax, or custom)");
    }
}

void parse_output(const json& j, OutputSpec& out) {
    reject_unknown(j, "output", {"directory", "formats", "snapshot_times"});
    out.directory = get_str(j, "output", "directory", out.directory);
    if (const json* f = find(j, "formats")) {
        if (!f->is_array()) fail("output.formats", "expected an array");
        out.csv = false;
        out.json = false;
        for (const auto& e : *f) {
            if (!e.is_string()) fail("output.formats", "entries must be strings");
            const std::string s = e.get<std::string>();
            if (s == "csv") out.csv = true;
            else if (s == "json") out.json = true;
            else fail("output.formats", "unknown format '" + s + "'");
        }
    }
    if (const json* t = find(j, "snapshot_times")) {
        if (!t->is_array()) fail("output.snapshot_times", "expected an array");
        for (const auto& e : *t) {
            if (!e.is_number()) fail("output.snapshot_times", "entries must be numbers");
            out.snapshot_times.push_back(e.get<double>());
        }
    }
}

void parse_monitors(const json& j, MonitorConfig& mc) {
    reject_unknown(j, "monitors",
                   {"mean_v_tol", "energy_budget_scale", "energy_abs_floor", "energy_hard",
                    "eta_rel_slack", "eta_hard", "endpoint_hard"});
    mc.mean_v_tol = get_num(j, "monitors", "mean_v_tol", mc.mean_v_tol);
    mc.energy_budget_scale = get_num(j, "monitors", "energy_budget_scale", mc.energy_budget_scale);
    mc.energy_abs_floor = get_num(j, "monitors", "energy_abs_floor", mc.energy_abs_floor);
    mc.energy_hard = get_bool(j, "monitors", "energy_hard", mc.energy_hard);
    mc.eta_rel_slack = get_num(j, "monitors", "eta_rel_slack", mc.eta_rel_slack);
    mc.eta_hard = get_bool(j, "monitors", "eta_hard", mc.eta_hard);
    mc.endpoint_hard = get_bool(j, "monitors", "endpoint_hard", mc.endpoint_hard);
}

} // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    if (!root.is_object()) throw ConfigError(origin + ": top level must be an object");
    reject_unknown(root, "", {"schema_version", "model", "time", "initial", "output", "monitors"});

    RunConfig cfg;
    const json* sv = find(root, "schema_version");
    if (!sv) fail("schema_version", "required");
    if (!sv->is_number_integer() || sv->get<int>() != 1)
        fail("schema_version", "unsupported (expected 1)");

    if (const json* m = find(root, "model")) {
        if (!m->is_object()) fail("model", "expected an object");
        parse_model(*m, cfg.model);
    }
    if (const json* t = find(root, "time")) {
        if (!t->is_object()) fail("time", "expected an object");
        parse_time(*t, cfg);
    }
    const json* ini = find(root, "initial");
    if (!ini) fail("initial", "required");
    if (!ini->is_object()) fail("initial", "expected an object");
    cfg.model.validate();  // A1/A2 checks before preset validation needs N
    parse_initial(*ini, cfg.initial, cfg.model);
    if (const json* o = find(root, "output")) {
        if (!o->is_object()) fail("output", "expected an object");
        parse_output(*o, cfg.output);
    }
    if (const json* mo = find(root, "monitors")) {
        if (!mo->is_object()) fail("monitors", "expected an object");
        parse_monitors(*mo, cfg.monitors);
    }
    for (double t : cfg.output.snapshot_times)
        if (t < 0.0 || t > cfg.t_end) fail("output.snapshot_times", "entries must lie in [0, t_end]");
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

std::string canonical_json(const RunConfig& cfg) {
    ojson j;
    j["schema_version"] = cfg.schema_version;
    ojson& m = j["model"];
    m["a"] = cfg.model.a;
    m["gamma"] = cfg.model.gamma;
    m["mu"] = cfg.model.mu;
    m["P"] = cfg.model.P;
    m["R"] = cfg.model.R;
    m["N"] = cfg.model.N;
    m["oversample"] = cfg.model.oversample;
    if (cfg.model.M > 0) m["M"] = cfg.model.M;
    m["xi_floor"] = cfg.model.xi_floor;
    ojson& t = j["time"];
    t["t_end"] = cfg.t_end;
    t["tol_ode"] = cfg.model.tol_ode;
    t["output_dt"] = cfg.output_dt;
    t["dt"] = cfg.dt;
    t["fixed_dt"] = cfg.fixed_dt;
    ojson& i = j["initial"];
    i["preset"] = cfg.initial.preset;
    if (cfg.initial.preset == "single_mode") {
        i["k"] = cfg.initial.k;
        i["amplitude"] = cfg.initial.amplitude;
        i["target"] = cfg.initial.target;
    } else if (cfg.initial.preset == "boundary_relax") {
        i["pi0"] = cfg.initial.pi0;
    } else if (cfg.initial.preset == "custom") {
        i["file"] = cfg.initial.file;
    }
    ojson& o = j["output"];
    o["directory"] = cfg.output.directory;
    ojson formats = ojson::array();
    if (cfg.output.csv) formats.push_back("csv");
    if (cfg.output.json) formats.push_back("json");
    o["formats"] = formats;
    o["snapshot_times"] = cfg.output.snapshot_times;
    ojson& mo = j["monitors"];
    mo["mean_v_tol"] = cfg.monitors.mean_v_tol;
    mo["energy_budget_scale"] = cfg.monitors.energy_budget_scale;
    mo["energy_abs_floor"] = cfg.monitors.energy_abs_floor;
    mo["energy_hard"] = cfg.monitors.energy_hard;
    mo["eta_rel_slack"] = cfg.monitors.eta_rel_slack;
    mo["eta_hard"] = cfg.monitors.eta_hard;
    mo["endpoint_hard"] = cfg.monitors.endpoint_hard;
    return j.dump(2) + "\n";
}

InitialData build_initial(const InitialSpec& spec, const ModelParams& p) {
    const int M = p.grid_size();
    InitialData init;
    init.v0 = make_grid_field(M);
    init.xi0 = make_grid_field(M);
    const double xs = stationary_xi(p);

    if (spec.preset == "stationary") {
        for (int j = 0; j < M; ++j) init.xi0.v[static_cast<std::size_t>(j)] = xs;
        init.label = "stationary";
    } else if (spec.preset == "single_mode") {
        for (int j = 0; j < M; ++j) {
            const std::size_t u = static_cast<std::size_t>(j);
            const double x = init.xi0.x(j);
            init.xi0.v[u] = xs;
            if (spec.target == "velocity") {
                init.v0.v[u] = spec.amplitude * basis_w(spec.k, x);
            } else {
                init.xi0.v[u] += spec.amplitude * basis_s(spec.k, x);
            }
        }
        std::ostringstream label;
        label << "single_mode(k=" << spec.k << "," << spec.target
              << ",amp=" << spec.amplitude << ")";
        init.label = label.str();
    } else if (spec.preset == "boundary_relax") {
        for (int j = 0; j < M; ++j) init.xi0.v[static_cast<std::size_t>(j)] = spec.pi0;
        std::ostringstream label;
        label << "boundary_relax(pi0=" << spec.pi0 << ")";
        init.label = label.str();
    } else if (spec.preset == "custom") {
        std::ifstream in(spec.file);
        if (!in) throw ConfigError(spec.file + ": cannot open initial-data file");
        std::vector<std::array<double, 3>> rows;
        std::string line;
        while (std::getline(in, line)) {
            for (char& c : line)
                if (c == ',') c = ' ';
            std::istringstream ls(line);
            double x, v, xi;
            if (!(ls >> x >> v >> xi)) continue;  // header/blank lines
            rows.push_back({x, v, xi});
        }
        if (static_cast<int>(rows.size()) != M) {
            std::ostringstream msg;
            msg << spec.file << ": expected " << M << " rows on the uniform grid, got "
                << rows.size();
            throw ConfigError(msg.str());
        }
        for (int j = 0; j < M; ++j) {
            const std::size_t u = static_cast<std::size_t>(j);
            const double x_expect = init.xi0.x(j);
            if (std::abs(rows[u][0] - x_expect) > 1e-9)
                throw ConfigError(spec.file + ": x column is not the uniform grid");
            init.v0.v[u] = rows[u][1];
            init.xi0.v[u] = rows[u][2];
        }
        init.label = "custom(" + spec.file + ")";
    } else {
        throw ConfigError("initial.preset: unknown preset '" + spec.preset + "'");
    }
    return init;
}

RunOptions to_run_options(const RunConfig& cfg) {
    RunOptions opt;
    opt.t_end = cfg.t_end;
    opt.output_dt = cfg.output_dt;
    opt.extra_output_times = cfg.output.snapshot_times;
    opt.fixed_dt = cfg.fixed_dt;
    opt.dt = cfg.dt;
    opt.tol = 0.0;
    opt.monitors = cfg.monitors;
    return opt;
}

} // namespace fbns
