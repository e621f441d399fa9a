#include "fbns/model.hpp"

#include <cmath>

namespace fbns {

namespace {

// a * xi^-gamma with a fast path for integer exponents (the common case).
double pow_neg(double xi, double gamma) {
    double rounded = std::nearbyint(gamma);
    if (std::abs(gamma - rounded) < 1e-12 && rounded > 0 && rounded <= 64) {
        double acc = 1.0;
        for (int i = 0; i < static_cast<int>(rounded); ++i) acc *= xi;
        return 1.0 / acc;
    }
    return std::pow(xi, -gamma);
}

} // namespace

void ModelParams::validate() const {
    if (!(a > 0.0)) throw ConfigError("A1: pressure coefficient a must be positive");
    if (!(gamma > 1.0)) throw ConfigError("A1: adiabatic exponent gamma must exceed 1");
    if (!(mu > 0.0)) throw ConfigError("A1: viscosity mu must be positive");
    if (!(P > 0.0)) throw ConfigError("A1: external pressure P must be positive");
    if (N < 1) throw ConfigError("truncation N must be at least 1");
    if (R < 0) throw ConfigError("viscous cutoff R must be >= 0");
    if (R >= N) throw ConfigError("viscous cutoff R must be smaller than truncation N");
    if (oversample < 2) throw ConfigError("oversample must be >= 2");
    if (M != 0 && M < oversample * N + 1)
        throw ConfigError("grid size M must be at least oversample*N + 1");
    if (grid_size() < 2 * N + 1) throw ConfigError("grid size M must be at least 2N+1");
    if (!(xi_floor > 0.0)) throw ConfigError("xi_floor must be positive");
    if (!(tol_ode > 0.0)) throw ConfigError("tol_ode must be positive");
}

double pressure(double xi, const ModelParams& p) {
    // singularity guard: below the floor the model has lost meaning
    if (xi < p.xi_floor) throw VacuumApproach(xi);
    return p.a * pow_neg(xi, p.gamma);
}

double big_G(double s, const ModelParams& p) {
    return p.a * std::pow(s, p.gamma - 1.0) / (p.gamma - 1.0);
}

double stationary_xi(const ModelParams& p) {
    return std::pow(p.a / p.P, 1.0 / p.gamma);
}

ValidationReport validate_initial_data(const InitialData& init, const ModelParams& p,
                                       double tol) {
    ValidationReport rep;
    if (init.v0.size() != init.xi0.size() || init.v0.size() < 2) {
        rep.violations.push_back("v0 and xi0 must share a grid with at least 2 points");
        return rep;
    }

    double mean_v = trapezoid(init.v0);
    if (std::abs(mean_v) > tol)
        rep.violations.push_back("A2: mean of v0 must vanish (got " + std::to_string(mean_v) + ")");

    double xi_min = init.xi0[0];
    for (int j = 0; j < init.xi0.size(); ++j) xi_min = std::min(xi_min, init.xi0[j]);
    if (!(xi_min > 0.0) || xi_min < p.xi_floor)
        rep.violations.push_back("A2: xi0 must stay above the vacuum floor (min " +
                                 std::to_string(xi_min) + ")");

    double gap = std::abs(init.xi0[0] - init.xi0[init.xi0.size() - 1]);
    if (gap > tol)
        rep.violations.push_back("A2: xi0 endpoint values must agree (gap " +
                                 std::to_string(gap) + ")");

    if (rep.violations.empty()) {
        GridField inv = make_grid_field(init.xi0.size());
        for (int j = 0; j < inv.size(); ++j) inv[j] = 1.0 / init.xi0[j];
        double mass = trapezoid(inv);
        if (std::abs(mass - 1.0) > 1e-6)
            rep.warnings.push_back("total mass integral(1/xi0) = " + std::to_string(mass) +
                                   " differs from 1; mass normalization is a convention, not enforced");
    }
    return rep;
}

} // namespace fbns
