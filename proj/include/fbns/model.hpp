#pragma once

#include <string>
#include <vector>

#include "fbns/errors.hpp"
#include "fbns/spectral.hpp"

namespace fbns {

// Physical and discretization parameters for one run.
//
// The gas fills the mass interval [0,1]; xi is specific volume, p = a xi^-gamma
// the barotropic pressure law, P the external piston pressure, mu the bulk
// viscosity, R the number of low cosine modes excluded from the viscous
// operator, N the Galerkin truncation.
struct ModelParams {
    double a = 1.0;
    double gamma = 5.0;
    double mu = 0.1;
    double P = 1.0;
    int R = 2;
    int N = 32;
    int oversample = 4;   // uniform grid size M = oversample*N + 1 unless set
    int M = 0;            // 0 means derive from oversample
    double xi_floor = 1e-8;
    double tol_ode = 1e-10;

    int grid_size() const { return M > 0 ? M : oversample * N + 1; }

    // Throws ConfigError naming the violated assumption.
    void validate() const;
};

// p(1/xi) = a xi^-gamma evaluated at specific volume xi.
double pressure(double xi, const ModelParams& p);

// Antiderivative-type internal energy density G(s) = a s^(gamma-1)/(gamma-1),
// evaluated at density s = 1/xi. Positive for s > 0.
double big_G(double s, const ModelParams& p);

// Equilibrium specific volume (a/P)^(1/gamma): pressure balances the piston.
double stationary_xi(const ModelParams& p);

// Sampled initial data on the closed uniform grid.
struct InitialData {
    GridField v0;
    GridField xi0;
    std::string label = "custom";
};

struct ValidationReport {
    std::vector<std::string> violations;  // structural failures
    std::vector<std::string> warnings;    // e.g. total mass differs from 1
    bool ok() const { return violations.empty(); }
};

// Structural checks on initial data: zero mean velocity, strictly positive
// xi0 above the floor, equal endpoint values of xi0, and (warning only)
// total mass = integral of 1/xi0 equal to 1.
ValidationReport validate_initial_data(const InitialData& init, const ModelParams& p,
                                       double tol = 1e-9);

} // namespace fbns
