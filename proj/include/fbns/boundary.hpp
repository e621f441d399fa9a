#pragma once

#include <utility>

#include "fbns/model.hpp"

namespace fbns {

// Endpoint specific volume pi(t). Both endpoints obey the same scalar ODE
//   mu pi' = a pi^-gamma - P
// so a single state serves x = 0 and x = 1 when the data start equal.
struct BoundaryState {
    double pi = 1.0;
    double t = 0.0;
};

// Right-hand side pi' = (a pi^-gamma - P)/mu.
double boundary_rhs(double pi, const ModelParams& p);

// pi'' = -(gamma a pi^-(gamma+1)/mu) pi', by differentiating the ODE.
double pi_second_derivative(double pi, const ModelParams& p);

// Invariant bracket: pi(t) stays between pi0 and the equilibrium (a/P)^(1/gamma)
// for all t (the ODE is monotone toward the equilibrium). Returns {lo, hi}.
std::pair<double, double> pi_bounds(double pi0, const ModelParams& p);

// Adaptive sub-stepped integrator for the boundary ODE. Embedded step-doubling
// error control on a classical 4-stage core; enforces the invariant bracket
// (tiny tolerance-level overshoot is clamped, larger overshoot throws).
class BoundaryPath {
public:
    BoundaryPath(double pi0, const ModelParams& p);

    // Advance to time t (monotone; earlier targets are no-ops).
    void advance_to(double t);

    double pi() const { return state_.pi; }
    double t() const { return state_.t; }
    long substeps() const { return substeps_; }
    std::pair<double, double> bracket() const { return bracket_; }

private:
    double rk4_step(double pi, double h) const;

    ModelParams params_;
    BoundaryState state_;
    std::pair<double, double> bracket_;
    double h_ = 1e-3;
    long substeps_ = 0;
};

// One-shot convenience wrapper: advance a boundary state by dt.
BoundaryState advance_pi(BoundaryState s, double dt, const ModelParams& p);

} // namespace fbns
