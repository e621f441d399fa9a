#include "fbns/boundary.hpp"

#include <algorithm>
#include <cmath>

namespace fbns {

double boundary_rhs(double pi, const ModelParams& p) {
    return (pressure(pi, p) - p.P) / p.mu;
}

double pi_second_derivative(double pi, const ModelParams& p) {
    // d/dt of the rhs: p'(pi) pi_t / mu with p'(pi) = -gamma a pi^-(gamma+1).
    double pi_t = boundary_rhs(pi, p);
    return -(p.gamma * pressure(pi, p) / pi) * pi_t / p.mu;
}

std::pair<double, double> pi_bounds(double pi0, const ModelParams& p) {
    double eq = stationary_xi(p);
    return {std::min(pi0, eq), std::max(pi0, eq)};
}

BoundaryPath::BoundaryPath(double pi0, const ModelParams& p)
    : params_(p), state_{pi0, 0.0}, bracket_(pi_bounds(pi0, p)) {
    // Initial step guess from the local relaxation rate.
    double rate = p.gamma * pressure(std::max(pi0, p.xi_floor), p) /
                  (std::max(pi0, p.xi_floor) * p.mu);
    h_ = std::min(1e-2, 0.1 / std::max(rate, 1e-12));
}

double BoundaryPath::rk4_step(double pi, double h) const {
    double k1 = boundary_rhs(pi, params_);
    double k2 = boundary_rhs(pi + 0.5 * h * k1, params_);
    double k3 = boundary_rhs(pi + 0.5 * h * k2, params_);
    double k4 = boundary_rhs(pi + h * k3, params_);
    return pi + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void BoundaryPath::advance_to(double t) {
    const double tol = std::max(1e-14, 0.01 * params_.tol_ode);
    const double bracket_tol = std::max(1e-12, 100.0 * tol);
    while (state_.t < t) {
        double h = std::min(h_, t - state_.t);
        if (h < 1e-15 * std::max(1.0, std::abs(t))) {
            state_.t = t;  // remaining gap is below time resolution
            break;
        }
        // Step doubling: one full step against two half steps.
        double full = rk4_step(state_.pi, h);
        double half = rk4_step(rk4_step(state_.pi, 0.5 * h), 0.5 * h);
        double err = std::abs(half - full) / 15.0;
        double scale = tol * (1.0 + std::abs(half));
        if (err <= scale) {
            state_.pi = half;
            state_.t += h;
            ++substeps_;
            double grow = (err > 0.0) ? 0.9 * std::pow(scale / err, 0.2) : 5.0;
            h_ = h * std::clamp(grow, 0.2, 5.0);

            // Invariant bracket: integration error may poke past by a hair.
            auto [lo, hi] = bracket_;
            if (state_.pi < lo - bracket_tol || state_.pi > hi + bracket_tol)
                throw MonitorViolation("boundary_bracket",
                                       std::max(lo - state_.pi, state_.pi - hi), state_.t);
            state_.pi = std::clamp(state_.pi, lo, hi);
        } else {
            double shrink = 0.9 * std::pow(scale / err, 0.2);
            h_ = h * std::clamp(shrink, 0.1, 0.9);
            if (h_ < 1e-14)
                throw StiffnessFailure("boundary ODE step control stalled at t=" +
                                       std::to_string(state_.t));
        }
    }
}

BoundaryState advance_pi(BoundaryState s, double dt, const ModelParams& p) {
    BoundaryPath path(s.pi, p);
    path.advance_to(dt);
    return BoundaryState{path.pi(), s.t + dt};
}

} // namespace fbns
