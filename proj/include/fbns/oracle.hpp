#pragma once

#include <memory>
#include <vector>

#include "fbns/galerkin.hpp"
#include "fbns/simulate.hpp"

namespace fbns {

// Closed-form small-oscillation dynamics of a single mode about the stationary
// state: gtilde_k'' + delta_k gtilde_k' + omega_k^2 gtilde_k = 0.
struct LinearizedPrediction {
    int k = 0;
    double omega = 0.0;  // pi k sqrt(a gamma) xi*^{-(gamma+1)/2}
    double delta = 0.0;  // mu pi^2 k^2 for k > R, else 0
};

LinearizedPrediction linearized_prediction(int k, const ModelParams& p);

// Reference right-hand side, computed independently of the fast path:
// pointwise field synthesis, composite Simpson quadrature on a grid refined
// `refinement`x beyond the working one, plus one Richardson extrapolation.
struct DenseRhs {
    std::vector<double> dalpha;
    std::vector<double> dgtilde;
    double dpi = 0.0;
};

DenseRhs dense_rhs(const GalerkinState& s, const Discretization& d, int refinement);

// Largest componentwise gap between the fast path and the reference.
double rhs_disagreement(const GalerkinState& s, const Discretization& d, int refinement);

// Twin-trajectory divergence probe for the uniqueness bound. Both runs use
// identical numerics; the distance is the exact L2 norm pair
//   d(t)^2 = ||v1 - v2||^2 + ||xi1 - xi2||^2
// evaluated from coefficients. K(T) is the recorded Gronwall factor of the
// weighted relative-entropy estimate; the bound asserts d(t) <= K(T) d(0).
struct DivergenceHistory {
    std::vector<double> times;
    std::vector<double> distance;       // d(t)
    std::vector<double> gronwall_k;     // running K(t), nondecreasing
    double d0 = 0.0;
    double max_distance = 0.0;
    double k_final = 1.0;
};

DivergenceHistory twin_run_divergence(const GalerkinState& a, const GalerkinState& b,
                                      std::shared_ptr<const Discretization> disc,
                                      double t_end, const RunOptions& base);

// Distance/Gronwall analysis of two already-computed trajectories sharing the
// same output schedule.
DivergenceHistory divergence_from(const Trajectory& ta, const Trajectory& tb,
                                  const Discretization& d);

// Exact L2 distance between two states' (v, xi) pairs, from coefficients.
double state_distance(const GalerkinState& a, const GalerkinState& b,
                      const Discretization& d);

} // namespace fbns
