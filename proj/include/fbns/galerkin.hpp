#pragma once

#include <memory>
#include <vector>

#include "fbns/boundary.hpp"
#include "fbns/model.hpp"
#include "fbns/spectral.hpp"

namespace fbns {

// Immutable per-run tables: basis samples at the Gauss-Legendre quadrature
// nodes, exact affine projections, viscous damping factors. Safe to share
// across threads once constructed.
struct Discretization {
    explicit Discretization(const ModelParams& params);

    ModelParams params;
    int N;                      // modes
    int M;                      // uniform grid size
    QuadRule quad;              // composite Gauss-Legendre on [0,1]
    // Row-major basis tables on the quadrature nodes.
    std::vector<double> sin_q;  // [k-1][g] : s_k(x_g), k = 1..N
    std::vector<double> cos_q;  // [k-1][g] : w_k(x_g), k = 1..N
    std::vector<double> ck;     // (x, w_k) = sqrt(2)((-1)^k - 1)/(pi k)^2, k = 1..N
    std::vector<double> Ik;     // (1, s_k) = sqrt(2)(1 - (-1)^k)/(pi k),   k = 1..N
    std::vector<double> delta;  // viscous damping mu (pi k)^2 for k > R else 0

    double sq(int k, int g) const { return sin_q[static_cast<std::size_t>(k - 1) * quad.size() + g]; }
    double wq(int k, int g) const { return cos_q[static_cast<std::size_t>(k - 1) * quad.size() + g]; }
};

// Galerkin coefficients plus the boundary value and running time-quadratures
// of dissipation, the Gronwall forcing chi, and the boundary-affine energy
// source rho. Plain value type.
struct GalerkinState {
    std::vector<double> alpha;   // velocity cosine coefficients, k = 1..N at [k-1]
    std::vector<double> gtilde;  // xi sine coefficients, k = 1..N at [k-1]
    double pi = 1.0;
    double t = 0.0;
    double diss_cum = 0.0;
    double chi_cum = 0.0;
    double rho_cum = 0.0;

    int modes() const { return static_cast<int>(alpha.size()); }
};

// Deliberate defect injection for mutation testing of the acceptance suite.
enum class RhsMutation { None, FlipPressureSign, DisableTruncation };

struct RhsResult {
    std::vector<double> dalpha;
    std::vector<double> dgtilde;
    double dpi = 0.0;
};

// Field reconstructions on the closed uniform grid with M points.
// v(x)  = pi_t (x - 1/2) + sum alpha_k w_k(x)
// xi(x) = pi + sum gtilde_k s_k(x)          (endpoints equal pi exactly)
GridField reconstruct_v(const GalerkinState& s, const Discretization& d, int M);
GridField reconstruct_xi(const GalerkinState& s, const Discretization& d, int M);
GridField reconstruct_v_x(const GalerkinState& s, const Discretization& d, int M);
GridField reconstruct_xi_x(const GalerkinState& s, const Discretization& d, int M);

// Pointwise evaluation from coefficients (used by oracles; independent of
// the basis tables).
double eval_xi(const GalerkinState& s, double x);
double eval_v(const GalerkinState& s, const ModelParams& p, double x);

// Project initial data: pi(0) from the xi0 endpoints, gtilde by sine
// analysis of xi0 - pi(0), alpha by cosine analysis of v0 minus the affine
// boundary part. Throws InvalidInitialData on structural violations.
GalerkinState initial_state(const InitialData& init, const Discretization& d);

// Full time derivative of (alpha, gtilde, pi) at the state's own time.
RhsResult assemble_rhs(const GalerkinState& s, const Discretization& d,
                       RhsMutation mutation = RhsMutation::None);

struct StepStats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evals = 0;
    long boundary_substeps = 0;
    double last_dt = 0.0;
};

// One adaptive macro step (integrating-factor RK4 with step doubling) or one
// fixed step. The boundary path supplies pi at stage times and must sit at
// state.t when called.
class Stepper {
public:
    Stepper(std::shared_ptr<const Discretization> disc, RhsMutation mutation = RhsMutation::None);

    // Advance by exactly dt (no error control). Cost: 4 rhs evaluations.
    GalerkinState fixed_step(const GalerkinState& s, BoundaryPath& bp, double dt);

    // Advance by at most dt_try, adapting. Returns the accepted state; dt_next
    // is the suggested next step. Throws StepSizeUnderflow when step control
    // collapses.
    GalerkinState adaptive_step(const GalerkinState& s, BoundaryPath& bp, double dt_try,
                                double tol, double& dt_taken, double& dt_next);

    const StepStats& stats() const { return stats_; }
    const Discretization& disc() const { return *disc_; }

private:
    struct StageDeriv {
        std::vector<double> g;        // non-stiff part of dalpha
        std::vector<double> dgtilde;
        double ddiss = 0.0;
        double dchi = 0.0;
        double drho = 0.0;
    };

    // Evaluates the stage derivative at (alpha, gtilde, pi(t_stage)).
    StageDeriv eval(const std::vector<double>& alpha, const std::vector<double>& gtilde,
                    double pi, double t);
    GalerkinState lawson_rk4(const GalerkinState& s, double h,
                             double pi_half, double pi_full, double t0);

    std::shared_ptr<const Discretization> disc_;
    RhsMutation mutation_;
    StepStats stats_;
    double err_prev_ = 1e-4;
    // scratch buffers
    std::vector<double> xi_q_, q_q_;
};

} // namespace fbns
