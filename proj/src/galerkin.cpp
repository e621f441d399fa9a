#include "fbns/galerkin.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace fbns {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kSqrt2 = 1.41421356237309504880168872420969808;

double pow_neg_gamma(double xi, double gamma) {
    double rounded = std::nearbyint(gamma);
    if (std::abs(gamma - rounded) < 1e-12 && rounded > 0 && rounded <= 64) {
        double acc = 1.0;
        for (int i = 0; i < static_cast<int>(rounded); ++i) acc *= xi;
        return 1.0 / acc;
    }
    return std::pow(xi, -gamma);
}
} // namespace

Discretization::Discretization(const ModelParams& p) : params(p), N(p.N), M(p.grid_size()) {
    params.validate();

    // Quadrature: enough panels that each sees at most ~one half wavelength
    // of the highest retained mode; 12-point Gauss per panel.
    int panels = std::max(8, (p.oversample * N) / 2);
    quad = QuadRule::composite_gauss(panels, 12);
    const int MG = quad.size();

    sin_q.resize(static_cast<std::size_t>(N) * MG);
    cos_q.resize(static_cast<std::size_t>(N) * MG);
    for (int k = 1; k <= N; ++k) {
        for (int g = 0; g < MG; ++g) {
            sin_q[static_cast<std::size_t>(k - 1) * MG + g] = basis_s(k, quad.x[static_cast<std::size_t>(g)]);
            cos_q[static_cast<std::size_t>(k - 1) * MG + g] = basis_w(k, quad.x[static_cast<std::size_t>(g)]);
        }
    }

    ck.resize(static_cast<std::size_t>(N));
    Ik.resize(static_cast<std::size_t>(N));
    delta.resize(static_cast<std::size_t>(N));
    for (int k = 1; k <= N; ++k) {
        double sign = (k % 2 == 0) ? 1.0 : -1.0;
        ck[static_cast<std::size_t>(k - 1)] = kSqrt2 * (sign - 1.0) / (kPi * kPi * k * k);
        Ik[static_cast<std::size_t>(k - 1)] = kSqrt2 * (1.0 - sign) / (kPi * k);
        delta[static_cast<std::size_t>(k - 1)] =
            (k > p.R) ? p.mu * kPi * kPi * k * k : 0.0;
    }

    // Fail fast if the basis tables and the quadrature disagree about the
    // affine projections (x, w_k).
    for (int k = 1; k <= N; ++k) {
        double s = 0.0;
        for (int g = 0; g < MG; ++g)
            s += quad.w[static_cast<std::size_t>(g)] * quad.x[static_cast<std::size_t>(g)] * wq(k, g);
        if (std::abs(s - ck[static_cast<std::size_t>(k - 1)]) > 1e-10)
            throw ConfigError("basis/grid misconfiguration: (x, w_k) mismatch at k=" +
                              std::to_string(k));
    }
}

GridField reconstruct_v(const GalerkinState& s, const Discretization& d, int M) {
    GridField f = make_grid_field(M);
    double pi_t = boundary_rhs(s.pi, d.params);
    const int N = s.modes();
    for (int j = 0; j < M; ++j) {
        double x = f.x(j);
        double sum = pi_t * (x - 0.5);
        for (int k = 1; k <= N; ++k) sum += s.alpha[static_cast<std::size_t>(k - 1)] * basis_w(k, x);
        f[j] = sum;
    }
    return f;
}

GridField reconstruct_xi(const GalerkinState& s, const Discretization& d, int M) {
    (void)d;
    GridField f = make_grid_field(M);
    const int N = s.modes();
    for (int j = 0; j < M; ++j) {
        double x = f.x(j);
        double sum = s.pi;
        if (j > 0 && j < M - 1)  // sines vanish identically at the endpoints
            for (int k = 1; k <= N; ++k) sum += s.gtilde[static_cast<std::size_t>(k - 1)] * basis_s(k, x);
        f[j] = sum;
    }
    return f;
}

GridField reconstruct_v_x(const GalerkinState& s, const Discretization& d, int M) {
    GridField f = make_grid_field(M);
    double pi_t = boundary_rhs(s.pi, d.params);
    const int N = s.modes();
    for (int j = 0; j < M; ++j) {
        double x = f.x(j);
        double sum = pi_t;
        if (j > 0 && j < M - 1)
            for (int k = 1; k <= N; ++k)
                sum -= s.alpha[static_cast<std::size_t>(k - 1)] * kPi * k * basis_s(k, x);
        f[j] = sum;
    }
    return f;
}

GridField reconstruct_xi_x(const GalerkinState& s, const Discretization& d, int M) {
    (void)d;
    GridField f = make_grid_field(M);
    const int N = s.modes();
    for (int j = 0; j < M; ++j) {
        double x = f.x(j);
        double sum = 0.0;
        for (int k = 1; k <= N; ++k)
            sum += s.gtilde[static_cast<std::size_t>(k - 1)] * kPi * k * basis_w(k, x);
        f[j] = sum;
    }
    return f;
}

double eval_xi(const GalerkinState& s, double x) {
    double sum = s.pi;
    const int N = s.modes();
    for (int k = 1; k <= N; ++k) sum += s.gtilde[static_cast<std::size_t>(k - 1)] * basis_s(k, x);
    return sum;
}

double eval_v(const GalerkinState& s, const ModelParams& p, double x) {
    double sum = boundary_rhs(s.pi, p) * (x - 0.5);
    const int N = s.modes();
    for (int k = 1; k <= N; ++k) sum += s.alpha[static_cast<std::size_t>(k - 1)] * basis_w(k, x);
    return sum;
}

GalerkinState initial_state(const InitialData& init, const Discretization& d) {
    ValidationReport rep = validate_initial_data(init, d.params);
    if (!rep.ok()) throw InvalidInitialData(rep.violations);

    const int N = d.N;
    GalerkinState s;
    s.alpha.assign(static_cast<std::size_t>(N), 0.0);
    s.gtilde.assign(static_cast<std::size_t>(N), 0.0);
    s.pi = 0.5 * (init.xi0[0] + init.xi0[init.xi0.size() - 1]);
    s.t = 0.0;

    GridField dev = make_grid_field(init.xi0.size());
    for (int j = 0; j < dev.size(); ++j) dev[j] = init.xi0[j] - s.pi;
    CoeffVector sc = sine_analyze(dev, N);
    for (int k = 1; k <= N; ++k) s.gtilde[static_cast<std::size_t>(k - 1)] = sc.c[static_cast<std::size_t>(k - 1)];

    // alpha_k = (v0 - (x - 1/2) pi_t(0), w_k); the affine part projects onto
    // the exact coefficients c_k.
    double pi_t0 = boundary_rhs(s.pi, d.params);
    CoeffVector cc = cosine_analyze(init.v0, N);
    for (int k = 1; k <= N; ++k)
        s.alpha[static_cast<std::size_t>(k - 1)] =
            cc.c[static_cast<std::size_t>(k)] - pi_t0 * d.ck[static_cast<std::size_t>(k - 1)];
    return s;
}

// ---------------------------------------------------------------------------
// Right-hand side
// ---------------------------------------------------------------------------

namespace {

struct RhsTerms {
    double pi_t;
    double pi_tt;
    double int_q;  // integral of (p - P)
};

// Shared core: writes the non-stiff part of dalpha into g, dgtilde, and the
// pressure integral. xi_q/q_q are caller-provided scratch.
RhsTerms rhs_core(const std::vector<double>& alpha, const std::vector<double>& gtilde,
                  double pi, double t, const Discretization& d, RhsMutation mutation,
                  std::vector<double>& xi_q, std::vector<double>& q_q,
                  std::vector<double>& g_out, std::vector<double>& dgtilde_out) {
    const ModelParams& p = d.params;
    const int N = d.N;
    const int MG = d.quad.size();
    xi_q.assign(static_cast<std::size_t>(MG), pi);
    for (int k = 1; k <= N; ++k) {
        double gk = gtilde[static_cast<std::size_t>(k - 1)];
        if (gk == 0.0) continue;
        const double* row = &d.sin_q[static_cast<std::size_t>(k - 1) * MG];
        for (int g = 0; g < MG; ++g) xi_q[static_cast<std::size_t>(g)] += gk * row[g];
    }

    double xi_min = xi_q[0];
    for (int g = 1; g < MG; ++g) xi_min = std::min(xi_min, xi_q[static_cast<std::size_t>(g)]);
    if (xi_min < p.xi_floor) throw VacuumApproach(xi_min, t);

    q_q.resize(static_cast<std::size_t>(MG));
    double int_q = 0.0;
    for (int g = 0; g < MG; ++g) {
        double q = p.a * pow_neg_gamma(xi_q[static_cast<std::size_t>(g)], p.gamma) - p.P;
        q_q[static_cast<std::size_t>(g)] = q * d.quad.w[static_cast<std::size_t>(g)];
        int_q += q_q[static_cast<std::size_t>(g)];
    }

    double pi_t = boundary_rhs(pi, p);
    double pi_tt = pi_second_derivative(pi, p);
    double pressure_sign = (mutation == RhsMutation::FlipPressureSign) ? -1.0 : 1.0;

    g_out.resize(static_cast<std::size_t>(N));
    dgtilde_out.resize(static_cast<std::size_t>(N));
    for (int k = 1; k <= N; ++k) {
        const double* row = &d.sin_q[static_cast<std::size_t>(k - 1) * MG];
        double sc = 0.0;  // (p - P, s_k), weights folded into q_q
        for (int g = 0; g < MG; ++g) sc += q_q[static_cast<std::size_t>(g)] * row[g];
        double b = -kPi * k * sc * pressure_sign;
        g_out[static_cast<std::size_t>(k - 1)] = -pi_tt * d.ck[static_cast<std::size_t>(k - 1)] + b;
        dgtilde_out[static_cast<std::size_t>(k - 1)] = -kPi * k * alpha[static_cast<std::size_t>(k - 1)];
    }
    return RhsTerms{pi_t, pi_tt, int_q};
}

double damping(const Discretization& d, RhsMutation mutation, int k) {
    if (mutation == RhsMutation::DisableTruncation)
        return d.params.mu * kPi * kPi * k * k;  // viscosity hits every mode
    return d.delta[static_cast<std::size_t>(k - 1)];
}

} // namespace

RhsResult assemble_rhs(const GalerkinState& s, const Discretization& d, RhsMutation mutation) {
    std::vector<double> xi_q, q_q, g, dg;
    RhsTerms terms = rhs_core(s.alpha, s.gtilde, s.pi, s.t, d, mutation, xi_q, q_q, g, dg);
    RhsResult r;
    r.dalpha.resize(static_cast<std::size_t>(d.N));
    for (int k = 1; k <= d.N; ++k)
        r.dalpha[static_cast<std::size_t>(k - 1)] =
            g[static_cast<std::size_t>(k - 1)] -
            damping(d, mutation, k) * s.alpha[static_cast<std::size_t>(k - 1)];
    r.dgtilde = std::move(dg);
    r.dpi = terms.pi_t;
    return r;
}

// ---------------------------------------------------------------------------
// Integrating-factor RK4 stepper
// ---------------------------------------------------------------------------

Stepper::Stepper(std::shared_ptr<const Discretization> disc, RhsMutation mutation)
    : disc_(std::move(disc)), mutation_(mutation) {}

Stepper::StageDeriv Stepper::eval(const std::vector<double>& alpha,
                                  const std::vector<double>& gtilde, double pi, double t) {
    const Discretization& d = *disc_;
    const ModelParams& p = d.params;
    StageDeriv out;
    RhsTerms terms = rhs_core(alpha, gtilde, pi, t, d, mutation_, xi_q_, q_q_, out.g, out.dgtilde);
    ++stats_.rhs_evals;

    double diss = 0.0, fnorm2 = 0.0, sum_dalpha_ck = 0.0;
    for (int k = 1; k <= d.N; ++k) {
        double a_k = alpha[static_cast<std::size_t>(k - 1)];
        double del = damping(d, mutation_, k);
        diss += del * a_k * a_k;
        if (k <= p.R) {
            double w = p.mu * kPi * kPi * k * k * a_k;
            fnorm2 += w * w;
        }
        double dalpha_full = out.g[static_cast<std::size_t>(k - 1)] - del * a_k;
        sum_dalpha_ck += dalpha_full * d.ck[static_cast<std::size_t>(k - 1)];
    }
    out.ddiss = diss;
    out.dchi = (5.0 / p.mu) * fnorm2 + 0.25 * terms.pi_t * terms.pi_t;
    // Exact boundary-affine source in the semi-discrete energy identity.
    out.drho = terms.pi_t * (terms.pi_tt / 12.0 + sum_dalpha_ck - terms.int_q);
    return out;
}

GalerkinState Stepper::lawson_rk4(const GalerkinState& s, double h,
                                  double pi_half, double pi_full, double t0) {
    const Discretization& d = *disc_;
    const int N = d.N;
    std::vector<double> E1(static_cast<std::size_t>(N)), Eh(static_cast<std::size_t>(N));
    for (int k = 1; k <= N; ++k) {
        double del = damping(d, mutation_, k);
        E1[static_cast<std::size_t>(k - 1)] = std::exp(-del * h);
        Eh[static_cast<std::size_t>(k - 1)] = std::exp(-0.5 * del * h);
    }

    StageDeriv s1 = eval(s.alpha, s.gtilde, s.pi, t0);

    std::vector<double> a2(static_cast<std::size_t>(N)), g2(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
        a2[static_cast<std::size_t>(i)] = Eh[static_cast<std::size_t>(i)] *
            (s.alpha[static_cast<std::size_t>(i)] + 0.5 * h * s1.g[static_cast<std::size_t>(i)]);
        g2[static_cast<std::size_t>(i)] = s.gtilde[static_cast<std::size_t>(i)] +
            0.5 * h * s1.dgtilde[static_cast<std::size_t>(i)];
    }
    StageDeriv s2 = eval(a2, g2, pi_half, t0 + 0.5 * h);

    std::vector<double> a3(static_cast<std::size_t>(N)), g3(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
        a3[static_cast<std::size_t>(i)] = Eh[static_cast<std::size_t>(i)] * s.alpha[static_cast<std::size_t>(i)] +
            0.5 * h * s2.g[static_cast<std::size_t>(i)];
        g3[static_cast<std::size_t>(i)] = s.gtilde[static_cast<std::size_t>(i)] +
            0.5 * h * s2.dgtilde[static_cast<std::size_t>(i)];
    }
    StageDeriv s3 = eval(a3, g3, pi_half, t0 + 0.5 * h);

    std::vector<double> a4(static_cast<std::size_t>(N)), g4(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
        a4[static_cast<std::size_t>(i)] = E1[static_cast<std::size_t>(i)] * s.alpha[static_cast<std::size_t>(i)] +
            h * Eh[static_cast<std::size_t>(i)] * s3.g[static_cast<std::size_t>(i)];
        g4[static_cast<std::size_t>(i)] = s.gtilde[static_cast<std::size_t>(i)] +
            h * s3.dgtilde[static_cast<std::size_t>(i)];
    }
    StageDeriv s4 = eval(a4, g4, pi_full, t0 + h);

    GalerkinState out = s;
    out.t = t0 + h;
    out.pi = pi_full;
    for (int i = 0; i < N; ++i) {
        out.alpha[static_cast<std::size_t>(i)] =
            E1[static_cast<std::size_t>(i)] * s.alpha[static_cast<std::size_t>(i)] +
            (h / 6.0) * (E1[static_cast<std::size_t>(i)] * s1.g[static_cast<std::size_t>(i)] +
                         2.0 * Eh[static_cast<std::size_t>(i)] *
                             (s2.g[static_cast<std::size_t>(i)] + s3.g[static_cast<std::size_t>(i)]) +
                         s4.g[static_cast<std::size_t>(i)]);
        out.gtilde[static_cast<std::size_t>(i)] = s.gtilde[static_cast<std::size_t>(i)] +
            (h / 6.0) * (s1.dgtilde[static_cast<std::size_t>(i)] +
                         2.0 * (s2.dgtilde[static_cast<std::size_t>(i)] + s3.dgtilde[static_cast<std::size_t>(i)]) +
                         s4.dgtilde[static_cast<std::size_t>(i)]);
    }
    out.diss_cum = s.diss_cum + (h / 6.0) * (s1.ddiss + 2.0 * (s2.ddiss + s3.ddiss) + s4.ddiss);
    out.chi_cum = s.chi_cum + (h / 6.0) * (s1.dchi + 2.0 * (s2.dchi + s3.dchi) + s4.dchi);
    out.rho_cum = s.rho_cum + (h / 6.0) * (s1.drho + 2.0 * (s2.drho + s3.drho) + s4.drho);
    return out;
}

GalerkinState Stepper::fixed_step(const GalerkinState& s, BoundaryPath& bp, double dt) {
    bp.advance_to(s.t + 0.5 * dt);
    double pi_half = bp.pi();
    bp.advance_to(s.t + dt);
    double pi_full = bp.pi();
    GalerkinState out = lawson_rk4(s, dt, pi_half, pi_full, s.t);
    ++stats_.accepted;
    stats_.last_dt = dt;
    return out;
}

GalerkinState Stepper::adaptive_step(const GalerkinState& s, BoundaryPath& bp, double dt_try,
                                     double tol, double& dt_taken, double& dt_next) {
    double h = dt_try;
    for (;;) {
        if (h < 1e-14 * std::max(1.0, std::abs(s.t)))
            throw StepSizeUnderflow("macro step collapsed at t=" + std::to_string(s.t));

        BoundaryPath saved = bp;
        bp.advance_to(s.t + 0.25 * h);
        double pi_q1 = bp.pi();
        bp.advance_to(s.t + 0.5 * h);
        double pi_half = bp.pi();
        bp.advance_to(s.t + 0.75 * h);
        double pi_q3 = bp.pi();
        bp.advance_to(s.t + h);
        double pi_full = bp.pi();

        GalerkinState full = lawson_rk4(s, h, pi_half, pi_full, s.t);
        GalerkinState h1 = lawson_rk4(s, 0.5 * h, pi_q1, pi_half, s.t);
        GalerkinState h2 = lawson_rk4(h1, 0.5 * h, pi_q3, pi_full, s.t + 0.5 * h);

        // Scaled RMS of the doubling defect; the pair differs by ~15x the
        // half-step local error for a 4th order core.
        double acc = 0.0;
        const int N = disc_->N;
        for (int i = 0; i < N; ++i) {
            double da = h2.alpha[static_cast<std::size_t>(i)] - full.alpha[static_cast<std::size_t>(i)];
            double sa = tol * (1.0 + std::max(std::abs(h2.alpha[static_cast<std::size_t>(i)]),
                                              std::abs(full.alpha[static_cast<std::size_t>(i)])));
            double dg = h2.gtilde[static_cast<std::size_t>(i)] - full.gtilde[static_cast<std::size_t>(i)];
            double sg = tol * (1.0 + std::max(std::abs(h2.gtilde[static_cast<std::size_t>(i)]),
                                              std::abs(full.gtilde[static_cast<std::size_t>(i)])));
            acc += (da / sa) * (da / sa) + (dg / sg) * (dg / sg);
        }
        double err = std::sqrt(acc / (2.0 * N)) / 15.0;

        if (err <= 1.0) {
            ++stats_.accepted;
            stats_.last_dt = h;
            dt_taken = h;
            double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.17) * std::pow(err_prev_, 0.04)
                                     : 5.0;
            err_prev_ = std::max(err, 1e-4);
            dt_next = h * std::clamp(fac, 0.2, 5.0);
            return h2;
        }

        ++stats_.rejected;
        bp = saved;  // rewind the boundary path with the rejected step
        double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
        h *= fac;
    }
}

} // namespace fbns
