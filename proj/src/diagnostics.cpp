#include "fbns/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

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

// xi sampled on the quadrature nodes.
std::vector<double> xi_at_quad(const GalerkinState& s, const Discretization& d) {
    const int MG = d.quad.size();
    std::vector<double> xi(static_cast<std::size_t>(MG), s.pi);
    for (int k = 1; k <= d.N; ++k) {
        double gk = s.gtilde[static_cast<std::size_t>(k - 1)];
        if (gk == 0.0) continue;
        for (int g = 0; g < MG; ++g) xi[static_cast<std::size_t>(g)] += gk * d.sq(k, g);
    }
    return xi;
}

// Exact coefficient sums shared by energy and eta.
struct QuadraticSums {
    double int_v2 = 0.0;    // integral of v^2
    double int_xix2 = 0.0;  // integral of xi_x^2
    double int_vxix = 0.0;  // integral of v xi_x
    double volume = 0.0;
};

QuadraticSums quadratic_sums(const GalerkinState& s, const Discretization& d) {
    double pi_t = boundary_rhs(s.pi, d.params);
    QuadraticSums q;
    double sum_a2 = 0.0, sum_ac = 0.0, sum_kg2 = 0.0, sum_akg = 0.0, sum_ckg = 0.0,
           sum_gI = 0.0;
    for (int k = 1; k <= d.N; ++k) {
        double a = s.alpha[static_cast<std::size_t>(k - 1)];
        double g = s.gtilde[static_cast<std::size_t>(k - 1)];
        double kg = kPi * k * g;
        sum_a2 += a * a;
        sum_ac += a * d.ck[static_cast<std::size_t>(k - 1)];
        sum_kg2 += kg * kg;
        sum_akg += a * kg;
        sum_ckg += d.ck[static_cast<std::size_t>(k - 1)] * kg;
        sum_gI += g * d.Ik[static_cast<std::size_t>(k - 1)];
    }
    q.int_v2 = pi_t * pi_t / 12.0 + sum_a2 + 2.0 * pi_t * sum_ac;
    q.int_xix2 = sum_kg2;
    q.int_vxix = sum_akg + pi_t * sum_ckg;
    q.volume = s.pi + sum_gI;
    return q;
}

double internal_energy(const GalerkinState& s, const Discretization& d) {
    const ModelParams& p = d.params;
    std::vector<double> xi = xi_at_quad(s, d);
    double acc = 0.0;
    // G(1/xi) = a xi^(1-gamma)/(gamma-1)
    for (int g = 0; g < d.quad.size(); ++g)
        acc += d.quad.w[static_cast<std::size_t>(g)] * xi[static_cast<std::size_t>(g)] *
               pow_neg_gamma(xi[static_cast<std::size_t>(g)], p.gamma);
    return p.a / (p.gamma - 1.0) * acc;
}

} // namespace

EnergyBreakdown energy(const GalerkinState& s, const Discretization& d) {
    QuadraticSums q = quadratic_sums(s, d);
    EnergyBreakdown e;
    e.kinetic = 0.5 * q.int_v2;
    e.internal = internal_energy(s, d);
    e.volume = q.volume;
    e.pv = d.params.P * q.volume;
    return e;
}

double dissipation_rate(const GalerkinState& s, const Discretization& d) {
    double acc = 0.0;
    for (int k = 1; k <= d.N; ++k) {
        double a = s.alpha[static_cast<std::size_t>(k - 1)];
        acc += d.delta[static_cast<std::size_t>(k - 1)] * a * a;
    }
    return acc;
}

GridField forcing_f(const GalerkinState& s, const Discretization& d, int M) {
    GridField f = make_grid_field(M);
    for (int j = 0; j < M; ++j) {
        double x = f.x(j);
        double sum = 0.0;
        for (int k = 1; k <= std::min(d.params.R, d.N); ++k)
            sum -= d.params.mu * kPi * kPi * k * k * s.alpha[static_cast<std::size_t>(k - 1)] *
                   basis_w(k, x);
        f[j] = sum;
    }
    return f;
}

double forcing_norm(const GalerkinState& s, const Discretization& d) {
    double acc = 0.0;
    for (int k = 1; k <= std::min(d.params.R, d.N); ++k) {
        double w = d.params.mu * kPi * kPi * k * k * s.alpha[static_cast<std::size_t>(k - 1)];
        acc += w * w;
    }
    return std::sqrt(acc);
}

double eta_functional(const GalerkinState& s, const Discretization& d) {
    const ModelParams& p = d.params;
    QuadraticSums q = quadratic_sums(s, d);
    double g_int = internal_energy(s, d);
    return 0.5 * p.mu * q.int_xix2 + (2.0 / p.mu) * q.int_v2 - q.int_vxix +
           (4.0 / p.mu) * (g_int + p.P * q.volume);
}

double chi_functional(const GalerkinState& s, const Discretization& d) {
    double f = forcing_norm(s, d);
    double pi_t = boundary_rhs(s.pi, d.params);
    return (5.0 / d.params.mu) * f * f + 0.25 * pi_t * pi_t;
}

double eta_lower_bound(const GalerkinState& s, const Discretization& d) {
    const ModelParams& p = d.params;
    QuadraticSums q = quadratic_sums(s, d);
    double g_int = internal_energy(s, d);
    return 0.25 * p.mu * q.int_xix2 + q.int_v2 / p.mu +
           (4.0 / p.mu) * (g_int + p.P * q.volume);
}

double pressure_h1_seminorm(const GalerkinState& s, const Discretization& d) {
    const ModelParams& p = d.params;
    const int MG = d.quad.size();
    std::vector<double> xi = xi_at_quad(s, d);
    double acc = 0.0;
    for (int g = 0; g < MG; ++g) {
        double xix = 0.0;
        for (int k = 1; k <= d.N; ++k)
            xix += s.gtilde[static_cast<std::size_t>(k - 1)] * kPi * k * d.wq(k, g);
        // d/dx (a xi^-gamma) = -gamma a xi^-(gamma+1) xi_x
        double xig = xi[static_cast<std::size_t>(g)];
        double dp = -p.gamma * p.a * pow_neg_gamma(xig, p.gamma) / xig * xix;
        acc += d.quad.w[static_cast<std::size_t>(g)] * dp * dp;
    }
    return std::sqrt(acc);
}

EulerianMap eulerian_map(const GalerkinState& s, const Discretization& d, int M) {
    (void)d;
    EulerianMap out;
    out.r = make_grid_field(M);
    const int N = s.modes();
    for (int j = 0; j < M; ++j) {
        double x = out.r.x(j);
        double sum = s.pi * x;
        for (int k = 1; k <= N; ++k) {
            double c = (j == M - 1) ? ((k % 2 == 0) ? 1.0 : -1.0) : std::cos(kPi * k * x);
            sum += s.gtilde[static_cast<std::size_t>(k - 1)] * kSqrt2 * (1.0 - c) / (kPi * k);
        }
        out.r[j] = sum;
    }
    for (int j = 1; j < M; ++j)
        if (!(out.r[j] > out.r[j - 1]))
            throw NonMonotoneMap("Eulerian map not strictly increasing near x=" +
                                 std::to_string(out.r.x(j)));
    out.S = out.r[M - 1];
    return out;
}

GridField flow_potential(const GalerkinState& s, const Discretization& d, int M) {
    GridField u = make_grid_field(M);
    double pi_t = boundary_rhs(s.pi, d.params);
    const int N = s.modes();
    for (int j = 0; j < M; ++j) {
        double x = u.x(j);
        double sum = 0.5 * pi_t * (x * x - x);  // exact zero at both endpoints
        if (j > 0 && j < M - 1)
            for (int k = 1; k <= N; ++k)
                sum += s.alpha[static_cast<std::size_t>(k - 1)] * basis_s(k, x) / (kPi * k);
        u[j] = sum;
    }
    return u;
}

namespace {

// Sup norm of the projection of xi_t onto cosine modes 0..R, from the exact
// cross inner products (s_k, w_j).
double smooth_xit_sup(const GalerkinState& s, const Discretization& d, int M) {
    const ModelParams& p = d.params;
    const int R = p.R;
    double pi_t = boundary_rhs(s.pi, p);
    std::vector<double> coeff(static_cast<std::size_t>(R) + 1, 0.0);
    for (int k = 1; k <= d.N; ++k) {
        double gdot = -kPi * k * s.alpha[static_cast<std::size_t>(k - 1)];  // xi_t sine coeffs
        if (gdot == 0.0) continue;
        coeff[0] += gdot * d.Ik[static_cast<std::size_t>(k - 1)];
        for (int j = 1; j <= R; ++j) {
            if ((k + j) % 2 == 0) continue;  // cross products vanish for equal parity
            coeff[static_cast<std::size_t>(j)] +=
                gdot * (4.0 / kPi) * k / (static_cast<double>(k) * k - static_cast<double>(j) * j);
        }
    }
    coeff[0] += pi_t;  // mean of xi_t
    double sup = 0.0;
    for (int j = 0; j < M; ++j) {
        double x = static_cast<double>(j) / (M - 1);
        double val = coeff[0];
        for (int jj = 1; jj <= R; ++jj) val += coeff[static_cast<std::size_t>(jj)] * basis_w(jj, x);
        sup = std::max(sup, std::abs(val));
    }
    return sup;
}

} // namespace

DiagnosticsRecord evaluate_diagnostics(const GalerkinState& s, const Discretization& d,
                                       double e0, double m_u_prev) {
    const ModelParams& p = d.params;
    DiagnosticsRecord r;
    r.t = s.t;

    EnergyBreakdown e = energy(s, d);
    r.kinetic = e.kinetic;
    r.internal = e.internal;
    r.pv = e.pv;
    r.total_energy = e.total();
    r.volume = e.volume;

    r.dissipation_rate = dissipation_rate(s, d);
    r.dissipation_cum = s.diss_cum;
    r.energy_residual = r.total_energy + s.diss_cum - e0;
    r.energy_residual_corrected = r.energy_residual - s.rho_cum;
    r.chi_cum = s.chi_cum;
    r.rho_cum = s.rho_cum;

    r.eta = eta_functional(s, d);
    r.chi = chi_functional(s, d);

    r.pi = s.pi;
    r.pi_t = boundary_rhs(s.pi, p);
    r.f_norm = forcing_norm(s, d);

    const int M = d.M;
    GridField xi = reconstruct_xi(s, d, M);
    r.xi_min = xi[0];
    r.xi_max = xi[0];
    for (int j = 0; j < M; ++j) {
        r.xi_min = std::min(r.xi_min, xi[j]);
        r.xi_max = std::max(r.xi_max, xi[j]);
    }
    r.endpoint_gap = std::abs(xi[0] - s.pi) + std::abs(xi[M - 1] - s.pi);

    GridField v = reconstruct_v(s, d, M);
    r.mean_v_residual = std::abs(trapezoid(v));

    GridField u = flow_potential(s, d, M);
    for (int j = 0; j < M; ++j) r.u_sup = std::max(r.u_sup, std::abs(u[j]));
    r.M_U = std::max(m_u_prev, r.u_sup);

    EulerianMap em = eulerian_map(s, d, M);
    r.S = em.S;

    r.smooth_xit_sup = smooth_xit_sup(s, d, M);

    // Right-hand side whose running sup is the constant in the decaying
    // second-order bound; Poincare constant 1/pi^2 on mean-zero functions.
    QuadraticSums q = quadratic_sums(s, d);
    r.gronwall_rhs = (1.0 / p.mu + 1.0) * r.f_norm * r.f_norm + 0.25 * r.pi_t * r.pi_t +
                     (2.0 * kPi * kPi - 4.0 / p.mu) * q.int_v2 +
                     (4.0 / p.mu) * (r.internal + p.P * r.volume);
    return r;
}

GronwallReport gronwall_monitor(const std::vector<DiagnosticsRecord>& recs,
                                const ModelParams& p, double rel_slack) {
    GronwallReport rep;
    if (recs.empty()) return rep;
    const double eta0 = recs.front().eta;

    rep.local_min_margin = std::numeric_limits<double>::infinity();
    double xi_plus = 0.0, m_bound = -std::numeric_limits<double>::infinity();
    for (const auto& r : recs) {
        double bound = std::exp(r.t) * (eta0 + r.chi_cum);
        double margin = bound * (1.0 + rel_slack) + 1e-12 * (1.0 + std::abs(eta0)) - r.eta;
        rep.local_min_margin = std::min(rep.local_min_margin, margin);
        if (margin < 0.0) rep.local_ok = false;
        xi_plus = std::max(xi_plus, r.xi_max);
        m_bound = std::max(m_bound, r.gronwall_rhs);
    }

    rep.mu_threshold = p.a * p.gamma * std::pow(xi_plus, -(p.gamma + 1.0));
    rep.global_applicable = p.mu <= rep.mu_threshold;
    rep.M_bound = m_bound;
    if (rep.global_applicable) {
        rep.global_min_margin = std::numeric_limits<double>::infinity();
        for (const auto& r : recs) {
            double bound = eta0 * std::exp(-r.t) + m_bound * (1.0 + std::exp(-r.t));
            double margin = bound * (1.0 + rel_slack) + 1e-12 * (1.0 + std::abs(eta0)) - r.eta;
            rep.global_min_margin = std::min(rep.global_min_margin, margin);
            if (margin < 0.0) rep.global_ok = false;
        }
    }
    return rep;
}

XiBoundReport xi_bound_monitor(const std::vector<DiagnosticsRecord>& recs,
                               const ModelParams& p, double sup0) {
    XiBoundReport rep;
    if (recs.empty()) return rep;
    rep.xi_threshold = std::pow(4.0 * p.a / p.P, 1.0 / p.gamma);
    rep.sup0 = sup0;
    rep.m_u = recs.back().M_U;

    double worst_xit = 0.0;
    for (const auto& r : recs) worst_xit = std::max(worst_xit, r.smooth_xit_sup);
    rep.hypothesis_margin = p.P / (2.0 * p.mu) - worst_xit;
    rep.hypothesis_met = rep.hypothesis_margin >= 0.0;

    rep.t_min = (4.0 * p.mu / p.P) * (sup0 - rep.xi_threshold + rep.m_u / p.mu);
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (const auto& r : recs) {
        double decaying = sup0 + rep.m_u / p.mu - r.t * p.P / (4.0 * p.mu);
        double bound = std::max(rep.xi_threshold, decaying);
        double margin = bound * (1.0 + 1e-9) + 1e-12 - r.xi_max;
        rep.min_margin = std::min(rep.min_margin, margin);
        if (margin < 0.0) rep.bound_ok = false;
    }
    return rep;
}

} // namespace fbns
