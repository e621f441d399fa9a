#include "fbns/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fbns/boundary.hpp"
#include "fbns/errors.hpp"

namespace fbns {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Composite Simpson of q(x) s_k(x) over [0,1] with m (even) intervals,
// sharing precomputed q samples at x_j = j/m.
double simpson_sine(const std::vector<double>& q, int k) {
    const int m = static_cast<int>(q.size()) - 1;
    const double h = 1.0 / m;
    double sum = 0.0;
    for (int j = 0; j <= m; ++j) {
        const double w = (j == 0 || j == m) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        sum += w * q[static_cast<std::size_t>(j)] * std::sqrt(2.0) * std::sin(kPi * k * j * h);
    }
    return sum * h / 3.0;
}

std::vector<double> sample_pressure_gap(const GalerkinState& s, const ModelParams& p, int m) {
    std::vector<double> q(static_cast<std::size_t>(m) + 1);
    for (int j = 0; j <= m; ++j) {
        const double x = static_cast<double>(j) / m;
        const double xi = eval_xi(s, x);
        if (!(xi > p.xi_floor)) throw VacuumApproach(xi, s.t);
        q[static_cast<std::size_t>(j)] = p.a * std::pow(xi, -p.gamma) - p.P;
    }
    return q;
}

} // namespace

LinearizedPrediction linearized_prediction(int k, const ModelParams& p) {
    if (k < 1) throw std::invalid_argument("linearized_prediction: k must be >= 1");
    const double xs = stationary_xi(p);
    LinearizedPrediction out;
    out.k = k;
    out.omega = kPi * k * std::sqrt(p.a * p.gamma) * std::pow(xs, -(p.gamma + 1.0) / 2.0);
    out.delta = k > p.R ? p.mu * kPi * kPi * k * k : 0.0;
    return out;
}

DenseRhs dense_rhs(const GalerkinState& s, const Discretization& d, int refinement) {
    if (refinement < 4) throw std::invalid_argument("dense_rhs: refinement must be >= 4");
    const ModelParams& p = d.params;
    const int N = s.modes();

    DenseRhs out;
    out.dalpha.resize(static_cast<std::size_t>(N));
    out.dgtilde.resize(static_cast<std::size_t>(N));

    const double pi_t = (p.a * std::pow(s.pi, -p.gamma) - p.P) / p.mu;
    const double pi_tt = -p.gamma * p.a * std::pow(s.pi, -p.gamma - 1.0) * pi_t / p.mu;
    out.dpi = pi_t;

    // Simpson at m and 2m intervals, then one Richardson step per mode.
    const int m = 8 * refinement * std::max(N, 1);
    const std::vector<double> q_coarse = sample_pressure_gap(s, p, m);
    const std::vector<double> q_fine = sample_pressure_gap(s, p, 2 * m);

    for (int k = 1; k <= N; ++k) {
        const std::size_t i = static_cast<std::size_t>(k - 1);
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        const double c_k = std::sqrt(2.0) * (sgn - 1.0) / (kPi * kPi * k * k);
        const double s_coarse = simpson_sine(q_coarse, k);
        const double s_fine = simpson_sine(q_fine, k);
        const double proj = s_fine + (s_fine - s_coarse) / 15.0;
        const double damping = k > p.R ? p.mu * kPi * kPi * k * k : 0.0;
        out.dalpha[i] = -pi_tt * c_k - kPi * k * proj - damping * s.alpha[i];
        out.dgtilde[i] = -kPi * k * s.alpha[i];
    }
    return out;
}

double rhs_disagreement(const GalerkinState& s, const Discretization& d, int refinement) {
    const RhsResult fast = assemble_rhs(s, d);
    const DenseRhs ref = dense_rhs(s, d, refinement);
    double worst = std::abs(fast.dpi - ref.dpi);
    for (std::size_t i = 0; i < fast.dalpha.size(); ++i)
        worst = std::max(worst, std::abs(fast.dalpha[i] - ref.dalpha[i]));
    for (std::size_t i = 0; i < fast.dgtilde.size(); ++i)
        worst = std::max(worst, std::abs(fast.dgtilde[i] - ref.dgtilde[i]));
    return worst;
}

double state_distance(const GalerkinState& a, const GalerkinState& b,
                      const Discretization& d) {
    const ModelParams& p = d.params;
    const double dpi = a.pi - b.pi;
    const double dpt = boundary_rhs(a.pi, p) - boundary_rhs(b.pi, p);

    // v1 - v2 = dpt (x - 1/2) + sum dalpha_k w_k; expand the affine part in
    // the cosine basis and keep its tail beyond mode N in closed form.
    double w2 = 0.0, ck2 = 0.0;
    for (int k = 1; k <= d.N; ++k) {
        const std::size_t i = static_cast<std::size_t>(k - 1);
        const double c_k = d.ck[i];
        const double coeff = (a.alpha[i] - b.alpha[i]) + dpt * c_k;
        w2 += coeff * coeff;
        ck2 += c_k * c_k;
    }
    w2 += dpt * dpt * std::max(0.0, 1.0 / 12.0 - ck2);

    // xi1 - xi2 = dpi + sum dgtilde_k s_k; same treatment for the constant.
    double psi2 = 0.0, ik2 = 0.0;
    for (int k = 1; k <= d.N; ++k) {
        const std::size_t i = static_cast<std::size_t>(k - 1);
        const double I_k = d.Ik[i];
        const double coeff = (a.gtilde[i] - b.gtilde[i]) + dpi * I_k;
        psi2 += coeff * coeff;
        ik2 += I_k * I_k;
    }
    psi2 += dpi * dpi * std::max(0.0, 1.0 - ik2);

    return std::sqrt(w2 + psi2);
}

DivergenceHistory twin_run_divergence(const GalerkinState& a, const GalerkinState& b,
                                      std::shared_ptr<const Discretization> disc,
                                      double t_end, const RunOptions& base) {
    RunOptions opt = base;
    opt.t_end = t_end;
    const Trajectory ta = run_from_state(a, disc, opt);
    const Trajectory tb = run_from_state(b, disc, opt);
    return divergence_from(ta, tb, *disc);
}

DivergenceHistory divergence_from(const Trajectory& ta, const Trajectory& tb,
                                  const Discretization& disc_ref) {
    const ModelParams& p = disc_ref.params;
    const std::size_t n = std::min(ta.states.size(), tb.states.size());

    // Mean-value pressure weight W(x,t) = gamma a int_0^1 m_s^{-gamma-1} ds
    // with m_s the segment between the two xi fields, and the bound
    // |W_t| <= gamma(gamma+1) a int m_s^{-gamma-2} ds * max ||xi_t||_inf.
    std::vector<double> gl_x, gl_w;
    gauss_legendre(12, gl_x, gl_w);
    const int M = p.grid_size();

    DivergenceHistory out;
    out.times.reserve(n);
    out.distance.reserve(n);
    out.gronwall_k.reserve(n);

    double integral = 0.0;      // int_0^t phi / w_min
    double prev_ratio = 0.0;    // phi(t) / w_min(t) at the previous sample
    double prev_t = 0.0;
    double w_max0 = 1.0;
    double w_min_run = std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < n; ++i) {
        const GalerkinState& sa = ta.states[i];
        const GalerkinState& sb = tb.states[i];
        const double t = sa.t;

        const GridField xa = reconstruct_xi(sa, disc_ref, M);
        const GridField xb = reconstruct_xi(sb, disc_ref, M);
        const GridField va = reconstruct_v_x(sa, disc_ref, M);
        const GridField vb = reconstruct_v_x(sb, disc_ref, M);

        double w_min = std::numeric_limits<double>::infinity();
        double w_max = 0.0;
        double c_max = 0.0;
        double xit_sup = 0.0;
        for (int j = 0; j < M; ++j) {
            const std::size_t u = static_cast<std::size_t>(j);
            double W = 0.0, C = 0.0;
            for (std::size_t g = 0; g < gl_x.size(); ++g) {
                const double ms = gl_x[g] * xa.v[u] + (1.0 - gl_x[g]) * xb.v[u];
                if (!(ms > 0.0)) throw VacuumApproach(ms, t);
                W += gl_w[g] * std::pow(ms, -p.gamma - 1.0);
                C += gl_w[g] * std::pow(ms, -p.gamma - 2.0);
            }
            W *= p.gamma * p.a;
            C *= p.gamma * (p.gamma + 1.0) * p.a;
            w_min = std::min(w_min, W);
            w_max = std::max(w_max, W);
            c_max = std::max(c_max, C);
            xit_sup = std::max(xit_sup, std::max(std::abs(va.v[u]), std::abs(vb.v[u])));
        }
        if (i == 0) w_max0 = std::max(1.0, w_max);
        w_min_run = std::min(w_min_run, w_min);

        const double ratio = c_max * xit_sup / w_min;
        if (i > 0) integral += 0.5 * (ratio + prev_ratio) * (t - prev_t);
        prev_ratio = ratio;
        prev_t = t;

        const double k_t = std::sqrt(w_max0 / std::min(1.0, w_min_run)) *
                           std::exp(0.5 * integral);
        const double dist = state_distance(sa, sb, disc_ref);

        out.times.push_back(t);
        out.distance.push_back(dist);
        out.gronwall_k.push_back(i > 0 ? std::max(k_t, out.gronwall_k[i - 1]) : k_t);
        out.max_distance = std::max(out.max_distance, dist);
    }

    out.d0 = out.distance.empty() ? 0.0 : out.distance.front();
    out.k_final = out.gronwall_k.empty() ? 1.0 : out.gronwall_k.back();
    return out;
}

} // namespace fbns
