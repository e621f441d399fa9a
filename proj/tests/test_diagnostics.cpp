#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>

#include "fbns/config.hpp"
#include "fbns/diagnostics.hpp"
#include "fbns/errors.hpp"
#include "fbns/simulate.hpp"

using namespace fbns;

namespace {

constexpr double kPi = 3.14159265358979323846;

GalerkinState zero_state(int N, double pi) {
    GalerkinState s;
    s.alpha.assign(static_cast<std::size_t>(N), 0.0);
    s.gtilde.assign(static_cast<std::size_t>(N), 0.0);
    s.pi = pi;
    return s;
}

GalerkinState random_state(const ModelParams& p, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> d(0.0, 0.02);
    GalerkinState s = zero_state(p.N, 1.0);
    for (double& a : s.alpha) a = d(gen);
    for (double& g : s.gtilde) g = d(gen);
    return s;
}

} // namespace

TEST_CASE("stationary energy has its closed form") {
    ModelParams p;
    p.gamma = 2.0;  // xi* = 1, G(1) = a/(gamma-1) = 1
    const Discretization d(p);
    const EnergyBreakdown e = energy(zero_state(p.N, 1.0), d);
    CHECK(e.kinetic == 0.0);
    CHECK(e.internal == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(e.pv == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.total() == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(e.volume == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("kinetic energy is the coefficient half-sum at rest boundary") {
    ModelParams p;
    const Discretization d(p);
    GalerkinState s = zero_state(p.N, stationary_xi(p));  // pi_t = 0
    s.alpha[0] = 0.3;
    const EnergyBreakdown e = energy(s, d);
    CHECK(e.kinetic == doctest::Approx(0.5 * 0.3 * 0.3).epsilon(1e-14));
}

TEST_CASE("closed-form volume agrees with grid quadrature") {
    ModelParams p;
    const Discretization d(p);
    const GalerkinState s = random_state(p, 23);
    const EnergyBreakdown e = energy(s, d);
    // trapezoid on the sine tail is O(h^2), so corroborate on a fine grid
    const GridField xi = reconstruct_xi(s, d, 4001);
    CHECK(std::abs(e.volume - trapezoid(xi)) <= 1e-6);
}

TEST_CASE("dissipation sees only modes above the cutoff") {
    ModelParams p;  // R = 2, mu = 0.1
    const Discretization d(p);

    GalerkinState low = zero_state(p.N, 1.0);
    low.alpha[0] = 0.5;
    low.alpha[1] = -0.2;
    CHECK(dissipation_rate(low, d) == 0.0);

    GalerkinState high = zero_state(p.N, 1.0);
    high.alpha[2] = 0.1;  // k = 3
    CHECK(dissipation_rate(high, d) ==
          doctest::Approx(0.1 * kPi * kPi * 9.0 * 0.01).epsilon(1e-14));

    // Parseval cross-check: mu * |T v_x|^2 by grid quadrature
    const GalerkinState s = random_state(p, 29);
    double coeff = 0.0;
    for (int k = p.R + 1; k <= p.N; ++k) {
        const double c = kPi * k * s.alpha[static_cast<std::size_t>(k - 1)];
        coeff += c * c;
    }
    CoeffVector tvx;
    tvx.basis = Basis::Sine;
    tvx.c.assign(static_cast<std::size_t>(p.N), 0.0);
    for (int k = p.R + 1; k <= p.N; ++k)
        tvx.c[static_cast<std::size_t>(k - 1)] = -kPi * k * s.alpha[static_cast<std::size_t>(k - 1)];
    const GridField g = synthesize(tvx, p.grid_size());
    CHECK(std::abs(p.mu * trapezoid_inner(g, g) - dissipation_rate(s, d)) <= 1e-8);
    CHECK(std::abs(p.mu * coeff - dissipation_rate(s, d)) <= 1e-14);
}

TEST_CASE("viscous remainder acts only on retained low modes") {
    ModelParams p;
    p.R = 0;
    const Discretization d0(p);
    GalerkinState s = random_state(p, 31);
    const GridField f = forcing_f(s, d0, p.grid_size());
    for (int j = 0; j < f.size(); ++j) CHECK(f[j] == 0.0);
    CHECK(forcing_norm(s, d0) == 0.0);

    ModelParams q;
    q.mu = 1.0;  // R = 2
    const Discretization d(q);
    GalerkinState u = zero_state(q.N, 1.0);
    u.alpha[0] = 1.0;
    CHECK(forcing_norm(u, d) == doctest::Approx(kPi * kPi).epsilon(1e-14));
    const GridField fu = forcing_f(u, d, q.grid_size());
    CHECK(std::abs(std::sqrt(trapezoid_inner(fu, fu)) - kPi * kPi) <= 1e-8);
}

TEST_CASE("weighted functional matches its stationary closed form") {
    ModelParams p;  // gamma = 5, mu = 0.1, xi* = 1, G(1) = 1/4
    const Discretization d(p);
    const double eta = eta_functional(zero_state(p.N, 1.0), d);
    CHECK(eta == doctest::Approx((4.0 / p.mu) * (0.25 + 1.0)).epsilon(1e-13));

    for (unsigned seed : {41u, 43u, 47u}) {
        const GalerkinState s = random_state(p, seed);
        const double e = eta_functional(s, d);
        const double lo = eta_lower_bound(s, d);
        CHECK(lo >= 0.0);
        CHECK(e >= lo - 1e-12 * std::abs(e));
    }
}

TEST_CASE("forcing functional combines remainder norm and boundary speed") {
    ModelParams p;
    const Discretization d(p);
    GalerkinState s = zero_state(p.N, 2.0);
    s.alpha[0] = 0.1;
    const double fn = p.mu * kPi * kPi * 0.1;
    const double pt = boundary_rhs(2.0, p);
    CHECK(chi_functional(s, d) ==
          doctest::Approx((5.0 / p.mu) * fn * fn + 0.25 * pt * pt).epsilon(1e-12));
}

TEST_CASE("pressure seminorm vanishes at rest and scales in a") {
    ModelParams p;
    p.gamma = 2.0;
    const Discretization d(p);
    CHECK(pressure_h1_seminorm(zero_state(p.N, 1.0), d) == 0.0);

    GalerkinState s = zero_state(p.N, 1.0);
    s.gtilde[0] = 0.1;

    // refinement invariance of the quadrature result
    ModelParams fine = p;
    fine.M = 10 * p.grid_size();
    const Discretization dfine(fine);
    const double coarse_val = pressure_h1_seminorm(s, d);
    CHECK(std::abs(coarse_val - pressure_h1_seminorm(s, dfine)) <= 1e-8);

    ModelParams doubled = p;
    doubled.a = 2.0;
    const Discretization d2(doubled);
    CHECK(pressure_h1_seminorm(s, d2) == doctest::Approx(2.0 * coarse_val).epsilon(1e-12));
}

TEST_CASE("the Eulerian map is the exact volume antiderivative") {
    ModelParams p;
    const Discretization d(p);

    EulerianMap m = eulerian_map(zero_state(p.N, 1.0), d, p.grid_size());
    for (int j = 0; j < m.r.size(); ++j)
        CHECK(m.r[j] == doctest::Approx(m.r.x(j)).epsilon(1e-15));
    CHECK(m.S == doctest::Approx(1.0).epsilon(1e-15));

    m = eulerian_map(zero_state(p.N, 2.5), d, p.grid_size());
    CHECK(m.S == doctest::Approx(2.5).epsilon(1e-15));

    const GalerkinState s = random_state(p, 53);
    m = eulerian_map(s, d, p.grid_size());
    for (int j = 1; j < m.r.size(); ++j) CHECK(m.r[j] > m.r[j - 1]);
    CHECK(std::abs(m.S - energy(s, d).volume) <= 1e-12);

    GalerkinState bad = zero_state(p.N, 1.0);
    bad.gtilde[0] = -0.75;  // xi dips below zero mid-interval
    CHECK_THROWS_AS(eulerian_map(bad, d, p.grid_size()), NonMonotoneMap);
}

TEST_CASE("the flow potential closes at both ends") {
    ModelParams p;
    const Discretization d(p);
    const GalerkinState s = random_state(p, 59);
    const GridField u = flow_potential(s, d, p.grid_size());
    CHECK(std::abs(u[0]) <= 1e-15);
    CHECK(std::abs(u[u.size() - 1]) <= 1e-12);  // integral of a mean-zero field
}

TEST_CASE("diagnostic records are internally consistent") {
    ModelParams p;
    const Discretization d(p);
    const GalerkinState s = random_state(p, 61);
    const double e0 = energy(s, d).total();
    const DiagnosticsRecord r = evaluate_diagnostics(s, d, e0, 0.0);

    CHECK(r.total_energy == doctest::Approx(r.kinetic + r.internal + r.pv).epsilon(1e-14));
    CHECK(r.energy_residual == doctest::Approx(0.0).epsilon(1e-14));  // diss_cum = 0 here
    CHECK(r.S == doctest::Approx(r.volume).epsilon(1e-12));
    CHECK(r.endpoint_gap == 0.0);
    CHECK(std::abs(r.mean_v_residual) <= 1e-12);
    CHECK(r.xi_min <= r.xi_max);
    CHECK(r.M_U >= r.u_sup);
    CHECK(r.dissipation_rate >= 0.0);
}

TEST_CASE("trajectory monitors hold on a resting run") {
    ModelParams p;
    auto disc = std::make_shared<const Discretization>(p);
    InitialSpec spec;  // stationary preset
    RunOptions opt;
    opt.t_end = 1.0;
    opt.output_dt = 0.1;
    const Trajectory traj = run(build_initial(spec, p), disc, opt);

    const GronwallReport g = gronwall_monitor(traj.records, p, 1e-6);
    CHECK(g.local_ok);
    CHECK(g.local_min_margin >= 0.0);
    CHECK(g.mu_threshold == doctest::Approx(5.0).epsilon(1e-12));  // a gamma / xi+^6 at xi+ = 1
    CHECK(g.global_applicable);  // mu = 0.1 is below the threshold
    CHECK(g.global_ok);

    const XiBoundReport x = xi_bound_monitor(traj.records, p, traj.sup0);
    CHECK(x.hypothesis_met);
    CHECK(x.bound_ok);
    CHECK(x.xi_threshold == doctest::Approx(std::pow(4.0, 0.2)).epsilon(1e-12));
    for (const DiagnosticsRecord& r : traj.records) {
        CHECK(r.xi_min == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(r.xi_max == doctest::Approx(1.0).epsilon(1e-13));
    }
}
