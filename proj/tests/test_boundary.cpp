#include "doctest.h"

#include <cmath>

#include "fbns/boundary.hpp"
#include "fbns/errors.hpp"

using namespace fbns;

TEST_CASE("boundary rhs is the scaled pressure imbalance") {
    ModelParams p;  // a = P = 1, gamma = 5, mu = 0.1
    CHECK(boundary_rhs(stationary_xi(p), p) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(boundary_rhs(2.0, p) == doctest::Approx(-9.6875).epsilon(1e-14));
    CHECK(boundary_rhs(0.9, p) > 0.0);   // below equilibrium, expanding
    CHECK(boundary_rhs(1.1, p) < 0.0);
}

TEST_CASE("boundary rhs rejects near-vacuum volumes") {
    ModelParams p;
    CHECK_THROWS_AS(boundary_rhs(p.xi_floor / 2.0, p), VacuumApproach);
    CHECK_THROWS_AS(pi_second_derivative(p.xi_floor / 2.0, p), VacuumApproach);
    // just above the floor the singularity drives hard expansion
    const double near = boundary_rhs(2.0 * p.xi_floor, p);
    CHECK(std::isfinite(near));
    CHECK(near > 1e10);
}

TEST_CASE("second derivative follows the chain rule") {
    ModelParams p;
    p.gamma = 2.0;
    p.mu = 1.0;
    // pi_t(2) = 1/4 - 1 = -0.75, pi_tt = -2 * 2^-3 * (-0.75) = 0.1875
    CHECK(pi_second_derivative(2.0, p) == doctest::Approx(0.1875).epsilon(1e-14));
    CHECK(pi_second_derivative(stationary_xi(p), p) == doctest::Approx(0.0).epsilon(1e-15));

    // the approach to equilibrium decelerates: pi_tt opposes pi_t
    ModelParams q;
    for (double pi : {0.5, 0.8, 1.3, 2.0, 4.0}) {
        const double pt = boundary_rhs(pi, q);
        const double ptt = pi_second_derivative(pi, q);
        CHECK(pt * ptt < 0.0);
    }
}

TEST_CASE("bracket is the interval between start and equilibrium") {
    ModelParams p;
    const double xs = stationary_xi(p);
    CHECK(pi_bounds(xs, p) == std::pair<double, double>{xs, xs});
    CHECK(pi_bounds(0.5, p) == std::pair<double, double>{0.5, 1.0});
    CHECK(pi_bounds(3.0, p) == std::pair<double, double>{1.0, 3.0});
}

TEST_CASE("advance_pi holds the stationary point and relaxes from above") {
    ModelParams p;
    BoundaryState s{stationary_xi(p), 0.0};
    const BoundaryState s1 = advance_pi(s, 1.0, p);
    CHECK(s1.pi == doctest::Approx(stationary_xi(p)).epsilon(1e-14));
    CHECK(s1.t == doctest::Approx(1.0));

    BoundaryState r{2.0, 0.0};
    r = advance_pi(r, 50.0, p);
    CHECK(std::abs(r.pi - 1.0) <= 1e-6);
}

TEST_CASE("relaxation is monotone with a shrinking equilibrium gap") {
    ModelParams p;
    const double xs = stationary_xi(p);
    for (double pi0 : {0.4, 2.5}) {
        BoundaryPath path(pi0, p);
        double prev = pi0;
        double prev_gap = std::abs(pi0 - xs);
        for (int i = 1; i <= 40; ++i) {
            path.advance_to(0.05 * i);
            const double cur = path.pi();
            if (pi0 < xs)
                CHECK(cur >= prev - 1e-14);
            else
                CHECK(cur <= prev + 1e-14);
            const double gap = std::abs(cur - xs);
            CHECK(gap <= prev_gap + 1e-14);
            prev = cur;
            prev_gap = gap;
        }
    }
}

TEST_CASE("path never leaves its bracket") {
    ModelParams p;
    p.mu = 0.02;  // fast relaxation
    BoundaryPath path(3.0, p);
    const auto [lo, hi] = path.bracket();
    CHECK(lo == 1.0);
    CHECK(hi == 3.0);
    for (int i = 1; i <= 200; ++i) {
        path.advance_to(0.01 * i);
        CHECK(path.pi() >= lo - p.tol_ode);
        CHECK(path.pi() <= hi + p.tol_ode);
    }
    CHECK(path.substeps() > 0);
}

TEST_CASE("stiffer boundary dynamics take more substeps") {
    ModelParams slow;
    slow.mu = 0.1;
    ModelParams fast = slow;
    fast.mu = 1e-3;  // relaxation rate scales as 1/mu

    BoundaryPath a(2.0, slow), b(2.0, fast);
    a.advance_to(1.0);
    b.advance_to(1.0);
    CHECK(b.substeps() > a.substeps());
    // both still land inside the bracket
    CHECK(b.pi() >= 1.0 - fast.tol_ode);
    CHECK(b.pi() <= 2.0 + fast.tol_ode);
}

TEST_CASE("advance_to is monotone and ignores earlier targets") {
    ModelParams p;
    BoundaryPath path(2.0, p);
    path.advance_to(0.5);
    const double pi_half = path.pi();
    path.advance_to(0.2);  // no-op
    CHECK(path.t() == doctest::Approx(0.5));
    CHECK(path.pi() == pi_half);
    path.advance_to(1.0);
    CHECK(path.t() == doctest::Approx(1.0));
}
