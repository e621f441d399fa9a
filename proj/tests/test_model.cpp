#include "doctest.h"

#include <cmath>

#include "fbns/boundary.hpp"
#include "fbns/errors.hpp"
#include "fbns/model.hpp"

using namespace fbns;

TEST_CASE("pressure law evaluates a xi^-gamma") {
    ModelParams p;  // a = 1, gamma = 5
    CHECK(pressure(2.0, p) == doctest::Approx(1.0 / 32.0).epsilon(1e-15));
    CHECK(pressure(1.0, p) == doctest::Approx(1.0));

    p.a = 3.0;
    p.gamma = 2.0;
    CHECK(pressure(0.5, p) == doctest::Approx(12.0));
}

TEST_CASE("pressure is strictly decreasing in xi") {
    ModelParams p;
    double prev = pressure(0.1, p);
    for (double xi = 0.2; xi <= 10.0; xi += 0.1) {
        const double cur = pressure(xi, p);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("G matches its defining relation G'(s) s^2 = p(s)") {
    ModelParams p;
    p.a = 3.0;
    p.gamma = 4.0;
    CHECK(big_G(2.0, p) == doctest::Approx(8.0).epsilon(1e-15));  // 3*2^3/3

    // central difference of G against the pressure at density s = 1/xi
    const double h = 1e-6;
    for (double s : {0.1, 0.5, 1.0, 2.0, 10.0}) {
        const double dG = (big_G(s + h, p) - big_G(s - h, p)) / (2.0 * h);
        const double ps = pressure(1.0 / s, p);
        CHECK(std::abs(dG * s * s - ps) <= 1e-6 * ps);
    }
}

TEST_CASE("stationary xi is the pressure-balance volume (a/P)^(1/gamma)") {
    ModelParams p;
    CHECK(stationary_xi(p) == 1.0);  // a = P = 1

    p.a = 2.0;
    CHECK(stationary_xi(p) == doctest::Approx(1.148698355).epsilon(1e-9));

    ModelParams q;
    q.a = 1.0;
    q.P = 4.0;
    q.gamma = 2.0;
    CHECK(stationary_xi(q) == doctest::Approx(0.5).epsilon(1e-15));

    // pressure at the stationary volume balances the piston exactly
    CHECK(pressure(stationary_xi(p), p) == doctest::Approx(p.P).epsilon(1e-14));
}

TEST_CASE("pressure rejects volumes below the vacuum floor") {
    ModelParams p;
    CHECK_THROWS_AS(pressure(p.xi_floor / 2.0, p), VacuumApproach);
    CHECK(std::isfinite(pressure(p.xi_floor, p)));
}

TEST_CASE("stationary xi agrees with the long-time boundary ODE limit") {
    ModelParams p;
    p.a = 2.0;
    const double xs = stationary_xi(p);
    BoundaryPath path(1.0, p);
    path.advance_to(40.0);
    CHECK(std::abs(path.pi() - xs) <= 1e-8);
}

TEST_CASE("parameter validation names the violated assumption") {
    ModelParams p;
    CHECK_NOTHROW(p.validate());

    auto expect_a1 = [](ModelParams bad) {
        try {
            bad.validate();
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("A1") != std::string::npos);
        }
    };
    ModelParams bad = p;
    bad.a = 0.0;
    expect_a1(bad);
    bad = p;
    bad.P = -1.0;
    expect_a1(bad);
    bad = p;
    bad.gamma = 1.0;
    expect_a1(bad);
    bad = p;
    bad.mu = 0.0;
    expect_a1(bad);

    bad = p;
    bad.R = bad.N;  // no damped modes would remain
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = p;
    bad.M = 2 * bad.N;  // below the 2N+1 resolution floor
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = p;
    bad.xi_floor = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

namespace {

InitialData uniform_data(int M, double v, double xi) {
    InitialData init;
    init.v0 = make_grid_field(M, v);
    init.xi0 = make_grid_field(M, xi);
    return init;
}

} // namespace

TEST_CASE("initial data checks accept stationary-compatible fields") {
    ModelParams p;
    const int M = p.grid_size();
    CHECK(validate_initial_data(uniform_data(M, 0.0, 1.0), p).ok());

    // mean-zero cosine velocity passes
    InitialData init = uniform_data(M, 0.0, 1.0);
    for (int j = 0; j < M; ++j)
        init.v0[j] = std::cos(3.14159265358979323846 * init.v0.x(j));
    CHECK(validate_initial_data(init, p).ok());
}

TEST_CASE("initial data checks reject structural violations") {
    ModelParams p;
    const int M = p.grid_size();

    ValidationReport rep = validate_initial_data(uniform_data(M, 1.0, 1.0), p);
    REQUIRE(!rep.ok());
    CHECK(rep.violations[0].find("A2") != std::string::npos);
    CHECK(rep.violations[0].find("mean") != std::string::npos);

    InitialData init = uniform_data(M, 0.0, 1.0);
    init.xi0[0] = 2.0;  // unequal endpoints
    rep = validate_initial_data(init, p);
    REQUIRE(!rep.ok());
    CHECK(rep.violations[0].find("endpoint") != std::string::npos);

    rep = validate_initial_data(uniform_data(M, 0.0, -1.0), p);
    CHECK(!rep.ok());
}

TEST_CASE("unit total mass is a warning, not a violation") {
    ModelParams p;
    const int M = p.grid_size();
    // xi0 = 2 means total mass 1/2, structurally fine but flagged
    const ValidationReport rep = validate_initial_data(uniform_data(M, 0.0, 2.0), p);
    CHECK(rep.ok());
    REQUIRE(!rep.warnings.empty());
    CHECK(rep.warnings[0].find("mass") != std::string::npos);
}
