#include "doctest.h"

#include <cmath>
#include <random>

#include "fbns/spectral.hpp"

using namespace fbns;

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kSqrt2 = std::sqrt(2.0);

GridField sample(int M, double (*f)(double)) {
    GridField g = make_grid_field(M);
    for (int j = 0; j < M; ++j) g[j] = f(g.x(j));
    return g;
}

GridField sample_basis(int k, Basis b, int M) {
    GridField g = make_grid_field(M);
    for (int j = 0; j < M; ++j)
        g[j] = b == Basis::Cosine ? basis_w(k, g.x(j)) : basis_s(k, g.x(j));
    return g;
}

} // namespace

TEST_CASE("basis endpoint values are exact") {
    // sines vanish and cosines hit +-sqrt(2) without rounding at x = 0, 1
    for (int k = 1; k <= 7; ++k) {
        CHECK(basis_s(k, 0.0) == 0.0);
        CHECK(basis_s(k, 1.0) == 0.0);
        CHECK(basis_w(k, 0.0) == kSqrt2);
        CHECK(basis_w(k, 1.0) == (k % 2 ? -kSqrt2 : kSqrt2));
    }
    CHECK(basis_w(0, 0.37) == 1.0);
}

TEST_CASE("bases are orthonormal under grid quadrature") {
    const int N = 8, M = 4 * N + 1;
    for (int j = 0; j <= N; ++j) {
        const GridField wj = sample_basis(j, Basis::Cosine, M);
        for (int k = 0; k <= N; ++k) {
            const GridField wk = sample_basis(k, Basis::Cosine, M);
            const double expect = j == k ? 1.0 : 0.0;
            CHECK(std::abs(trapezoid_inner(wj, wk) - expect) <= 1e-10);
        }
    }
    for (int j = 1; j <= N; ++j) {
        const GridField sj = sample_basis(j, Basis::Sine, M);
        for (int k = 1; k <= N; ++k) {
            const GridField sk = sample_basis(k, Basis::Sine, M);
            const double expect = j == k ? 1.0 : 0.0;
            CHECK(std::abs(trapezoid_inner(sj, sk) - expect) <= 1e-10);
        }
    }
}

TEST_CASE("cosine derivatives are diagonal with weight pi^2 k^2") {
    // w_k' = -pi k s_k, so (w_j', w_k') = pi^2 j k (s_j, s_k)
    const int N = 6, M = 4 * N + 1;
    for (int j = 1; j <= N; ++j)
        for (int k = 1; k <= N; ++k) {
            GridField dj = sample_basis(j, Basis::Sine, M);
            GridField dk = sample_basis(k, Basis::Sine, M);
            for (int g = 0; g < M; ++g) {
                dj[g] *= -kPi * j;
                dk[g] *= -kPi * k;
            }
            const double expect = j == k ? kPi * kPi * j * k : 0.0;
            CHECK(std::abs(trapezoid_inner(dj, dk) - expect) <= 1e-8);
        }
}

TEST_CASE("cosine analysis recovers pure modes and constants") {
    const int N = 5, M = 33;
    const CoeffVector c = cosine_analyze(sample_basis(3, Basis::Cosine, M), N);
    for (int k = 0; k <= N; ++k)
        CHECK(std::abs(c.c[static_cast<std::size_t>(k)] - (k == 3 ? 1.0 : 0.0)) <= 1e-12);

    const CoeffVector u = cosine_analyze(make_grid_field(M, 2.5), N);
    CHECK(u.c[0] == doctest::Approx(2.5).epsilon(1e-14));
    for (int k = 1; k <= N; ++k) CHECK(std::abs(u.c[static_cast<std::size_t>(k)]) <= 1e-13);
}

TEST_CASE("cosine analysis of the ramp matches the closed form") {
    // (x, w_k) = sqrt(2)((-1)^k - 1)/(pi k)^2; the ramp is not a trig
    // polynomial, so the grid must be fine enough for the O(h^2) rule
    const int M = 4001;
    const CoeffVector c = cosine_analyze(sample(M, [](double x) { return x; }), 4);
    CHECK(c.c[1] == doctest::Approx(-2.0 * kSqrt2 / (kPi * kPi)).epsilon(1e-6));  // -0.286584
    CHECK(std::abs(c.c[2]) <= 1e-10);
    CHECK(c.c[3] == doctest::Approx(-2.0 * kSqrt2 / (9.0 * kPi * kPi)).epsilon(1e-5));
}

TEST_CASE("sine analysis recovers pure modes and known projections") {
    const int N = 5;
    const CoeffVector c = sine_analyze(sample_basis(2, Basis::Sine, 33), N);
    for (int k = 1; k <= N; ++k)
        CHECK(std::abs(c.c[static_cast<std::size_t>(k - 1)] - (k == 2 ? 1.0 : 0.0)) <= 1e-12);

    // (1, s_1) = 2 sqrt(2)/pi = 0.900316
    const CoeffVector u = sine_analyze(make_grid_field(4001, 1.0), N);
    CHECK(u.c[0] == doctest::Approx(2.0 * kSqrt2 / kPi).epsilon(1e-6));
    CHECK(std::abs(u.c[1]) <= 1e-12);  // even modes integrate to exact zeros

    // cross-family: (w_1, s_1) = 0, (w_1, s_2) = 8/(3 pi)
    const CoeffVector w = sine_analyze(sample_basis(1, Basis::Cosine, 4001), N);
    CHECK(std::abs(w.c[0]) <= 1e-12);
    CHECK(w.c[1] == doctest::Approx(8.0 / (3.0 * kPi)).epsilon(1e-6));
}

TEST_CASE("analyze inverts synthesize on finite series") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int N = 8, M = 65;

    CoeffVector c;
    c.basis = Basis::Cosine;
    c.c.resize(static_cast<std::size_t>(N) + 1);
    for (double& x : c.c) x = u(gen);
    const CoeffVector back = cosine_analyze(synthesize(c, M), N);
    for (std::size_t i = 0; i < c.c.size(); ++i)
        CHECK(std::abs(back.c[i] - c.c[i]) <= 1e-10);

    CoeffVector s;
    s.basis = Basis::Sine;
    s.c.resize(static_cast<std::size_t>(N));
    for (double& x : s.c) x = u(gen);
    const CoeffVector sback = sine_analyze(synthesize(s, M), N);
    for (std::size_t i = 0; i < s.c.size(); ++i)
        CHECK(std::abs(sback.c[i] - s.c[i]) <= 1e-10);

    CHECK(synthesize(CoeffVector{Basis::Cosine, {0.0, 0.0}}, 9).v ==
          std::vector<double>(9, 0.0));
    CHECK(synthesize(CoeffVector{Basis::Cosine, {0.0, 1.0}}, 9)[0] == kSqrt2);
}

TEST_CASE("Parseval ties coefficients to the grid norm") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CoeffVector c;
    c.basis = Basis::Sine;
    c.c.resize(8);
    for (double& x : c.c) x = u(gen);

    double sumsq = 0.0;
    for (double x : c.c) sumsq += x * x;
    const GridField f = synthesize(c, 65);
    CHECK(std::abs(trapezoid_inner(f, f) - sumsq) <= 1e-10);
}

TEST_CASE("mode truncation zeroes k <= R and is an orthogonal projector") {
    CoeffVector c;
    c.basis = Basis::Cosine;
    c.c = {1.0, 2.0, 3.0, 4.0, 5.0};  // k = 0..4

    const CoeffVector t = project_T(c, 2);
    CHECK(t.c == std::vector<double>{0.0, 0.0, 0.0, 4.0, 5.0});
    CHECK(project_T(c, 0).c == std::vector<double>{0.0, 2.0, 3.0, 4.0, 5.0});
    CHECK(project_T(t, 2).c == t.c);  // idempotent

    // (Tf, f) = (Tf, Tf) exactly in coefficient arithmetic
    double tf_f = 0.0, tf_tf = 0.0;
    for (std::size_t i = 0; i < c.c.size(); ++i) {
        tf_f += t.c[i] * c.c[i];
        tf_tf += t.c[i] * t.c[i];
    }
    CHECK(tf_f == tf_tf);

    CoeffVector s;
    s.basis = Basis::Sine;
    s.c = {1.0, 2.0, 3.0};  // k = 1..3
    CHECK(project_T(s, 2).c == std::vector<double>{0.0, 0.0, 3.0});
}

TEST_CASE("derivative inner products match brute-force integrals") {
    // b_k = (f, w_k') = -pi k (f, s_k)
    const int M = 4001;

    const std::vector<double> b1 = derivative_inner_products(make_grid_field(M, 1.0), 4);
    CHECK(b1[0] == doctest::Approx(-2.0 * kSqrt2).epsilon(1e-6));  // -2.828427
    CHECK(std::abs(b1[1]) <= 1e-12);
    CHECK(b1[2] == doctest::Approx(-2.0 * kSqrt2).epsilon(1e-5));

    GridField f = sample_basis(1, Basis::Sine, 65);
    for (int j = 0; j < 65; ++j) f[j] /= -kPi;
    const std::vector<double> b2 = derivative_inner_products(f, 4);
    CHECK(b2[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (int k = 2; k <= 4; ++k) CHECK(std::abs(b2[static_cast<std::size_t>(k - 1)]) <= 1e-12);
}

TEST_CASE("even-symmetric fields have vanishing even-k derivative products") {
    // w_2 is symmetric about x = 1/2; even sine modes are antisymmetric there,
    // so the even-k projections vanish while odd-k survive
    const std::vector<double> b = derivative_inner_products(
        sample_basis(2, Basis::Cosine, 4001), 4);
    CHECK(std::abs(b[1]) <= 1e-12);
    CHECK(std::abs(b[3]) <= 1e-12);
    CHECK(b[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-6));
    CHECK(b[2] == doctest::Approx(-36.0 / 5.0).epsilon(1e-6));
}

TEST_CASE("composite Gauss-Legendre integrates to machine precision") {
    const QuadRule q = QuadRule::composite_gauss(4, 12);
    double wsum = 0.0, poly = 0.0, expo = 0.0;
    for (int g = 0; g < q.size(); ++g) {
        wsum += q.w[static_cast<std::size_t>(g)];
        poly += q.w[static_cast<std::size_t>(g)] * std::pow(q.x[static_cast<std::size_t>(g)], 10);
        expo += q.w[static_cast<std::size_t>(g)] * std::exp(q.x[static_cast<std::size_t>(g)]);
    }
    CHECK(std::abs(wsum - 1.0) <= 1e-13);
    CHECK(poly == doctest::Approx(1.0 / 11.0).epsilon(1e-15));
    CHECK(expo == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("Gauss-Legendre nodes are symmetric with weight sum 2") {
    std::vector<double> x, w;
    gauss_legendre(12, x, w);
    REQUIRE(x.size() == 12);
    double wsum = 0.0;
    for (std::size_t i = 0; i < 12; ++i) {
        wsum += w[i];
        CHECK(x[i] == doctest::Approx(-x[11 - i]).epsilon(1e-15));
        CHECK(w[i] == doctest::Approx(w[11 - i]).epsilon(1e-15));
    }
    CHECK(std::abs(wsum - 2.0) <= 1e-13);
}
