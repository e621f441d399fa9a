#include "fbns/spectral.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace fbns {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kSqrt2 = 1.41421356237309504880168872420969808;
} // namespace

GridField make_grid_field(int M, double fill) {
    if (M < 2) throw std::invalid_argument("grid needs at least 2 points");
    GridField f;
    f.v.assign(static_cast<std::size_t>(M), fill);
    return f;
}

double basis_w(int k, double x) {
    if (k == 0) return 1.0;
    if (x == 0.0) return kSqrt2;
    if (x == 1.0) return (k % 2 == 0) ? kSqrt2 : -kSqrt2;
    return kSqrt2 * std::cos(kPi * k * x);
}

double basis_s(int k, double x) {
    if (x == 0.0 || x == 1.0) return 0.0;  // exact endpoint zeros
    return kSqrt2 * std::sin(kPi * k * x);
}

double trapezoid(const GridField& f) {
    const int M = f.size();
    const double h = 1.0 / (M - 1);
    double sum = 0.5 * (f[0] + f[M - 1]);
    for (int j = 1; j < M - 1; ++j) sum += f[j];
    return sum * h;
}

double trapezoid_inner(const GridField& f, const GridField& g) {
    assert(f.size() == g.size());
    const int M = f.size();
    const double h = 1.0 / (M - 1);
    double sum = 0.5 * (f[0] * g[0] + f[M - 1] * g[M - 1]);
    for (int j = 1; j < M - 1; ++j) sum += f[j] * g[j];
    return sum * h;
}

namespace {

void require_resolvable(int M, int N) {
    if (M < 2 * N + 1)
        throw std::invalid_argument("grid too coarse for requested mode count (M < 2N+1)");
}

} // namespace

CoeffVector cosine_analyze(const GridField& f, int N) {
    const int M = f.size();
    require_resolvable(M, N);
    const double h = 1.0 / (M - 1);
    CoeffVector out;
    out.basis = Basis::Cosine;
    out.c.assign(static_cast<std::size_t>(N) + 1, 0.0);
    for (int k = 0; k <= N; ++k) {
        double sum = 0.5 * (f[0] * basis_w(k, 0.0) + f[M - 1] * basis_w(k, 1.0));
        for (int j = 1; j < M - 1; ++j) sum += f[j] * basis_w(k, f.x(j));
        out.c[static_cast<std::size_t>(k)] = sum * h;
    }
    return out;
}

CoeffVector sine_analyze(const GridField& f, int N) {
    const int M = f.size();
    require_resolvable(M, N);
    const double h = 1.0 / (M - 1);
    CoeffVector out;
    out.basis = Basis::Sine;
    out.c.assign(static_cast<std::size_t>(N), 0.0);
    for (int k = 1; k <= N; ++k) {
        double sum = 0.0;  // endpoint samples pair with exact zeros of s_k
        for (int j = 1; j < M - 1; ++j) sum += f[j] * basis_s(k, f.x(j));
        out.c[static_cast<std::size_t>(k - 1)] = sum * h;
    }
    return out;
}

GridField synthesize(const CoeffVector& coeffs, int M) {
    GridField f = make_grid_field(M);
    if (coeffs.basis == Basis::Cosine) {
        const int N = coeffs.modes() - 1;
        for (int j = 0; j < M; ++j) {
            double x = f.x(j);
            double sum = 0.0;
            for (int k = 0; k <= N; ++k) sum += coeffs.c[static_cast<std::size_t>(k)] * basis_w(k, x);
            f[j] = sum;
        }
    } else {
        const int N = coeffs.modes();
        for (int j = 0; j < M; ++j) {
            double x = f.x(j);
            double sum = 0.0;
            for (int k = 1; k <= N; ++k) sum += coeffs.c[static_cast<std::size_t>(k - 1)] * basis_s(k, x);
            f[j] = sum;
        }
    }
    return f;
}

CoeffVector project_T(CoeffVector coeffs, int R) {
    if (R < 0) throw std::invalid_argument("projector cutoff must be >= 0");
    if (coeffs.basis == Basis::Cosine) {
        for (int k = 0; k <= R && k < coeffs.modes(); ++k)
            coeffs.c[static_cast<std::size_t>(k)] = 0.0;
    } else {
        for (int k = 1; k <= R && k <= coeffs.modes(); ++k)
            coeffs.c[static_cast<std::size_t>(k - 1)] = 0.0;
    }
    return coeffs;
}

std::vector<double> derivative_inner_products(const GridField& f, int N) {
    CoeffVector sc = sine_analyze(f, N);
    std::vector<double> b(static_cast<std::size_t>(N), 0.0);
    for (int k = 1; k <= N; ++k)
        b[static_cast<std::size_t>(k - 1)] = -kPi * k * sc.c[static_cast<std::size_t>(k - 1)];
    return b;
}

void gauss_legendre(int q, std::vector<double>& nodes, std::vector<double>& weights) {
    if (q < 1) throw std::invalid_argument("quadrature order must be >= 1");
    nodes.assign(static_cast<std::size_t>(q), 0.0);
    weights.assign(static_cast<std::size_t>(q), 0.0);
    const int half = (q + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-based initial guess, then Newton on P_q.
        double x = std::cos(kPi * (i + 0.75) / (q + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            if (q == 1) { p1 = x; }
            for (int n = 2; n <= q; ++n) {
                double p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
                p0 = p1;
                p1 = p2;
            }
            double pq = (q == 1) ? x : p1;
            double pqm1 = (q == 1) ? 1.0 : p0;
            dp = q * (pqm1 - x * pq) / (1.0 - x * x);
            double dx = pq / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[static_cast<std::size_t>(i)] = -x;
        nodes[static_cast<std::size_t>(q - 1 - i)] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[static_cast<std::size_t>(i)] = w;
        weights[static_cast<std::size_t>(q - 1 - i)] = w;
    }
    if (q % 2 == 1) nodes[static_cast<std::size_t>(q / 2)] = 0.0;
}

QuadRule QuadRule::composite_gauss(int panels, int q) {
    if (panels < 1) throw std::invalid_argument("need at least one panel");
    std::vector<double> gx, gw;
    gauss_legendre(q, gx, gw);
    QuadRule rule;
    rule.x.reserve(static_cast<std::size_t>(panels) * q);
    rule.w.reserve(static_cast<std::size_t>(panels) * q);
    const double width = 1.0 / panels;
    for (int p = 0; p < panels; ++p) {
        const double left = p * width;
        for (int i = 0; i < q; ++i) {
            rule.x.push_back(left + 0.5 * width * (gx[static_cast<std::size_t>(i)] + 1.0));
            rule.w.push_back(0.5 * width * gw[static_cast<std::size_t>(i)]);
        }
    }
    return rule;
}

} // namespace fbns
