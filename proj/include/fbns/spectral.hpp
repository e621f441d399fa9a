#pragma once

#include <cstddef>
#include <vector>

namespace fbns {

// Orthonormal bases on L2(0,1):
//   cosine: w_0 = 1, w_k(x) = sqrt(2) cos(pi k x)
//   sine:   s_k(x) = sqrt(2) sin(pi k x), k >= 1
enum class Basis { Cosine, Sine };

// Coefficients against one of the bases. For Cosine, c[0] is the w_0 (mean)
// coefficient and c[k] pairs with w_k. For Sine, c[k-1] pairs with s_k.
struct CoeffVector {
    Basis basis = Basis::Cosine;
    std::vector<double> c;

    int modes() const { return static_cast<int>(c.size()); }
};

// Samples on the closed uniform grid x_j = j/(M-1), j = 0..M-1.
struct GridField {
    std::vector<double> v;

    int size() const { return static_cast<int>(v.size()); }
    double x(int j) const { return static_cast<double>(j) / (size() - 1); }
    double& operator[](int j) { return v[static_cast<std::size_t>(j)]; }
    double operator[](int j) const { return v[static_cast<std::size_t>(j)]; }
};

GridField make_grid_field(int M, double fill = 0.0);

// Pointwise basis evaluation. Endpoint arguments are special-cased so that
// sines are exactly zero and cosines exactly +-1 at x = 0 and x = 1.
double basis_w(int k, double x);   // cosine family, k >= 0
double basis_s(int k, double x);   // sine family, k >= 1

// Trapezoid quadrature on the closed uniform grid (half weights at the ends).
// Exact for products of the trigonometric basis up to the aliasing limit;
// second order for general smooth integrands.
double trapezoid(const GridField& f);
double trapezoid_inner(const GridField& f, const GridField& g);

// Projections onto the first N+1 cosine modes (k = 0..N) by trapezoid
// quadrature. Requires M >= 2N+1.
CoeffVector cosine_analyze(const GridField& f, int N);

// Projections onto sine modes k = 1..N by trapezoid quadrature.
CoeffVector sine_analyze(const GridField& f, int N);

// Evaluate a finite series on the closed uniform grid with M points.
GridField synthesize(const CoeffVector& coeffs, int M);

// Mode-truncating projector: zeroes every coefficient with k <= R and keeps
// the rest. Idempotent. Applies to either basis (mode index semantics).
CoeffVector project_T(CoeffVector coeffs, int R);

// b_k = (field, d/dx w_k) = -pi k (field, s_k) for k = 1..N, via sine_analyze.
std::vector<double> derivative_inner_products(const GridField& f, int N);

// Composite Gauss-Legendre rule on [0,1]: `panels` equal panels with `q`
// nodes each. Spectrally accurate for analytic integrands; used wherever the
// pressure nonlinearity or other non-polynomial expressions are integrated.
struct QuadRule {
    std::vector<double> x;
    std::vector<double> w;

    int size() const { return static_cast<int>(x.size()); }
    static QuadRule composite_gauss(int panels, int q);
};

// Nodes/weights of the q-point Gauss-Legendre rule on [-1,1], computed by
// Newton iteration on the Legendre recurrence to machine precision.
void gauss_legendre(int q, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace fbns
