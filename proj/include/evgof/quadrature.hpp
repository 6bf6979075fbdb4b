#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace evgof {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> x;
    std::vector<double> w;
};

/// Cached rule of order n (computed once per order, thread-safe).
const GaussLegendre& gauss_legendre(int n);

/// Integral of f over [a, b] with an n-point Gauss-Legendre rule.
template <class F>
double integrate_gl(F&& f, double a, double b, int n) {
    const GaussLegendre& rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        sum += rule.w[i] * f(mid + half * rule.x[i]);
    }
    return half * sum;
}

/// Composite Gauss-Legendre over the panels defined by ascending edges.
template <class F>
double integrate_panels(F&& f, std::span<const double> edges, int n) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        sum += integrate_gl(f, edges[i], edges[i + 1], n);
    }
    return sum;
}

/// Panel edges on [0,1] geometrically refined toward both endpoints; suited to
/// integrands with integrable endpoint singularities.
std::vector<double> unit_panels_refined();

/// Panel edges on [0, cutoff] with geometric growth, for smooth decaying tails.
std::vector<double> decay_panels(double cutoff);

}  // namespace evgof
