#include "evgof/quadrature.hpp"

#include <map>
#include <mutex>
#include <numbers>

namespace evgof {

namespace {

GaussLegendre build_rule(int n) {
    GaussLegendre rule;
    rule.x.resize(n);
    rule.w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Newton iteration on P_n from the Tricomi initial guess.
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::fabs(z - z1) < 1e-15) break;
        }
        rule.x[i] = -z;
        rule.x[n - 1 - i] = z;
        rule.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.w[n - 1 - i] = rule.w[i];
    }
    return rule;
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
    static std::mutex mutex;
    static std::map<int, GaussLegendre> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, build_rule(n)).first;
    }
    return it->second;
}

std::vector<double> unit_panels_refined() {
    static const std::vector<double> edges = {
        0.0,  1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 0.05, 0.15, 0.3,    0.5,
        0.7,  0.85, 0.95, 0.99, 1 - 1e-3, 1 - 1e-4, 1 - 1e-5, 1 - 1e-6, 1.0};
    return edges;
}

std::vector<double> decay_panels(double cutoff) {
    std::vector<double> edges{0.0};
    double e = 0.25;
    while (e < cutoff) {
        edges.push_back(e);
        e *= 1.9;
    }
    edges.push_back(cutoff);
    return edges;
}

}  // namespace evgof
