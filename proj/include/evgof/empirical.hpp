#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace evgof {

/// Raw bivariate observations (x_i, y_i).
struct RawSample {
    std::vector<std::pair<double, double>> pairs;
};

enum class TiePolicy {
    Reject,   // throw TieError on tied coordinates (continuous-model default)
    Midrank,  // average ranks within tie groups and flag the result
};

/// Normalized ranks (U_i, V_i) = (rank(x_i), rank(y_i)) / (n+1), each in (0,1).
struct PseudoSample {
    std::vector<std::pair<double, double>> pairs;
    bool had_ties = false;

    std::size_t size() const { return pairs.size(); }
};

/// Rank transform of a raw sample.  Invariant under strictly increasing
/// marginal transforms.  Requires n >= 2 and finite coordinates.
PseudoSample pseudo_observations(const RawSample& sample, TiePolicy policy = TiePolicy::Reject);

/// Empirical copula C_n(u,v) = (1/n) #{i : U_i <= u, V_i <= v}.
double empirical_copula(const PseudoSample& ps, double u, double v);

/// C_n evaluated at every pseudo-observation (O(n^2) pair counting).
std::vector<double> empirical_copula_at_points(const PseudoSample& ps);

/// Kendall's tau via O(n log n) inversion counting (tau-b under midranks).
double sample_tau(const PseudoSample& ps);

/// Spearman's rho: the Pearson correlation of the normalized ranks.
double sample_rho(const PseudoSample& ps);

}  // namespace evgof
