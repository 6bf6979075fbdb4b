#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "evgof/copula.hpp"
#include "evgof/empirical.hpp"
#include "evgof/fit.hpp"
#include "evgof/pickands.hpp"

namespace evgof {

enum class StatFamily {
    Sn,  // Cramer-von Mises distance between Pickands curves
    Tn,  // sum of squared empirical-vs-parametric copula gaps at the data
};

struct GofConfig {
    EstimatorKind estimator = EstimatorKind::Cfg;
    bool corrected = true;
    FitMethod method = FitMethod::ITau;
    StatFamily statistic = StatFamily::Sn;
    int bootstrap_n = 1000;  // N
    int grid_m = 1001;       // quadrature grid for Sn
    std::uint64_t seed = 0;
    int workers = 1;  // 0 = all hardware threads; results are worker-independent
    TiePolicy ties = TiePolicy::Reject;
    bool midp = false;  // (count + 0.5)/(N + 1) p-value variant
    FitOptions fit_options{};
};

enum GofFlag : unsigned {
    GofFitFlagged = 1u << 0,        // the data fit carried fit flags
    GofReplicateFitFlagged = 1u << 1,
    GofEstimatorClamped = 1u << 2,  // corrected-P clamp hit (data or replicate)
    GofReplicateTies = 1u << 3,     // a replicate sample contained ties
};

struct GofResult {
    double statistic = 0.0;
    CopulaModel fitted;
    double pvalue = 0.0;
    std::vector<double> replicates;
    unsigned flags = 0;
    unsigned fit_flags = 0;  // flags of the data fit
};

std::vector<std::string> gof_flag_names(unsigned flags);

/// Cramer-von Mises statistic n * int_0^1 (A_n(t) - A_theta(t))^2 dt by the
/// composite trapezoid rule on the inclusive grid of grid_m points.
double statistic_sn(const std::function<double(double)>& a_n,
                    const std::function<double(double)>& a_theta, std::size_t n, int grid_m);

/// Same quadrature from two precomputed curves on the same grid.
double statistic_sn(std::span<const double> a_n, std::span<const double> a_theta, std::size_t n);

/// T_n = sum_i (C_n(U_i,V_i) - C_theta(U_i,V_i))^2.
double statistic_tn(const PseudoSample& ps, const Copula& copula);

/// The statistic configured in cfg, for a fitted model.
double compute_statistic(const PseudoSample& ps, const CopulaModel& fitted,
                         const GofConfig& cfg, bool* estimator_clamped = nullptr);

/// Statistic of parametric-bootstrap replicate k: sample n pairs from the
/// fitted null model under sub-seed derive(seed, k+1), re-rank, refit and
/// recompute the statistic with the same configuration.
double replicate_statistic(const CopulaModel& fitted_null, std::size_t n,
                           const CopulaModel& h0, const GofConfig& cfg, int k,
                           unsigned* flags = nullptr);

/// P-value from replicate statistics: the fraction of replicates at or above
/// the observed value (ties count as exceedances).
double pvalue_from_replicates(std::span<const double> replicates, double observed, bool midp);

/// Full parametric-bootstrap goodness-of-fit test of the h0 family.
GofResult bootstrap_test(const RawSample& data, const CopulaModel& h0, const GofConfig& cfg);
GofResult bootstrap_test(const PseudoSample& ps, const CopulaModel& h0, const GofConfig& cfg);

}  // namespace evgof
