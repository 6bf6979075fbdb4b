#include "evgof/gof.hpp"

#include <atomic>
#include <cmath>

#include "evgof/errors.hpp"
#include "evgof/parallel.hpp"
#include "evgof/rng.hpp"

namespace evgof {

std::vector<std::string> gof_flag_names(unsigned flags) {
    std::vector<std::string> out;
    if (flags & GofFitFlagged) out.push_back("fit-flagged");
    if (flags & GofReplicateFitFlagged) out.push_back("replicate-fit-flagged");
    if (flags & GofEstimatorClamped) out.push_back("estimator-clamped");
    if (flags & GofReplicateTies) out.push_back("replicate-ties");
    return out;
}

double statistic_sn(std::span<const double> a_n, std::span<const double> a_theta,
                    std::size_t n) {
    const std::size_t m = a_n.size();
    if (m < 2 || a_theta.size() != m) throw ConfigError("statistic_sn: bad curve grids");
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double d = a_n[j] - a_theta[j];
        const double w = (j == 0 || j == m - 1) ? 0.5 : 1.0;
        sum += w * d * d;
    }
    const double h = 1.0 / static_cast<double>(m - 1);
    return static_cast<double>(n) * h * sum;
}

double statistic_sn(const std::function<double(double)>& a_n,
                    const std::function<double(double)>& a_theta, std::size_t n, int grid_m) {
    if (grid_m < 2) throw ConfigError("statistic_sn: grid_m must be at least 2");
    std::vector<double> cn(grid_m), ct(grid_m);
    const double h = 1.0 / static_cast<double>(grid_m - 1);
    for (int j = 0; j < grid_m; ++j) {
        const double t = j * h;
        cn[j] = a_n(t);
        ct[j] = a_theta(t);
    }
    return statistic_sn(cn, ct, n);
}

double statistic_tn(const PseudoSample& ps, const Copula& copula) {
    const std::vector<double> cn = empirical_copula_at_points(ps);
    double sum = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const double d = cn[i] - copula.cdf(ps.pairs[i].first, ps.pairs[i].second);
        sum += d * d;
    }
    return sum;
}

double compute_statistic(const PseudoSample& ps, const CopulaModel& fitted,
                         const GofConfig& cfg, bool* estimator_clamped) {
    const auto copula = make_copula(fitted);
    if (cfg.statistic == StatFamily::Tn) {
        return statistic_tn(ps, *copula);
    }
    const PickandsFn* pick = copula->pickands();
    if (pick == nullptr) {
        throw ConfigError("Sn requires an extreme-value null family");
    }
    const PickandsEstimator estimator(ps, cfg.estimator, cfg.corrected);
    const std::size_t m = static_cast<std::size_t>(cfg.grid_m);
    const std::vector<double> an = estimator.curve(m);
    std::vector<double> at(m);
    const double h = 1.0 / static_cast<double>(m - 1);
    at[0] = 1.0;
    at[m - 1] = 1.0;
    for (std::size_t j = 1; j + 1 < m; ++j) at[j] = pick->A(j * h);
    if (estimator_clamped != nullptr && estimator.clamped()) *estimator_clamped = true;
    return statistic_sn(an, at, ps.size());
}

namespace {

void validate_config(const CopulaModel& h0, const GofConfig& cfg) {
    if (cfg.bootstrap_n < 1) throw ConfigError("bootstrap count N must be at least 1");
    if (cfg.statistic == StatFamily::Sn && cfg.grid_m < 101) {
        throw ConfigError("Sn quadrature grid must have at least 101 points");
    }
    if (cfg.statistic == StatFamily::Sn && !is_extreme_value(h0.family)) {
        throw ConfigError("Sn requires an extreme-value null family");
    }
    if (h0.asym && cfg.method != FitMethod::Mpl) {
        throw ConfigError("asymmetric null families require maximum pseudo-likelihood");
    }
}

FitResult fit_null(const CopulaModel& h0, const PseudoSample& ps, const GofConfig& cfg) {
    return fit(h0, ps, cfg.method, cfg.fit_options);
}

}  // namespace

double replicate_statistic(const CopulaModel& fitted_null, std::size_t n, const CopulaModel& h0,
                           const GofConfig& cfg, int k, unsigned* flags) {
    const std::uint64_t sub_seed = Philox::derive(cfg.seed, static_cast<std::uint64_t>(k) + 1);
    RawSample rep;
    rep.pairs = sample(fitted_null, n, sub_seed);
    // The sampler is continuous, so ties only arise from root-solve
    // quantization; midranking keeps the replicate usable either way.
    const PseudoSample rps = pseudo_observations(rep, TiePolicy::Midrank);
    const FitResult refit = fit_null(h0, rps, cfg);
    bool clamped = false;
    const double stat = compute_statistic(rps, refit.model, cfg, &clamped);
    if (flags != nullptr) {
        if (rps.had_ties) *flags |= GofReplicateTies;
        if (refit.flags != 0) *flags |= GofReplicateFitFlagged;
        if (clamped) *flags |= GofEstimatorClamped;
    }
    return stat;
}

double pvalue_from_replicates(std::span<const double> replicates, double observed, bool midp) {
    std::size_t count = 0;
    for (double s : replicates) {
        if (s >= observed) ++count;
    }
    if (midp) {
        return (static_cast<double>(count) + 0.5) / (static_cast<double>(replicates.size()) + 1.0);
    }
    return static_cast<double>(count) / static_cast<double>(replicates.size());
}

GofResult bootstrap_test(const PseudoSample& ps, const CopulaModel& h0, const GofConfig& cfg) {
    validate_config(h0, cfg);
    GofResult result;
    const FitResult data_fit = fit_null(h0, ps, cfg);
    result.fitted = data_fit.model;
    result.fit_flags = data_fit.flags;
    if (data_fit.flags != 0) result.flags |= GofFitFlagged;
    bool clamped = false;
    result.statistic = compute_statistic(ps, data_fit.model, cfg, &clamped);
    if (clamped) result.flags |= GofEstimatorClamped;

    const int n_rep = cfg.bootstrap_n;
    result.replicates.assign(n_rep, 0.0);
    std::vector<unsigned> rep_flags(n_rep, 0u);
    parallel_for(static_cast<std::size_t>(n_rep), cfg.workers, [&](std::size_t k) {
        result.replicates[k] = replicate_statistic(data_fit.model, ps.size(), h0, cfg,
                                                   static_cast<int>(k), &rep_flags[k]);
    });
    for (unsigned f : rep_flags) result.flags |= f;
    result.pvalue = pvalue_from_replicates(result.replicates, result.statistic, cfg.midp);
    return result;
}

GofResult bootstrap_test(const RawSample& data, const CopulaModel& h0, const GofConfig& cfg) {
    return bootstrap_test(pseudo_observations(data, cfg.ties), h0, cfg);
}

}  // namespace evgof
