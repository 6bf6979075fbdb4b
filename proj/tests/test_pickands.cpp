#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "evgof/copula.hpp"
#include "evgof/pickands.hpp"
#include "evgof/rng.hpp"
#include "pickands_oracle.hpp"

using namespace evgof;

namespace {

constexpr double kGamma = std::numbers::egamma_v<double>;

PseudoSample from_logs(const std::vector<double>& a, const std::vector<double>& b) {
    PseudoSample ps;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ps.pairs.emplace_back(std::exp(-a[i]), std::exp(-b[i]));
    }
    return ps;
}

PseudoSample random_ranks(std::size_t n, std::uint64_t seed) {
    RawSample raw;
    raw.pairs = sample(CopulaModel{Family::GumbelHougaard, {1.7}, std::nullopt}, n, seed);
    return pseudo_observations(raw);
}

}  // namespace

TEST_CASE("xi limits and interior formula") {
    const PseudoSample ps = from_logs({1.0, 0.4}, {2.0, 1.0});
    CHECK(xi(ps, 0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(xi(ps, 0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    // U = V = e^-1 at t = 1/2: min(2, 2) = 2.
    const PseudoSample eq = from_logs({1.0}, {1.0});
    CHECK(xi(eq, 0, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("pickands estimator values") {
    // All xi_i(0) = 1 gives A(0) = 1.
    const PseudoSample unit = from_logs({1.0, 1.0, 1.0}, {0.5, 2.0, 1.7});
    CHECK(PickandsEstimator(unit, EstimatorKind::P, false)(0.0) ==
          doctest::Approx(1.0).epsilon(1e-15));
    // xi values (1, 3) at t = 0: reciprocal of the mean is 1/2.
    const PseudoSample two = from_logs({1.0, 3.0}, {1.0, 1.0});
    CHECK(PickandsEstimator(two, EstimatorKind::P, false)(0.0) ==
          doctest::Approx(0.5).epsilon(1e-15));
    // Single observation with xi = 1: CFG value is exp(-gamma).
    const PseudoSample one = from_logs({1.0}, {1.0});
    CHECK(PickandsEstimator(one, EstimatorKind::Cfg, false)(0.0) ==
          doctest::Approx(std::exp(-kGamma)).epsilon(1e-15));
    // All xi = exp(-gamma) makes the CFG estimate exactly 1.
    const double eg = std::exp(-kGamma);
    const PseudoSample gamma_ps = from_logs({eg, eg}, {1.0, 1.0});
    CHECK(PickandsEstimator(gamma_ps, EstimatorKind::Cfg, false)(0.0) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("end-point correction") {
    const PseudoSample ps = random_ranks(40, 7);
    for (EstimatorKind kind : {EstimatorKind::P, EstimatorKind::Cfg}) {
        const PickandsEstimator corrected(ps, kind, true);
        CHECK(corrected(0.0) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(corrected(1.0) == doctest::Approx(1.0).epsilon(1e-14));
        const std::vector<double> curve = corrected.curve(3);
        CHECK(curve.size() == 3);
        CHECK(curve[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(curve[2] == doctest::Approx(1.0).epsilon(1e-14));
    }

    // If the uncorrected estimator already satisfies the end-point
    // conditions, the corrections vanish identically.
    {
        const PseudoSample even = from_logs({0.5, 1.5}, {0.8, 1.2});  // means exactly 1
        const PickandsEstimator raw(even, EstimatorKind::P, false);
        const PickandsEstimator fixed(even, EstimatorKind::P, true);
        for (double t = 0.0; t <= 1.0; t += 0.125) {
            CHECK(fixed(t) == doctest::Approx(raw(t)).epsilon(1e-14));
        }
    }
    {
        const double x = 1.3;
        const double eg = std::exp(-kGamma);
        const PseudoSample even = from_logs({eg * x, eg / x}, {eg * 1.7, eg / 1.7});
        const PickandsEstimator raw(even, EstimatorKind::Cfg, false);
        const PickandsEstimator fixed(even, EstimatorKind::Cfg, true);
        for (double t = 0.0; t <= 1.0; t += 0.125) {
            CHECK(fixed(t) == doctest::Approx(raw(t)).epsilon(1e-13));
        }
    }
}

TEST_CASE("estimators are rank statistics: order invariance") {
    PseudoSample ps = random_ranks(60, 99);
    PseudoSample shuffled = ps;
    std::reverse(shuffled.pairs.begin(), shuffled.pairs.end());
    std::swap(shuffled.pairs[3], shuffled.pairs[17]);
    for (EstimatorKind kind : {EstimatorKind::P, EstimatorKind::Cfg}) {
        const PickandsEstimator a(ps, kind, true);
        const PickandsEstimator b(shuffled, kind, true);
        for (double t = 0.0; t <= 1.0; t += 0.1) {
            CHECK(a(t) == b(t));
        }
    }
}

TEST_CASE("summation forms match the empirical-copula integral forms") {
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t n = rep % 2 == 0 ? 10 : 100;
        const PseudoSample ps = random_ranks(n, 3000 + rep);
        const PickandsEstimator p(ps, EstimatorKind::P, false);
        const PickandsEstimator cfg(ps, EstimatorKind::Cfg, false);
        for (int j = 0; j <= 20; ++j) {
            const double t = j / 20.0;
            CHECK(std::fabs(p(t) - oracles::pickands_p_integral_form(ps, t)) <= 1e-6);
            CHECK(std::fabs(cfg(t) - oracles::pickands_cfg_integral_form(ps, t)) <= 1e-5);
        }
    }
}

TEST_CASE("curve consistency on extreme-value samples") {
    const CopulaModel gh2{Family::GumbelHougaard, {2.0}, std::nullopt};
    const auto copula = make_copula(gh2);

    // Large-sample curve stays uniformly close to the true function.
    {
        RawSample raw;
        raw.pairs = sample(gh2, 10000, 4242);
        const PseudoSample ps = pseudo_observations(raw);
        for (EstimatorKind kind : {EstimatorKind::P, EstimatorKind::Cfg}) {
            const std::vector<double> curve = pickands_curve(kind, true, ps, 1001);
            double sup = 0.0;
            for (int j = 0; j <= 1000; ++j) {
                const double t = j / 1000.0;
                sup = std::max(sup, std::fabs(curve[j] - copula->pickands()->A(t)));
            }
            CHECK(sup <= 0.05);
        }
    }

    // Median sup-error shrinks from n = 500 to n = 5000 (corrected CFG).
    auto median_sup_error = [&](std::size_t n, std::uint64_t seed0) {
        std::vector<double> sups;
        for (int rep = 0; rep < 20; ++rep) {
            RawSample raw;
            raw.pairs = sample(gh2, n, Philox::derive(seed0, rep));
            const std::vector<double> curve =
                pickands_curve(EstimatorKind::Cfg, true, pseudo_observations(raw), 201);
            double sup = 0.0;
            for (int j = 0; j <= 200; ++j) {
                sup = std::max(sup, std::fabs(curve[j] - copula->pickands()->A(j / 200.0)));
            }
            sups.push_back(sup);
        }
        std::sort(sups.begin(), sups.end());
        return 0.5 * (sups[9] + sups[10]);
    };
    CHECK(median_sup_error(500, 11) > median_sup_error(5000, 12));
}
