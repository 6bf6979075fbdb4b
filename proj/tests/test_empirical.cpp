#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "evgof/copula.hpp"
#include "evgof/empirical.hpp"
#include "evgof/errors.hpp"
#include "evgof/rng.hpp"
#include "oracles.hpp"

using namespace evgof;

TEST_CASE("pseudo-observations are normalized ranks") {
    RawSample raw{{{10.0, 3.0}, {20.0, 1.0}, {30.0, 2.0}}};
    const PseudoSample ps = pseudo_observations(raw);
    CHECK(ps.pairs[0].first == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(ps.pairs[1].first == doctest::Approx(0.50).epsilon(1e-15));
    CHECK(ps.pairs[2].first == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(ps.pairs[0].second == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(ps.pairs[1].second == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(ps.pairs[2].second == doctest::Approx(0.50).epsilon(1e-15));
    CHECK_FALSE(ps.had_ties);
}

TEST_CASE("rank invariance under strictly increasing transforms") {
    Philox rng(11);
    RawSample raw;
    for (int i = 0; i < 200; ++i) {
        raw.pairs.emplace_back(rng.uniform01() * 10 - 5, rng.uniform01() * 3);
    }
    RawSample transformed;
    for (const auto& [x, y] : raw.pairs) {
        transformed.pairs.emplace_back(std::exp(x), y * y * y);
    }
    const PseudoSample a = pseudo_observations(raw);
    const PseudoSample b = pseudo_observations(transformed);
    CHECK(a.pairs == b.pairs);
}

TEST_CASE("large input yields distinct normalized ranks") {
    const std::size_t n = 1466;
    Philox rng(3);
    RawSample raw;
    for (std::size_t i = 0; i < n; ++i) {
        raw.pairs.emplace_back(rng.uniform01() * 1e6, rng.uniform01() * 1e5);
    }
    const PseudoSample ps = pseudo_observations(raw);
    std::set<double> us;
    for (const auto& [u, v] : ps.pairs) us.insert(u);
    CHECK(us.size() == n);
    CHECK(*us.begin() == doctest::Approx(1.0 / (n + 1.0)).epsilon(1e-15));
    CHECK(*us.rbegin() == doctest::Approx(n / (n + 1.0)).epsilon(1e-15));
}

TEST_CASE("tie policies") {
    RawSample tied{{{1.0, 2.0}, {1.0, 3.0}, {2.0, 1.0}}};
    CHECK_THROWS_AS(pseudo_observations(tied, TiePolicy::Reject), TieError);
    const PseudoSample ps = pseudo_observations(tied, TiePolicy::Midrank);
    CHECK(ps.had_ties);
    // Tied x values share the average rank (1+2)/2 = 1.5 over n+1 = 4.
    CHECK(ps.pairs[0].first == doctest::Approx(1.5 / 4.0).epsilon(1e-15));
    CHECK(ps.pairs[1].first == doctest::Approx(1.5 / 4.0).epsilon(1e-15));
    CHECK(ps.pairs[2].first == doctest::Approx(3.0 / 4.0).epsilon(1e-15));
}

TEST_CASE("empirical copula step function") {
    // Ranks (1,1),(2,2) of n = 2: only (1/3,1/3) lies below (1/2,1/2).
    PseudoSample ps;
    ps.pairs = {{1.0 / 3.0, 1.0 / 3.0}, {2.0 / 3.0, 2.0 / 3.0}};
    CHECK(empirical_copula(ps, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(empirical_copula(ps, 1.0, 1.0) == 1.0);
    CHECK(empirical_copula(ps, 0.0, 0.7) == 0.0);

    // Frechet-style bounds up to the 1/n step size.
    Philox rng(17);
    RawSample raw;
    for (int i = 0; i < 60; ++i) raw.pairs.emplace_back(rng.uniform01(), rng.uniform01());
    const PseudoSample big = pseudo_observations(raw);
    const double n = 60.0;
    for (double u = 0.0; u <= 1.0; u += 0.1) {
        for (double v = 0.0; v <= 1.0; v += 0.1) {
            const double c = empirical_copula(big, u, v);
            CHECK(c >= std::max(u + v - 1.0, 0.0) - 1.0 / n);
            CHECK(c <= std::min(u, v) + 1.0 / n);
        }
    }

    // Exact counting identity at the sample points.
    const std::vector<double> at = empirical_copula_at_points(big);
    for (std::size_t i = 0; i < big.size(); ++i) {
        std::size_t count = 0;
        for (std::size_t j = 0; j < big.size(); ++j) {
            if (big.pairs[j].first <= big.pairs[i].first &&
                big.pairs[j].second <= big.pairs[i].second) {
                ++count;
            }
        }
        CHECK(at[i] == count / n);
        CHECK(empirical_copula(big, big.pairs[i].first, big.pairs[i].second) == at[i]);
    }
}

TEST_CASE("sample tau") {
    PseudoSample inc;
    PseudoSample dec;
    for (int i = 1; i <= 8; ++i) {
        inc.pairs.emplace_back(i / 9.0, i / 9.0);
        dec.pairs.emplace_back(i / 9.0, (9 - i) / 9.0);
    }
    CHECK(sample_tau(inc) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sample_tau(dec) == doctest::Approx(-1.0).epsilon(1e-15));

    // X = (1,2,3,4), Y = (1,3,2,4): 5 concordant, 1 discordant of 6 pairs.
    PseudoSample small;
    small.pairs = {{0.2, 0.2}, {0.4, 0.6}, {0.6, 0.4}, {0.8, 0.8}};
    CHECK(sample_tau(small) == doctest::Approx(4.0 / 6.0).epsilon(1e-15));

    // Knight's algorithm agrees with brute-force pair counting.
    Philox rng(23);
    for (int rep = 0; rep < 5; ++rep) {
        RawSample raw;
        const CopulaModel gh{Family::GumbelHougaard, {1.8}, std::nullopt};
        raw.pairs = sample(gh, 250, 1000 + rep);
        const PseudoSample ps = pseudo_observations(raw);
        CHECK(sample_tau(ps) == doctest::Approx(oracles::brute_tau(ps.pairs)).epsilon(1e-13));
    }

    PseudoSample degenerate;
    degenerate.pairs = {{0.25, 0.25}, {0.25, 0.5}, {0.25, 0.75}};
    CHECK_THROWS_AS(sample_tau(degenerate), DegenerateError);
}

TEST_CASE("sample rho") {
    PseudoSample same;
    PseudoSample reversed;
    for (int i = 1; i <= 5; ++i) {
        same.pairs.emplace_back(i / 6.0, i / 6.0);
        reversed.pairs.emplace_back(i / 6.0, (6 - i) / 6.0);
    }
    CHECK(sample_rho(same) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sample_rho(reversed) == doctest::Approx(-1.0).epsilon(1e-14));

    // Ranks X = (1,2,3,4), Y = (1,3,2,4): Pearson correlation of ranks 0.8.
    PseudoSample small;
    small.pairs = {{0.2, 0.2}, {0.4, 0.6}, {0.6, 0.4}, {0.8, 0.8}};
    CHECK(sample_rho(small) == doctest::Approx(0.8).epsilon(1e-14));

    PseudoSample degenerate;
    degenerate.pairs = {{0.25, 0.25}, {0.25, 0.5}};
    CHECK_THROWS_AS(sample_rho(degenerate), DegenerateError);
}

TEST_CASE("sample tau concentrates around the model tau") {
    // |tau_n - tau| <= 4/sqrt(n) holds with probability well above 0.99.
    const CopulaModel gh2{Family::GumbelHougaard, {2.0}, std::nullopt};
    const int reps = 60;
    const std::size_t n = 500;
    int ok = 0;
    for (int r = 0; r < reps; ++r) {
        RawSample raw;
        raw.pairs = sample(gh2, n, Philox::derive(777, r));
        if (std::fabs(sample_tau(pseudo_observations(raw)) - 0.5) <= 4.0 / std::sqrt(n)) ++ok;
    }
    CHECK(ok == reps);
}
