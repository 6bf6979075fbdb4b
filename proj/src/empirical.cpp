#include "evgof/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "evgof/errors.hpp"

namespace evgof {

namespace {

// Ranks of one coordinate; ties averaged under Midrank, rejected otherwise.
std::vector<double> ranks(const std::vector<double>& x, TiePolicy policy, bool& had_ties) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&x](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        if (j > i) {
            if (policy == TiePolicy::Reject) {
                throw TieError("tied observations; rerun with the midrank tie policy");
            }
            had_ties = true;
        }
        const double mid = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k) r[order[k]] = mid;
        i = j + 1;
    }
    return r;
}

}  // namespace

PseudoSample pseudo_observations(const RawSample& sample, TiePolicy policy) {
    const std::size_t n = sample.pairs.size();
    if (n < 2) throw ConfigError("pseudo-observations require at least two observations");
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = sample.pairs[i].first;
        y[i] = sample.pairs[i].second;
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
            throw ConfigError("non-finite coordinate at observation " + std::to_string(i + 1));
        }
    }
    PseudoSample ps;
    const std::vector<double> rx = ranks(x, policy, ps.had_ties);
    const std::vector<double> ry = ranks(y, policy, ps.had_ties);
    ps.pairs.resize(n);
    const double scale = 1.0 / (static_cast<double>(n) + 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        ps.pairs[i] = {rx[i] * scale, ry[i] * scale};
    }
    return ps;
}

double empirical_copula(const PseudoSample& ps, double u, double v) {
    if (u <= 0.0 || v <= 0.0) return 0.0;
    std::size_t count = 0;
    for (const auto& [ui, vi] : ps.pairs) {
        if (ui <= u && vi <= v) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(ps.size());
}

std::vector<double> empirical_copula_at_points(const PseudoSample& ps) {
    const std::size_t n = ps.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t count = 0;
        const auto [ui, vi] = ps.pairs[i];
        for (const auto& [uj, vj] : ps.pairs) {
            if (uj <= ui && vj <= vi) ++count;
        }
        out[i] = static_cast<double>(count) / static_cast<double>(n);
    }
    return out;
}

namespace {

// Strict inversions of y via bottom-up merge sort; equal elements are taken
// from the left run so ties are not counted.
std::uint64_t count_inversions(std::vector<double>& y) {
    const std::size_t n = y.size();
    std::vector<double> tmp(n);
    std::uint64_t inversions = 0;
    for (std::size_t width = 1; width < n; width *= 2) {
        for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
            const std::size_t mid = lo + width;
            const std::size_t hi = std::min(lo + 2 * width, n);
            std::size_t a = lo, b = mid, k = lo;
            while (a < mid && b < hi) {
                if (y[b] < y[a]) {
                    inversions += mid - a;
                    tmp[k++] = y[b++];
                } else {
                    tmp[k++] = y[a++];
                }
            }
            while (a < mid) tmp[k++] = y[a++];
            while (b < hi) tmp[k++] = y[b++];
            std::copy(tmp.begin() + lo, tmp.begin() + hi, y.begin() + lo);
        }
    }
    return inversions;
}

std::uint64_t tie_pair_count(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::uint64_t total = 0;
    std::size_t i = 0;
    while (i < v.size()) {
        std::size_t j = i;
        while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;
        const std::uint64_t t = j - i + 1;
        total += t * (t - 1) / 2;
        i = j + 1;
    }
    return total;
}

}  // namespace

double sample_tau(const PseudoSample& ps) {
    const std::size_t n = ps.size();
    if (n < 2) throw ConfigError("sample_tau requires at least two observations");
    // Knight's algorithm: sort by (u, v), count strict inversions of v.
    std::vector<std::pair<double, double>> sorted = ps.pairs;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> v(n);
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = sorted[i].first;
        v[i] = sorted[i].second;
    }
    const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    const std::uint64_t ties_u = tie_pair_count(u);
    const std::uint64_t ties_v = tie_pair_count(v);
    if (ties_u == total || ties_v == total) {
        throw DegenerateError("sample_tau: a coordinate is constant");
    }
    std::uint64_t ties_uv = 0;
    {
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && sorted[j + 1] == sorted[i]) ++j;
            const std::uint64_t t = j - i + 1;
            ties_uv += t * (t - 1) / 2;
            i = j + 1;
        }
    }
    const std::uint64_t discordant = count_inversions(v);
    const double c_minus_d = static_cast<double>(total) - static_cast<double>(ties_u) -
                             static_cast<double>(ties_v) + static_cast<double>(ties_uv) -
                             2.0 * static_cast<double>(discordant);
    const double denom = std::sqrt(static_cast<double>(total - ties_u)) *
                         std::sqrt(static_cast<double>(total - ties_v));
    return c_minus_d / denom;
}

double sample_rho(const PseudoSample& ps) {
    const std::size_t n = ps.size();
    if (n < 2) throw ConfigError("sample_rho requires at least two observations");
    double mu = 0.0, mv = 0.0;
    for (const auto& [u, v] : ps.pairs) {
        mu += u;
        mv += v;
    }
    mu /= static_cast<double>(n);
    mv /= static_cast<double>(n);
    double suu = 0.0, svv = 0.0, suv = 0.0;
    for (const auto& [u, v] : ps.pairs) {
        suu += (u - mu) * (u - mu);
        svv += (v - mv) * (v - mv);
        suv += (u - mu) * (v - mv);
    }
    if (suu <= 0.0 || svv <= 0.0) {
        throw DegenerateError("sample_rho: a coordinate is constant");
    }
    return suv / std::sqrt(suu * svv);
}

}  // namespace evgof
