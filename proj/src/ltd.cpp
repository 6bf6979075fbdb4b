#include "evgof/ltd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "evgof/errors.hpp"
#include "evgof/quadrature.hpp"

namespace evgof {

namespace {

constexpr double kCutoff = 80.0;
constexpr double kEulerGamma = std::numbers::egamma_v<double>;

double diag_value(const std::function<double(double, double)>& cdf, double t, double s) {
    return cdf(std::exp(-s * (1.0 - t)), std::exp(-s * t));
}

double functional_p(const std::function<double(double, double)>& cdf, double t) {
    const auto edges = decay_panels(kCutoff);
    const double integral =
        integrate_panels([&](double s) { return diag_value(cdf, t, s); }, edges, 32);
    return 1.0 / integral;
}

double functional_cfg(const std::function<double(double, double)>& cdf, double t) {
    // After x = e^-s the defining integral becomes
    // -int_0^inf (C(e^-s(1-t), e^-st) - 1(s<1)) ds/s; the integrand of the
    // [0,1] piece tends to -1 at s = 0 and is smooth.
    const double head = integrate_gl(
        [&](double s) { return (diag_value(cdf, t, s) - 1.0) / s; }, 0.0, 1.0, 64);
    const auto tail_edges = std::vector<double>{1.0, 2.0, 4.0, 8.0, 16.0, 32.0, kCutoff};
    const double tail =
        integrate_panels([&](double s) { return diag_value(cdf, t, s) / s; }, tail_edges, 32);
    return std::exp(-kEulerGamma - (head + tail));
}

}  // namespace

double copula_functional(const std::function<double(double, double)>& cdf, EstimatorKind kind,
                         double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("copula_functional: t must be in [0,1]");
    if (t == 0.0 || t == 1.0) return 1.0;
    return kind == EstimatorKind::P ? functional_p(cdf, t) : functional_cfg(cdf, t);
}

double copula_functional(const Copula& copula, EstimatorKind kind, double t) {
    return copula_functional([&copula](double u, double v) { return copula.cdf(u, v); }, kind, t);
}

double copula_functional(const CopulaModel& model, EstimatorKind kind, double t) {
    return copula_functional(*make_copula(model), kind, t);
}

double fgm_functional(double theta, EstimatorKind kind, double t) {
    if (theta < -1.0 || theta > 1.0) throw std::domain_error("fgm: theta must be in [-1,1]");
    if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("fgm_functional: t must be in [0,1]");
    if (kind == EstimatorKind::P) {
        const double q = 2.0 * t * t - 2.0 * t - 4.0;
        const double r = 3.0 * t * t - 3.0 * t;
        return q / (q + r * theta);
    }
    return std::pow(2.0 / (2.0 + t - t * t), theta);
}

FunctionalBounds frechet_bound_functionals(EstimatorKind kind, double t) {
    FunctionalBounds out;
    out.lower = std::max(t, 1.0 - t);
    if (t <= 0.0 || t >= 1.0) {
        out.upper = 1.0;
        return out;
    }
    // W(u,v) = max(u+v-1, 0); along the substituted diagonal the integrand
    // vanishes beyond the root s* of e^(-s(1-t)) + e^(-st) = 1, which always
    // exceeds 1.  Integrate only up to s*.
    auto margin_sum = [t](double s) { return std::exp(-s * (1.0 - t)) + std::exp(-s * t); };
    double lo = 1.0, hi = 2.0;
    while (margin_sum(hi) > 1.0 && hi < 400.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (margin_sum(mid) > 1.0 ? lo : hi) = mid;
        if (hi - lo < 1e-14 * hi) break;
    }
    const double sstar = 0.5 * (lo + hi);
    if (kind == EstimatorKind::P) {
        const double integral =
            integrate_gl([&](double s) { return margin_sum(s) - 1.0; }, 0.0, sstar, 64);
        out.upper = 1.0 / integral;
    } else {
        const double head = integrate_gl(
            [&](double s) { return (margin_sum(s) - 2.0) / s; }, 0.0, 1.0, 64);
        const double tail = integrate_gl(
            [&](double s) { return (margin_sum(s) - 1.0) / s; }, 1.0, sstar, 64);
        out.upper = std::exp(-kEulerGamma - (head + tail));
    }
    return out;
}

LtdReport ltd_check(const CopulaModel& model, int grid) {
    if (grid < 10) throw ConfigError("ltd_check grid must be at least 10");
    const auto copula = make_copula(model);
    const double step = 1.0 / (grid + 1.0);
    std::vector<std::vector<double>> ratio(grid, std::vector<double>(grid));
    for (int i = 0; i < grid; ++i) {
        const double u = (i + 1) * step;
        for (int j = 0; j < grid; ++j) {
            const double v = (j + 1) * step;
            ratio[i][j] = copula->cdf(u, v) / (u * v);
        }
    }
    LtdReport report;
    constexpr double tol = 1e-10;
    auto consider = [&](int i, int j, int i2, int j2) {
        const double inc = ratio[i2][j2] - ratio[i][j];
        if (inc > report.worst_violation) {
            report.worst_violation = inc;
            report.from_u = (i + 1) * step;
            report.from_v = (j + 1) * step;
            report.to_u = (i2 + 1) * step;
            report.to_v = (j2 + 1) * step;
        }
    };
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            if (i + 1 < grid) consider(i, j, i + 1, j);
            if (j + 1 < grid) consider(i, j, i, j + 1);
        }
    }
    report.is_ltd = report.worst_violation <= tol;
    return report;
}

namespace {

// Extreme-value Pickands functions built from the FGM functionals.
class FgmPPickands final : public PickandsFn {
public:
    explicit FgmPPickands(double theta) : th_(theta) {}

    double A(double t) const override {
        const double q = 2.0 * t * t - 2.0 * t - 4.0;
        const double r = 3.0 * t * t - 3.0 * t;
        return q / (q + r * th_);
    }

    double dA(double t) const override {
        const double den = denom(t);
        return 12.0 * th_ * (2.0 * t - 1.0) / (den * den);
    }

    double d2A(double t) const override {
        const double den = denom(t);
        const double s = 2.0 * t - 1.0;
        return 24.0 * th_ * (den - s * s * (2.0 + 3.0 * th_)) / (den * den * den);
    }

private:
    double denom(double t) const {
        return 2.0 * t * t - 2.0 * t - 4.0 + (3.0 * t * t - 3.0 * t) * th_;
    }
    double th_;
};

class FgmCfgPickands final : public PickandsFn {
public:
    explicit FgmCfgPickands(double theta) : th_(theta) {}

    double A(double t) const override {
        return std::pow(2.0 / (2.0 + t - t * t), th_);
    }

    double dA(double t) const override {
        const double g = 2.0 + t - t * t;
        return -th_ * A(t) * (1.0 - 2.0 * t) / g;
    }

    double d2A(double t) const override {
        const double g = 2.0 + t - t * t;
        const double s = 1.0 - 2.0 * t;
        return th_ * A(t) * ((th_ + 1.0) * s * s + 2.0 * g) / (g * g);
    }

private:
    double th_;
};

void validate_unit_theta(double theta) {
    if (!(theta >= 0.0 && theta <= 1.0)) {
        throw std::domain_error("derived FGM extreme-value families need theta in [0,1]");
    }
}

}  // namespace

std::unique_ptr<const Copula> make_fgm_p_ev(double theta) {
    validate_unit_theta(theta);
    return make_ev_copula(std::make_unique<FgmPPickands>(theta));
}

std::unique_ptr<const Copula> make_fgm_cfg_ev(double theta) {
    validate_unit_theta(theta);
    return make_ev_copula(std::make_unique<FgmCfgPickands>(theta));
}

}  // namespace evgof
