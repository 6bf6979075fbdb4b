#include "evgof/copula.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "evgof/errors.hpp"
#include "evgof/quadrature.hpp"
#include "evgof/rng.hpp"
#include "evgof/special.hpp"

namespace evgof {

namespace {

bool interior01(double x) { return x > 0.0 && x < 1.0; }

void require_interior(double u, double v) {
    if (!interior01(u) || !interior01(v)) {
        throw std::domain_error("density requires (u,v) in the open unit square");
    }
}

}  // namespace

bool is_extreme_value(Family family) {
    switch (family) {
        case Family::GumbelHougaard:
        case Family::Galambos:
        case Family::HuslerReiss:
        case Family::TEV4:
            return true;
        default:
            return false;
    }
}

std::string family_name(Family family) {
    switch (family) {
        case Family::GumbelHougaard: return "gh";
        case Family::Galambos: return "galambos";
        case Family::HuslerReiss: return "hr";
        case Family::TEV4: return "tev";
        case Family::Clayton: return "clayton";
        case Family::Frank: return "frank";
        case Family::Normal: return "normal";
        case Family::Plackett: return "plackett";
        case Family::FGM: return "fgm";
    }
    return "?";
}

std::string model_name(const CopulaModel& model) {
    return model.asym ? "a-" + family_name(model.family) : family_name(model.family);
}

// ---------------------------------------------------------------------------
// Pickands dependence functions
// ---------------------------------------------------------------------------

double PickandsFn::d2A(double t) const {
    const double h = 1e-6;
    const double tc = std::clamp(t, h, 1.0 - h);
    return (dA(tc + h) - dA(tc - h)) / (2.0 * h);
}

namespace {

// Gumbel-Hougaard: A(t) = (t^theta + (1-t)^theta)^(1/theta), theta >= 1.
// Powers are factored against max(t,1-t) so the formulas stay finite for
// arbitrarily large theta.
class GhPickands final : public PickandsFn {
public:
    explicit GhPickands(double theta) : th_(theta) {}

    double A(double t) const override {
        if (t <= 0.0 || t >= 1.0) return 1.0;
        const double big = std::max(t, 1.0 - t);
        const double s = std::pow(t / big, th_) + std::pow((1.0 - t) / big, th_);
        return big * std::pow(s, 1.0 / th_);
    }

    double dA(double t) const override {
        double a, da;
        eval(t, a, da);
        return da;
    }

    void eval(double t, double& a, double& da) const override {
        t = std::clamp(t, 1e-15, 1.0 - 1e-15);
        const double big = std::max(t, 1.0 - t);
        const double r0 = t / big;
        const double r1 = (1.0 - t) / big;
        const double p0 = std::pow(r0, th_);
        const double p1 = std::pow(r1, th_);
        const double s = p0 + p1;
        const double s1 = std::pow(s, 1.0 / th_ - 1.0);
        a = big * s1 * s;
        da = s1 * (p0 / r0 - p1 / r1);
    }

    double d2A(double t) const override {
        if (th_ == 1.0) return 0.0;
        t = std::clamp(t, 1e-15, 1.0 - 1e-15);
        const double big = std::max(t, 1.0 - t);
        const double r0 = t / big;
        const double r1 = (1.0 - t) / big;
        const double p0 = std::pow(r0, th_);
        const double p1 = std::pow(r1, th_);
        const double s = p0 + p1;
        const double s1 = std::pow(s, 1.0 / th_ - 1.0);
        const double g = p0 / r0 - p1 / r1;
        return (th_ - 1.0) / big * (s1 * (p0 / (r0 * r0) + p1 / (r1 * r1)) - s1 / s * g * g);
    }

private:
    double th_;
};

// Galambos: A(t) = 1 - (t^-theta + (1-t)^-theta)^(-1/theta), theta > 0.
class GalambosPickands final : public PickandsFn {
public:
    explicit GalambosPickands(double theta) : th_(theta) {}

    double A(double t) const override {
        if (t <= 0.0 || t >= 1.0) return 1.0;
        const double m = std::min(t, 1.0 - t);
        const double r = m / std::max(t, 1.0 - t);
        const double hr = 1.0 + std::pow(r, th_);
        return 1.0 - m * std::pow(hr, -1.0 / th_);
    }

    double dA(double t) const override {
        double a, da;
        eval(t, a, da);
        return da;
    }

    void eval(double t, double& a, double& da) const override {
        t = std::clamp(t, 1e-15, 1.0 - 1e-15);
        const double m = std::min(t, 1.0 - t);
        const double r = m / std::max(t, 1.0 - t);
        const double rt = std::pow(r, th_);
        const double hr = 1.0 + rt;
        const double b = std::pow(hr, -1.0 / th_);
        a = 1.0 - m * b;
        const double gr = (t < 0.5) ? rt * r - 1.0 : 1.0 - rt * r;
        da = b / hr * gr;
    }

    double d2A(double t) const override {
        t = std::clamp(t, 1e-15, 1.0 - 1e-15);
        const double m = std::min(t, 1.0 - t);
        const double r = m / std::max(t, 1.0 - t);
        const double rt = std::pow(r, th_);
        const double hr = 1.0 + rt;
        const double b = std::pow(hr, -1.0 / th_);
        const double gr = (t < 0.5) ? rt * r - 1.0 : 1.0 - rt * r;
        const double qr = 1.0 + rt * r * r;
        return (th_ + 1.0) / m * (b / hr) * (qr - gr * gr / hr);
    }

private:
    double th_;
};

// Huesler-Reiss: A(t) = t Phi(z+) + (1-t) Phi(z-) with
// z+- = 1/theta +- (theta/2) log(t/(1-t)), theta > 0.
class HuslerReissPickands final : public PickandsFn {
public:
    explicit HuslerReissPickands(double theta) : th_(theta) {}

    double A(double t) const override {
        if (t <= 0.0 || t >= 1.0) return 1.0;
        const double L = std::log(t / (1.0 - t));
        return t * norm_cdf(1.0 / th_ + 0.5 * th_ * L) +
               (1.0 - t) * norm_cdf(1.0 / th_ - 0.5 * th_ * L);
    }

    // The normal-density terms of the product rule cancel exactly because
    // phi(z+)/phi(z-) = (1-t)/t.
    double dA(double t) const override {
        t = std::clamp(t, 1e-15, 1.0 - 1e-15);
        const double L = std::log(t / (1.0 - t));
        return norm_cdf(1.0 / th_ + 0.5 * th_ * L) - norm_cdf(1.0 / th_ - 0.5 * th_ * L);
    }

    double d2A(double t) const override {
        t = std::clamp(t, 1e-15, 1.0 - 1e-15);
        const double L = std::log(t / (1.0 - t));
        const double zp = 1.0 / th_ + 0.5 * th_ * L;
        const double zm = 1.0 / th_ - 0.5 * th_ * L;
        return 0.5 * th_ * (norm_pdf(zp) + norm_pdf(zm)) / (t * (1.0 - t));
    }

private:
    double th_;
};

// Student extreme-value copula with nu = 4 degrees of freedom and
// correlation rho: A(w) = w T(z(w)) + (1-w) T(z(1-w)) where T is the
// Student CDF with nu+1 degrees of freedom and
// z(w) = sqrt((nu+1)/(1-rho^2)) ((w/(1-w))^(1/nu) - rho).
class TevPickands final : public PickandsFn {
public:
    explicit TevPickands(double rho) : rho_(rho), c_(std::sqrt((kNu + 1.0) / (1.0 - rho * rho))) {}

    double A(double t) const override {
        if (t <= 0.0 || t >= 1.0) return 1.0;
        return t * student_t_cdf(z(t), kNu + 1.0) +
               (1.0 - t) * student_t_cdf(z(1.0 - t), kNu + 1.0);
    }

    double dA(double t) const override {
        t = std::clamp(t, 1e-15, 1.0 - 1e-15);
        const double zw = z(t);
        const double zb = z(1.0 - t);
        return student_t_cdf(zw, kNu + 1.0) - student_t_cdf(zb, kNu + 1.0) +
               t * student_t_pdf(zw, kNu + 1.0) * zprime(t) -
               (1.0 - t) * student_t_pdf(zb, kNu + 1.0) * zprime(1.0 - t);
    }

private:
    static constexpr double kNu = 4.0;

    double z(double w) const { return c_ * (std::pow(w / (1.0 - w), 1.0 / kNu) - rho_); }

    double zprime(double w) const {
        return c_ / kNu * std::pow(w, 1.0 / kNu - 1.0) * std::pow(1.0 - w, -1.0 / kNu - 1.0);
    }

    double rho_;
    double c_;
};

// Khoudraji transform of an extreme-value base:
// A(t) = (1-kappa) t + (1-lambda)(1-t) + D A_b(m),
// D = kappa t + lambda (1-t), m = kappa t / D.
class KhoudrajiPickands final : public PickandsFn {
public:
    KhoudrajiPickands(std::unique_ptr<const PickandsFn> base, double lambda, double kappa)
        : base_(std::move(base)), la_(lambda), ka_(kappa) {}

    double A(double t) const override {
        if (t <= 0.0) return 1.0;
        if (t >= 1.0) return 1.0;
        const double d = ka_ * t + la_ * (1.0 - t);
        return (1.0 - ka_) * t + (1.0 - la_) * (1.0 - t) + d * base_->A(ka_ * t / d);
    }

    double dA(double t) const override {
        double a, da;
        eval(t, a, da);
        return da;
    }

    void eval(double t, double& a, double& da) const override {
        t = std::clamp(t, 1e-15, 1.0 - 1e-15);
        const double d = ka_ * t + la_ * (1.0 - t);
        const double m = ka_ * t / d;
        double ab, dab;
        base_->eval(m, ab, dab);
        a = (1.0 - ka_) * t + (1.0 - la_) * (1.0 - t) + d * ab;
        da = (la_ - ka_) * (1.0 - ab) + ka_ * la_ * dab / d;
    }

    double d2A(double t) const override {
        t = std::clamp(t, 1e-15, 1.0 - 1e-15);
        const double d = ka_ * t + la_ * (1.0 - t);
        const double m = ka_ * t / d;
        const double kl = ka_ * la_;
        return kl * kl * base_->d2A(m) / (d * d * d);
    }

private:
    std::unique_ptr<const PickandsFn> base_;
    double la_;
    double ka_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Copula base defaults
// ---------------------------------------------------------------------------

double Copula::inv_cond_v_given_u(double u, double p) const {
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cond_v_given_u(u, mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

double cond_u_given_v_generic(const Copula& c, double u, double v) {
    // All symmetric families: dC/dv (u,v) = dC/du (v,u).
    return c.cond_v_given_u(v, u);
}

}  // namespace

double Copula::kendall_tau() const {
    // tau = 1 - 4 int int dC/du dC/dv du dv on a 128x128 Gauss-Legendre grid.
    const GaussLegendre& rule = gauss_legendre(128);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const double u = 0.5 * (1.0 + rule.x[i]);
        for (std::size_t j = 0; j < rule.x.size(); ++j) {
            const double v = 0.5 * (1.0 + rule.x[j]);
            sum += rule.w[i] * rule.w[j] * cond_v_given_u(u, v) *
                   cond_u_given_v_generic(*this, u, v);
        }
    }
    return 1.0 - 4.0 * 0.25 * sum;
}

double Copula::spearman_rho() const {
    const GaussLegendre& rule = gauss_legendre(64);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const double u = 0.5 * (1.0 + rule.x[i]);
        for (std::size_t j = 0; j < rule.x.size(); ++j) {
            const double v = 0.5 * (1.0 + rule.x[j]);
            sum += rule.w[i] * rule.w[j] * cdf(u, v);
        }
    }
    return 12.0 * 0.25 * sum - 3.0;
}

// ---------------------------------------------------------------------------
// Extreme-value copula from a Pickands function
// ---------------------------------------------------------------------------

namespace {

class EvCopula final : public Copula {
public:
    explicit EvCopula(std::unique_ptr<const PickandsFn> pick) : pick_(std::move(pick)) {}

    double cdf(double u, double v) const override {
        if (u <= 0.0 || v <= 0.0) return 0.0;
        if (u >= 1.0 && v >= 1.0) return 1.0;
        if (u >= 1.0) return v;
        if (v >= 1.0) return u;
        const double x = std::log(u);
        const double y = std::log(v);
        const double s = x + y;
        return std::exp(s * pick_->A(y / s));
    }

    double density(double u, double v) const override {
        require_interior(u, v);
        const double x = std::log(u);
        const double y = std::log(v);
        const double s = x + y;
        const double w = y / s;
        double a, da;
        pick_->eval(w, a, da);
        const double d2a = pick_->d2A(w);
        const double base = std::exp(s * a - x - y);
        const double val = base * ((a - w * da) * (a + (1.0 - w) * da) - w * (1.0 - w) * d2a / s);
        return std::max(val, 0.0);
    }

    double cond_v_given_u(double u, double v) const override {
        if (v <= 0.0) return 0.0;
        if (v >= 1.0) return 1.0;
        if (!interior01(u)) throw std::domain_error("conditioning value must be in (0,1)");
        const double x = std::log(u);
        const double y = std::log(v);
        const double s = x + y;
        const double w = y / s;
        double a, da;
        pick_->eval(w, a, da);
        return std::exp(s * a - x) * (a - w * da);
    }

    double kendall_tau() const override {
        // tau = int t(1-t)/A dA' integrated by parts:
        // tau = -int A'(t) [(1-2t) A(t) - t(1-t) A'(t)] / A(t)^2 dt.
        const auto edges = unit_panels_refined();
        return -integrate_panels(
            [&](double t) {
                double a, da;
                pick_->eval(t, a, da);
                return da * ((1.0 - 2.0 * t) * a - t * (1.0 - t) * da) / (a * a);
            },
            edges, 32);
    }

    // rho = -3 + 12 int C du dv; in polar-type coordinates the double
    // integral of an extreme-value copula collapses to int (1 + A(t))^-2 dt.
    double spearman_rho() const override {
        const auto edges = unit_panels_refined();
        return -3.0 + 12.0 * integrate_panels(
                                 [&](double t) {
                                     const double a = 1.0 + pick_->A(t);
                                     return 1.0 / (a * a);
                                 },
                                 edges, 32);
    }

    const PickandsFn* pickands() const override { return pick_.get(); }

private:
    std::unique_ptr<const PickandsFn> pick_;
};

// ---------------------------------------------------------------------------
// Non-extreme-value families
// ---------------------------------------------------------------------------

class ClaytonCopula final : public Copula {
public:
    explicit ClaytonCopula(double theta) : th_(theta) {}

    double cdf(double u, double v) const override {
        if (u <= 0.0 || v <= 0.0) return 0.0;
        if (u >= 1.0) return std::min(v, 1.0);
        if (v >= 1.0) return u;
        if (th_ < kIndep) return u * v;
        const double s = std::expm1(-th_ * std::log(u)) + std::expm1(-th_ * std::log(v)) + 1.0;
        return std::pow(s, -1.0 / th_);
    }

    double density(double u, double v) const override {
        require_interior(u, v);
        if (th_ < kIndep) return 1.0;
        const double lu = std::log(u);
        const double lv = std::log(v);
        const double ls = std::log(std::expm1(-th_ * lu) + std::expm1(-th_ * lv) + 1.0);
        return std::exp(std::log1p(th_) - (th_ + 1.0) * (lu + lv) - (1.0 / th_ + 2.0) * ls);
    }

    double cond_v_given_u(double u, double v) const override {
        if (v <= 0.0) return 0.0;
        if (v >= 1.0) return 1.0;
        if (th_ < kIndep) return v;
        const double lu = std::log(u);
        const double ls = std::log(std::expm1(-th_ * lu) + std::expm1(-th_ * std::log(v)) + 1.0);
        return std::exp(-(th_ + 1.0) * lu - (1.0 / th_ + 1.0) * ls);
    }

    double inv_cond_v_given_u(double u, double p) const override {
        if (th_ < kIndep) return p;
        const double t1 = std::expm1(-th_ / (1.0 + th_) * std::log(p));
        const double arg = 1.0 + std::pow(u, -th_) * t1;
        return std::pow(arg, -1.0 / th_);
    }

    double kendall_tau() const override { return th_ / (th_ + 2.0); }

private:
    static constexpr double kIndep = 1e-8;
    double th_;
};

class FrankCopula final : public Copula {
public:
    explicit FrankCopula(double theta) : th_(theta), g1_(std::expm1(-theta)) {}

    double cdf(double u, double v) const override {
        if (u <= 0.0 || v <= 0.0) return 0.0;
        if (u >= 1.0) return std::min(v, 1.0);
        if (v >= 1.0) return u;
        if (indep()) return u * v;
        return -std::log1p(g(u) * g(v) / g1_) / th_;
    }

    double density(double u, double v) const override {
        require_interior(u, v);
        if (indep()) return 1.0;
        const double den = g1_ + g(u) * g(v);
        return -th_ * g1_ * std::exp(-th_ * (u + v)) / (den * den);
    }

    double cond_v_given_u(double u, double v) const override {
        if (v <= 0.0) return 0.0;
        if (v >= 1.0) return 1.0;
        if (indep()) return v;
        return std::exp(-th_ * u) * g(v) / (g1_ + g(u) * g(v));
    }

    double inv_cond_v_given_u(double u, double p) const override {
        if (indep()) return p;
        const double gv = p * g1_ / (std::exp(-th_ * u) - p * g(u));
        return -std::log1p(gv) / th_;
    }

    double kendall_tau() const override {
        if (indep()) return th_ / 9.0;
        return 1.0 - 4.0 / th_ * (1.0 - debye1(th_));
    }

private:
    bool indep() const { return std::fabs(th_) < 1e-8; }
    double g(double z) const { return std::expm1(-th_ * z); }

    double th_;
    double g1_;
};

class NormalCopula final : public Copula {
public:
    explicit NormalCopula(double rho) : rho_(rho), a_(std::sqrt(1.0 - rho * rho)) {}

    double cdf(double u, double v) const override {
        if (u <= 0.0 || v <= 0.0) return 0.0;
        if (u >= 1.0) return std::min(v, 1.0);
        if (v >= 1.0) return u;
        return binorm_cdf(norm_quantile(u), norm_quantile(v), rho_);
    }

    double density(double u, double v) const override {
        require_interior(u, v);
        const double x = norm_quantile(u);
        const double y = norm_quantile(v);
        const double e = -(rho_ * rho_ * (x * x + y * y) - 2.0 * rho_ * x * y) / (2.0 * a_ * a_);
        return std::exp(e) / a_;
    }

    double cond_v_given_u(double u, double v) const override {
        if (v <= 0.0) return 0.0;
        if (v >= 1.0) return 1.0;
        return norm_cdf((norm_quantile(v) - rho_ * norm_quantile(u)) / a_);
    }

    double inv_cond_v_given_u(double u, double p) const override {
        return norm_cdf(rho_ * norm_quantile(u) + a_ * norm_quantile(p));
    }

    double kendall_tau() const override { return 2.0 * std::asin(rho_) / std::numbers::pi; }

    double spearman_rho() const override {
        return 6.0 * std::asin(0.5 * rho_) / std::numbers::pi;
    }

private:
    double rho_;
    double a_;
};

class PlackettCopula final : public Copula {
public:
    explicit PlackettCopula(double theta) : th_(theta) {}

    double cdf(double u, double v) const override {
        if (u <= 0.0 || v <= 0.0) return 0.0;
        if (u >= 1.0) return std::min(v, 1.0);
        if (v >= 1.0) return u;
        if (indep()) return u * v;
        const double em = th_ - 1.0;
        const double b = 1.0 + em * (u + v);
        const double d = std::sqrt(std::max(b * b - 4.0 * th_ * em * u * v, 0.0));
        return 0.5 * (b - d) / em;
    }

    double density(double u, double v) const override {
        require_interior(u, v);
        if (indep()) return 1.0;
        const double em = th_ - 1.0;
        const double b = 1.0 + em * (u + v);
        const double d = std::max(b * b - 4.0 * th_ * em * u * v, 0.0);
        return th_ * (1.0 + em * (u + v - 2.0 * u * v)) / std::pow(d, 1.5);
    }

    double cond_v_given_u(double u, double v) const override {
        if (v <= 0.0) return 0.0;
        if (v >= 1.0) return 1.0;
        if (indep()) return v;
        const double em = th_ - 1.0;
        const double b = 1.0 + em * (u + v);
        const double d = std::sqrt(std::max(b * b - 4.0 * th_ * em * u * v, 0.0));
        return 0.5 * (1.0 - (b - 2.0 * th_ * v) / d);
    }

    double spearman_rho() const override {
        if (indep()) return 0.0;
        const double em = th_ - 1.0;
        return (th_ + 1.0) / em - 2.0 * th_ * std::log(th_) / (em * em);
    }

private:
    bool indep() const { return std::fabs(th_ - 1.0) < 1e-8; }
    double th_;
};

class FgmCopula final : public Copula {
public:
    explicit FgmCopula(double theta) : th_(theta) {}

    double cdf(double u, double v) const override {
        if (u <= 0.0 || v <= 0.0) return 0.0;
        u = std::min(u, 1.0);
        v = std::min(v, 1.0);
        return u * v * (1.0 + th_ * (1.0 - u) * (1.0 - v));
    }

    double density(double u, double v) const override {
        require_interior(u, v);
        return 1.0 + th_ * (1.0 - 2.0 * u) * (1.0 - 2.0 * v);
    }

    double cond_v_given_u(double u, double v) const override {
        if (v <= 0.0) return 0.0;
        if (v >= 1.0) return 1.0;
        return v + th_ * (1.0 - 2.0 * u) * v * (1.0 - v);
    }

    double inv_cond_v_given_u(double u, double p) const override {
        const double b = th_ * (1.0 - 2.0 * u);
        if (std::fabs(b) < 1e-12) return p;
        const double disc = (1.0 + b) * (1.0 + b) - 4.0 * b * p;
        return 2.0 * p / (1.0 + b + std::sqrt(std::max(disc, 0.0)));
    }

    double kendall_tau() const override { return 2.0 * th_ / 9.0; }

    double spearman_rho() const override { return th_ / 3.0; }

private:
    double th_;
};

// ---------------------------------------------------------------------------
// Model validation and construction
// ---------------------------------------------------------------------------

double scalar_theta(const CopulaModel& model) {
    if (model.theta.size() != 1) {
        throw std::domain_error(model_name(model) + ": expected a single parameter");
    }
    const double th = model.theta[0];
    if (!std::isfinite(th)) throw std::domain_error("non-finite copula parameter");
    return th;
}

void validate_theta(Family family, double th) {
    switch (family) {
        case Family::GumbelHougaard:
            if (th < 1.0) throw std::domain_error("gh: theta must be >= 1");
            break;
        case Family::Galambos:
        case Family::HuslerReiss:
        case Family::Plackett:
            if (th <= 0.0)
                throw std::domain_error(family_name(family) + ": theta must be > 0");
            break;
        case Family::Clayton:
            if (th <= 0.0) throw std::domain_error("clayton: theta must be > 0");
            break;
        case Family::TEV4:
        case Family::Normal:
            if (th <= -1.0 || th >= 1.0)
                throw std::domain_error(family_name(family) + ": rho must be in (-1,1)");
            break;
        case Family::Frank:
            break;  // any finite theta; 0 is the independence limit
        case Family::FGM:
            if (th < -1.0 || th > 1.0)
                throw std::domain_error("fgm: theta must be in [-1,1]");
            break;
    }
}

std::unique_ptr<const PickandsFn> make_pickands(Family family, double theta) {
    switch (family) {
        case Family::GumbelHougaard: return std::make_unique<GhPickands>(theta);
        case Family::Galambos: return std::make_unique<GalambosPickands>(theta);
        case Family::HuslerReiss: return std::make_unique<HuslerReissPickands>(theta);
        case Family::TEV4: return std::make_unique<TevPickands>(theta);
        default:
            throw UnsupportedError(family_name(family) + " is not an extreme-value family");
    }
}

}  // namespace

std::unique_ptr<const Copula> make_ev_copula(std::unique_ptr<const PickandsFn> pickands) {
    return std::make_unique<EvCopula>(std::move(pickands));
}

std::unique_ptr<const Copula> make_copula(const CopulaModel& model) {
    const double th = scalar_theta(model);
    validate_theta(model.family, th);
    if (model.asym) {
        if (!is_extreme_value(model.family)) {
            throw UnsupportedError("Khoudraji transform is supported for extreme-value bases");
        }
        const double la = model.asym->lambda;
        const double ka = model.asym->kappa;
        if (!(la > 0.0 && la < 1.0 && ka > 0.0 && ka < 1.0)) {
            throw std::domain_error("asymmetry parameters must lie in (0,1)");
        }
        return std::make_unique<EvCopula>(std::make_unique<KhoudrajiPickands>(
            make_pickands(model.family, th), la, ka));
    }
    switch (model.family) {
        case Family::GumbelHougaard:
        case Family::Galambos:
        case Family::HuslerReiss:
        case Family::TEV4:
            return std::make_unique<EvCopula>(make_pickands(model.family, th));
        case Family::Clayton: return std::make_unique<ClaytonCopula>(th);
        case Family::Frank: return std::make_unique<FrankCopula>(th);
        case Family::Normal: return std::make_unique<NormalCopula>(th);
        case Family::Plackett: return std::make_unique<PlackettCopula>(th);
        case Family::FGM: return std::make_unique<FgmCopula>(th);
    }
    throw std::logic_error("unreachable family tag");
}

// ---------------------------------------------------------------------------
// Model-level operations
// ---------------------------------------------------------------------------

double pickands_value(const CopulaModel& model, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("pickands_value: t must be in [0,1]");
    if (!is_extreme_value(model.family)) {
        throw UnsupportedError(model_name(model) + " has no Pickands dependence function");
    }
    if (t == 0.0 || t == 1.0) {
        scalar_theta(model);  // still validate
        return 1.0;
    }
    return make_copula(model)->pickands()->A(t);
}

double cdf(const CopulaModel& model, double u, double v) {
    if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
        throw std::domain_error("cdf: arguments must lie in [0,1]");
    }
    return make_copula(model)->cdf(u, v);
}

double density(const CopulaModel& model, double u, double v) {
    return make_copula(model)->density(u, v);
}

std::vector<std::pair<double, double>> sample(const Copula& copula, std::size_t n,
                                              std::uint64_t seed) {
    Philox rng(seed);
    std::vector<std::pair<double, double>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        const double p = rng.uniform01();
        double v = copula.inv_cond_v_given_u(u, p);
        v = std::clamp(v, 1e-15, 1.0 - 1e-15);
        out.emplace_back(u, v);
    }
    return out;
}

std::vector<std::pair<double, double>> sample(const CopulaModel& model, std::size_t n,
                                              std::uint64_t seed) {
    return sample(*make_copula(model), n, seed);
}

double tau_of_theta(const CopulaModel& model) {
    if (model.asym) return make_copula(model)->kendall_tau();
    const double th = scalar_theta(model);
    validate_theta(model.family, th);
    switch (model.family) {
        case Family::GumbelHougaard: return 1.0 - 1.0 / th;
        case Family::Clayton: return th / (th + 2.0);
        case Family::Normal: return 2.0 * std::asin(th) / std::numbers::pi;
        case Family::FGM: return 2.0 * th / 9.0;
        default: return make_copula(model)->kendall_tau();
    }
}

double rho_of_theta(const CopulaModel& model) {
    if (model.asym) return make_copula(model)->spearman_rho();
    scalar_theta(model);
    return make_copula(model)->spearman_rho();
}

namespace {

// Parameter grid over which a scalar family's dependence measure is tabled.
std::vector<double> theta_grid(Family family) {
    std::vector<double> grid;
    auto geometric = [&grid](double lo, double hi, int n) {
        const double step = std::log(hi / lo) / (n - 1);
        for (int i = 0; i < n; ++i) grid.push_back(lo * std::exp(i * step));
    };
    switch (family) {
        case Family::GumbelHougaard: {
            // theta = 1/(1-x) spacing concentrates points where tau moves fast
            for (int i = 0; i <= 160; ++i) {
                const double x = i / 161.0;
                grid.push_back(1.0 / (1.0 - x * 0.9999));
            }
            break;
        }
        case Family::Galambos: geometric(1e-3, 60.0, 181); break;
        case Family::HuslerReiss: geometric(1e-3, 80.0, 181); break;
        case Family::Clayton: geometric(1e-4, 2e4, 181); break;
        case Family::Plackett: geometric(1e-4, 1e6, 181); break;
        case Family::Frank: {
            for (int i = -120; i <= 120; ++i) {
                if (i == 0) continue;
                grid.push_back(i > 0 ? std::exp(i * 0.05) - 1.0 : -(std::exp(-i * 0.05) - 1.0));
            }
            std::sort(grid.begin(), grid.end());
            break;
        }
        case Family::TEV4:
        case Family::Normal: {
            for (int i = -75; i <= 75; ++i) grid.push_back(std::tanh(i * 0.09));
            break;
        }
        case Family::FGM: {
            for (int i = -100; i <= 100; ++i) grid.push_back(i / 100.0);
            break;
        }
    }
    return grid;
}

struct MeasureTable {
    std::vector<double> theta;
    std::vector<double> value;  // ascending
};

MeasureTable build_table(Family family, const std::function<double(double)>& measure) {
    MeasureTable table;
    for (double th : theta_grid(family)) {
        const double m = measure(th);
        if (!std::isfinite(m)) continue;
        if (!table.value.empty() && m <= table.value.back()) continue;  // enforce monotone
        table.theta.push_back(th);
        table.value.push_back(m);
    }
    return table;
}

// Solve measure(theta) = target on a bracket from the table, refining with
// secant steps guarded by bisection.
double invert_measure(const MeasureTable& table, const std::function<double(double)>& measure,
                      double target, const std::string& what) {
    if (table.value.empty()) throw RangeError(what + ": empty inversion table");
    if (target < table.value.front() || target > table.value.back()) {
        throw RangeError(what + ": value outside the attainable range");
    }
    auto it = std::lower_bound(table.value.begin(), table.value.end(), target);
    std::size_t j = static_cast<std::size_t>(it - table.value.begin());
    if (j == 0) j = 1;
    double lo = table.theta[j - 1];
    double hi = table.theta[j];
    double flo = table.value[j - 1] - target;
    double fhi = table.value[j] - target;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    double x = lo;
    for (int it2 = 0; it2 < 100; ++it2) {
        x = (std::fabs(fhi - flo) > 1e-300) ? lo - flo * (hi - lo) / (fhi - flo)
                                            : 0.5 * (lo + hi);
        if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        const double fx = measure(x) - target;
        if (std::fabs(fx) < 1e-9 || hi - lo < 1e-13 * (1.0 + std::fabs(x))) return x;
        if ((fx < 0.0) == (flo < 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    return x;
}

const MeasureTable& tau_table(Family family) {
    static std::mutex mutex;
    static std::map<Family, MeasureTable> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(family);
    if (it == cache.end()) {
        auto measure = [family](double th) {
            return tau_of_theta(CopulaModel{family, {th}, std::nullopt});
        };
        it = cache.emplace(family, build_table(family, measure)).first;
    }
    return it->second;
}

const MeasureTable& rho_table(Family family) {
    static std::mutex mutex;
    static std::map<Family, MeasureTable> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(family);
    if (it == cache.end()) {
        auto measure = [family](double th) {
            return rho_of_theta(CopulaModel{family, {th}, std::nullopt});
        };
        it = cache.emplace(family, build_table(family, measure)).first;
    }
    return it->second;
}

}  // namespace

std::pair<double, double> tau_range(Family family) {
    switch (family) {
        case Family::GumbelHougaard: return {0.0, 0.9999};
        case Family::Clayton: return {1e-8, 0.9999};
        case Family::Normal: return {-0.99999, 0.99999};
        case Family::FGM: return {-2.0 / 9.0, 2.0 / 9.0};
        case Family::Frank: return {-0.99, 0.99};
        default: {
            const MeasureTable& t = tau_table(family);
            return {t.value.front(), t.value.back()};
        }
    }
}

std::pair<double, double> rho_range(Family family) {
    switch (family) {
        case Family::Normal: return {-0.99999, 0.99999};
        case Family::FGM: return {-1.0 / 3.0, 1.0 / 3.0};
        default: {
            const MeasureTable& t = rho_table(family);
            return {t.value.front(), t.value.back()};
        }
    }
}

double theta_of_tau(Family family, double tau) {
    switch (family) {
        case Family::GumbelHougaard:
            if (tau >= 1.0) throw RangeError("gh: tau must be below 1");
            return std::max(1.0, 1.0 / (1.0 - tau));
        case Family::Clayton:
            if (tau <= 0.0 || tau >= 1.0) throw RangeError("clayton: tau must be in (0,1)");
            return 2.0 * tau / (1.0 - tau);
        case Family::Normal:
            if (tau <= -1.0 || tau >= 1.0) throw RangeError("normal: tau must be in (-1,1)");
            return std::sin(0.5 * std::numbers::pi * tau);
        case Family::FGM:
            if (std::fabs(tau) > 2.0 / 9.0 + 1e-15) {
                throw RangeError("fgm: |tau| must be at most 2/9");
            }
            return std::clamp(4.5 * tau, -1.0, 1.0);
        default: {
            auto measure = [family](double th) {
                return tau_of_theta(CopulaModel{family, {th}, std::nullopt});
            };
            return invert_measure(tau_table(family), measure, tau,
                                  family_name(family) + " tau");
        }
    }
}

double theta_of_rho(Family family, double rho) {
    switch (family) {
        case Family::Normal:
            if (rho <= -1.0 || rho >= 1.0) throw RangeError("normal: rho must be in (-1,1)");
            return 2.0 * std::sin(std::numbers::pi * rho / 6.0);
        case Family::FGM:
            if (std::fabs(rho) > 1.0 / 3.0 + 1e-15) {
                throw RangeError("fgm: |rho| must be at most 1/3");
            }
            return std::clamp(3.0 * rho, -1.0, 1.0);
        default: {
            auto measure = [family](double th) {
                return rho_of_theta(CopulaModel{family, {th}, std::nullopt});
            };
            return invert_measure(rho_table(family), measure, rho,
                                  family_name(family) + " rho");
        }
    }
}

double mo_tau_bound(double lambda, double kappa) {
    return kappa * lambda / (kappa + lambda - kappa * lambda);
}

}  // namespace evgof
