#include "evgof/fit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "evgof/errors.hpp"

namespace evgof {

namespace {

constexpr double kLogFloor = -745.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::string method_name(FitMethod method) {
    switch (method) {
        case FitMethod::ITau: return "itau";
        case FitMethod::IRho: return "irho";
        case FitMethod::Mpl: return "mpl";
    }
    return "?";
}

std::vector<std::string> flag_names(unsigned flags) {
    std::vector<std::string> out;
    if (flags & FitClampedLow) out.push_back("clamped-low");
    if (flags & FitClampedHigh) out.push_back("clamped-high");
    if (flags & FitUnderflow) out.push_back("density-underflow");
    if (flags & FitNoConvergence) out.push_back("no-convergence");
    return out;
}

std::pair<double, bool> pseudo_loglik(const Copula& copula, const PseudoSample& ps) {
    double sum = 0.0;
    bool floored = false;
    for (const auto& [u, v] : ps.pairs) {
        const double c = copula.density(u, v);
        double term;
        if (!(c > 0.0) || !std::isfinite(c)) {
            term = kLogFloor;
            floored = true;
        } else {
            term = std::log(c);
            if (term < kLogFloor) {
                term = kLogFloor;
                floored = true;
            }
        }
        sum += term;
    }
    return {sum, floored};
}

namespace {

double clamp_measure(double value, std::pair<double, double> range, unsigned& flags) {
    if (value < range.first) {
        flags |= FitClampedLow;
        return range.first;
    }
    if (value > range.second) {
        flags |= FitClampedHigh;
        return range.second;
    }
    return value;
}

void require_scalar(const CopulaModel& prototype, const char* op) {
    if (prototype.asym) {
        throw UnsupportedError(std::string(op) +
                               " requires a scalar parameter; use mpl for asymmetric models");
    }
}

// Brent local minimization without derivatives on [lo, hi].
double brent_min(const std::function<double(double)>& f, double lo, double hi, double tol,
                 int max_iter, int& iterations, bool& converged) {
    constexpr double golden = 0.3819660112501051;
    double a = lo, b = hi;
    double x = a + golden * (b - a);
    double w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    converged = false;
    int it = 0;
    for (; it < max_iter; ++it) {
        const double xm = 0.5 * (a + b);
        const double tol1 = tol * std::fabs(x) + 1e-11;
        const double tol2 = 2.0 * tol1;
        if (std::fabs(x - xm) <= tol2 - 0.5 * (b - a)) {
            converged = true;
            break;
        }
        bool parabolic = false;
        if (std::fabs(e) > tol1) {
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::fabs(q);
            const double etemp = e;
            e = d;
            if (std::fabs(p) < std::fabs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
                parabolic = true;
                d = p / q;
                const double u2 = x + d;
                if (u2 - a < tol2 || b - u2 < tol2) d = (xm >= x) ? tol1 : -tol1;
            }
        }
        if (!parabolic) {
            e = (x >= xm) ? a - x : b - x;
            d = golden * e;
        }
        const double u2 = (std::fabs(d) >= tol1) ? x + d : x + ((d >= 0.0) ? tol1 : -tol1);
        const double fu = f(u2);
        if (fu <= fx) {
            if (u2 >= x) a = x; else b = x;
            v = w; w = x; x = u2;
            fv = fw; fw = fx; fx = fu;
        } else {
            if (u2 < x) a = u2; else b = u2;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u2; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u2; fv = fu;
            }
        }
    }
    iterations = it;
    return x;
}

// Nelder-Mead in unrestricted coordinates.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> x0, double step, double tol, int max_iter,
                                int& iterations, bool& converged) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> fval(n + 1);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
    for (std::size_t i = 0; i <= n; ++i) fval[i] = f(simplex[i]);
    converged = false;
    int it = 0;
    for (; it < max_iter; ++it) {
        std::vector<std::size_t> order(n + 1);
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&fval](std::size_t a, std::size_t b) { return fval[a] < fval[b]; });
        const std::size_t best = order[0];
        const std::size_t worst = order[n];
        const std::size_t second = order[n - 1];
        double diam = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                diam = std::max(diam, std::fabs(simplex[i][k] - simplex[best][k]));
            }
        }
        if (std::fabs(fval[worst] - fval[best]) <= tol * (1.0 + std::fabs(fval[best])) &&
            diam < 1e-7) {
            converged = true;
            break;
        }
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / n;
        }
        auto blend = [&](double coef) {
            std::vector<double> p(n);
            for (std::size_t k = 0; k < n; ++k) {
                p[k] = centroid[k] + coef * (simplex[worst][k] - centroid[k]);
            }
            return p;
        };
        const std::vector<double> refl = blend(-1.0);
        const double frefl = f(refl);
        if (frefl < fval[best]) {
            const std::vector<double> exp2 = blend(-2.0);
            const double fexp = f(exp2);
            if (fexp < frefl) {
                simplex[worst] = exp2;
                fval[worst] = fexp;
            } else {
                simplex[worst] = refl;
                fval[worst] = frefl;
            }
        } else if (frefl < fval[second]) {
            simplex[worst] = refl;
            fval[worst] = frefl;
        } else {
            const std::vector<double> ctr = blend(frefl < fval[worst] ? -0.5 : 0.5);
            const double fctr = f(ctr);
            if (fctr < std::min(frefl, fval[worst])) {
                simplex[worst] = ctr;
                fval[worst] = fctr;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t k = 0; k < n; ++k) {
                        simplex[i][k] = 0.5 * (simplex[i][k] + simplex[best][k]);
                    }
                    fval[i] = f(simplex[i]);
                }
            }
        }
    }
    iterations = it;
    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        if (fval[i] < fval[best]) best = i;
    }
    return simplex[best];
}

struct ThetaMap {
    std::function<double(double)> to_unbounded;
    std::function<double(double)> from_unbounded;
};

ThetaMap theta_map(Family family) {
    switch (family) {
        case Family::GumbelHougaard:
            return {[](double th) { return std::log(std::max(th - 1.0, 1e-6)); },
                    [](double p) { return 1.0 + std::exp(std::min(p, 12.0)); }};
        case Family::TEV4:
        case Family::Normal:
            return {[](double th) { return std::atanh(std::clamp(th, -0.999999, 0.999999)); },
                    [](double p) { return std::tanh(p); }};
        case Family::FGM:
            return {[](double th) { return std::atanh(std::clamp(th, -0.999999, 0.999999)); },
                    [](double p) { return std::tanh(p); }};
        default:  // positive half-line families
            return {[](double th) { return std::log(std::max(th, 1e-8)); },
                    [](double p) { return std::exp(std::min(p, 12.0)); }};
    }
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

std::pair<double, double> mpl_bracket(Family family, double start) {
    switch (family) {
        case Family::GumbelHougaard: return {1.0, std::max(200.0, 4.0 * start)};
        case Family::Galambos:
        case Family::HuslerReiss: return {1e-6, std::max(100.0, 4.0 * start)};
        case Family::Clayton: return {1e-6, std::max(200.0, 4.0 * start)};
        case Family::Plackett: return {1e-5, std::max(1e5, 4.0 * start)};
        case Family::Frank: return {-std::max(200.0, 4.0 * std::fabs(start)),
                                    std::max(200.0, 4.0 * std::fabs(start))};
        case Family::TEV4:
        case Family::Normal: return {-0.99999, 0.99999};
        case Family::FGM: return {-1.0 + 1e-9, 1.0 - 1e-9};
    }
    return {1e-6, 100.0};
}

}  // namespace

FitResult fit_itau(const CopulaModel& prototype, const PseudoSample& ps) {
    require_scalar(prototype, "fit_itau");
    const double tau_n = sample_tau(ps);
    FitResult result;
    result.method = FitMethod::ITau;
    result.model = prototype;
    if (prototype.family == Family::GumbelHougaard) {
        // theta_n = max(1, 1/(1 - tau_n)); the max already clamps tau_n < 0.
        if (tau_n < 0.0) result.flags |= FitClampedLow;
        const double tau_c = clamp_measure(tau_n, tau_range(prototype.family), result.flags);
        result.model.theta = {std::max(1.0, 1.0 / (1.0 - tau_c))};
        return result;
    }
    const double tau_c = clamp_measure(tau_n, tau_range(prototype.family), result.flags);
    result.model.theta = {theta_of_tau(prototype.family, tau_c)};
    return result;
}

FitResult fit_irho(const CopulaModel& prototype, const PseudoSample& ps) {
    require_scalar(prototype, "fit_irho");
    const double rho_n = sample_rho(ps);
    FitResult result;
    result.method = FitMethod::IRho;
    result.model = prototype;
    const double rho_c = clamp_measure(rho_n, rho_range(prototype.family), result.flags);
    result.model.theta = {theta_of_rho(prototype.family, rho_c)};
    return result;
}

FitResult fit_mpl(const CopulaModel& prototype, const PseudoSample& ps,
                  const std::optional<std::vector<double>>& start, const FitOptions& options) {
    FitResult result;
    result.method = FitMethod::Mpl;
    result.model = prototype;
    bool floored = false;

    if (!prototype.asym) {
        double theta0;
        if (start && !start->empty()) {
            theta0 = (*start)[0];
        } else {
            theta0 = fit_itau(prototype, ps).model.theta[0];
        }
        auto objective = [&](double th) {
            CopulaModel m = prototype;
            m.theta = {th};
            try {
                const auto copula = make_copula(m);
                const auto [ll, fl] = pseudo_loglik(*copula, ps);
                if (fl) floored = true;
                return -ll;
            } catch (const std::domain_error&) {
                return kInf;
            }
        };
        auto [lo, hi] = mpl_bracket(prototype.family, theta0);
        bool converged = false;
        int iterations = 0;
        double best = brent_min(objective, lo, hi, options.tol, options.max_iter, iterations,
                                converged);
        double fbest = objective(best);
        if (options.multistart > 1) {
            for (int s = 1; s < options.multistart; ++s) {
                const double frac = static_cast<double>(s) / options.multistart;
                const double alt_lo = lo + frac * 0.25 * (hi - lo);
                const double alt_hi = hi - frac * 0.25 * (hi - lo);
                int it2 = 0;
                bool conv2 = false;
                const double cand =
                    brent_min(objective, alt_lo, alt_hi, options.tol, options.max_iter, it2, conv2);
                const double fcand = objective(cand);
                iterations += it2;
                if (fcand < fbest) {
                    best = cand;
                    fbest = fcand;
                    converged = conv2;
                }
            }
        }
        // Never report a point worse than the start.
        const double fstart = objective(theta0);
        if (fstart < fbest) {
            best = theta0;
            fbest = fstart;
        }
        result.model.theta = {best};
        result.loglik = -fbest;
        result.converged = converged;
        result.iterations = iterations;
        if (!converged) result.flags |= FitNoConvergence;
        if (floored) result.flags |= FitUnderflow;
        if (best - lo < 1e-7 * (1.0 + std::fabs(lo))) result.flags |= FitClampedLow;
        if (hi - best < 1e-7 * (1.0 + std::fabs(hi))) result.flags |= FitClampedHigh;
        return result;
    }

    // Khoudraji model: optimize (theta, lambda, kappa) jointly in transformed
    // coordinates; start at (itau theta of the base family, 0.5, 0.5).
    const ThetaMap map = theta_map(prototype.family);
    double theta0;
    double la0 = 0.5, ka0 = 0.5;
    if (start && start->size() == 3) {
        theta0 = (*start)[0];
        la0 = (*start)[1];
        ka0 = (*start)[2];
    } else {
        CopulaModel base = prototype;
        base.asym.reset();
        theta0 = fit_itau(base, ps).model.theta[0];
    }
    auto objective = [&](const std::vector<double>& p) {
        CopulaModel m = prototype;
        m.theta = {map.from_unbounded(p[0])};
        m.asym = Asymmetry{logistic(p[1]), logistic(p[2])};
        try {
            const auto copula = make_copula(m);
            const auto [ll, fl] = pseudo_loglik(*copula, ps);
            if (fl) floored = true;
            return -ll;
        } catch (const std::domain_error&) {
            return kInf;
        }
    };
    bool converged = false;
    int iterations = 0;
    std::vector<double> x0{map.to_unbounded(theta0), logit(la0), logit(ka0)};
    std::vector<double> best =
        nelder_mead(objective, x0, 0.5, options.tol, options.max_iter, iterations, converged);
    double fbest = objective(best);
    if (options.multistart > 1) {
        for (int s = 1; s < options.multistart; ++s) {
            std::vector<double> alt = x0;
            alt[0] += (s % 2 == 0 ? 1.0 : -1.0) * s;
            int it2 = 0;
            bool conv2 = false;
            const std::vector<double> cand =
                nelder_mead(objective, alt, 0.5, options.tol, options.max_iter, it2, conv2);
            const double fcand = objective(cand);
            iterations += it2;
            if (fcand < fbest) {
                best = cand;
                fbest = fcand;
                converged = conv2;
            }
        }
    }
    result.model.theta = {map.from_unbounded(best[0])};
    result.model.asym = Asymmetry{logistic(best[1]), logistic(best[2])};
    result.loglik = -fbest;
    result.converged = converged;
    result.iterations = iterations;
    if (!converged) result.flags |= FitNoConvergence;
    if (floored) result.flags |= FitUnderflow;
    return result;
}

FitResult fit(const CopulaModel& prototype, const PseudoSample& ps, FitMethod method,
              const FitOptions& options) {
    switch (method) {
        case FitMethod::ITau: return fit_itau(prototype, ps);
        case FitMethod::IRho: return fit_irho(prototype, ps);
        case FitMethod::Mpl: return fit_mpl(prototype, ps, std::nullopt, options);
    }
    throw std::logic_error("unreachable fit method");
}

}  // namespace evgof
