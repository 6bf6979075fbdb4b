#include "evgof/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "evgof/quadrature.hpp"

namespace evgof {

double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double norm_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double norm_quantile(double p) {
    // AS 241 algorithm PPND16.
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        throw std::domain_error("norm_quantile: p outside [0,1]");
    }
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                     6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                   1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                 1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
               (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                     3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                   5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                 4.2313330701600911252e1) * r + 1.0);
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                  3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
                4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
                2.05319162663775882187e0) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
                5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0.0) ? -val : val;
}

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cf(double a, double b, double x) {
    constexpr int max_iter = 300;
    constexpr double eps = 1e-16;
    constexpr double fpmin = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace

double inc_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lbeta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    const double front = std::exp(lbeta + a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double x, double df) {
    if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
    const double ib = inc_beta(0.5 * df, 0.5, df / (df + x * x));
    return x >= 0.0 ? 1.0 - 0.5 * ib : 0.5 * ib;
}

double student_t_pdf(double x, double df) {
    const double lc = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
                      0.5 * std::log(df * std::numbers::pi);
    return std::exp(lc - 0.5 * (df + 1.0) * std::log1p(x * x / df));
}

double binorm_cdf(double x, double y, double rho) {
    if (rho <= -1.0) return std::max(0.0, norm_cdf(x) + norm_cdf(y) - 1.0);
    if (rho >= 1.0) return norm_cdf(std::min(x, y));
    if (std::isinf(x) || std::isinf(y)) {
        if (x == -std::numeric_limits<double>::infinity() ||
            y == -std::numeric_limits<double>::infinity())
            return 0.0;
        if (x == std::numeric_limits<double>::infinity()) return norm_cdf(y);
        return norm_cdf(x);
    }
    // Conditioning integral: P(X<=x, Y<=y) = int_{-inf}^{x} phi(z) Phi((y-rho z)/a) dz,
    // truncated where phi is negligible.  When |rho| is large the inner Phi is a
    // near-step near z* = y/rho, so panel edges are placed around z*.
    const double a = std::sqrt(1.0 - rho * rho);
    const double lo = -8.7;
    if (x <= lo) return 0.0;
    const double hi = std::min(x, 8.7);
    std::vector<double> edges{lo, hi};
    for (double e : {-6.0, -4.0, -2.0, 0.0, 2.0, 4.0, 6.0}) {
        if (e > lo && e < hi) edges.push_back(e);
    }
    if (std::fabs(rho) > 0.5) {
        const double zs = y / rho;
        for (double e : {zs - 8 * a, zs - 3 * a, zs - a, zs, zs + a, zs + 3 * a, zs + 8 * a}) {
            if (e > lo && e < hi) edges.push_back(e);
        }
    }
    std::sort(edges.begin(), edges.end());
    const double inner = integrate_panels(
        [&](double z) { return norm_pdf(z) * norm_cdf((y - rho * z) / a); }, edges, 32);
    double result = inner;
    if (x > 8.7) result += norm_cdf(y) * (1.0 - norm_cdf(8.7));
    return std::min(1.0, std::max(0.0, result));
}

double debye1(double x) {
    const double ax = std::fabs(x);
    if (ax < 1e-12) return 1.0;
    // Integrand t/expm1(t) is smooth on (0, x]; nodes never hit 0.
    const double integral = integrate_gl(
        [](double t) { return t / std::expm1(t); }, 0.0, ax, 128);
    const double d = integral / ax;
    // D1(-x) = D1(x) + x/2.
    return x > 0 ? d : d + ax / 2.0;
}

}  // namespace evgof
