#include <doctest.h>

#include <cmath>

#include "evgof/special.hpp"
#include "oracles.hpp"

using namespace evgof;

TEST_CASE("normal quantile and CDF round-trip") {
    CHECK(norm_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(norm_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-13));
    CHECK(norm_quantile(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-13));
    for (double p = 1e-10; p < 1.0; p = p * 3.7 + 0.013) {
        CHECK(norm_cdf(norm_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
    }
}

TEST_CASE("normal CDF matches quadrature of the density") {
    for (double x : {-3.0, -1.0, -0.2, 0.0, 0.7, 2.5}) {
        const double ref =
            0.5 + oracles::adaptive_simpson([](double z) { return norm_pdf(z); }, 0.0, x, 1e-13);
        CHECK(norm_cdf(x) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("student t CDF with five degrees of freedom") {
    CHECK(student_t_cdf(0.0, 5.0) == doctest::Approx(0.5).epsilon(1e-15));
    // 95% quantile of t(5)
    CHECK(student_t_cdf(2.0150483733330242, 5.0) == doctest::Approx(0.95).epsilon(1e-12));
    CHECK(student_t_cdf(-2.0150483733330242, 5.0) == doctest::Approx(0.05).epsilon(1e-10));
    for (double x : {-4.0, -1.3, 0.4, 2.2}) {
        const double ref = 0.5 + oracles::adaptive_simpson(
                                     [](double z) { return student_t_pdf(z, 5.0); }, 0.0, x, 1e-13);
        CHECK(student_t_cdf(x, 5.0) == doctest::Approx(ref).epsilon(1e-11));
    }
}

TEST_CASE("incomplete beta symmetry") {
    for (double x : {0.05, 0.3, 0.62, 0.9}) {
        CHECK(inc_beta(2.0, 0.5, x) ==
              doctest::Approx(1.0 - inc_beta(0.5, 2.0, 1.0 - x)).epsilon(1e-13));
    }
    CHECK(inc_beta(1.0, 1.0, 0.37) == doctest::Approx(0.37).epsilon(1e-14));
}

TEST_CASE("bivariate normal CDF") {
    // Independence and exact special values.
    CHECK(binorm_cdf(0.3, -0.7, 0.0) ==
          doctest::Approx(norm_cdf(0.3) * norm_cdf(-0.7)).epsilon(1e-13));
    for (double rho : {-0.9, -0.4, 0.2, 0.5, 0.95}) {
        // Phi2(0,0,rho) = 1/4 + asin(rho)/(2 pi)
        CHECK(binorm_cdf(0.0, 0.0, rho) ==
              doctest::Approx(0.25 + std::asin(rho) / (2.0 * M_PI)).epsilon(1e-11));
    }
    // Margins.
    CHECK(binorm_cdf(20.0, 0.4, 0.6) == doctest::Approx(norm_cdf(0.4)).epsilon(1e-13));
    // Quadrature reference at general points.
    for (double rho : {-0.8, 0.3, 0.924}) {
        for (double x : {-1.2, 0.4}) {
            for (double y : {-0.3, 1.5}) {
                const double a = std::sqrt(1.0 - rho * rho);
                const double ref = oracles::adaptive_simpson(
                    [&](double z) { return norm_pdf(z) * norm_cdf((y - rho * z) / a); }, -9.0, x,
                    1e-12);
                CHECK(binorm_cdf(x, y, rho) == doctest::Approx(ref).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("debye function") {
    // Series D1(x) = 1 - x/4 + x^2/36 - ... for small x.
    CHECK(debye1(1e-6) == doctest::Approx(1.0 - 1e-6 / 4.0).epsilon(1e-12));
    const double x = 2.3;
    const double ref =
        oracles::adaptive_simpson([](double t) { return t / std::expm1(t); }, 1e-12, x, 1e-13) / x;
    CHECK(debye1(x) == doctest::Approx(ref).epsilon(1e-10));
    CHECK(debye1(-x) == doctest::Approx(debye1(x) + x / 2.0).epsilon(1e-12));
}
