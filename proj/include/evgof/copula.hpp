#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace evgof {

enum class Family {
    GumbelHougaard,
    Galambos,
    HuslerReiss,
    TEV4,  // Student extreme-value copula with four degrees of freedom
    Clayton,
    Frank,
    Normal,
    Plackett,
    FGM,
};

/// Khoudraji asymmetrization exponents, both in (0,1):
/// C_{lambda,kappa}(u,v) = u^{1-lambda} v^{1-kappa} C(u^lambda, v^kappa).
struct Asymmetry {
    double lambda;
    double kappa;
};

/// Value type identifying a copula: family tag, parameter vector and an
/// optional Khoudraji transform.  All scalar families here carry one theta.
struct CopulaModel {
    Family family = Family::GumbelHougaard;
    std::vector<double> theta;
    std::optional<Asymmetry> asym;
};

bool is_extreme_value(Family family);
std::string family_name(Family family);
std::string model_name(const CopulaModel& model);

/// Pickands dependence function with first and second derivatives.
class PickandsFn {
public:
    virtual ~PickandsFn() = default;
    virtual double A(double t) const = 0;
    virtual double dA(double t) const = 0;
    /// Second derivative; default is a central difference of dA (h = 1e-6).
    virtual double d2A(double t) const;
    /// A and dA together (overridden where they share subexpressions).
    virtual void eval(double t, double& a, double& da) const {
        a = A(t);
        da = dA(t);
    }
};

/// A bivariate copula: CDF, density, conditional distribution and the pieces
/// needed for rank-based inference.  All implementations are immutable and
/// safe to share across threads.
class Copula {
public:
    virtual ~Copula() = default;

    virtual double cdf(double u, double v) const = 0;
    /// Density on the open square; boundary arguments are a domain error.
    virtual double density(double u, double v) const = 0;
    /// Conditional distribution dC/du (u,v), the CDF of V given U = u.
    virtual double cond_v_given_u(double u, double v) const = 0;

    /// Solve cond_v_given_u(u, v) = p for v.  The default is 40 plain
    /// bisection steps on (0,1), giving |error| <= 2^-40 < 1e-12.
    virtual double inv_cond_v_given_u(double u, double p) const;

    virtual double kendall_tau() const;    // default: 1 - 4 int dC/du dC/dv
    virtual double spearman_rho() const;   // default: 12 int C - 3

    /// Pickands dependence function, or nullptr for non-extreme-value models.
    virtual const PickandsFn* pickands() const { return nullptr; }
};

/// Build the copula implementation for a model (validates parameters).
std::unique_ptr<const Copula> make_copula(const CopulaModel& model);

/// Extreme-value copula defined by an arbitrary Pickands function via the
/// representation C(u,v) = exp[log(uv) A(log v / log(uv))].
std::unique_ptr<const Copula> make_ev_copula(std::unique_ptr<const PickandsFn> pickands);

// ---------------------------------------------------------------------------
// Model-level operations
// ---------------------------------------------------------------------------

/// A_theta(t) for extreme-value models (exact 1 at t = 0 and t = 1).
double pickands_value(const CopulaModel& model, double t);

double cdf(const CopulaModel& model, double u, double v);
double density(const CopulaModel& model, double u, double v);

/// n i.i.d. pairs with copula `model`, by the conditional distribution
/// method; deterministic given the seed.
std::vector<std::pair<double, double>> sample(const CopulaModel& model, std::size_t n,
                                              std::uint64_t seed);
std::vector<std::pair<double, double>> sample(const Copula& copula, std::size_t n,
                                              std::uint64_t seed);

/// Kendall's tau of the model; closed form where known, numeric otherwise.
double tau_of_theta(const CopulaModel& model);

/// Scalar theta with tau_of_theta == tau (residual below 1e-8).
/// Throws RangeError when tau is outside the family's attainable range.
double theta_of_tau(Family family, double tau);

/// Attainable tau range [lo, hi] of a scalar family.
std::pair<double, double> tau_range(Family family);

/// Attainable Spearman rho range [lo, hi] of a scalar family.
std::pair<double, double> rho_range(Family family);

/// Spearman's rho; for extreme-value models via -1 + int 1/A(t)^2 dt.
double rho_of_theta(const CopulaModel& model);

/// Scalar theta with rho_of_theta == rho (bracketed root-finding).
double theta_of_rho(Family family, double rho);

/// Upper bound kappa*lambda / (kappa + lambda - kappa*lambda) on Kendall's
/// tau of a Khoudraji-transformed model (the Marshall-Olkin bound).
double mo_tau_bound(double lambda, double kappa);

}  // namespace evgof
