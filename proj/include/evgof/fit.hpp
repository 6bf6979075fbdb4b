#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evgof/copula.hpp"
#include "evgof/empirical.hpp"

namespace evgof {

enum class FitMethod {
    ITau,  // inversion of Kendall's tau (scalar-theta families)
    IRho,  // inversion of Spearman's rho (scalar-theta families)
    Mpl,   // maximum pseudo-likelihood
};

std::string method_name(FitMethod method);

struct FitOptions {
    double tol = 1e-9;
    int max_iter = 400;
    int multistart = 1;  // >1 adds spread-out extra starts for MPL
};

enum FitFlag : unsigned {
    FitClampedLow = 1u << 0,   // dependence measure below the attainable range
    FitClampedHigh = 1u << 1,  // above the attainable range
    FitUnderflow = 1u << 2,    // log-density floored during MPL
    FitNoConvergence = 1u << 3,
};

struct FitResult {
    CopulaModel model;  // fitted model; theta (and asym) filled in
    FitMethod method = FitMethod::ITau;
    std::optional<double> loglik;  // MPL only
    bool converged = true;
    int iterations = 0;
    unsigned flags = 0;
};

std::vector<std::string> flag_names(unsigned flags);

/// Rank-based log pseudo-likelihood sum_i log c(U_i, V_i); terms are floored
/// at -745 (flag via the returned pair's second when flooring happened).
std::pair<double, bool> pseudo_loglik(const Copula& copula, const PseudoSample& ps);

/// theta from tau_n = tau(theta); unattainable tau_n clamps to the range
/// boundary with a flag so bootstrap replicates never abort.
FitResult fit_itau(const CopulaModel& prototype, const PseudoSample& ps);

/// theta from rho_n = rho(theta) by bracketed root finding.
FitResult fit_irho(const CopulaModel& prototype, const PseudoSample& ps);

/// Maximum pseudo-likelihood: Brent search in one dimension, Nelder-Mead in
/// the reparameterized (theta, lambda, kappa) space for Khoudraji models.
FitResult fit_mpl(const CopulaModel& prototype, const PseudoSample& ps,
                  const std::optional<std::vector<double>>& start = std::nullopt,
                  const FitOptions& options = {});

/// Dispatch on method; prototype.asym selects the asymmetric parameterization.
FitResult fit(const CopulaModel& prototype, const PseudoSample& ps, FitMethod method,
              const FitOptions& options = {});

}  // namespace evgof
