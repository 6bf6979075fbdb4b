#pragma once

#include <functional>
#include <memory>

#include "evgof/copula.hpp"
#include "evgof/pickands.hpp"

namespace evgof {

/// Population functional targeted by the nonparametric estimators:
///   P:   A_C(t) = 1 / int_0^1 C(x^(1-t), x^t) dx/x
///   CFG: A_C(t) = exp[-gamma + int_0^1 (C(x^(1-t), x^t) - 1(x > 1/e)) dx/(x log x)]
/// Defined for any copula; equals the Pickands function when C is
/// extreme-value.  Computed by quadrature after substituting x = e^-s,
/// truncated at s = 80 where the Frechet bound makes the tail below e^-40.
double copula_functional(const std::function<double(double, double)>& cdf, EstimatorKind kind,
                         double t);
double copula_functional(const Copula& copula, EstimatorKind kind, double t);
double copula_functional(const CopulaModel& model, EstimatorKind kind, double t);

/// Closed forms of the functionals for the Farlie-Gumbel-Morgenstern copula:
///   A^P(t)   = (2t^2-2t-4) / (2t^2-2t-4 + (3t^2-3t) theta)
///   A^CFG(t) = (2 / (2+t-t^2))^theta
double fgm_functional(double theta, EstimatorKind kind, double t);

/// Pointwise envelope for the functionals: the comonotone copula M gives the
/// lower curve max(t, 1-t) in closed form, the countermonotone copula W the
/// upper curve by quadrature.
struct FunctionalBounds {
    double lower;  // A_M(t) = max(t, 1-t)
    double upper;  // A_W(t)
};
FunctionalBounds frechet_bound_functionals(EstimatorKind kind, double t);

/// Grid check of the left-tail-decreasing property: C(u,v)/(uv) nonincreasing
/// in each argument (tolerance 1e-10), with the worst violation located.
struct LtdReport {
    bool is_ltd = true;
    double worst_violation = 0.0;  // largest positive increase of the ratio
    double from_u = 0.0, from_v = 0.0, to_u = 0.0, to_v = 0.0;
};
LtdReport ltd_check(const CopulaModel& model, int grid);

/// Extreme-value copulas generated by the FGM functionals (both Eq-convex on
/// theta in [0,1]); Pickands function from the closed forms above, CDF via
/// the extreme-value representation.
std::unique_ptr<const Copula> make_fgm_p_ev(double theta);
std::unique_ptr<const Copula> make_fgm_cfg_ev(double theta);

}  // namespace evgof
