#pragma once

#include <atomic>
#include <cstddef>
#include <vector>

#include "evgof/empirical.hpp"

namespace evgof {

enum class EstimatorKind {
    P,    // rank-based Pickands estimator 1 / mean(xi_i(t))
    Cfg,  // rank-based Caperaa-Fougeres-Genest estimator
};

/// xi_i(t) = min(-log(U_i)/(1-t), -log(V_i)/t); the t = 0 and t = 1 limits
/// are -log(U_i) and -log(V_i).
double xi(const PseudoSample& ps, std::size_t i, double t);

/// Nonparametric Pickands dependence-function estimator, optionally with the
/// end-point correction forcing A(0) = A(1) = 1 exactly.
///
/// Construction caches the transformed pseudo-observations, so evaluation at
/// one t is O(n).  Evaluation is const and safe from multiple threads.
class PickandsEstimator {
public:
    PickandsEstimator(const PseudoSample& ps, EstimatorKind kind, bool corrected);

    double operator()(double t) const;

    /// Values on the inclusive uniform grid t_j = j/(m-1), j = 0..m-1.
    std::vector<double> curve(std::size_t m) const;

    EstimatorKind kind() const { return kind_; }
    bool corrected() const { return corrected_; }

    /// True once a corrected-P reciprocal came out non-positive somewhere and
    /// the value was clamped to the lower bound max(t, 1-t).
    bool clamped() const { return clamped_.load(std::memory_order_relaxed); }

private:
    double mean_xi(double t) const;
    double mean_log_xi(double t) const;

    EstimatorKind kind_;
    bool corrected_;
    std::vector<double> a_;   // -log U_i
    std::vector<double> b_;   // -log V_i
    std::vector<double> la_;  // log(-log U_i), CFG only
    std::vector<double> lb_;  // log(-log V_i), CFG only
    double mean_a_ = 0.0;
    double mean_b_ = 0.0;
    double mean_la_ = 0.0;
    double mean_lb_ = 0.0;
    mutable std::atomic<bool> clamped_{false};
};

/// Estimator curve on an m-point inclusive grid (m >= 2).
std::vector<double> pickands_curve(EstimatorKind kind, bool corrected, const PseudoSample& ps,
                                   std::size_t m);

}  // namespace evgof
