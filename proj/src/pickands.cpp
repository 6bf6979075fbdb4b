#include "evgof/pickands.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "evgof/errors.hpp"

namespace evgof {

namespace {
constexpr double kEulerGamma = std::numbers::egamma_v<double>;
}

double xi(const PseudoSample& ps, std::size_t i, double t) {
    const double a = -std::log(ps.pairs[i].first);
    const double b = -std::log(ps.pairs[i].second);
    if (t <= 0.0) return a;
    if (t >= 1.0) return b;
    return std::min(a / (1.0 - t), b / t);
}

PickandsEstimator::PickandsEstimator(const PseudoSample& ps, EstimatorKind kind, bool corrected)
    : kind_(kind), corrected_(corrected) {
    const std::size_t n = ps.size();
    if (n == 0) throw ConfigError("empty pseudo-sample");
    // Canonical summation order makes every value exactly invariant under
    // permutations of the input pairs.
    std::vector<std::pair<double, double>> sorted = ps.pairs;
    std::sort(sorted.begin(), sorted.end());
    a_.resize(n);
    b_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        a_[i] = -std::log(sorted[i].first);
        b_[i] = -std::log(sorted[i].second);
        mean_a_ += a_[i];
        mean_b_ += b_[i];
    }
    mean_a_ /= static_cast<double>(n);
    mean_b_ /= static_cast<double>(n);
    if (kind_ == EstimatorKind::Cfg) {
        la_.resize(n);
        lb_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            la_[i] = std::log(a_[i]);
            lb_[i] = std::log(b_[i]);
            mean_la_ += la_[i];
            mean_lb_ += lb_[i];
        }
        mean_la_ /= static_cast<double>(n);
        mean_lb_ /= static_cast<double>(n);
    }
}

double PickandsEstimator::mean_xi(double t) const {
    if (t <= 0.0) return mean_a_;
    if (t >= 1.0) return mean_b_;
    const double ca = 1.0 / (1.0 - t);
    const double cb = 1.0 / t;
    double sum = 0.0;
    for (std::size_t i = 0; i < a_.size(); ++i) {
        sum += std::min(a_[i] * ca, b_[i] * cb);
    }
    return sum / static_cast<double>(a_.size());
}

double PickandsEstimator::mean_log_xi(double t) const {
    if (t <= 0.0) return mean_la_;
    if (t >= 1.0) return mean_lb_;
    // log min(a/(1-t), b/t) = min(log a - log(1-t), log b - log t); keeping
    // the per-term logs cached makes the curve loop log-free.
    const double l1t = std::log1p(-t);
    const double lt = std::log(t);
    double sum = 0.0;
    for (std::size_t i = 0; i < la_.size(); ++i) {
        sum += std::min(la_[i] - l1t, lb_[i] - lt);
    }
    return sum / static_cast<double>(la_.size());
}

double PickandsEstimator::operator()(double t) const {
    if (kind_ == EstimatorKind::P) {
        double recip = mean_xi(t);
        if (corrected_) {
            recip -= (1.0 - t) * (mean_a_ - 1.0) + t * (mean_b_ - 1.0);
            if (recip <= 0.0) {
                clamped_.store(true, std::memory_order_relaxed);
                return std::max(t, 1.0 - t);
            }
        }
        return 1.0 / recip;
    }
    double log_a = -kEulerGamma - mean_log_xi(t);
    if (corrected_) {
        const double log_a0 = -kEulerGamma - mean_la_;
        const double log_a1 = -kEulerGamma - mean_lb_;
        log_a -= (1.0 - t) * log_a0 + t * log_a1;
    }
    return std::exp(log_a);
}

std::vector<double> PickandsEstimator::curve(std::size_t m) const {
    if (m < 2) throw ConfigError("curve grid needs at least two points");
    std::vector<double> out(m);
    const double h = 1.0 / static_cast<double>(m - 1);
    for (std::size_t j = 0; j < m; ++j) {
        out[j] = (*this)(static_cast<double>(j) * h);
    }
    return out;
}

std::vector<double> pickands_curve(EstimatorKind kind, bool corrected, const PseudoSample& ps,
                                   std::size_t m) {
    return PickandsEstimator(ps, kind, corrected).curve(m);
}

}  // namespace evgof
