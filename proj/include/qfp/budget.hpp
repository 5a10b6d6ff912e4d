#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "qfp/contract.hpp"

// Sample-complexity and tolerance arithmetic: detection margin, shot
// budgets for the precomputed- and sampled-reference regimes, tolerance
// interval calibration, and tolerance composition.

namespace qfp {

// Raised when delta / C <= epsilon_a, i.e. the family's frame-bound constant
// is too large for the requested tolerance (the Tier-3 regime).
class NonPositiveMarginError : public std::domain_error {
public:
    explicit NonPositiveMarginError(double gamma)
        : std::domain_error("detection margin is non-positive (gamma = " +
                            std::to_string(gamma) + ")"),
          gamma_(gamma) {}

    double gamma() const { return gamma_; }

private:
    double gamma_;
};

// gamma = delta / C - epsilon_a
inline double detection_margin(double delta, double frame_c, double epsilon_a) {
    if (!(delta > 0.0)) throw std::invalid_argument("detection_margin: delta must be positive");
    if (!(frame_c > 0.0)) throw std::invalid_argument("detection_margin: C must be positive");
    const double gamma = delta / frame_c - epsilon_a;
    if (!(gamma > 0.0)) throw NonPositiveMarginError(gamma);
    return gamma;
}

enum class BudgetMode { Precomputed, Sampled };

struct BudgetParams {
    double delta = 0.0;
    double epsilon_a = 0.0;
    double frame_c = 0.0;
    int k = 0;
    double opnorm_b = 1.0;  // B = 1 for Pauli observables
    double eta = 0.0;
    BudgetMode mode = BudgetMode::Precomputed;

    void validate() const {
        if (k < 1) throw std::invalid_argument("budget: family size k must be >= 1");
        if (!(opnorm_b > 0.0)) throw std::invalid_argument("budget: B must be positive");
        if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("budget: eta must lie in (0,1)");
        if (!(epsilon_a > 0.0)) throw std::invalid_argument("budget: epsilon_a must be positive");
    }
};

// Total budget before ceiling: 2 B^2 k ln(2k/eta) / gamma^2, with the
// sampled-reference regime exactly 4x the precomputed one.
inline double shot_budget_raw(const BudgetParams& params) {
    params.validate();
    const double gamma = detection_margin(params.delta, params.frame_c, params.epsilon_a);
    const double front = params.mode == BudgetMode::Sampled ? 8.0 : 2.0;
    const double k = static_cast<double>(params.k);
    return front * params.opnorm_b * params.opnorm_b * k * std::log(2.0 * k / params.eta) /
           (gamma * gamma);
}

inline long long shot_budget(const BudgetParams& params) {
    return static_cast<long long>(std::ceil(shot_budget_raw(params)));
}

inline long long shots_per_observable(long long n_total, int k) {
    if (k < 1) throw std::invalid_argument("shots_per_observable: k must be >= 1");
    if (n_total < 1) throw std::invalid_argument("shots_per_observable: budget must be >= 1");
    return (n_total + k - 1) / k;
}

// Tolerance interval [d_typ, delta_min / C] from the calibration procedure;
// recommended value is the midpoint when the interval is non-empty.
struct ToleranceInterval {
    double d_typ = 0.0;
    double upper = 0.0;
    bool empty = false;
    double recommended = std::numeric_limits<double>::quiet_NaN();
};

inline ToleranceInterval calibrate_tolerance(const std::vector<Fingerprint>& timepoint_fps,
                                             double delta_min, double frame_c) {
    if (timepoint_fps.size() < 2)
        throw std::invalid_argument("calibrate_tolerance: need at least 2 timepoints");
    if (!(delta_min > 0.0) || !(frame_c > 0.0))
        throw std::invalid_argument("calibrate_tolerance: delta_min and C must be positive");
    for (std::size_t i = 1; i < timepoint_fps.size(); ++i)
        if (timepoint_fps[i].labels != timepoint_fps[0].labels)
            throw std::invalid_argument("calibrate_tolerance: timepoint families differ");

    double d_typ = 0.0;
    for (std::size_t i = 0; i < timepoint_fps.size(); ++i)
        for (std::size_t j = i + 1; j < timepoint_fps.size(); ++j) {
            const Deviation dev = contract_deviation(timepoint_fps[i], timepoint_fps[j]);
            d_typ = std::max(d_typ, dev.max_dev);
        }

    ToleranceInterval interval;
    interval.d_typ = d_typ;
    interval.upper = delta_min / frame_c;
    interval.empty = d_typ > interval.upper;
    if (!interval.empty) interval.recommended = 0.5 * (d_typ + interval.upper);
    return interval;
}

inline double compose_tolerances(const std::vector<double>& stage_tolerances) {
    double total = 0.0;
    for (double eps : stage_tolerances) {
        if (eps < 0.0) throw std::invalid_argument("compose_tolerances: tolerances must be >= 0");
        total += eps;
    }
    return total;
}

}  // namespace qfp
