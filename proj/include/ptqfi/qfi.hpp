#pragma once

// Quantum Fisher information for one-parameter Gaussian families.
//
// Two independent routes:
//   * closed:   the moment formula in covariance, purity and mean derivatives;
//   * Bures FD: 8 (1 - sqrt F(theta - h/2, theta + h/2)) / h^2 with one
//               Richardson refinement, using only the fidelity.
// Agreement between them is the main self-check of the engine.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include <boost/math/special_functions/fpclassify.hpp>

#include "ptqfi/conventions.hpp"
#include "ptqfi/error.hpp"
#include "ptqfi/gaussian.hpp"
#include "ptqfi/precision.hpp"

namespace ptqfi {

// Open interval (lo, hi).
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double v) const { return v > lo && v < hi; }
};

template <class Real>
struct ParamFamily {
    std::string label;
    Interval domain;
    std::function<BasicGaussianState<Real>(const Real&)> eval;

    // Near an exceptional point the stencil leaves the domain; refuse rather
    // than extrapolate.
    void require_stencil(double theta, double half_width) const {
        if (!domain.contains(theta - half_width) || !domain.contains(theta + half_width)) {
            throw DomainError("finite-difference stencil for '" + label + "' leaves the family domain");
        }
    }
};

struct QfiReport {
    double theta = 0.0;
    double qfi_closed = 0.0;
    double qfi_bures_fd = 0.0;
    double fd_step = 0.0;
    double rel_discrepancy = 0.0;
};

struct BuresFdEstimate {
    double value = 0.0;
    double step = 0.0;                 // coarse step of the accepted Richardson pair
    double relative_error_estimate = 0.0;
};

inline double default_fd_step(double theta) { return 1e-4 * std::max(std::abs(theta), 1.0); }

// |a - b| / max(a, tiny); two exact zeros agree.
inline double relative_discrepancy(double reference, double other) {
    const double diff = std::abs(reference - other);
    if (diff == 0.0) return 0.0;
    return diff / std::max(std::abs(reference), std::numeric_limits<double>::min());
}

template <class Real>
double qfi_gaussian_closed(const ParamFamily<Real>& family, double theta, double dtheta) {
    using std::abs;
    family.require_stencil(theta, dtheta);
    const Real t(theta);
    const Real h(dtheta);
    const auto lo = family.eval(t - h);
    const auto mid = family.eval(t);
    const auto hi = family.eval(t + h);
    validate_state(lo);
    validate_state(mid);
    validate_state(hi);

    const Real inv_2h = Real(1) / (2 * h);
    const Mat2<Real> dcov = inv_2h * (hi.cov - lo.cov);
    const Vec2<Real> dmean = inv_2h * (hi.mean - lo.mean);

    if (!(mid.cov.det() > 0)) throw NumericalError("degenerate covariance");
    const Mat2<Real> inv = mid.cov.inverse();
    const Mat2<Real> m = inv * dcov;
    const Real P = purity(mid);
    const Real dP = inv_2h * (purity(hi) - purity(lo));

    const Real covariance_term = (m * m).trace() / (2 * (1 + P * P));

    const Real gap = 1 - P * P * P * P;
    const double floor = purity_floor<Real>();
    Real purity_term(0);
    if (gap < floor) {
        if (abs(dP) >= floor) throw NumericalError("purity-term singularity");
    } else {
        purity_term = 2 * dP * dP / gap;
    }

    const Real mean_term = Real(conventions::kQfiMeanCoefficient) * quadratic_form(inv, dmean);
    return static_cast<double>(covariance_term + purity_term + mean_term);
}

template <class Real>
BuresFdEstimate qfi_bures_fd_detailed(const ParamFamily<Real>& family, double theta, double h,
                                      double target_rel_error = 1e-6, int max_refinements = 8) {
    using boost::math::isfinite;
    using std::abs;
    using std::sqrt;
    family.require_stencil(theta, h / 2);
    const Real t(theta);

    auto raw = [&](const Real& step) {
        const Real f = fidelity(family.eval(t - step / 2), family.eval(t + step / 2));
        if (!isfinite(f)) throw NumericalError("non-finite fidelity in Bures finite difference");
        return 8 * (1 - sqrt(f)) / (step * step);
    };

    Real step(h);
    Real coarse = raw(step);
    for (int i = 0;; ++i) {
        const Real fine = raw(step / 2);
        const Real extrapolated = (4 * fine - coarse) / 3;
        const Real err = abs(fine - coarse) / 3;
        const bool converged = err == 0 || err <= Real(target_rel_error) * abs(extrapolated);
        if (converged || i == max_refinements) {
            const double value = static_cast<double>(extrapolated);
            const double rel = err == 0 ? 0.0 : static_cast<double>(err / abs(extrapolated));
            return {value, static_cast<double>(step), rel};
        }
        step /= 2;
        coarse = fine;
    }
}

template <class Real>
double qfi_bures_fd(const ParamFamily<Real>& family, double theta, double h) {
    return qfi_bures_fd_detailed(family, theta, h).value;
}

template <class Real>
QfiReport qfi_report(const ParamFamily<Real>& family, double theta, double step = 0.0) {
    const double h = step > 0.0 ? step : default_fd_step(theta);
    QfiReport r;
    r.theta = theta;
    r.fd_step = h;
    r.qfi_closed = qfi_gaussian_closed(family, theta, h);
    r.qfi_bures_fd = qfi_bures_fd(family, theta, h);
    r.rel_discrepancy = relative_discrepancy(r.qfi_closed, r.qfi_bures_fd);
    return r;
}

// Variance lower bound 1 / (Q * I) for Q independent repetitions.
inline double cramer_rao_bound(double qfi, std::uint64_t repetitions) {
    if (!(qfi > 0.0)) throw DomainError("uninformative family");
    if (repetitions == 0) throw DomainError("Cramer-Rao bound needs at least one repetition");
    return 1.0 / (static_cast<double>(repetitions) * qfi);
}

}  // namespace ptqfi
