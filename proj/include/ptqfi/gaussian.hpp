#pragma once

// Single-mode Gaussian states in the vacuum = identity covariance convention.
//
// All routines are templated on the scalar so the finite-difference QFI routes
// can run in extended precision; `GaussianState` is the double instantiation
// used everywhere else.

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/fpclassify.hpp>

#include "ptqfi/conventions.hpp"
#include "ptqfi/error.hpp"

namespace ptqfi {

template <class Real>
struct Vec2 {
    Real x{0};
    Real p{0};

    friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.p - b.p}; }
    friend Vec2 operator*(const Real& s, const Vec2& v) { return {s * v.x, s * v.p}; }
};

// Row-major 2x2 matrix.
template <class Real>
struct Mat2 {
    Real xx{1};
    Real xp{0};
    Real px{0};
    Real pp{1};

    Real det() const { return xx * pp - xp * px; }
    Real trace() const { return xx + pp; }

    // Caller guarantees det() != 0.
    Mat2 inverse() const {
        const Real d = det();
        return {pp / d, -xp / d, -px / d, xx / d};
    }

    friend Mat2 operator+(const Mat2& a, const Mat2& b) {
        return {a.xx + b.xx, a.xp + b.xp, a.px + b.px, a.pp + b.pp};
    }
    friend Mat2 operator-(const Mat2& a, const Mat2& b) {
        return {a.xx - b.xx, a.xp - b.xp, a.px - b.px, a.pp - b.pp};
    }
    friend Mat2 operator*(const Real& s, const Mat2& m) {
        return {s * m.xx, s * m.xp, s * m.px, s * m.pp};
    }
    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        return {a.xx * b.xx + a.xp * b.px, a.xx * b.xp + a.xp * b.pp,
                a.px * b.xx + a.pp * b.px, a.px * b.xp + a.pp * b.pp};
    }
};

// v^T m v
template <class Real>
Real quadratic_form(const Mat2<Real>& m, const Vec2<Real>& v) {
    return v.x * (m.xx * v.x + m.xp * v.p) + v.p * (m.px * v.x + m.pp * v.p);
}

template <class Real>
struct BasicGaussianState {
    Vec2<Real> mean;  // (<x>, <p>)
    Mat2<Real> cov;

    static BasicGaussianState vacuum() { return {}; }

    // Zero-mean isotropic state, cov = nu * I (thermal with nu = 2 nbar + 1).
    static BasicGaussianState thermal(const Real& nu) { return {{}, {nu, Real(0), Real(0), nu}}; }

    template <class Other>
    BasicGaussianState<Other> cast() const {
        return {{Other(mean.x), Other(mean.p)}, {Other(cov.xx), Other(cov.xp), Other(cov.px), Other(cov.pp)}};
    }
};

using GaussianState = BasicGaussianState<double>;

struct StateDiagnostics {
    double symmetric_defect = 0.0;
    double physicality_defect = 0.0;  // max(0, 1 - det cov)
    double purity = 0.0;              // det(cov)^(-1/2), 0 when det <= 0
};

inline constexpr double kPhysicalityTolerance = 1e-9;

template <class Real>
StateDiagnostics validate_state(const BasicGaussianState<Real>& s) {
    using boost::math::isfinite;
    const Real entries[] = {s.mean.x, s.mean.p, s.cov.xx, s.cov.xp, s.cov.px, s.cov.pp};
    for (const Real& e : entries) {
        if (!isfinite(e)) throw DomainError("non-finite state");
    }
    using std::abs;
    using std::sqrt;
    const Real det = s.cov.det();
    StateDiagnostics d;
    d.symmetric_defect = static_cast<double>(abs(s.cov.xp - s.cov.px));
    d.physicality_defect = std::max(0.0, static_cast<double>(Real(1) - det));
    d.purity = det > 0 ? static_cast<double>(Real(1) / sqrt(det)) : 0.0;
    return d;
}

template <class Real>
void require_physical(const BasicGaussianState<Real>& s) {
    const StateDiagnostics d = validate_state(s);
    if (d.symmetric_defect >= kPhysicalityTolerance || d.physicality_defect >= kPhysicalityTolerance) {
        throw DomainError("unphysical state (asymmetric covariance or det(cov) < 1)");
    }
}

template <class Real>
Real purity(const BasicGaussianState<Real>& s) {
    using std::sqrt;
    const Real det = s.cov.det();
    if (!(det > 0)) throw NumericalError("degenerate covariance");
    return Real(1) / sqrt(det);
}

// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2. The quadratic prefactor is
// 2 / (sqrt(D + d) - sqrt(d)) with D = det(cov_a + cov_b) and
// d = (det cov_a - 1)(det cov_b - 1), rationalised to avoid cancellation when
// both states are far from pure.
template <class Real>
Real fidelity(const BasicGaussianState<Real>& a, const BasicGaussianState<Real>& b) {
    using std::exp;
    using std::max;
    using std::sqrt;
    require_physical(a);
    require_physical(b);
    const Mat2<Real> sum = a.cov + b.cov;
    const Real big = sum.det();
    // Pure states can push this a few ulps below zero.
    const Real small = max(Real(0), (a.cov.det() - 1) * (b.cov.det() - 1));
    const Real prefactor = 2 * (sqrt(big + small) + sqrt(small)) / big;
    const Real exponent =
        Real(conventions::kFidelityMeanCoefficient) * quadratic_form(sum.inverse(), a.mean - b.mean);
    return prefactor * exp(-exponent);
}

template <class Real>
Real bures_distance(const BasicGaussianState<Real>& a, const BasicGaussianState<Real>& b) {
    using std::max;
    using std::sqrt;
    const Real f = fidelity(a, b);
    // F may exceed 1 by rounding for identical states.
    return sqrt(Real(2)) * sqrt(max(Real(0), 1 - sqrt(f)));
}

}  // namespace ptqfi
