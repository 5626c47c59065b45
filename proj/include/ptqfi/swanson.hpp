#pragma once

// The Swanson oscillator  H = w a^dag a + alpha a^2 + beta a^dag^2  with
// alpha * beta = w^2 eps^2 (or -w^2 eps^2 for the negative-coupling variant)
// used as a thermal metrology probe. Units hbar = k_B = m = 1.

#include <cmath>

#include <boost/math/special_functions/expm1.hpp>

#include "ptqfi/error.hpp"
#include "ptqfi/gaussian.hpp"
#include "ptqfi/precision.hpp"
#include "ptqfi/qfi.hpp"

namespace ptqfi {

// Sign of alpha * beta relative to w^2 eps^2. Negative has no exceptional
// point (Omega = w sqrt(1 + 4 eps^2)); exposed for exploration only.
enum class CouplingSign { Positive, Negative };

struct SwansonParams {
    double omega = 1.0;
    double epsilon = 0.0;
    double alpha = 1.0;
    double temperature = 1.0;
    CouplingSign coupling = CouplingSign::Positive;

    double beta() const;
};

enum class PhaseClass { Unbroken, ExceptionalPoint, Broken };

enum class Target { Omega, Temperature, Epsilon };

const char* to_string(PhaseClass phase);
const char* to_string(Target target);
Target parse_target(const std::string& name);

struct EffectiveFrequency {
    double Omega = 0.0;  // 0 at and beyond the exceptional point
    PhaseClass phase = PhaseClass::Unbroken;
};

inline constexpr double kExceptionalPointTolerance = 1e-12;

EffectiveFrequency effective_frequency(const SwansonParams& p);

// Throws DomainError unless the probe is defined (unbroken, T > 0, w > 0).
void require_probe_domain(const SwansonParams& p);

// coth(x) for x > 0 as 1 + 2 / expm1(2x), so coth - 1 keeps its digits.
template <class Real>
Real coth_positive(const Real& x) {
    return Real(1) + Real(2) / boost::math::expm1(2 * x);
}

// 1 / sinh^2(x) without overflow for large x.
double inverse_sinh_squared(double x);

GaussianState probe_state(const SwansonParams& p);

// theta is substituted for the targeted parameter. The covariance depends on
// eps only through eps^2, so the epsilon family extends to negative eps.
template <class Real>
ParamFamily<Real> probe_family(const SwansonParams& p, Target target) {
    require_probe_domain(p);
    ParamFamily<Real> f;
    f.label = to_string(target);
    const bool negative = p.coupling == CouplingSign::Negative;
    switch (target) {
        case Target::Omega:
            f.domain = {0.0, Interval{}.hi};
            break;
        case Target::Temperature:
            f.domain = {0.0, Interval{}.hi};
            break;
        case Target::Epsilon:
            f.domain = negative ? Interval{} : Interval{-0.5, 0.5};
            break;
    }
    f.eval = [p, target, negative](const Real& theta) {
        using std::sqrt;
        Real omega(p.omega);
        Real eps(p.epsilon);
        Real temp(p.temperature);
        switch (target) {
            case Target::Omega: omega = theta; break;
            case Target::Temperature: temp = theta; break;
            case Target::Epsilon: eps = theta; break;
        }
        const Real shift = 4 * eps * eps;
        const Real Omega = omega * sqrt(negative ? 1 + shift : 1 - shift);
        return BasicGaussianState<Real>::thermal(coth_positive<Real>(Omega / (2 * temp)));
    };
    return f;
}

struct QfiClosedForms {
    double I_omega = 0.0;            // printed frequency formula
    double I_T_paper = 0.0;          // printed temperature formula (T^2 denominator)
    double I_T_authoritative = 0.0;  // Omega^2 / (4 T^4 sinh^2(Omega / 2T)), the exponential-family form
    double I_epsilon = 0.0;          // printed similarity-parameter formula
};

QfiClosedForms qfi_closed_forms(const SwansonParams& p);

// Authoritative QFI for one target: the closed forms for w and eps and the
// T^4 exponential-family form for T, all cross-checked by the Bures route.
double authoritative_qfi(const SwansonParams& p, Target target);

// Bures finite-difference QFI of the probe family, extended precision.
BuresFdEstimate probe_qfi_bures_fd(const SwansonParams& p, Target target, double step = 0.0);

// Moment-formula QFI of the probe family, extended precision, with one
// Richardson step over (step, step / 2).
double probe_qfi_gaussian_closed(const SwansonParams& p, Target target, double step = 0.0);

// eps at which the Swanson Hamiltonian is Hermitian (beta == alpha).
double hermitian_epsilon(const SwansonParams& p);

// 10 log10(I(p) / I(p at the Hermitian eps)), in dB.
double gain_ratio(const SwansonParams& p, Target target);

struct CostReport {
    double delta_u_paper = 0.0;
    double delta_u_oracle = 0.0;
    double u_theta = 0.0;
    double u_theta_oracle = 0.0;
    double qfi = 0.0;
    double oracle_alpha = 0.0;  // alpha used for the Fock energy oracle
};

struct CostOptions {
    int truncation = 64;
    bool absolute = false;  // apply |.| to both energy differences
};

CostReport energetic_cost(const SwansonParams& p, Target target, const CostOptions& options = {});

// 2 w [coth(Omega/2T) - coth(w/2T)]
double delta_u_printed(const SwansonParams& p);

struct DysonCoefficients {
    double lambda_paper = 0.0;    // (1 - w^2 eps^2) / (1 - w + w^2 eps^2)
    double lambda_derived = 0.0;  // -w (alpha - beta) / (w - alpha - beta)
};

// Coefficients of eta = exp(lambda x^2 / 2). lambda_derived is the value that
// cancels the anti-Hermitian {x, p} term of eta H eta^-1.
DysonCoefficients dyson_coefficient(const SwansonParams& p);

}  // namespace ptqfi
