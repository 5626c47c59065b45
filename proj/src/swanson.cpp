#include "ptqfi/swanson.hpp"

#include <cmath>
#include <string>

#include "ptqfi/fock.hpp"

namespace ptqfi {

namespace {

double coupling_sign(const SwansonParams& p) { return p.coupling == CouplingSign::Negative ? -1.0 : 1.0; }

// 1 - 4 eps^2 (or 1 + 4 eps^2 for negative coupling); Omega = w sqrt(shape).
double frequency_shape(const SwansonParams& p) { return 1.0 - coupling_sign(p) * 4.0 * p.epsilon * p.epsilon; }

}  // namespace

double SwansonParams::beta() const {
    if (alpha == 0.0) throw DomainError("alpha must be non-zero");
    const double s = coupling == CouplingSign::Negative ? -1.0 : 1.0;
    return s * omega * omega * epsilon * epsilon / alpha;
}

const char* to_string(PhaseClass phase) {
    switch (phase) {
        case PhaseClass::Unbroken: return "unbroken";
        case PhaseClass::ExceptionalPoint: return "exceptional_point";
        case PhaseClass::Broken: return "broken";
    }
    return "unknown";
}

const char* to_string(Target target) {
    switch (target) {
        case Target::Omega: return "omega";
        case Target::Temperature: return "temperature";
        case Target::Epsilon: return "epsilon";
    }
    return "unknown";
}

Target parse_target(const std::string& name) {
    if (name == "omega") return Target::Omega;
    if (name == "temperature" || name == "T") return Target::Temperature;
    if (name == "epsilon" || name == "eps") return Target::Epsilon;
    throw DomainError("unknown target '" + name + "' (expected omega, temperature or epsilon)");
}

EffectiveFrequency effective_frequency(const SwansonParams& p) {
    if (!(p.omega > 0.0)) throw DomainError("omega must be positive");
    if (!(p.epsilon >= 0.0)) throw DomainError("epsilon must be non-negative");
    if (p.coupling == CouplingSign::Negative) {
        return {p.omega * std::sqrt(frequency_shape(p)), PhaseClass::Unbroken};
    }
    if (std::abs(p.epsilon - 0.5) < kExceptionalPointTolerance) return {0.0, PhaseClass::ExceptionalPoint};
    if (p.epsilon > 0.5) return {0.0, PhaseClass::Broken};
    return {p.omega * std::sqrt(frequency_shape(p)), PhaseClass::Unbroken};
}

void require_probe_domain(const SwansonParams& p) {
    if (!(p.temperature > 0.0)) throw DomainError("temperature must be positive");
    const EffectiveFrequency f = effective_frequency(p);
    if (f.phase == PhaseClass::Broken) {
        throw DomainError("probe undefined at or beyond exceptional point (broken phase)");
    }
    if (f.phase == PhaseClass::ExceptionalPoint) {
        throw DomainError("probe undefined at or beyond exceptional point");
    }
}

double inverse_sinh_squared(double x) {
    const double ax = std::abs(x);
    if (ax < 1.0) {
        const double s = std::sinh(ax);
        return 1.0 / (s * s);
    }
    // 4 e^{-2x} / (1 - e^{-2x})^2
    const double e = std::exp(-2.0 * ax);
    const double d = -std::expm1(-2.0 * ax);
    return 4.0 * e / (d * d);
}

GaussianState probe_state(const SwansonParams& p) {
    require_probe_domain(p);
    const double Omega = effective_frequency(p).Omega;
    return GaussianState::thermal(coth_positive(Omega / (2.0 * p.temperature)));
}

BuresFdEstimate probe_qfi_bures_fd(const SwansonParams& p, Target target, double step) {
    const auto family = probe_family<Quad>(p, target);
    double theta = 0.0;
    switch (target) {
        case Target::Omega: theta = p.omega; break;
        case Target::Temperature: theta = p.temperature; break;
        case Target::Epsilon: theta = p.epsilon; break;
    }
    const double h = step > 0.0 ? step : default_fd_step(theta);
    return qfi_bures_fd_detailed(family, theta, h);
}

double probe_qfi_gaussian_closed(const SwansonParams& p, Target target, double step) {
    const auto family = probe_family<Quad>(p, target);
    double theta = 0.0;
    switch (target) {
        case Target::Omega: theta = p.omega; break;
        case Target::Temperature: theta = p.temperature; break;
        case Target::Epsilon: theta = p.epsilon; break;
    }
    // The moment formula inherits an O(h^2) error from the central derivatives,
    // which is large at low T where the state moves on a scale T^2 / Omega.
    // One Richardson step removes it; Quad keeps the halved stencil exact enough.
    const double h = step > 0.0 ? step : default_fd_step(theta);
    const double coarse = qfi_gaussian_closed(family, theta, h);
    const double fine = qfi_gaussian_closed(family, theta, h / 2);
    return (4.0 * fine - coarse) / 3.0;
}

QfiClosedForms qfi_closed_forms(const SwansonParams& p) {
    require_probe_domain(p);
    const double shape = frequency_shape(p);
    const double Omega = effective_frequency(p).Omega;
    const double T = p.temperature;
    const double s = inverse_sinh_squared(Omega / (2.0 * T));

    QfiClosedForms q;
    q.I_omega = shape / (4.0 * T * T) * s;
    q.I_T_paper = p.omega * p.omega * shape / (4.0 * T * T) * s;
    q.I_T_authoritative = Omega * Omega / (4.0 * T * T * T * T) * s;
    q.I_epsilon = p.epsilon == 0.0
                      ? 0.0
                      : 4.0 * p.epsilon * p.epsilon * p.omega * p.omega / (T * T * shape) * s;
    return q;
}

double authoritative_qfi(const SwansonParams& p, Target target) {
    require_probe_domain(p);
    switch (target) {
        case Target::Temperature:
        case Target::Omega:
        case Target::Epsilon: {
            const double shape = frequency_shape(p);
            const double T = p.temperature;
            const double Omega = effective_frequency(p).Omega;
            const double s = inverse_sinh_squared(Omega / (2.0 * T));
            if (target == Target::Temperature) return Omega * Omega / (4.0 * T * T * T * T) * s;
            if (target == Target::Omega) return shape / (4.0 * T * T) * s;
            if (p.epsilon == 0.0) return 0.0;
            return 4.0 * p.epsilon * p.epsilon * p.omega * p.omega / (T * T * shape) * s;
        }
    }
    return 0.0;
}

double hermitian_epsilon(const SwansonParams& p) {
    if (p.coupling == CouplingSign::Negative) {
        throw DomainError("Hermitian baseline undefined for negative coupling (alpha * beta < 0)");
    }
    if (!(p.omega > 0.0)) throw DomainError("omega must be positive");
    return std::abs(p.alpha) / p.omega;
}

double gain_ratio(const SwansonParams& p, Target target) {
    if (target == Target::Epsilon) throw DomainError("gain ratio is defined for omega and temperature only");
    const double eps_herm = hermitian_epsilon(p);
    SwansonParams baseline = p;
    baseline.epsilon = eps_herm;
    if (!(p.omega > 2.0 * std::abs(p.alpha)) || effective_frequency(baseline).phase != PhaseClass::Unbroken) {
        throw DomainError("Hermitian baseline undefined (Omega_Herm non-positive)");
    }
    require_probe_domain(p);
    const double num = authoritative_qfi(p, target);
    const double den = authoritative_qfi(baseline, target);
    if (!(num > 0.0) || !(den > 0.0)) {
        throw NumericalError("gain ratio undefined: QFI underflows at these parameters");
    }
    return 10.0 * std::log10(num / den);
}

double delta_u_printed(const SwansonParams& p) {
    require_probe_domain(p);
    const double Omega = effective_frequency(p).Omega;
    const double T = p.temperature;
    // coth(a) - coth(b) = 2/expm1(2a) - 2/expm1(2b)
    const double diff = 2.0 / std::expm1(Omega / T) - 2.0 / std::expm1(p.omega / T);
    return 2.0 * p.omega * diff;
}

namespace {

// Tr[H rho] for the thermal state of the Hermitian counterpart minus
// Tr[w a^dag a rho_HO]; both include their own zero-point offsets.
double counterpart_energy_shift(const SwansonParams& q, int dim) {
    const double lambda = -q.omega * (q.alpha - q.beta()) / (q.omega - q.alpha - q.beta());
    const SwansonOperators ops = build_operators(dim, q.omega, q.epsilon, q.alpha, q.coupling);
    const DysonMap map = DysonMap::build(dim, q.omega, lambda);
    const int interior = dim / 2;
    const SimilarityResult sim =
        similarity_check(map, ops.hamiltonian, effective_frequency(q).Omega, 1, interior, SimilarityMethod::Series);
    if (sim.hermiticity_residual > kHermiticityTolerance) {
        throw NumericalError("energy oracle: Hermitian counterpart not Hermitian within tolerance");
    }
    const CMatrix block = sim.counterpart.topLeftCorner(interior, interior);
    const CMatrix herm = 0.5 * (block + block.adjoint());
    const double u_swanson = thermal_moments(herm, q.temperature).mean_energy;

    CMatrix h_ho = CMatrix::Zero(interior, interior);
    for (int n = 0; n < interior; ++n) h_ho(n, n) = q.omega * n;
    const double u_ho = thermal_moments(h_ho, q.temperature).mean_energy;
    return u_swanson - u_ho;
}

double delta_u_fock(const SwansonParams& p, int dim, double& alpha_used) {
    // The counterpart spectrum depends on alpha * beta alone, so the balanced
    // split alpha = beta = w eps gives the same energy. Use it when the
    // configured alpha leaves the counterpart unbounded below (w <= alpha + beta)
    // or makes the Dyson map unrepresentable at this truncation.
    SwansonParams q = p;
    if (q.omega > q.alpha + q.beta()) {
        try {
            alpha_used = q.alpha;
            return counterpart_energy_shift(q, dim);
        } catch (const NumericalError&) {
        }
    }
    q.alpha = q.omega * q.epsilon;
    alpha_used = q.alpha;
    return counterpart_energy_shift(q, dim);
}

}  // namespace

CostReport energetic_cost(const SwansonParams& p, Target target, const CostOptions& options) {
    if (target == Target::Epsilon) throw DomainError("energetic cost is defined for omega and temperature only");
    require_probe_domain(p);
    if (p.epsilon == 0.0) throw DomainError("zero-cost baseline");

    CostReport r;
    r.qfi = authoritative_qfi(p, target);
    r.delta_u_paper = delta_u_printed(p);
    r.delta_u_oracle = delta_u_fock(p, options.truncation, r.oracle_alpha);
    if (options.absolute) {
        r.delta_u_paper = std::abs(r.delta_u_paper);
        r.delta_u_oracle = std::abs(r.delta_u_oracle);
    }
    if (r.delta_u_paper == 0.0 || r.delta_u_oracle == 0.0) {
        throw NumericalError("energy difference underflows at these parameters");
    }
    r.u_theta = r.qfi / r.delta_u_paper;
    r.u_theta_oracle = r.qfi / r.delta_u_oracle;
    return r;
}

DysonCoefficients dyson_coefficient(const SwansonParams& p) {
    const double w = p.omega;
    const double ww_ee = w * w * p.epsilon * p.epsilon;
    const double printed_den = 1.0 - w + ww_ee;
    const double alpha = p.alpha;
    const double beta = p.beta();
    const double derived_den = w - alpha - beta;
    if (std::abs(printed_den) < 1e-12 || std::abs(derived_den) < 1e-12) {
        throw DomainError("Dyson map singular at these parameters");
    }
    return {(1.0 - ww_ee) / printed_den, -w * (alpha - beta) / derived_den};
}

}  // namespace ptqfi
