#include <doctest.h>

#include <cmath>

#include "ptqfi/fock.hpp"
#include "ptqfi/qfi.hpp"
#include "ptqfi/swanson.hpp"

using namespace ptqfi;

namespace {

// cov = coth(Omega / 2T) I with theta = T.
template <class Real>
ParamFamily<Real> thermal_T_family(double Omega) {
    return {"temperature", {0.0, Interval{}.hi}, [Omega](const Real& T) {
                return BasicGaussianState<Real>::thermal(coth_positive<Real>(Real(Omega) / (2 * T)));
            }};
}

// Same state parametrised by inverse temperature.
template <class Real>
ParamFamily<Real> thermal_beta_family(double Omega) {
    return {"beta", {0.0, Interval{}.hi}, [Omega](const Real& beta) {
                return BasicGaussianState<Real>::thermal(coth_positive<Real>(Real(Omega) * beta / 2));
            }};
}

double thermal_T_oracle(double Omega, double T) {
    const double s = std::sinh(Omega / (2 * T));
    return Omega * Omega / (4 * std::pow(T, 4) * s * s);
}

}  // namespace

TEST_CASE("closed QFI: thermal temperature family") {
    const auto f = thermal_T_family<double>(1.0);
    const double expected = thermal_T_oracle(1.0, 0.5);
    CHECK(expected == doctest::Approx(2.8963).epsilon(1e-4));
    CHECK(qfi_gaussian_closed(f, 0.5, 1e-4) == doctest::Approx(expected).epsilon(1e-7));
}

TEST_CASE("both routes vanish on a constant family") {
    ParamFamily<double> f{"const", {}, [](const double&) { return GaussianState::thermal(2.0); }};
    CHECK(qfi_gaussian_closed(f, 0.3, 1e-4) == 0.0);
    CHECK(qfi_bures_fd(f, 0.3, 1e-4) == 0.0);
}

TEST_CASE("displaced vacuum has QFI 2") {
    ParamFamily<double> f{"x", {}, [](const double& t) { return GaussianState{{t, 0.0}, {1, 0, 0, 1}}; }};
    CHECK(qfi_gaussian_closed(f, 1.3, 1e-4) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(qfi_bures_fd(f, 1.3, 1e-3) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("Bures finite difference reproduces the thermal oracle") {
    const double expected = thermal_T_oracle(1.0, 0.5);
    const BuresFdEstimate d = qfi_bures_fd_detailed(thermal_T_family<Quad>(1.0), 0.5, default_fd_step(0.5));
    CHECK(std::abs(d.value - expected) / expected < 1e-5);
    CHECK(d.relative_error_estimate < 1e-6);
    // The double-precision route is usable at this benign point too.
    CHECK(std::abs(qfi_bures_fd(thermal_T_family<double>(1.0), 0.5, 1e-3) - expected) / expected < 1e-5);
}

TEST_CASE("dual-route agreement on smooth families") {
    // Squeezed thermal family with a moving mean.
    ParamFamily<Quad> f{"mixed", {}, [](const Quad& t) {
                            using std::cosh;
                            using std::exp;
                            const Quad nu = 1 + t * t;
                            const Quad r = t / 3;
                            return BasicGaussianState<Quad>{{sin(t), t * t / 2},
                                                            {nu * exp(2 * r), Quad(0), Quad(0), nu * exp(-2 * r)}};
                        }};
    for (double t : {0.3, 0.8, 1.5}) {
        const QfiReport r = qfi_report(f, t);
        CHECK(r.qfi_closed >= 0.0);
        CHECK(r.rel_discrepancy < 1e-5);
    }
}

TEST_CASE("reparameterisation covariance") {
    // theta = g(phi) = phi^3 + phi, I_phi = g'(phi)^2 I_theta.
    const double Omega = 1.3;
    const auto theta_family = thermal_T_family<Quad>(Omega);
    ParamFamily<Quad> phi_family{"phi", {0.0, Interval{}.hi},
                                 [theta_family](const Quad& phi) { return theta_family.eval(phi * phi * phi + phi); }};
    for (double phi : {0.4, 0.7}) {
        const double theta = phi * phi * phi + phi;
        const double g1 = 3 * phi * phi + 1;
        const double i_theta = qfi_gaussian_closed(theta_family, theta, 1e-6);
        const double i_phi = qfi_gaussian_closed(phi_family, phi, 1e-6);
        CHECK(std::abs(i_phi - g1 * g1 * i_theta) / i_phi < 1e-6);
        const double b_theta = qfi_bures_fd(theta_family, theta, default_fd_step(theta));
        const double b_phi = qfi_bures_fd(phi_family, phi, default_fd_step(phi));
        CHECK(std::abs(b_phi - g1 * g1 * b_theta) / b_phi < 1e-6);
    }
}

TEST_CASE("exponential family: QFI in beta equals the Fock energy variance") {
    for (auto [Omega, beta] : {std::pair{1.0, 2.0}, std::pair{1.8330302779823360, 2.0}, std::pair{0.7, 0.9}}) {
        CMatrix h = CMatrix::Zero(64, 64);
        for (int n = 0; n < 64; ++n) h(n, n) = Omega * n;
        const double var = thermal_moments(h, 1.0 / beta).energy_variance;
        const double closed = qfi_gaussian_closed(thermal_beta_family<Quad>(Omega), beta, 1e-6);
        const double fd = qfi_bures_fd(thermal_beta_family<Quad>(Omega), beta, default_fd_step(beta));
        CHECK(std::abs(closed - var) / var < 1e-6);
        CHECK(std::abs(fd - var) / var < 1e-6);
    }
}

TEST_CASE("pure-state limit of the purity term") {
    // Pure family with moving mean: the purity term is a 0/0 limit -> 0.
    ParamFamily<double> pure{"pure", {}, [](const double& t) { return GaussianState{{t, t}, {1, 0, 0, 1}}; }};
    CHECK(qfi_gaussian_closed(pure, 0.0, 1e-4) == doctest::Approx(4.0).epsilon(1e-10));

    // Purity leaves 1 linearly: the limit does not exist.
    ParamFamily<double> kink{"kink", {}, [](const double& t) { return GaussianState::thermal(1.0 + t); }};
    CHECK_THROWS_WITH_AS(qfi_gaussian_closed(kink, 0.0, 1e-4), "purity-term singularity", NumericalError);
}

TEST_CASE("engine refuses stencils that leave the domain") {
    const auto f = thermal_T_family<double>(1.0);
    CHECK_THROWS_AS(qfi_gaussian_closed(f, 1e-5, 1e-4), DomainError);
    CHECK_THROWS_AS(qfi_bures_fd(f, 1e-5, 1e-4), DomainError);
}

TEST_CASE("Cramer-Rao bound") {
    CHECK(cramer_rao_bound(4.0, 1) == 0.25);
    CHECK(cramer_rao_bound(2.8963, 100000) == doctest::Approx(3.4527e-6).epsilon(1e-4));
    CHECK_THROWS_WITH_AS(cramer_rao_bound(0.0, 1), "uninformative family", DomainError);
    CHECK_THROWS_AS(cramer_rao_bound(-1.0, 1), DomainError);
}

TEST_CASE("relative discrepancy") {
    CHECK(relative_discrepancy(0.0, 0.0) == 0.0);
    CHECK(relative_discrepancy(2.0, 2.2) == doctest::Approx(0.1));
    CHECK(std::isfinite(relative_discrepancy(0.0, 1e-300)));
}
