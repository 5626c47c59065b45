// Calibration of the convention constants against Fock-space oracles. These
// tests pin kFidelityMeanCoefficient, kQfiMeanCoefficient and the purity
// exponent; changing a constant must break one of them.

#include <doctest.h>

#include <cmath>
#include <complex>

#include "ptqfi/conventions.hpp"
#include "ptqfi/fock.hpp"
#include "ptqfi/qfi.hpp"

using namespace ptqfi;

namespace {

constexpr int kN = 128;

// Dimensionless quadrature mean of the coherent state |alpha>: (sqrt2 Re a, sqrt2 Im a).
GaussianState coherent_state(std::complex<double> alpha) {
    return {{std::sqrt(2.0) * alpha.real(), std::sqrt(2.0) * alpha.imag()}, {1, 0, 0, 1}};
}

}  // namespace

TEST_CASE("vacuum covariance is the identity") {
    // Fock oracle: quadratures x = (a + a^dag)/sqrt2, p = i(a^dag - a)/sqrt2 on the vacuum.
    const SwansonOperators ops = build_operators(kN, 1.0, 0.0, 1.0);
    CMatrix rho = CMatrix::Zero(kN, kN);
    rho(0, 0) = 1.0;
    const Mat2<double> cov = quadrature_covariance(rho, ops.x.matrix(), ops.p.matrix());
    CHECK(cov.xx == doctest::Approx(conventions::kVacuumCovariance).epsilon(1e-14));
    CHECK(cov.pp == doctest::Approx(conventions::kVacuumCovariance).epsilon(1e-14));
    CHECK(std::abs(cov.xp) < 1e-14);
}

TEST_CASE("vacuum-thermal fidelity matches the Fock oracle") {
    for (double nbar : {0.5, 1.0, 2.0}) {
        const CMatrix vac = density_from_vector(coherent_vector(kN, 0.0));
        const CMatrix th = thermal_density(kN, nbar).cast<std::complex<double>>();
        const double fock = uhlmann_fidelity(vac, th);
        const double gauss = fidelity(GaussianState::vacuum(), GaussianState::thermal(2 * nbar + 1));
        CHECK(std::abs(gauss - fock) < 1e-8);
        CHECK(std::abs(gauss - 1.0 / (nbar + 1.0)) < 1e-14);
    }
}

TEST_CASE("thermal-thermal fidelity matches the Fock oracle") {
    for (auto [n1, n2] : {std::pair{0.5, 1.0}, std::pair{1.0, 2.0}, std::pair{0.2, 3.0}}) {
        const CMatrix a = thermal_density(kN, n1).cast<std::complex<double>>();
        const CMatrix b = thermal_density(kN, n2).cast<std::complex<double>>();
        const double fock = uhlmann_fidelity(a, b);
        const double gauss = fidelity(GaussianState::thermal(2 * n1 + 1), GaussianState::thermal(2 * n2 + 1));
        CHECK(std::abs(gauss - fock) < 1e-8);
    }
}

TEST_CASE("mean coefficient c: coherent overlap exponent") {
    // |<alpha|beta>|^2 = exp(-|alpha - beta|^2); only c = 1 reproduces it.
    for (auto [a, b] : {std::pair{std::complex<double>(0.3, 0.0), std::complex<double>(0.0, 0.0)},
                        std::pair{std::complex<double>(0.5, -0.2), std::complex<double>(-0.4, 0.6)},
                        std::pair{std::complex<double>(1.2, 0.7), std::complex<double>(0.9, 0.1)}}) {
        const double fock = pure_fidelity(coherent_vector(kN, a), coherent_vector(kN, b));
        const double gauss = fidelity(coherent_state(a), coherent_state(b));
        CHECK(std::abs(gauss - fock) < 1e-8);
        const double exponent = -std::log(gauss);
        CHECK(std::abs(exponent - std::norm(a - b)) < 1e-8);
    }
    CHECK(conventions::kFidelityMeanCoefficient == 1.0);
}

TEST_CASE("mean coefficient c_m: displaced vacuum QFI is 2 per unit mean derivative") {
    // Pure-state oracle: 4(<dpsi|dpsi> - |<psi|dpsi>|^2) for |alpha(theta)> with
    // dimensionless mean (theta, 0), i.e. alpha = theta / sqrt2, gives 2.
    const double theta = 0.4;
    const double h = 1e-5;
    const CVector psi = coherent_vector(kN, theta / std::sqrt(2.0));
    const CVector dpsi =
        (coherent_vector(kN, (theta + h) / std::sqrt(2.0)) - coherent_vector(kN, (theta - h) / std::sqrt(2.0))) /
        (2 * h);
    const double oracle = 4.0 * (dpsi.squaredNorm() - std::norm(psi.dot(dpsi)));
    CHECK(std::abs(oracle - 2.0) < 1e-8);

    ParamFamily<double> family{"displacement", {}, [](const double& t) {
                                   return GaussianState{{t, 0.0}, {1, 0, 0, 1}};
                               }};
    CHECK(std::abs(qfi_gaussian_closed(family, theta, 1e-4) - oracle) < 1e-8);
    CHECK(std::abs(qfi_bures_fd(family, theta, 1e-3) - 2.0) < 1e-8);
}

TEST_CASE("purity exponent -1/2 reproduces the Fock purity") {
    for (double nbar : {0.5, 1.0, 4.0}) {
        const RMatrix rho = thermal_density(400, nbar);
        const double det = std::pow(2 * nbar + 1, 2);
        CHECK(std::pow(det, conventions::kPurityExponent) == doctest::Approx((rho * rho).trace()).epsilon(1e-12));
    }
}
