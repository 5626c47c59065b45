#include <doctest.h>

#include <cmath>
#include <random>

#include "ptqfi/fock.hpp"
#include "ptqfi/gaussian.hpp"

using namespace ptqfi;

namespace {

GaussianState diag_state(double a, double b, double mx = 0.0, double mp = 0.0) {
    return {{mx, mp}, {a, 0.0, 0.0, b}};
}

// Random physical state: rotated squeezed thermal with a random displacement.
GaussianState random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double nu = 1.0 + 3.0 * u(rng);
    const double r = 0.8 * u(rng);
    const double phi = 6.28318530717958648 * u(rng);
    const double a = nu * std::exp(2 * r);
    const double b = nu * std::exp(-2 * r);
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const double xx = c * c * a + s * s * b;
    const double pp = s * s * a + c * c * b;
    const double xp = c * s * (a - b);
    return {{2 * u(rng) - 1, 2 * u(rng) - 1}, {xx, xp, xp, pp}};
}

}  // namespace

TEST_CASE("validate_state reports defects and purity") {
    const StateDiagnostics vac = validate_state(GaussianState::vacuum());
    CHECK(vac.symmetric_defect == 0.0);
    CHECK(vac.physicality_defect == 0.0);
    CHECK(vac.purity == doctest::Approx(1.0).epsilon(1e-15));

    CHECK(validate_state(diag_state(3, 3)).purity == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(validate_state(diag_state(0.5, 0.5)).physicality_defect == doctest::Approx(0.75));

    GaussianState bad = GaussianState::vacuum();
    bad.cov.xx = std::nan("");
    CHECK_THROWS_WITH_AS(validate_state(bad), "non-finite state", DomainError);
}

TEST_CASE("physicality defect for det < 1 is 1 - det") {
    // diag(0.5, 0.5) has det 0.25
    CHECK(validate_state(diag_state(0.5, 0.5)).physicality_defect == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(validate_state(diag_state(0.5, 2.0)).physicality_defect == 0.0);
}

TEST_CASE("purity examples") {
    CHECK(purity(GaussianState::vacuum()) == 1.0);
    const double nu = 1.0 / std::tanh(1.0);  // Omega = 1, T = 0.5
    CHECK(purity(GaussianState::thermal(nu)) == doctest::Approx(0.76159415595576489).epsilon(1e-14));
    CHECK(purity(diag_state(3, 3)) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_WITH_AS(purity(diag_state(0, 1)), "degenerate covariance", NumericalError);
}

TEST_CASE("thermal purity matches the Fock-space trace of rho squared") {
    for (double nbar : {0.3, 1.0, 2.5}) {
        const RMatrix rho = thermal_density(400, nbar);
        const double fock = (rho * rho).trace();
        CHECK(purity(GaussianState::thermal(2 * nbar + 1)) == doctest::Approx(fock).epsilon(1e-12));
    }
}

TEST_CASE("purity scales as 1/k under cov -> k cov") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20; ++i) {
        GaussianState s = random_state(rng);
        const double k = 1.0 + 4.0 * std::uniform_real_distribution<double>(0, 1)(rng);
        GaussianState scaled = s;
        scaled.cov = k * s.cov;
        CHECK(purity(scaled) == doctest::Approx(purity(s) / k).epsilon(1e-13));
    }
}

TEST_CASE("fidelity examples") {
    const GaussianState vac = GaussianState::vacuum();
    CHECK(fidelity(vac, vac) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fidelity(vac, diag_state(3, 3)) == doctest::Approx(0.5).epsilon(1e-14));
    for (double d : {0.1, 0.7, 2.0}) {
        CHECK(fidelity(vac, diag_state(1, 1, d, 0)) == doctest::Approx(std::exp(-d * d / 2)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(fidelity(vac, diag_state(0.5, 0.5)), DomainError);
}

TEST_CASE("fidelity is symmetric, bounded and one on the diagonal") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 200; ++i) {
        const GaussianState a = random_state(rng);
        const GaussianState b = random_state(rng);
        const double fab = fidelity(a, b);
        CHECK(std::abs(fab - fidelity(b, a)) < 1e-12);
        CHECK(fab > 0.0);
        CHECK(fab <= 1.0 + 1e-12);
        CHECK(fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("bures distance") {
    const GaussianState vac = GaussianState::vacuum();
    CHECK(bures_distance(vac, vac) == 0.0);
    CHECK(bures_distance(vac, diag_state(3, 3)) == doctest::Approx(0.76536686473017954).epsilon(1e-13));

    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        const GaussianState a = random_state(rng);
        const GaussianState b = random_state(rng);
        const double d = bures_distance(a, b);
        CHECK(d * d == doctest::Approx(2 * (1 - std::sqrt(fidelity(a, b)))).epsilon(1e-12));
        CHECK(d == doctest::Approx(bures_distance(b, a)).epsilon(1e-12));
    }
}

TEST_CASE("bures distance for F = 1/4 is one") {
    // Thermal states with F = 1/4: vacuum vs nbar = 3 (F = 1/(nbar + 1)).
    CHECK(bures_distance(GaussianState::vacuum(), GaussianState::thermal(7.0)) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("extended-precision states agree with double") {
    const GaussianState a = diag_state(2.0, 2.5, 0.3, -0.1);
    const GaussianState b = diag_state(1.5, 3.0, -0.2, 0.4);
    const Quad fq = fidelity(a.cast<Quad>(), b.cast<Quad>());
    CHECK(static_cast<double>(fq) == doctest::Approx(fidelity(a, b)).epsilon(1e-14));
}
