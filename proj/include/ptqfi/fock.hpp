#pragma once

// Truncated Fock-space laboratory for the non-Hermitian machinery:
// PT symmetry, the Dyson map eta = exp(lambda x^2 / 2), the metric
// Theta = eta^dag eta, quasi-Hermiticity, isospectrality, the thermal-state
// mapping rho = eta rho~ eta^dag and expectation-value equivalence.
//
// Residuals are Frobenius norms on the leading M x M ("interior") block;
// the top of a truncated bosonic algebra is wrong by construction.
//
// Also hosts the Fock-space reference computations (thermal and coherent
// states, Uhlmann fidelity, thermal energy moments) used as oracles for the
// Gaussian formulas.

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ptqfi/swanson.hpp"

namespace ptqfi {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr int kMinTruncation = 8;

class FockOperator {
public:
    FockOperator() = default;
    explicit FockOperator(CMatrix m);

    int dim() const { return static_cast<int>(m_.rows()); }
    const CMatrix& matrix() const { return m_; }

private:
    CMatrix m_;
};

struct SwansonOperators {
    FockOperator a;
    FockOperator a_dag;
    FockOperator x;  // sqrt(1/2w) (a^dag + a)
    FockOperator p;  // i sqrt(w/2) (a^dag - a)
    FockOperator hamiltonian;
};

SwansonOperators build_operators(int dim, double omega, double epsilon, double alpha,
                                 CouplingSign coupling = CouplingSign::Positive);

// Frobenius norm of the leading block.
double interior_norm(const CMatrix& m, int interior);

// ||[a, a^dag] - I|| and ||[x, p] - i I|| on the interior block.
double ladder_defect(const SwansonOperators& ops, int interior);
double canonical_defect(const SwansonOperators& ops, int interior);

// ||H^PT - H|| / ||H|| with a -> -a, a^dag -> -a^dag, i -> -i, i.e.
// H^PT = Pi conj(H) Pi with the Fock parity Pi = diag((-1)^n).
double pt_symmetry_residual(const FockOperator& h, int interior);

struct DysonOptions {
    // Functions of x^2 are evaluated on dim + padding Fock states and then
    // projected; -1 means padding = dim, reduced for large dim so that
    // exp(|lambda| x^2) stays representable (never below 8).
    int padding = -1;
};

// eta = exp(lambda x^2 / 2) through the eigendecomposition of x on a padded
// working space. eta is diagonal in that eigenbasis, which is also where the
// mixed-state identities are evaluated without forming eta^-1 densely.
class DysonMap {
public:
    static DysonMap build(int dim, double omega, double lambda, const DysonOptions& options = {});

    int dim() const { return dim_; }
    int working_dim() const { return static_cast<int>(nodes_.size()); }
    double lambda() const { return lambda_; }
    double omega() const { return omega_; }

    // Projections onto the first dim() Fock states.
    RMatrix eta() const;
    RMatrix eta_inverse() const;  // meaningless once condition_number() is astronomically large
    RMatrix metric() const;       // Theta = eta^dag eta = eta^2

    double condition_number() const;  // may be +inf
    // ||eta eta^-1 - I|| on the interior, evaluated in the eigenbasis.
    double inverse_defect(int interior) const;

    // Working-space position eigenbasis (columns) and eta's diagonal there.
    const RMatrix& position_basis() const { return basis_; }
    const RVector& eta_diagonal() const { return diag_; }

private:
    int dim_ = 0;
    double omega_ = 0.0;
    double lambda_ = 0.0;
    RVector nodes_;  // eigenvalues of x
    RVector diag_;   // exp(lambda x_k^2 / 2)
    RMatrix basis_;
};

// ||(Theta H - H^dag Theta)_M|| / ||(Theta H)_M||
double quasi_hermiticity_residual(const DysonMap& map, const FockOperator& h, int interior);

enum class SimilarityMethod {
    Auto,    // Series; the dense product loses log10(cond) digits even when accepted
    Dense,   // eta H eta^-1 as a product of projections; refuses if cond(eta) > 1e12
    Series,  // sum_k ad_G^k(H) / k! with G = lambda x^2 / 2 (terminates for quadratic H)
};

inline constexpr double kMaxDenseCondition = 1e12;
// Trailing rows of a series counterpart left out of the spectral block.
inline constexpr int kSeriesEdgeBand = 8;

struct SimilarityResult {
    CMatrix counterpart;  // eta H eta^-1 on dim() states
    SimilarityMethod method = SimilarityMethod::Series;
    int series_terms = 0;
    double hermiticity_residual = 0.0;
    int spectral_dim = 0;                 // leading block diagonalised for the levels
    std::vector<double> levels;           // lowest eigenvalues of that symmetrised block
    std::vector<double> spectral_errors;  // |gap_i - Omega| / Omega
};

SimilarityResult similarity_check(const DysonMap& map, const FockOperator& h, double Omega, int levels,
                                  int interior, SimilarityMethod method = SimilarityMethod::Auto);

struct NamedOperator {
    std::string name;
    CMatrix matrix;  // Hermitian-side observable O on dim() states
};

struct ObservableCheck {
    std::string name;
    double hermitian_value = 0.0;   // Tr[O rho]
    double theta_value = 0.0;       // Tr[O~ rho~ Theta],  O~ = eta^-1 O eta
    double term_value = 0.0;        // sum_n c_n <psi_n| Theta O~ |psi_n>
    double theta_sq_value = 0.0;    // sum_n c_n <psi_n| Theta^2 O~ |psi_n> / sum_n c_n
};

struct ExpectationCheck {
    double rho_mapping_residual = 0.0;
    double expectation_residual_theta = 0.0;
    double expectation_residual_term = 0.0;
    double expectation_residual_theta_sq = 0.0;
    std::vector<ObservableCheck> observables;
    std::vector<double> populations;
};

inline constexpr double kHermiticityTolerance = 1e-8;

// Builds rho = exp(-H/T)/Z from the interior block of the Hermitian
// counterpart, the non-Hermitian partner rho~ = sum c_n |psi_n><psi_n| with
// psi_n = eta^-1 phi_n and identical populations, and compares expectation
// values. Refuses a counterpart that is not Hermitian within tolerance.
ExpectationCheck thermal_and_expectation_check(const DysonMap& map, const CMatrix& counterpart, double temperature,
                                               std::span<const NamedOperator> observables, int interior);

// --- Lab driver ---------------------------------------------------------

struct FockLabConfig {
    SwansonParams params{2.0, 0.2, 1.0, 0.5};
    int dim = 64;
    int levels = 4;
    std::optional<double> lambda_override;
    DysonOptions dyson;
};

struct FockLabReport {
    int dim = 0;
    int interior_dim = 0;
    double lambda = 0.0;
    std::string lambda_source;  // "derived", "paper" or "override"
    double pt_residual = 0.0;
    double hermiticity_residual = 0.0;
    double quasi_hermiticity_residual = 0.0;
    std::vector<double> spectral_errors;
    int spectral_dim = 0;
    // Unset when the thermal check refused a non-Hermitian counterpart.
    std::optional<double> expectation_residual_theta;
    std::optional<double> expectation_residual_theta_sq;
    std::optional<double> expectation_residual_term;
    std::optional<double> rho_mapping_residual;
    std::optional<double> gaussian_covariance_residual;
    double ladder_defect = 0.0;
    double canonical_defect = 0.0;
    double condition_number = 0.0;
    std::string similarity_method;
};

struct LambdaTrial {
    std::string source;
    double lambda = 0.0;
    double hermiticity_residual = 0.0;
    double quasi_hermiticity_residual = 0.0;
    bool hermitizes = false;
};

struct AssertedCheck {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct FockLabOutcome {
    FockLabReport report;
    std::vector<LambdaTrial> lambda_trials;
    // ||printed counterpart - eta H eta^-1|| / ||eta H eta^-1|| on the interior.
    double printed_counterpart_residual = 0.0;
    std::vector<AssertedCheck> asserted;
    bool passed = true;
};

FockLabOutcome run_fock_lab(const FockLabConfig& config);

enum class ScanCheck { QuasiHermiticity, Hermiticity, ExpectationTheta };

struct ConvergenceRow {
    int dim = 0;
    double residual = 0.0;
};

struct ConvergenceTable {
    int interior_dim = 0;
    std::vector<ConvergenceRow> rows;
    bool non_increasing = true;  // within a factor-2 allowance
};

// Residual of one check on the fixed interior block min(dims)/2 for each
// truncation. Default padding is 0 so the raw truncation error is visible.
ConvergenceTable convergence_scan(ScanCheck check, const SwansonParams& params, std::optional<double> lambda,
                                  std::vector<int> dims, DysonOptions dyson = {0});

// --- Fock-space reference computations ------------------------------------

RMatrix thermal_density(int dim, double nbar);
CVector coherent_vector(int dim, std::complex<double> alpha);
CMatrix density_from_vector(const CVector& psi);

// (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 for Hermitian PSD matrices. Accurate
// to round-off for full-rank (or exactly diagonal) rho; rank-deficient rho
// loses about sqrt(eps) per numerically-zero eigenvalue, ~1e-8 for a pure state.
double uhlmann_fidelity(const CMatrix& rho, const CMatrix& sigma);
double pure_fidelity(const CVector& psi, const CVector& phi);

struct ThermalMoments {
    double mean_energy = 0.0;
    double energy_variance = 0.0;
};

// Moments of exp(-H/T)/Z for a Hermitian matrix H.
ThermalMoments thermal_moments(const CMatrix& hamiltonian, double temperature);

// Dense thermal state exp(-H/T)/Z.
CMatrix thermal_state(const CMatrix& hamiltonian, double temperature);

// Covariance in the vacuum = identity convention of quadratures X, P
// (dimensionless, [X, P] = i) for a density matrix.
Mat2<double> quadrature_covariance(const CMatrix& rho, const CMatrix& x, const CMatrix& p);

}  // namespace ptqfi
