#include "ptqfi/report_io.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "ptqfi/conventions.hpp"

namespace ptqfi {

using nlohmann::json;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << v;
    return os.str();
}

json conventions_block(std::optional<double> lambda, const std::string& lambda_source) {
    json j{
        {"vacuum_covariance", conventions::kVacuumCovariance},
        {"covariance_definition", "cov_ij = <d_i d_j + d_j d_i> - 2 <d_i><d_j>"},
        {"fidelity_mean_coefficient_c", conventions::kFidelityMeanCoefficient},
        {"qfi_mean_coefficient_c_m", conventions::kQfiMeanCoefficient},
        {"purity_exponent", conventions::kPurityExponent},
        {"units", "hbar = k_B = m = 1"},
        {"authoritative_qfi_T", "Omega^2 / (4 T^4 sinh^2(Omega / 2T)); Bures finite difference is the independent check"},
        {"dyson_lambda_source", lambda_source},
    };
    if (lambda) j["dyson_lambda"] = *lambda;
    return j;
}

namespace {

template <class T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

}  // namespace

json to_json(const FockLabReport& r) {
    return json{
        {"dim", r.dim},
        {"interior_dim", r.interior_dim},
        {"lambda", r.lambda},
        {"lambda_source", r.lambda_source},
        {"pt_residual", r.pt_residual},
        {"hermiticity_residual", r.hermiticity_residual},
        {"quasi_hermiticity_residual", r.quasi_hermiticity_residual},
        {"spectral_errors", r.spectral_errors},
        {"spectral_dim", r.spectral_dim},
        {"expectation_residual_theta", optional_json(r.expectation_residual_theta)},
        {"expectation_residual_theta_sq", optional_json(r.expectation_residual_theta_sq)},
        {"expectation_residual_term", optional_json(r.expectation_residual_term)},
        {"rho_mapping_residual", optional_json(r.rho_mapping_residual)},
        {"gaussian_covariance_residual", optional_json(r.gaussian_covariance_residual)},
        {"ladder_defect", r.ladder_defect},
        {"canonical_defect", r.canonical_defect},
        {"condition_number", std::isfinite(r.condition_number) ? json(r.condition_number) : json("inf")},
        {"similarity_method", r.similarity_method},
    };
}

json to_json(const FockLabOutcome& o) {
    json trials = json::array();
    for (const LambdaTrial& t : o.lambda_trials) {
        trials.push_back({{"source", t.source},
                          {"lambda", t.lambda},
                          {"hermiticity_residual", t.hermiticity_residual},
                          {"quasi_hermiticity_residual", t.quasi_hermiticity_residual},
                          {"hermitizes", t.hermitizes}});
    }
    json asserted = json::array();
    for (const AssertedCheck& c : o.asserted) {
        asserted.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed}});
    }
    return json{
        {"report", to_json(o.report)},
        {"lambda_trials", trials},
        {"printed_counterpart_residual", o.printed_counterpart_residual},
        {"asserted", asserted},
        {"passed", o.passed},
        {"conventions", conventions_block(o.report.lambda, o.report.lambda_source)},
    };
}

json to_json(const EstimationRun& r) {
    return json{
        {"target", to_string(r.target)},
        {"true_value", r.true_value},
        {"Q", r.Q},
        {"R", r.R},
        {"seed", r.seed},
        {"estimates", r.estimates},
        {"empirical_variance", r.empirical_variance},
        {"crb_quantum", r.crb_quantum},
        {"cfi_classical", r.cfi_classical},
        {"mean_estimate", r.mean_estimate},
        {"crb_classical", r.crb_classical},
        {"crb_margin", r.crb_margin},
        {"boundary_count", r.boundary_count},
        {"crb_satisfied", r.crb_satisfied},
        {"conventions", conventions_block()},
    };
}

}  // namespace ptqfi
