#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ptqfi/estimator.hpp"
#include "ptqfi/fock.hpp"
#include "ptqfi/report_io.hpp"
#include "ptqfi/swanson.hpp"

namespace py = pybind11;
using namespace ptqfi;

namespace {

SwansonParams make_params(double omega, double epsilon, double temperature, double alpha) {
    SwansonParams p;
    p.omega = omega;
    p.epsilon = epsilon;
    p.temperature = temperature;
    p.alpha = alpha;
    return p;
}

GaussianState make_state(std::pair<double, double> mean, std::array<double, 4> cov) {
    return {{mean.first, mean.second}, {cov[0], cov[1], cov[2], cov[3]}};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Gaussian-state QFI, Swanson probe model and Fock-space verification";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def(
        "fidelity",
        [](std::pair<double, double> mean_a, std::array<double, 4> cov_a, std::pair<double, double> mean_b,
           std::array<double, 4> cov_b) { return fidelity(make_state(mean_a, cov_a), make_state(mean_b, cov_b)); },
        py::arg("mean_a"), py::arg("cov_a"), py::arg("mean_b"), py::arg("cov_b"),
        "Uhlmann fidelity of two single-mode Gaussian states (cov row-major, vacuum = identity).");
    m.def(
        "purity", [](std::array<double, 4> cov) { return purity(make_state({0.0, 0.0}, cov)); }, py::arg("cov"));

    m.def(
        "effective_frequency",
        [](double omega, double epsilon) {
            const auto f = effective_frequency(make_params(omega, epsilon, 1.0, 1.0));
            return py::make_tuple(f.Omega, to_string(f.phase));
        },
        py::arg("omega"), py::arg("epsilon"));

    m.def(
        "qfi_closed_forms",
        [](double omega, double temperature, double epsilon) {
            const auto q = qfi_closed_forms(make_params(omega, epsilon, temperature, 1.0));
            return py::dict(py::arg("qfi_omega_closed") = q.I_omega, py::arg("qfi_T_paper") = q.I_T_paper,
                            py::arg("qfi_T_authoritative") = q.I_T_authoritative,
                            py::arg("qfi_epsilon_closed") = q.I_epsilon);
        },
        py::arg("omega"), py::arg("temperature"), py::arg("epsilon"));

    m.def(
        "qfi_bures_fd",
        [](double omega, double temperature, double epsilon, const std::string& target) {
            return probe_qfi_bures_fd(make_params(omega, epsilon, temperature, 1.0), parse_target(target)).value;
        },
        py::arg("omega"), py::arg("temperature"), py::arg("epsilon"), py::arg("target"));

    m.def(
        "gain_ratio",
        [](double omega, double temperature, double epsilon, const std::string& target) {
            return gain_ratio(make_params(omega, epsilon, temperature, 1.0), parse_target(target));
        },
        py::arg("omega"), py::arg("temperature"), py::arg("epsilon"), py::arg("target"));

    m.def(
        "fock_verify",
        [](double omega, double epsilon, double temperature, int dim, std::optional<double> lambda) {
            FockLabConfig c;
            c.params = make_params(omega, epsilon, temperature, 1.0);
            c.dim = dim;
            c.lambda_override = lambda;
            return to_json(run_fock_lab(c)).dump();
        },
        py::arg("omega") = 2.0, py::arg("epsilon") = 0.2, py::arg("temperature") = 0.5, py::arg("dim") = 64,
        py::arg("lambda_override") = py::none(), "Runs the Fock lab; returns the outcome as a JSON string.");

    m.def(
        "simulate",
        [](double omega, double epsilon, double temperature, const std::string& target, std::uint64_t samples,
           std::uint64_t replicas, std::uint64_t seed) {
            const auto run = crb_experiment(make_params(omega, epsilon, temperature, 1.0), parse_target(target),
                                            samples, replicas, seed);
            return to_json(run).dump();
        },
        py::arg("omega") = 2.0, py::arg("epsilon") = 0.2, py::arg("temperature") = 0.5,
        py::arg("target") = "temperature", py::arg("samples") = 100000, py::arg("replicas") = 200,
        py::arg("seed") = 42, "Runs the Cramer-Rao experiment; returns the EstimationRun as a JSON string.");
}
