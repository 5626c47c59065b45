#include "ptqfi/estimator.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <boost/math/tools/roots.hpp>

#include "ptqfi/parallel.hpp"

namespace ptqfi {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

double& slot(SwansonParams& p, Target target) {
    switch (target) {
        case Target::Omega: return p.omega;
        case Target::Temperature: return p.temperature;
        case Target::Epsilon: break;
    }
    throw DomainError("estimator supports omega and temperature targets only");
}

// Quadrature variance sigma_xx / 2 = coth(Omega / 2T) / 2 as a function of the target.
double model_variance(SwansonParams p, Target target, double theta) {
    slot(p, target) = theta;
    return 0.5 * coth_positive(effective_frequency(p).Omega / (2.0 * p.temperature));
}

}  // namespace

std::vector<double> sample_homodyne(const GaussianState& state, std::size_t count, std::uint64_t seed,
                                    std::uint64_t stream) {
    const StateDiagnostics diag = validate_state(state);
    if (diag.physicality_defect > 1e-9) throw DomainError("homodyne sampling needs a physical state");
    std::mt19937_64 engine = make_engine(seed, stream);
    std::normal_distribution<double> normal(state.mean.x, std::sqrt(state.cov.xx / 2.0));
    std::vector<double> out(count);
    for (double& v : out) v = normal(engine);
    return out;
}

Estimate estimate_from_variance(double variance, Target target, const SwansonParams& known) {
    if (!std::isfinite(variance) || variance < 0.0) throw DomainError("sample variance must be finite");
    SwansonParams p = known;
    slot(p, target);  // validates the target
    Estimate est;
    const double floor = 0.5 * (1.0 + kSubVacuumFloor);
    if (variance <= floor) {
        est.boundary = true;
        variance = floor;
    }

    // The variance rises with T and falls with omega; solve g(theta) = 0 on a
    // bracket grown geometrically from a unit guess.
    auto g = [&](double theta) { return model_variance(p, target, theta) - variance; };
    const double sign = target == Target::Temperature ? 1.0 : -1.0;
    double lo = 1.0;
    double hi = 1.0;
    for (int i = 0; i < 2000 && sign * g(lo) > 0.0; ++i) lo /= 2.0;
    for (int i = 0; i < 2000 && sign * g(hi) < 0.0; ++i) hi *= 2.0;
    if (!(sign * g(lo) <= 0.0 && sign * g(hi) >= 0.0)) {
        throw NumericalError("estimator could not bracket the solution");
    }

    auto tol = [](double a, double b) {
        return std::abs(b - a) <= std::max(kBisectionTolerance, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(a));
    };
    std::uintmax_t max_iter = 4000;
    const auto [a, b] = boost::math::tools::bisect(g, lo, hi, tol, max_iter);
    est.value = 0.5 * (a + b);
    return est;
}

Estimate estimate_parameter(std::span<const double> samples, Target target, const SwansonParams& known) {
    if (samples.empty()) throw DomainError("estimator needs at least one sample");
    const double ss = std::transform_reduce(samples.begin(), samples.end(), 0.0, std::plus<>(),
                                            [](double x) { return x * x; });
    return estimate_from_variance(ss / static_cast<double>(samples.size()), target, known);
}

EstimationRun crb_experiment(const SwansonParams& p, Target target, std::uint64_t Q, std::uint64_t R,
                             std::uint64_t seed) {
    if (target == Target::Epsilon) throw DomainError("estimator supports omega and temperature targets only");
    if (Q < kMinSamples) throw DomainError("samples per replica must be at least 1000");
    if (R < kMinReplicas) throw DomainError("replicas must be at least 50");
    require_probe_domain(p);

    EstimationRun run;
    run.target = target;
    SwansonParams known = p;
    run.true_value = slot(known, target);
    run.Q = Q;
    run.R = R;
    run.seed = seed;
    run.crb_quantum = cramer_rao_bound(authoritative_qfi(p, target), Q);

    const GaussianState state = probe_state(p);
    const double h = 1e-4 * std::max(std::abs(run.true_value), 1.0);
    const double var_lo = model_variance(p, target, run.true_value - h);
    const double var_hi = model_variance(p, target, run.true_value + h);
    // log N(x; 0, v) = -x^2 / 2v - log(v) / 2 + const
    auto log_lik = [](double x2, double v) { return -0.5 * x2 / v - 0.5 * std::log(v); };

    struct ReplicaResult {
        Estimate estimate;
        double score_sq_sum = 0.0;
    };
    const auto results = parallel_map<ReplicaResult>(R, [&](std::size_t r) {
        const std::vector<double> xs = sample_homodyne(state, Q, seed, r);
        ReplicaResult out;
        out.estimate = estimate_parameter(xs, target, known);
        for (double x : xs) {
            const double s = (log_lik(x * x, var_hi) - log_lik(x * x, var_lo)) / (2.0 * h);
            out.score_sq_sum += s * s;
        }
        return out;
    });

    double score_total = 0.0;
    for (const ReplicaResult& r : results) {
        run.estimates.push_back(r.estimate.value);
        if (r.estimate.boundary) ++run.boundary_count;
        score_total += r.score_sq_sum;
    }
    run.cfi_classical = score_total / (static_cast<double>(Q) * static_cast<double>(R));
    run.crb_classical = 1.0 / (static_cast<double>(Q) * run.cfi_classical);

    const double n = static_cast<double>(R);
    run.mean_estimate = std::accumulate(run.estimates.begin(), run.estimates.end(), 0.0) / n;
    double ss = 0.0;
    for (double e : run.estimates) ss += (e - run.mean_estimate) * (e - run.mean_estimate);
    run.empirical_variance = ss / (n - 1.0);

    run.crb_margin = 1.0 - 3.0 * std::sqrt(2.0 / n);
    run.crb_satisfied = run.empirical_variance >= run.crb_quantum * run.crb_margin;
    return run;
}

}  // namespace ptqfi
