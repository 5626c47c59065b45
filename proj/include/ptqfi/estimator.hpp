#pragma once

// Monte-Carlo check of the Cramer-Rao bound with x-quadrature homodyne
// detection on the thermal probe and a variance-inverting ML estimator.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ptqfi/gaussian.hpp"
#include "ptqfi/swanson.hpp"

namespace ptqfi {

// Q draws from N(0, sigma_xx / 2). Each (seed, stream) pair names an
// independent, reproducible generator; replicas use stream = replica index.
std::vector<double> sample_homodyne(const GaussianState& state, std::size_t count, std::uint64_t seed,
                                    std::uint64_t stream = 0);

struct Estimate {
    double value = 0.0;
    bool boundary = false;  // sub-vacuum sample variance, clamped
};

inline constexpr double kSubVacuumFloor = 1e-12;
inline constexpr double kBisectionTolerance = 1e-12;

// Zero-mean ML variance v = mean(x^2), then solve coth(Omega / 2T) / 2 = v
// for the target (temperature or omega) by bracketed bisection.
Estimate estimate_from_variance(double variance, Target target, const SwansonParams& known);
Estimate estimate_parameter(std::span<const double> samples, Target target, const SwansonParams& known);

struct EstimationRun {
    Target target = Target::Temperature;
    double true_value = 0.0;
    std::uint64_t Q = 0;
    std::uint64_t R = 0;
    std::uint64_t seed = 0;
    std::vector<double> estimates;
    double empirical_variance = 0.0;
    double crb_quantum = 0.0;
    double cfi_classical = 0.0;
    // Derived diagnostics.
    double mean_estimate = 0.0;
    double crb_classical = 0.0;  // 1 / (Q cfi_classical)
    double crb_margin = 0.0;     // 1 - 3 sqrt(2 / R)
    std::uint64_t boundary_count = 0;
    bool crb_satisfied = false;  // empirical_variance >= crb_quantum * crb_margin
};

inline constexpr std::uint64_t kMinSamples = 1000;
inline constexpr std::uint64_t kMinReplicas = 50;

// R replicas of Q homodyne samples each; replicas run in parallel. The
// classical Fisher information is the Monte-Carlo mean of the squared
// finite-difference score over all drawn samples.
EstimationRun crb_experiment(const SwansonParams& p, Target target, std::uint64_t Q, std::uint64_t R,
                             std::uint64_t seed);

}  // namespace ptqfi
