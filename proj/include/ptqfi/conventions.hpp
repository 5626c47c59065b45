#pragma once

// Convention constants. Vacuum covariance is the identity: quadratures are
// x = (a + a^dag)/sqrt(2), p = i(a^dag - a)/sqrt(2) and
// cov_ij = <d_i d_j + d_j d_i> - 2 <d_i><d_j>.
//
// Both mean-term coefficients were calibrated against Fock-space oracles
// (coherent-state overlap and the pure-state displacement QFI); the
// calibration tests live in tests/test_calibration.cpp.

namespace ptqfi::conventions {

inline constexpr double kVacuumCovariance = 1.0;

// F contains exp[-c * dd^T (cov_a + cov_b)^{-1} dd].
inline constexpr double kFidelityMeanCoefficient = 1.0;

// QFI contains c_m * d'^T cov^{-1} d'.
inline constexpr double kQfiMeanCoefficient = 2.0;

// purity = det(cov)^kPurityExponent
inline constexpr double kPurityExponent = -0.5;

}  // namespace ptqfi::conventions
