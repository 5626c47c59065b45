#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace ptqfi {

// 113-bit significand. Near-vacuum thermal probes (Omega/2T ~ 20) have
// coth(Omega/2T) - 1 ~ 1e-17, which double cannot resolve; finite-difference
// QFI routes evaluate their families in this type.
using Quad = boost::multiprecision::cpp_bin_float_quad;

// Below this value of 1 - P^4 a state is treated as pure by the closed QFI
// formula (the purity-derivative term becomes a 0/0 limit).
template <class Real>
inline double purity_floor() {
    return 1e-10;
}

template <>
inline double purity_floor<Quad>() {
    return 1e-24;
}

}  // namespace ptqfi
