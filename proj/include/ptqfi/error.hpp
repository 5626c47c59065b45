#pragma once

#include <stdexcept>
#include <string>

namespace ptqfi {

// Parameters outside the documented domain (broken phase, bad grid, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Valid inputs whose evaluation is numerically impossible or ill-posed.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ptqfi
