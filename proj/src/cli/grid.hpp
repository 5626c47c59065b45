#pragma once

#include <string>
#include <vector>

namespace ptqfi::cli {

// "x" or "start:stop:step" (inclusive of stop within 1e-9 of a step).
// Values are start + i * step, so there is no accumulated drift.
std::vector<double> parse_grid(const std::string& text, const std::string& name);

double parse_real(const std::string& text, const std::string& name);
long long parse_integer(const std::string& text, const std::string& name);
unsigned long long parse_unsigned(const std::string& text, const std::string& name);
bool parse_bool(const std::string& text, const std::string& name);

}  // namespace ptqfi::cli
