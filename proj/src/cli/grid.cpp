#include "grid.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "ptqfi/error.hpp"

namespace ptqfi::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

constexpr std::size_t kMaxGridPoints = 1'000'000;

}  // namespace

double parse_real(const std::string& text, const std::string& name) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
        throw DomainError("invalid number for " + name + ": '" + text + "'");
    }
    return v;
}

long long parse_integer(const std::string& text, const std::string& name) {
    const std::string t = trim(text);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        throw DomainError("invalid integer for " + name + ": '" + text + "'");
    }
    return v;
}

unsigned long long parse_unsigned(const std::string& text, const std::string& name) {
    const std::string t = trim(text);
    unsigned long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        throw DomainError("invalid unsigned integer for " + name + ": '" + text + "'");
    }
    return v;
}

bool parse_bool(const std::string& text, const std::string& name) {
    const std::string t = trim(text);
    if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
    if (t == "0" || t == "false" || t == "no" || t == "off") return false;
    throw DomainError("invalid boolean for " + name + ": '" + text + "'");
}

std::vector<double> parse_grid(const std::string& text, const std::string& name) {
    const auto first = text.find(':');
    if (first == std::string::npos) return {parse_real(text, name)};
    const auto second = text.find(':', first + 1);
    if (second == std::string::npos || text.find(':', second + 1) != std::string::npos) {
        throw DomainError("grid for " + name + " must be a number or start:stop:step");
    }
    const double start = parse_real(text.substr(0, first), name);
    const double stop = parse_real(text.substr(first + 1, second - first - 1), name);
    const double step = parse_real(text.substr(second + 1), name);
    if (!(step > 0.0)) throw DomainError("grid step for " + name + " must be positive");
    if (stop < start) throw DomainError("grid for " + name + " has stop < start");
    const double span = (stop - start) / step;
    if (span + 1.0 > static_cast<double>(kMaxGridPoints)) throw DomainError("grid for " + name + " is too large");
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = start + static_cast<double>(i) * step;
    return out;
}

}  // namespace ptqfi::cli
