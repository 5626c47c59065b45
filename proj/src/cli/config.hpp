#pragma once

#include <istream>
#include <map>
#include <string>

namespace ptqfi::cli {

// key = value lines; '#' starts a comment; blank lines ignored. Keys use the
// long flag names without dashes (omega, temp, eps, fd-step, ...).
std::map<std::string, std::string> parse_config(std::istream& in, const std::string& origin);
std::map<std::string, std::string> load_config(const std::string& path);

}  // namespace ptqfi::cli
