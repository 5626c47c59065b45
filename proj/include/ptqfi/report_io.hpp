#pragma once

// JSON and CSV rendering of reports. Floats in CSV use 17 significant
// digits so every value round-trips exactly.

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "ptqfi/estimator.hpp"
#include "ptqfi/fock.hpp"

namespace ptqfi {

std::string format_double(double v);

// Calibrated constants and conventions; embedded in every output's metadata.
// `lambda` describes the Dyson coefficient in use, when the run has one.
nlohmann::json conventions_block(std::optional<double> lambda = std::nullopt,
                                 const std::string& lambda_source = "derived");

nlohmann::json to_json(const FockLabReport& report);
nlohmann::json to_json(const FockLabOutcome& outcome);
nlohmann::json to_json(const EstimationRun& run);

}  // namespace ptqfi
