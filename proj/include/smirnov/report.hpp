#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "smirnov/experiments.hpp"

namespace smirnov {

/// CSV with header n,err_p,err_sup,bound12,lead_coeff_scaled,zero_moment_gap;
/// absent metrics are empty fields, numbers are printed round-trip exact.
std::string rates_csv(const std::vector<RateRow>& rows);

/// Fits, predicted rate, bound check and diagnostics of a sweep.
nlohmann::json rates_summary(const RateConfig& config, const SweepResult& sweep);

/// Q~ zero gaps from the sweep next to the conjectural Q_{n,p} series.
nlohmann::json zeros_summary(const RateConfig& config, const SweepResult& sweep, const ConjecturalZeros& conjectural);

/// Log-log plot of err_p (and err_sup, bound12 when present) against n.
std::string loglog_svg(const std::vector<RateRow>& rows, const std::string& title);

}  // namespace smirnov
