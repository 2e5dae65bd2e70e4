#pragma once

#include "idrisk/bounds.hpp"
#include "idrisk/experiments.hpp"

#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

namespace idrisk {

/// %.17g, with "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double x);

/// Numbers as JSON numbers; non-finite values as the strings of format_number.
nlohmann::json json_number(double x);

/// Header xi,value,method,N,lambda,V,R,ln_cov and one row per report.
std::string bound_reports_csv(std::span<const BoundReport> reports);
nlohmann::json bound_reports_json(std::span<const BoundReport> reports);

std::string dominance_csv(std::span<const DominanceRow> rows);
nlohmann::json dominance_json(std::span<const DominanceRow> rows);

std::string risk_dominance_csv(std::span<const RiskDominanceRow> rows);
nlohmann::json risk_dominance_json(std::span<const RiskDominanceRow> rows);

std::string rate_sweep_csv(const RateSweepResult& result);
nlohmann::json rate_sweep_json(const RateSweepResult& result);

/// Two-column CSV "x,<name>".
std::string series_csv(const Series& series);

/// Whitespace-separated blocks, one per series, separated by two blank
/// lines (gnuplot `index` layout). Each block starts with "# <name>".
std::string plot_data(std::span<const Series> series);

/// Throws IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace idrisk
