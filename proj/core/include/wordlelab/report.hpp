#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wordlelab/ols.hpp"

namespace wordlelab {

enum class TableFormat { Text, Csv, Json };

std::optional<TableFormat> parse_table_format(std::string_view token) noexcept;

/**
 * Side-by-side regression table, one column per result.
 *
 * Text: each term shows the estimate with stars and the standard error in
 * parentheses beneath, followed by Observations and Number of Participants.
 * Csv: one row per (dv, term). Json: an array that parse_results() reads back.
 */
std::string render_table(const std::vector<RegressionResult>& results, TableFormat format, int precision = 2);

nlohmann::json to_json(const RegressionResult& r);
RegressionResult result_from_json(const nlohmann::json& j);
std::vector<RegressionResult> parse_results(std::string_view json_text);

}  // namespace wordlelab
