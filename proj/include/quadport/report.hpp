/**
 * @file report.hpp
 * @brief Serialization of models, experiment reports, utility samples,
 *        ECDFs and result tables.
 *
 * Every number is written in shortest round-trip decimal form, so parsing
 * an emitted file reproduces the in-memory double exactly.
 */

#pragma once

#include "quadport/moments.hpp"
#include "quadport/strategies.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace quadport
{

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string &path, const std::string &content);

std::string read_file(const std::string &path);

nlohmann::ordered_json model_to_json(const Var1Model &model);
Var1Model model_from_json(const nlohmann::json &j);

/// Fitted model plus coefficient standard errors.
nlohmann::ordered_json estimate_to_json(const Var1Estimate &estimate,
                                        const std::vector<std::string> &names);

/// "repetition,utility" rows in repetition order.
std::string samples_csv(const std::vector<double> &samples);

/// Reads the utility column of a samples CSV.
std::vector<double> read_samples_csv(const std::string &path);

/// "value,cum_prob" rows.
std::string ecdf_csv(const std::vector<EcdfPoint> &points);

/// `samples_files[i]` names the samples CSV of report.per_strategy[i].
nlohmann::ordered_json report_to_json(const SimulationReport &report,
                                      const std::vector<std::string> &samples_files);

/// One (gamma, T) cell of a comparison table.
struct TableCell
{
    double gamma = 0.0;
    Index horizon = 0;
    SimulationReport report;
};

/// Markdown table: one block per horizon, one column per gamma, one row per
/// strategy; entries are "median (MAD)".
std::string render_table_markdown(const std::vector<TableCell> &cells);

/// Long-form CSV: horizon,strategy,gamma,median,mad,exceedance.
std::string render_table_csv(const std::vector<TableCell> &cells);

} // namespace quadport
