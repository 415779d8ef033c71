/**
 * @file cli.hpp
 * @brief Experiment configuration and the command implementations behind the
 *        `quadport` executable.
 *
 * Config schema (JSON, every key optional):
 *
 *   model               "term_spread" | "international" | "international_predictor"
 *                       | {"preset": name}
 *                       | {"nu": [...], "phi": [[...]], "sigma_eps": [[...]], "selected": [...]}
 *                       | {"file": "model.json"}            (output of `quadport fit`)
 *                       | {"csv": "returns.csv", "selected": [...]}
 *   initial_state       "stationary" | "mean" | "fixed:v1,v2,..."
 *   gammas              [5, 10, 20]
 *   horizons            [6, 12]
 *   repetitions         10000
 *   master_seed         42
 *   r_f                 number | "calibrate" | "calibrate:utility,gamma,T"
 *   strategies          ["LAMPS", "MTP", "GMV_MYOPIC", "PARTIAL_MYOPIC", "BSC"]
 *   out                 "out"
 *   threads             1
 *   bsc_training_paths  10000
 *
 * Relative paths inside a config file resolve against the file's directory.
 */

#pragma once

#include "quadport/report.hpp"
#include "quadport/strategies.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace quadport
{

/// Riskless rate given directly or back-solved from a partial-myopic utility.
struct RateSpec
{
    bool calibrate = true;
    double value = 0.0;
    double utility = 0.5837;
    double gamma = 5.0;
    Index horizon = 6;

    /// Per-period rate.
    double resolve() const;
    std::string describe() const;
    static RateSpec parse(const std::string &text);
};

struct ModelSource
{
    enum class Kind
    {
        Preset,
        Inline,
        File,
        Csv,
    };
    Kind kind = Kind::Preset;
    std::string preset = "term_spread";
    Var1Model inline_model;
    std::string path;
    std::vector<Index> selected; ///< CSV source only; empty selects every column
};

struct ExperimentConfig
{
    ModelSource model;
    InitialState initial;
    std::vector<double> gammas{5.0, 10.0, 20.0};
    std::vector<Index> horizons{6, 12};
    Index repetitions = 10000;
    std::uint64_t master_seed = 42;
    RateSpec r_f;
    std::vector<StrategyKind> strategies{StrategyKind::Lamps, StrategyKind::Mtp, StrategyKind::GmvMyopic,
                                         StrategyKind::PartialMyopic, StrategyKind::Bsc};
    std::string out_dir = "out";
    unsigned threads = 1;
    Index bsc_training_paths = 10000;

    void validate() const;

    /// `base_dir` anchors relative paths.
    static ExperimentConfig from_json(const nlohmann::json &j, const std::string &base_dir = "");
    static ExperimentConfig load(const std::string &path);
};

/// Command-line values that replace the config file's.
struct ConfigOverrides
{
    std::optional<std::uint64_t> seed;
    std::optional<Index> repetitions;
    std::optional<std::string> gammas;     ///< comma-separated
    std::optional<std::string> horizons;   ///< comma-separated
    std::optional<std::string> r_f;        ///< number or calibrate[:u,gamma,T]
    std::optional<std::string> out_dir;
    std::optional<std::string> strategies; ///< comma-separated
    std::optional<unsigned> threads;
    std::optional<std::string> initial_state;
    std::optional<std::string> model; ///< preset name, model JSON path or CSV path
};

void apply_overrides(ExperimentConfig &config, const ConfigOverrides &overrides);

struct ResolvedModel
{
    Var1Model model;
    std::string id;
};

ResolvedModel load_model(const ModelSource &source);

/// Fits a VAR(1) to the CSV and writes the model with standard errors as JSON.
Var1Estimate cmd_fit(const std::string &csv_path, const std::string &output_path);

struct WeightRow
{
    StrategyKind strategy = StrategyKind::Lamps;
    double gamma = 0.0;
    std::string asset; ///< "asset<i>" or "riskless"
    double weight = 0.0;
};

/// Weights of every configured strategy for every configured gamma at the
/// first configured horizon. An empty `y_now` means the stationary mean.
std::vector<WeightRow> cmd_weights(const ExperimentConfig &config, const Vector &y_now, double wealth,
                                   Index t_index);

/// "strategy,gamma,asset,weight" rows.
std::string weights_csv(const std::vector<WeightRow> &rows);

/// Simulates `steps` VAR states from the configured model (initial state per
/// config, seed per config) and writes them as a series CSV.
Series cmd_simulate(const ExperimentConfig &config, Index steps, const std::string &output_path);

struct CompareOutput
{
    std::vector<TableCell> cells;
    std::vector<std::string> files; ///< every file written, in write order
};

/// Runs every (gamma, T) cell, then writes table.md, table.csv, config.json
/// and per-cell report, samples and ECDF files under config.out_dir. Nothing
/// is written unless all cells succeed.
CompareOutput cmd_compare(const ExperimentConfig &config);

/// ECDF of a samples CSV, written as "value,cum_prob".
std::vector<EcdfPoint> cmd_ecdf(const std::string &samples_path, const std::string &output_path);

} // namespace quadport
