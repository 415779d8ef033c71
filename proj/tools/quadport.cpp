// Command-line front end: fit, weights, simulate, compare, ecdf.

#include "quadport/cli.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <sstream>

using namespace quadport;

namespace
{

struct CommonFlags
{
    std::string config_path;
    ConfigOverrides overrides;
};

void add_common(CLI::App *cmd, CommonFlags &flags)
{
    cmd->add_option("--config", flags.config_path, "JSON experiment config");
    cmd->add_option("--seed", flags.overrides.seed, "master seed");
    cmd->add_option("--reps", flags.overrides.repetitions, "repetitions per cell");
    cmd->add_option("--gamma", flags.overrides.gammas, "comma-separated relative risk aversions");
    cmd->add_option("--horizon", flags.overrides.horizons, "comma-separated horizons");
    cmd->add_option("--rf", flags.overrides.r_f, "riskless rate per period, or calibrate[:utility,gamma,T]");
    cmd->add_option("--strategies", flags.overrides.strategies, "comma-separated strategy names");
    cmd->add_option("--model", flags.overrides.model, "preset name, model JSON or returns CSV");
    cmd->add_option("--initial", flags.overrides.initial_state, "stationary | mean | fixed:v1,v2,...");
}

ExperimentConfig resolve(const CommonFlags &flags)
{
    ExperimentConfig config = flags.config_path.empty() ? ExperimentConfig{} : ExperimentConfig::load(flags.config_path);
    apply_overrides(config, flags.overrides);
    return config;
}

Vector parse_state(const std::string &text)
{
    if (text.empty())
        return {};
    std::vector<double> values;
    std::stringstream in(text);
    std::string cell;
    while (std::getline(in, cell, ','))
        values.push_back(std::stod(cell));
    return Eigen::Map<Vector>(values.data(), static_cast<Index>(values.size()));
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Multi-period quadratic-utility portfolio weights and strategy comparison"};
    app.require_subcommand(1);

    std::string fit_csv, fit_out = "model.json";
    auto *fit = app.add_subcommand("fit", "fit a VAR(1) to a CSV of returns and predictors");
    fit->add_option("csv", fit_csv, "input CSV (header row, one row per period)")->required();
    fit->add_option("--out", fit_out, "output model JSON");
    fit->footer("The fit is agnostic to whether the columns hold simple or log returns; the weight "
                "formulas assume simple returns.");

    CommonFlags weights_flags;
    std::string state_text;
    double wealth = 1.0;
    Index period = 0;
    auto *weights = app.add_subcommand("weights", "print per-strategy weights for one state");
    add_common(weights, weights_flags);
    weights->add_option("--state", state_text, "comma-separated VAR state (default: stationary mean)");
    weights->add_option("--wealth", wealth, "current wealth");
    weights->add_option("--period", period, "periods remaining, 1..T (default: T)");

    CommonFlags sim_flags;
    Index steps = 1000;
    std::string sim_out = "series.csv";
    auto *simulate = app.add_subcommand("simulate", "simulate a VAR(1) series to CSV");
    add_common(simulate, sim_flags);
    simulate->add_option("--steps", steps, "number of simulated steps");
    simulate->add_option("--out", sim_out, "output CSV");

    CommonFlags cmp_flags;
    auto *compare = app.add_subcommand("compare", "run the Monte-Carlo strategy comparison");
    add_common(compare, cmp_flags);
    compare->add_option("--out", cmp_flags.overrides.out_dir, "output directory");
    compare->add_option("--threads", cmp_flags.overrides.threads, "worker threads");

    std::string ecdf_in, ecdf_out = "ecdf.csv";
    auto *ecdf_cmd = app.add_subcommand("ecdf", "empirical CDF of a samples CSV");
    ecdf_cmd->add_option("samples", ecdf_in, "samples CSV written by compare")->required();
    ecdf_cmd->add_option("--out", ecdf_out, "output CSV");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e);
    }

    try
    {
        if (*fit)
        {
            const Var1Estimate est = cmd_fit(fit_csv, fit_out);
            std::cout << "fitted " << est.model.states() << "-dimensional VAR(1) on " << est.rows
                      << " rows -> " << fit_out << "\n";
        }
        else if (*weights)
        {
            const ExperimentConfig config = resolve(weights_flags);
            const Index t = period > 0 ? period : config.horizons.front();
            std::cout << weights_csv(cmd_weights(config, parse_state(state_text), wealth, t));
        }
        else if (*simulate)
        {
            const ExperimentConfig config = resolve(sim_flags);
            cmd_simulate(config, steps, sim_out);
            std::cout << "wrote " << steps + 1 << " rows -> " << sim_out << "\n";
        }
        else if (*compare)
        {
            const ExperimentConfig config = resolve(cmp_flags);
            const CompareOutput out = cmd_compare(config);
            std::cout << render_table_markdown(out.cells) << "\nwrote " << out.files.size() << " files to "
                      << config.out_dir << "\n";
        }
        else if (*ecdf_cmd)
        {
            const auto points = cmd_ecdf(ecdf_in, ecdf_out);
            std::cout << "wrote " << points.size() << " points -> " << ecdf_out << "\n";
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
