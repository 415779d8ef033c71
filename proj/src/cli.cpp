#include "quadport/cli.hpp"

#include "quadport/rng.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <set>
#include <sstream>
#include <stdexcept>

namespace quadport
{

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace
{

std::string trim(const std::string &s)
{
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string &text)
{
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string cell;
    while (std::getline(in, cell, ','))
    {
        cell = trim(cell);
        if (cell.empty())
            throw std::invalid_argument("empty entry in list '" + text + "'");
        out.push_back(cell);
    }
    if (out.empty())
        throw std::invalid_argument("empty list");
    return out;
}

double parse_number(const std::string &text)
{
    double v = 0.0;
    const std::string t = trim(text);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw std::invalid_argument("not a number: '" + text + "'");
    return v;
}

Index parse_count(const std::string &text)
{
    Index v = 0;
    const std::string t = trim(text);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw std::invalid_argument("not an integer: '" + text + "'");
    return v;
}

std::vector<double> parse_gammas(const std::string &text)
{
    std::vector<double> out;
    for (const auto &s : split_list(text))
        out.push_back(parse_number(s));
    return out;
}

std::vector<Index> parse_horizons(const std::string &text)
{
    std::vector<Index> out;
    for (const auto &s : split_list(text))
        out.push_back(parse_count(s));
    return out;
}

std::vector<StrategyKind> parse_strategies(const std::vector<std::string> &names)
{
    std::vector<StrategyKind> out;
    for (const auto &n : names)
        out.push_back(parse_strategy(n));
    return out;
}

std::string resolve_path(const std::string &path, const std::string &base_dir)
{
    if (base_dir.empty() || fs::path(path).is_absolute())
        return path;
    return (fs::path(base_dir) / path).string();
}

ModelSource model_source_from_json(const json &j, const std::string &base_dir)
{
    ModelSource src;
    if (j.is_string())
    {
        src.kind = ModelSource::Kind::Preset;
        src.preset = j.get<std::string>();
        return src;
    }
    if (!j.is_object())
        throw std::invalid_argument("config: 'model' must be a preset name or an object");
    if (j.contains("preset"))
    {
        src.kind = ModelSource::Kind::Preset;
        src.preset = j.at("preset").get<std::string>();
    }
    else if (j.contains("file"))
    {
        src.kind = ModelSource::Kind::File;
        src.path = resolve_path(j.at("file").get<std::string>(), base_dir);
    }
    else if (j.contains("csv"))
    {
        src.kind = ModelSource::Kind::Csv;
        src.path = resolve_path(j.at("csv").get<std::string>(), base_dir);
        if (j.contains("selected"))
            src.selected = j.at("selected").get<std::vector<Index>>();
    }
    else
    {
        src.kind = ModelSource::Kind::Inline;
        src.inline_model = model_from_json(j);
    }
    return src;
}

ordered_json manifest_json(const ExperimentConfig &config, const std::string &model_id, double r_f)
{
    ordered_json j;
    j["model_id"] = model_id;
    j["initial_state"] = config.initial.describe();
    j["gammas"] = config.gammas;
    j["horizons"] = config.horizons;
    j["repetitions"] = config.repetitions;
    j["master_seed"] = config.master_seed;
    j["r_f_spec"] = config.r_f.describe();
    j["r_f"] = r_f;
    std::vector<std::string> names;
    for (StrategyKind k : config.strategies)
        names.emplace_back(to_string(k));
    j["strategies"] = names;
    j["bsc_training_paths"] = config.bsc_training_paths;
    return j;
}

std::string cell_tag(double gamma, Index horizon)
{
    return "T" + std::to_string(horizon) + "_g" + format_double(gamma);
}

} // namespace

double RateSpec::resolve() const
{
    return calibrate ? calibrate_riskless_rate(utility, gamma, horizon) : value;
}

std::string RateSpec::describe() const
{
    if (!calibrate)
        return format_double(value);
    return "calibrate:" + format_double(utility) + "," + format_double(gamma) + "," + std::to_string(horizon);
}

RateSpec RateSpec::parse(const std::string &text)
{
    RateSpec spec;
    const std::string t = trim(text);
    if (t == "calibrate")
        return spec;
    const std::string prefix = "calibrate:";
    if (t.rfind(prefix, 0) == 0)
    {
        const auto parts = split_list(t.substr(prefix.size()));
        if (parts.size() != 3)
            throw std::invalid_argument("r_f: expected calibrate:utility,gamma,T");
        spec.utility = parse_number(parts[0]);
        spec.gamma = parse_number(parts[1]);
        spec.horizon = parse_count(parts[2]);
        return spec;
    }
    spec.calibrate = false;
    spec.value = parse_number(t);
    return spec;
}

void ExperimentConfig::validate() const
{
    if (gammas.empty())
        throw std::invalid_argument("config: gammas must be nonempty");
    if (horizons.empty())
        throw std::invalid_argument("config: horizons must be nonempty");
    if (strategies.empty())
        throw std::invalid_argument("config: strategies must be nonempty");
    if (repetitions < 1)
        throw std::invalid_argument("config: repetitions must be at least 1");
    for (double g : gammas)
        if (!(g > 0.0) || !std::isfinite(g))
            throw std::invalid_argument("config: gamma must be positive");
    for (Index h : horizons)
        if (h < 1)
            throw std::invalid_argument("config: horizons must be at least 1");
    if (threads < 1)
        throw std::invalid_argument("config: threads must be at least 1");
    if (out_dir.empty())
        throw std::invalid_argument("config: output directory must be nonempty");
}

ExperimentConfig ExperimentConfig::from_json(const json &j, const std::string &base_dir)
{
    if (!j.is_object())
        throw std::invalid_argument("config must be a JSON object");
    static const std::set<std::string> known{"model",   "initial_state", "gammas",     "horizons",
                                             "repetitions", "master_seed", "r_f",      "strategies",
                                             "out",     "threads",       "bsc_training_paths"};
    for (const auto &item : j.items())
        if (!known.count(item.key()))
            throw std::invalid_argument("config: unknown key '" + item.key() + "'");

    ExperimentConfig c;
    try
    {
        if (j.contains("model"))
            c.model = model_source_from_json(j.at("model"), base_dir);
        if (j.contains("initial_state"))
            c.initial = InitialState::parse(j.at("initial_state").get<std::string>());
        if (j.contains("gammas"))
            c.gammas = j.at("gammas").get<std::vector<double>>();
        if (j.contains("horizons"))
            c.horizons = j.at("horizons").get<std::vector<Index>>();
        if (j.contains("repetitions"))
            c.repetitions = j.at("repetitions").get<Index>();
        if (j.contains("master_seed"))
            c.master_seed = j.at("master_seed").get<std::uint64_t>();
        if (j.contains("r_f"))
        {
            const json &r = j.at("r_f");
            c.r_f = r.is_number() ? RateSpec{false, r.get<double>()} : RateSpec::parse(r.get<std::string>());
        }
        if (j.contains("strategies"))
            c.strategies = parse_strategies(j.at("strategies").get<std::vector<std::string>>());
        if (j.contains("out"))
            c.out_dir = resolve_path(j.at("out").get<std::string>(), base_dir);
        if (j.contains("threads"))
            c.threads = j.at("threads").get<unsigned>();
        if (j.contains("bsc_training_paths"))
            c.bsc_training_paths = j.at("bsc_training_paths").get<Index>();
    }
    catch (const json::exception &e)
    {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string &path)
{
    json j;
    try
    {
        j = json::parse(read_file(path));
    }
    catch (const json::parse_error &e)
    {
        throw std::invalid_argument(path + ": " + e.what());
    }
    return from_json(j, fs::path(path).parent_path().string());
}

void apply_overrides(ExperimentConfig &config, const ConfigOverrides &o)
{
    if (o.seed)
        config.master_seed = *o.seed;
    if (o.repetitions)
        config.repetitions = *o.repetitions;
    if (o.gammas)
        config.gammas = parse_gammas(*o.gammas);
    if (o.horizons)
        config.horizons = parse_horizons(*o.horizons);
    if (o.r_f)
        config.r_f = RateSpec::parse(*o.r_f);
    if (o.out_dir)
        config.out_dir = *o.out_dir;
    if (o.strategies)
        config.strategies = parse_strategies(split_list(*o.strategies));
    if (o.threads)
        config.threads = *o.threads;
    if (o.initial_state)
        config.initial = InitialState::parse(*o.initial_state);
    if (o.model)
    {
        const fs::path path(*o.model);
        ModelSource src;
        if (path.extension() == ".json")
            src = {ModelSource::Kind::File, {}, {}, *o.model, {}};
        else if (path.extension() == ".csv")
            src = {ModelSource::Kind::Csv, {}, {}, *o.model, {}};
        else
            src.preset = *o.model;
        config.model = std::move(src);
    }
    config.validate();
}

ResolvedModel load_model(const ModelSource &source)
{
    switch (source.kind)
    {
    case ModelSource::Kind::Preset:
        if (source.preset == "term_spread")
            return {presets::term_spread_model(), "term_spread"};
        if (source.preset == "international")
            return {presets::international_model(), "international"};
        if (source.preset == "international_predictor")
            return {presets::international_predictor_model(), "international_predictor"};
        throw std::invalid_argument("unknown model preset '" + source.preset + "'");
    case ModelSource::Kind::Inline:
        source.inline_model.validate();
        return {source.inline_model, "inline"};
    case ModelSource::Kind::File:
    {
        const json j = json::parse(read_file(source.path));
        return {model_from_json(j.contains("model") ? j.at("model") : j), "file:" + source.path};
    }
    case ModelSource::Kind::Csv:
    {
        const Series series = read_series_csv(source.path);
        Var1Model model = fit_var1(series.rows);
        if (!source.selected.empty())
            model.selected = source.selected;
        model.validate();
        return {model, "csv:" + source.path};
    }
    }
    throw std::logic_error("unhandled model source");
}

Var1Estimate cmd_fit(const std::string &csv_path, const std::string &output_path)
{
    const Series series = read_series_csv(csv_path);
    Var1Estimate est;
    try
    {
        est = fit_var1_detailed(series.rows);
    }
    catch (const std::exception &e)
    {
        throw std::runtime_error(csv_path + ": " + e.what());
    }
    write_file_atomic(output_path, estimate_to_json(est, series.names).dump(2) + "\n");
    return est;
}

std::vector<WeightRow> cmd_weights(const ExperimentConfig &config, const Vector &y_now, double wealth,
                                   Index t_index)
{
    config.validate();
    const ResolvedModel rm = load_model(config.model);
    const Vector state = y_now.size() ? y_now : stationary_mean(rm.model);
    if (state.size() != rm.model.states())
        throw DimensionMismatch("weights: state has " + std::to_string(state.size()) + " entries, model has " +
                                std::to_string(rm.model.states()));
    const Index horizon = config.horizons.front();
    const RisklessMarket market = RisklessMarket::constant(config.r_f.resolve(), horizon);

    std::vector<WeightRow> rows;
    for (StrategyKind kind : config.strategies)
    {
        for (double gamma : config.gammas)
        {
            const StrategySpec spec{kind, gamma, horizon, 1.0};
            BscPolicy bsc;
            PolicyInputs inputs{&rm.model, nullptr};
            if (kind == StrategyKind::Bsc)
            {
                BscFitOptions opts;
                opts.training_paths = config.bsc_training_paths;
                opts.initial = config.initial;
                bsc = bsc_fit(rm.model, market, gamma, horizon, config.master_seed, opts);
                inputs.bsc = &bsc;
            }
            WeightVector w;
            try
            {
                w = strategy_weights(spec, inputs, state, wealth, t_index, market);
            }
            catch (const std::exception &e)
            {
                throw std::runtime_error("strategy " + std::string(to_string(kind)) + ", gamma " +
                                         format_double(gamma) + ": " + e.what());
            }
            for (Index i = 0; i < w.w.size(); ++i)
                rows.push_back({kind, gamma, "asset" + std::to_string(i), w.w(i)});
            rows.push_back({kind, gamma, "riskless", uses_riskless(kind) ? w.riskless_share() : 0.0});
        }
    }
    return rows;
}

std::string weights_csv(const std::vector<WeightRow> &rows)
{
    std::string out = "strategy,gamma,asset,weight\n";
    for (const auto &r : rows)
        out += std::string(to_string(r.strategy)) + "," + format_double(r.gamma) + "," + r.asset + "," +
               format_double(r.weight) + "\n";
    return out;
}

Series cmd_simulate(const ExperimentConfig &config, Index steps, const std::string &output_path)
{
    if (steps < 1)
        throw std::invalid_argument("simulate: steps must be at least 1");
    const ResolvedModel rm = load_model(config.model);
    const Vector y0 =
        draw_initial_state(rm.model, config.initial, config.master_seed, stream_domain::kInitialState, 0);
    NormalStream stream(config.master_seed, stream_domain::kSeries);
    const StatePath path = simulate_path(rm.model, y0, steps, stream);

    Series series;
    for (Index i = 0; i < rm.model.states(); ++i)
        series.names.push_back("y" + std::to_string(i));
    series.rows = path.states;
    write_series_csv(output_path, series);
    return series;
}

CompareOutput cmd_compare(const ExperimentConfig &config)
{
    config.validate();
    const ResolvedModel rm = load_model(config.model);
    const double r_f = config.r_f.resolve();

    ExperimentOptions opts;
    opts.model_id = rm.id;
    opts.initial = config.initial;
    opts.bsc_training_paths = config.bsc_training_paths;
    opts.threads = config.threads;

    CompareOutput result;
    for (Index horizon : config.horizons)
    {
        for (double gamma : config.gammas)
        {
            TableCell cell{gamma, horizon, {}};
            try
            {
                cell.report = monte_carlo_experiment(rm.model, RisklessMarket::constant(r_f, horizon),
                                                     config.strategies, gamma, horizon, config.repetitions,
                                                     config.master_seed, opts);
            }
            catch (const std::exception &e)
            {
                throw std::runtime_error("cell gamma=" + format_double(gamma) + ", T=" + std::to_string(horizon) +
                                         ": " + e.what());
            }
            result.cells.push_back(std::move(cell));
        }
    }

    // Render everything before touching the file system.
    std::vector<std::pair<std::string, std::string>> files;
    files.emplace_back("config.json", manifest_json(config, rm.id, r_f).dump(2) + "\n");
    files.emplace_back("table.md", render_table_markdown(result.cells));
    files.emplace_back("table.csv", render_table_csv(result.cells));
    for (const auto &cell : result.cells)
    {
        const std::string tag = cell_tag(cell.gamma, cell.horizon);
        std::vector<std::string> sample_names;
        for (const auto &r : cell.report.per_strategy)
        {
            const std::string suffix = tag + "_" + std::string(to_string(r.kind)) + ".csv";
            sample_names.push_back("samples_" + suffix);
            files.emplace_back("samples_" + suffix, samples_csv(r.samples));
            files.emplace_back("ecdf_" + suffix, ecdf_csv(ecdf(r.samples)));
        }
        files.emplace_back("report_" + tag + ".json", report_to_json(cell.report, sample_names).dump(2) + "\n");
    }

    fs::create_directories(config.out_dir);
    for (const auto &[name, content] : files)
    {
        const std::string path = (fs::path(config.out_dir) / name).string();
        write_file_atomic(path, content);
        result.files.push_back(path);
    }
    return result;
}

std::vector<EcdfPoint> cmd_ecdf(const std::string &samples_path, const std::string &output_path)
{
    const auto points = ecdf(read_samples_csv(samples_path));
    write_file_atomic(output_path, ecdf_csv(points));
    return points;
}

} // namespace quadport
