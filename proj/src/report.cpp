#include "quadport/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace quadport
{

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string format_double(double value)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    if (res.ec != std::errc())
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

void write_file_atomic(const std::string &path, const std::string &content)
{
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out)
        {
            out.close();
            std::error_code ignored;
            fs::remove(tmp, ignored);
            throw std::runtime_error("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec)
    {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        throw std::runtime_error("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
    }
}

std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace
{

ordered_json vector_json(const Vector &v)
{
    ordered_json out = ordered_json::array();
    for (Index i = 0; i < v.size(); ++i)
        out.push_back(v(i));
    return out;
}

ordered_json matrix_json(const Matrix &m)
{
    ordered_json out = ordered_json::array();
    for (Index i = 0; i < m.rows(); ++i)
        out.push_back(vector_json(m.row(i).transpose()));
    return out;
}

Vector vector_from(const nlohmann::json &j, const char *what)
{
    if (!j.is_array())
        throw std::invalid_argument(std::string("model JSON: '") + what + "' must be an array");
    Vector v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Index>(i)) = j[i].get<double>();
    return v;
}

Matrix matrix_from(const nlohmann::json &j, const char *what)
{
    if (!j.is_array() || j.empty())
        throw std::invalid_argument(std::string("model JSON: '") + what + "' must be a nonempty array of rows");
    const std::size_t cols = j[0].size();
    Matrix m(static_cast<Index>(j.size()), static_cast<Index>(cols));
    for (std::size_t i = 0; i < j.size(); ++i)
    {
        if (!j[i].is_array() || j[i].size() != cols)
            throw std::invalid_argument(std::string("model JSON: '") + what + "' rows must have equal length");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Index>(i), static_cast<Index>(c)) = j[i][c].get<double>();
    }
    return m;
}

} // namespace

ordered_json model_to_json(const Var1Model &model)
{
    ordered_json j;
    j["nu"] = vector_json(model.nu);
    j["phi"] = matrix_json(model.phi);
    j["sigma_eps"] = matrix_json(model.sigma_eps);
    j["selected"] = model.selected;
    return j;
}

Var1Model model_from_json(const nlohmann::json &j)
{
    if (!j.is_object())
        throw std::invalid_argument("model JSON must be an object");
    for (const char *key : {"nu", "phi", "sigma_eps"})
        if (!j.contains(key))
            throw std::invalid_argument(std::string("model JSON: missing '") + key + "'");
    Var1Model model;
    model.nu = vector_from(j.at("nu"), "nu");
    model.phi = matrix_from(j.at("phi"), "phi");
    model.sigma_eps = matrix_from(j.at("sigma_eps"), "sigma_eps");
    if (j.contains("selected"))
        model.selected = j.at("selected").get<std::vector<Index>>();
    else
        for (Index i = 0; i < model.nu.size(); ++i)
            model.selected.push_back(i);
    model.validate();
    return model;
}

ordered_json estimate_to_json(const Var1Estimate &estimate, const std::vector<std::string> &names)
{
    ordered_json j;
    j["series"] = names;
    j["model"] = model_to_json(estimate.model);
    j["standard_errors"] = {{"nu", vector_json(estimate.nu_se)}, {"phi", matrix_json(estimate.phi_se)}};
    j["regression_rows"] = estimate.rows;
    return j;
}

std::string samples_csv(const std::vector<double> &samples)
{
    std::string out = "repetition,utility\n";
    for (std::size_t i = 0; i < samples.size(); ++i)
    {
        out += std::to_string(i);
        out += ',';
        out += format_double(samples[i]);
        out += '\n';
    }
    return out;
}

std::vector<double> read_samples_csv(const std::string &path)
{
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t line_no = 0;
    std::vector<double> values;
    while (std::getline(in, line))
    {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line_no == 1 || line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected two columns");
        double v = 0.0;
        const char *first = line.data() + comma + 1;
        const char *last = line.data() + line.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last)
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": malformed utility value");
        values.push_back(v);
    }
    if (values.empty())
        throw std::runtime_error(path + ": no samples");
    return values;
}

std::string ecdf_csv(const std::vector<EcdfPoint> &points)
{
    std::string out = "value,cum_prob\n";
    for (const auto &p : points)
    {
        out += format_double(p.value);
        out += ',';
        out += format_double(p.cum_prob);
        out += '\n';
    }
    return out;
}

ordered_json report_to_json(const SimulationReport &report, const std::vector<std::string> &samples_files)
{
    if (samples_files.size() != report.per_strategy.size())
        throw std::invalid_argument("report_to_json: one samples file per strategy required");
    const SimulationMeta &m = report.meta;
    ordered_json j;
    j["meta"] = {{"seed", m.seed},
                 {"repetitions", m.repetitions},
                 {"model_id", m.model_id},
                 {"gamma", m.gamma},
                 {"horizon", m.horizon},
                 {"r_f", m.r_f},
                 {"initial_state", m.initial_state},
                 {"bsc_training_paths", m.bsc_training_paths}};
    ordered_json per = ordered_json::object();
    for (std::size_t i = 0; i < report.per_strategy.size(); ++i)
    {
        const StrategyResult &r = report.per_strategy[i];
        per[std::string(to_string(r.kind))] = {{"median", r.median},
                                                {"mad", r.mad},
                                                {"exceedance", r.exceedance},
                                                {"samples_file", samples_files[i]}};
    }
    j["per_strategy"] = std::move(per);
    return j;
}

namespace
{

std::string fixed4(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::vector<StrategyKind> strategy_rows(const std::vector<TableCell> &cells)
{
    std::vector<StrategyKind> rows;
    for (const auto &cell : cells)
        for (const auto &r : cell.report.per_strategy)
            if (std::find(rows.begin(), rows.end(), r.kind) == rows.end())
                rows.push_back(r.kind);
    return rows;
}

const StrategyResult *find_result(const SimulationReport &report, StrategyKind kind)
{
    for (const auto &r : report.per_strategy)
        if (r.kind == kind)
            return &r;
    return nullptr;
}

} // namespace

std::string render_table_markdown(const std::vector<TableCell> &cells)
{
    std::vector<double> gammas;
    std::vector<Index> horizons;
    for (const auto &c : cells)
    {
        if (std::find(gammas.begin(), gammas.end(), c.gamma) == gammas.end())
            gammas.push_back(c.gamma);
        if (std::find(horizons.begin(), horizons.end(), c.horizon) == horizons.end())
            horizons.push_back(c.horizon);
    }
    std::sort(gammas.begin(), gammas.end());
    std::sort(horizons.begin(), horizons.end());
    const auto rows = strategy_rows(cells);

    std::map<std::pair<Index, double>, const SimulationReport *> lookup;
    for (const auto &c : cells)
        lookup[{c.horizon, c.gamma}] = &c.report;

    std::string out = "Medians with median absolute deviations in parentheses.\n\n| T | Strategy |";
    for (double g : gammas)
        out += " gamma=" + format_double(g) + " |";
    out += "\n|---|---|";
    for (std::size_t i = 0; i < gammas.size(); ++i)
        out += "---|";
    out += '\n';

    for (Index h : horizons)
    {
        bool first = true;
        for (StrategyKind kind : rows)
        {
            out += "| " + (first ? std::to_string(h) : std::string()) + " | " +
                   std::string(display_name(kind)) + " |";
            first = false;
            for (double g : gammas)
            {
                auto it = lookup.find({h, g});
                const StrategyResult *r = it == lookup.end() ? nullptr : find_result(*it->second, kind);
                out += r ? " " + fixed4(r->median) + " (" + fixed4(r->mad) + ") |" : " - |";
            }
            out += '\n';
        }
    }
    return out;
}

std::string render_table_csv(const std::vector<TableCell> &cells)
{
    std::string out = "horizon,strategy,gamma,median,mad,exceedance\n";
    for (const auto &c : cells)
        for (const auto &r : c.report.per_strategy)
            out += std::to_string(c.horizon) + "," + std::string(to_string(r.kind)) + "," +
                   format_double(c.gamma) + "," + format_double(r.median) + "," + format_double(r.mad) +
                   "," + format_double(r.exceedance) + "\n";
    return out;
}

} // namespace quadport
