#include "quadport/strategies.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace quadport
{

namespace
{

struct KindName
{
    StrategyKind kind;
    std::string_view name;
    std::string_view label;
};

constexpr std::array<KindName, 7> kKinds{{
    {StrategyKind::Lamps, "LAMPS", "LAMPS"},
    {StrategyKind::Mtp, "MTP", "MTP"},
    {StrategyKind::GmvMyopic, "GMV_MYOPIC", "GMV"},
    {StrategyKind::PartialMyopic, "PARTIAL_MYOPIC", "Part.Myopic"},
    {StrategyKind::Bsc, "BSC", "BSC"},
    {StrategyKind::Cor22Risky, "COR22_RISKY", "Risky (closed form)"},
    {StrategyKind::Thm21Risky, "THM21_RISKY", "Risky (recursion)"},
}};

const KindName &lookup(StrategyKind kind)
{
    for (const auto &k : kKinds)
        if (k.kind == kind)
            return k;
    throw std::logic_error("unknown strategy kind");
}

} // namespace

std::string_view to_string(StrategyKind kind) { return lookup(kind).name; }

std::string_view display_name(StrategyKind kind) { return lookup(kind).label; }

StrategyKind parse_strategy(std::string_view name)
{
    std::string upper(name);
    for (char &c : upper)
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (const auto &k : kKinds)
        if (k.name == upper)
            return k.kind;
    throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

bool uses_riskless(StrategyKind kind)
{
    switch (kind)
    {
    case StrategyKind::Lamps:
    case StrategyKind::PartialMyopic:
    case StrategyKind::Bsc:
        return true;
    default:
        return false;
    }
}

void StrategySpec::validate() const
{
    if (!(gamma > 0.0))
        throw std::invalid_argument("strategy: gamma must be positive");
    if (horizon < 1)
        throw std::invalid_argument("strategy: horizon must be at least 1");
    if (!(w0 > 0.0))
        throw std::invalid_argument("strategy: initial wealth must be positive");
}

Vector bsc_predictors(const Var1Model &model, const Vector &state)
{
    const auto idx = model.predictor_indices();
    Vector z(static_cast<Index>(idx.size()) + 1);
    z(0) = 1.0;
    for (std::size_t i = 0; i < idx.size(); ++i)
        z(static_cast<Index>(i) + 1) = state(idx[i]);
    return z;
}

double gamma_to_alpha(double gamma)
{
    if (!(gamma > 0.0))
        throw std::invalid_argument("gamma must be positive");
    return gamma / (1.0 + gamma);
}

double wealth_step_risky(double wealth, const WeightVector &weights, const Vector &returns)
{
    if (weights.size() != returns.size())
        throw DimensionMismatch("wealth_step_risky: weights and returns differ in size");
    if (std::abs(weights.sum() - 1.0) > 1e-8)
        throw std::invalid_argument("wealth_step_risky: weights must sum to one");
    return wealth * (1.0 + weights.w.dot(returns));
}

double wealth_step_riskless(double wealth, const WeightVector &risky_weights, const Vector &returns,
                            double r_f)
{
    if (risky_weights.size() != returns.size())
        throw DimensionMismatch("wealth_step_riskless: weights and returns differ in size");
    const Vector excess = returns.array() - r_f;
    return wealth * (1.0 + r_f + risky_weights.w.dot(excess));
}

double calibrate_riskless_rate(double utility, double gamma, Index horizon)
{
    if (horizon < 1)
        throw std::invalid_argument("calibrate_riskless_rate: horizon must be at least 1");
    const double alpha = gamma_to_alpha(gamma);
    const double n = static_cast<double>(horizon);
    auto u = [&](double r) {
        const double g = std::pow(1.0 + r, n);
        return g - 0.5 * alpha * g * g;
    };
    // U(Rf^T) increases on Rf^T < 1/alpha.
    double lo = -0.5;
    double hi = std::pow(1.0 / alpha, 1.0 / n) - 1.0;
    if (!(utility >= u(lo) && utility <= u(hi)))
        throw std::domain_error("calibrate_riskless_rate: utility outside the attainable range");
    while (hi - lo > 1e-12)
    {
        const double mid = 0.5 * (lo + hi);
        (u(mid) < utility ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::string InitialState::describe() const
{
    switch (kind)
    {
    case Kind::Mean:
        return "mean";
    case Kind::Stationary:
        return "stationary";
    case Kind::Fixed:
    {
        std::ostringstream out;
        out.precision(17);
        out << "fixed:";
        for (Index i = 0; i < fixed.size(); ++i)
            out << (i ? "," : "") << fixed(i);
        return out.str();
    }
    }
    return {};
}

InitialState InitialState::parse(const std::string &text)
{
    if (text == "mean")
        return {Kind::Mean, {}};
    if (text == "stationary")
        return {Kind::Stationary, {}};
    const std::string prefix = "fixed:";
    if (text.rfind(prefix, 0) == 0)
    {
        std::vector<double> values;
        std::stringstream in(text.substr(prefix.size()));
        std::string cell;
        while (std::getline(in, cell, ','))
            values.push_back(std::stod(cell));
        return {Kind::Fixed, Eigen::Map<Vector>(values.data(), static_cast<Index>(values.size()))};
    }
    throw std::invalid_argument("initial state must be 'mean', 'stationary' or 'fixed:v1,v2,...'");
}

Vector draw_initial_state(const Var1Model &model, const InitialState &initial, std::uint64_t seed,
                          std::uint64_t domain, std::uint64_t index)
{
    switch (initial.kind)
    {
    case InitialState::Kind::Mean:
        return stationary_mean(model);
    case InitialState::Kind::Stationary:
    {
        NormalStream stream(seed, domain, index);
        return stationary_mean(model) + psd_factor(stationary_covariance(model)) * stream.normals(model.states());
    }
    case InitialState::Kind::Fixed:
        if (initial.fixed.size() != model.states())
            throw DimensionMismatch("fixed initial state has the wrong dimension");
        return initial.fixed;
    }
    throw std::logic_error("unknown initial state kind");
}

StatePath simulate_repetition(const Var1Model &model, const InitialState &initial, Index horizon,
                              std::uint64_t seed, std::uint64_t path_domain,
                              std::uint64_t init_domain, std::uint64_t rep)
{
    const Vector y0 = draw_initial_state(model, initial, seed, init_domain, rep);
    std::vector<Vector> noise;
    noise.reserve(static_cast<std::size_t>(horizon));
    for (Index t = 0; t < horizon; ++t)
    {
        NormalStream stream(seed, path_domain, rep, static_cast<std::uint64_t>(t));
        noise.push_back(stream.normals(model.states()));
    }
    return simulate_path(model, y0, horizon, noise);
}

BscPolicy bsc_fit_paths(const Var1Model &model, const RisklessMarket &market, double gamma,
                        const std::vector<StatePath> &paths, double w0)
{
    market.validate();
    const double alpha = gamma_to_alpha(gamma);
    const Index horizon = market.horizon();
    const Index k = model.assets();
    const Index p = static_cast<Index>(model.predictor_indices().size()) + 1;
    const Index d = k * p;
    if (paths.empty())
        throw std::invalid_argument("bsc_fit: no training paths");

    double gross_all = 1.0;
    for (Index i = 1; i <= horizon; ++i)
        gross_all *= market.gross(i);

    Vector m_sum = Vector::Zero(d);
    Matrix m2_sum = Matrix::Zero(d, d);
    Vector feature(d);
    for (const StatePath &path : paths)
    {
        if (path.horizon() < horizon)
            throw DimensionMismatch("bsc_fit: training path shorter than the horizon");
        feature.setZero();
        for (Index j = 0; j < horizon; ++j)
        {
            const double rf = market.r_f[static_cast<std::size_t>(j)];
            const double c = gross_all / (1.0 + rf);
            const Vector z = bsc_predictors(model, path.states[static_cast<std::size_t>(j)]);
            const Vector excess = path.returns[static_cast<std::size_t>(j)].array() - rf;
            // vec(theta) is column-major: entry a + k b pairs asset a with predictor b.
            for (Index b = 0; b < p; ++b)
                feature.segment(b * k, k) += c * z(b) * excess;
        }
        m_sum += feature;
        m2_sum.selfadjointView<Eigen::Lower>().rankUpdate(feature);
    }
    const double n = static_cast<double>(paths.size());
    const Matrix m2 = Matrix(m2_sum.selfadjointView<Eigen::Lower>()) / n;
    const Vector m1 = m_sum / n;

    const SpdSolve solver(m2, "BSC augmented second-moment matrix");
    const Vector vec_theta = (1.0 / (alpha * w0) - gross_all) * solver.solve(m1);
    BscPolicy policy;
    policy.theta = Eigen::Map<const Matrix>(vec_theta.data(), k, p);
    return policy;
}

BscPolicy bsc_fit(const Var1Model &model, const RisklessMarket &market, double gamma, Index horizon,
                  std::uint64_t seed, const BscFitOptions &options)
{
    model.validate();
    if (market.horizon() != horizon)
        throw DimensionMismatch("bsc_fit: riskless market must cover the horizon");
    if (options.training_paths < 1000)
        throw std::invalid_argument("bsc_fit: at least 1000 training paths are required");
    std::vector<StatePath> paths;
    paths.reserve(static_cast<std::size_t>(options.training_paths));
    for (Index i = 0; i < options.training_paths; ++i)
        paths.push_back(simulate_repetition(model, options.initial, horizon, seed,
                                            stream_domain::kBscTraining,
                                            stream_domain::kBscInitialState,
                                            static_cast<std::uint64_t>(i)));
    return bsc_fit_paths(model, market, gamma, paths, options.w0);
}

WeightVector strategy_weights(const StrategySpec &spec, const PolicyInputs &inputs,
                              const Vector &state, double wealth, Index t_index,
                              const RisklessMarket &market)
{
    if (inputs.model == nullptr)
        throw std::invalid_argument("strategy_weights: no return model");
    const Var1Model &model = *inputs.model;
    const double alpha = gamma_to_alpha(spec.gamma);
    const MomentForecast forecast = conditional_moments(model, state);

    switch (spec.kind)
    {
    case StrategyKind::Lamps:
        return lamps_weights(forecast, market, alpha, wealth, t_index);
    case StrategyKind::Mtp:
        return tangency_multiperiod(forecast, market.rate_for(t_index));
    case StrategyKind::GmvMyopic:
        return gmv_weights(forecast.sigma);
    case StrategyKind::PartialMyopic:
        return {Vector::Zero(model.assets())};
    case StrategyKind::Bsc:
        if (inputs.bsc == nullptr)
            throw std::invalid_argument("strategy_weights: BSC requires a fitted policy");
        return inputs.bsc->weights(bsc_predictors(model, state));
    case StrategyKind::Cor22Risky:
        return weights_corollary22(certainty_equivalent_forecasts(model, state, t_index), alpha,
                                   wealth, t_index);
    case StrategyKind::Thm21Risky:
    {
        const auto states = recursion_iid(certainty_equivalent_forecasts(model, state, t_index), t_index);
        return weights_theorem21(states.front(), alpha, wealth);
    }
    }
    throw std::logic_error("unknown strategy kind");
}

double run_path(const StrategySpec &spec, const PolicyInputs &inputs, const StatePath &path,
                const RisklessMarket &market)
{
    spec.validate();
    if (path.horizon() < spec.horizon)
        throw DimensionMismatch("run_path: path shorter than the strategy horizon");
    if (market.horizon() != spec.horizon)
        throw DimensionMismatch("run_path: riskless market must cover the strategy horizon");

    const double alpha = gamma_to_alpha(spec.gamma);
    const bool riskless = uses_riskless(spec.kind);
    double wealth = spec.w0;
    for (Index j = 0; j < spec.horizon; ++j)
    {
        const Index t_index = spec.horizon - j;
        const Vector &x = path.returns[static_cast<std::size_t>(j)];
        if (spec.kind == StrategyKind::PartialMyopic)
        {
            wealth *= 1.0 + market.rate_for(t_index);
            continue;
        }
        const WeightVector w = strategy_weights(spec, inputs, path.states[static_cast<std::size_t>(j)],
                                                wealth, t_index, market);
        wealth = riskless ? wealth_step_riskless(wealth, w, x, market.rate_for(t_index))
                          : wealth_step_risky(wealth, w, x);
    }
    return quadratic_utility(wealth, alpha);
}

std::vector<EcdfPoint> ecdf(const std::vector<double> &samples)
{
    if (samples.empty())
        throw std::invalid_argument("ecdf: empty sample");
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<EcdfPoint> out;
    for (std::size_t i = 0; i < sorted.size(); ++i)
    {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i])
            continue;
        out.push_back({sorted[i], static_cast<double>(i + 1) / n});
    }
    return out;
}

double median(std::vector<double> samples)
{
    if (samples.empty())
        throw std::invalid_argument("median: empty sample");
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    if (n % 2 == 1)
        return samples[n / 2];
    return 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
}

double median_absolute_deviation(const std::vector<double> &samples)
{
    const double med = median(samples);
    std::vector<double> dev;
    dev.reserve(samples.size());
    for (double u : samples)
        dev.push_back(std::abs(u - med));
    return median(std::move(dev));
}

const StrategyResult &SimulationReport::at(StrategyKind kind) const
{
    for (const auto &r : per_strategy)
        if (r.kind == kind)
            return r;
    throw std::out_of_range("strategy '" + std::string(to_string(kind)) + "' not in report");
}

SimulationReport monte_carlo_experiment(const Var1Model &model, const RisklessMarket &market,
                                        const std::vector<StrategyKind> &strategies, double gamma,
                                        Index horizon, Index repetitions, std::uint64_t master_seed,
                                        const ExperimentOptions &options)
{
    model.validate();
    market.validate();
    if (repetitions < 1)
        throw std::invalid_argument("monte_carlo_experiment: repetitions must be at least 1");
    if (strategies.empty())
        throw std::invalid_argument("monte_carlo_experiment: no strategies requested");
    if (market.horizon() != horizon)
        throw DimensionMismatch("monte_carlo_experiment: riskless market must cover the horizon");
    gamma_to_alpha(gamma);

    std::optional<BscPolicy> bsc;
    if (std::find(strategies.begin(), strategies.end(), StrategyKind::Bsc) != strategies.end())
    {
        BscFitOptions fit;
        fit.training_paths = options.bsc_training_paths;
        fit.initial = options.initial;
        bsc = bsc_fit(model, market, gamma, horizon, master_seed, fit);
    }
    const PolicyInputs inputs{&model, bsc ? &*bsc : nullptr};

    const std::size_t n_strat = strategies.size();
    const std::size_t n_rep = static_cast<std::size_t>(repetitions);
    std::vector<std::vector<double>> utilities(n_strat, std::vector<double>(n_rep));
    std::vector<double> baseline(n_rep);

    const StrategySpec baseline_spec{StrategyKind::PartialMyopic, gamma, horizon, 1.0};

    std::mutex error_mutex;
    std::size_t first_failure = n_rep;
    std::string failure_message;

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r)
        {
            std::size_t s = 0;
            try
            {
                const StatePath path = simulate_repetition(model, options.initial, horizon, master_seed,
                                                           stream_domain::kPath,
                                                           stream_domain::kInitialState, r);
                baseline[r] = run_path(baseline_spec, inputs, path, market);
                for (s = 0; s < n_strat; ++s)
                {
                    const StrategySpec spec{strategies[s], gamma, horizon, 1.0};
                    utilities[s][r] = run_path(spec, inputs, path, market);
                }
            }
            catch (const std::exception &e)
            {
                std::lock_guard lock(error_mutex);
                if (r < first_failure)
                {
                    first_failure = r;
                    failure_message = "repetition " + std::to_string(r) + ", strategy " +
                                      std::string(s < n_strat ? to_string(strategies[s]) : "?") +
                                      ": " + e.what();
                }
                return;
            }
        }
    };

    const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(n_rep)));
    if (threads == 1)
    {
        work(0, n_rep);
    }
    else
    {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n_rep + threads - 1) / threads;
        for (unsigned i = 0; i < threads; ++i)
        {
            const std::size_t begin = std::min(n_rep, i * chunk);
            const std::size_t end = std::min(n_rep, begin + chunk);
            pool.emplace_back(work, begin, end);
        }
        for (auto &t : pool)
            t.join();
    }
    if (first_failure < n_rep)
        throw std::runtime_error("monte_carlo_experiment: " + failure_message);

    SimulationReport report;
    report.meta.seed = master_seed;
    report.meta.repetitions = repetitions;
    report.meta.model_id = options.model_id;
    report.meta.gamma = gamma;
    report.meta.horizon = horizon;
    report.meta.r_f = market.r_f.front();
    report.meta.initial_state = options.initial.describe();
    report.meta.bsc_training_paths = bsc ? options.bsc_training_paths : 0;

    for (std::size_t s = 0; s < n_strat; ++s)
    {
        StrategyResult res;
        res.kind = strategies[s];
        res.samples = std::move(utilities[s]);
        res.median = median(res.samples);
        res.mad = median_absolute_deviation(res.samples);
        std::size_t wins = 0;
        for (std::size_t r = 0; r < n_rep; ++r)
            if (res.samples[r] > baseline[r])
                ++wins;
        res.exceedance = static_cast<double>(wins) / static_cast<double>(n_rep);
        report.per_strategy.push_back(std::move(res));
    }
    return report;
}

} // namespace quadport
