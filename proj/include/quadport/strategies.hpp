/**
 * @file strategies.hpp
 * @brief Allocation policies, wealth dynamics, quadratic utility and the
 *        Monte-Carlo strategy comparison.
 *
 * Every repetition simulates one VAR(1) path and evaluates all requested
 * strategies on it (common random numbers). Randomness is keyed by
 * (master_seed, repetition, period), so results do not depend on thread
 * count or evaluation order.
 */

#pragma once

#include "quadport/frontier.hpp"
#include "quadport/horizon_riskless.hpp"
#include "quadport/horizon_risky.hpp"
#include "quadport/moments.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace quadport
{

enum class StrategyKind
{
    Lamps,         ///< predictive-loss approximation with a riskless asset
    Mtp,           ///< multi-period tangency portfolio
    GmvMyopic,     ///< global minimum variance, fully invested
    PartialMyopic, ///< all wealth in the riskless asset
    Bsc,           ///< weights linear in the predictors, w_t = theta z_t
    Cor22Risky,    ///< closed form without riskless asset on certainty-equivalent moments
    Thm21Risky,    ///< backward recursion without riskless asset on certainty-equivalent moments
};

std::string_view to_string(StrategyKind kind);

/// Short row label used in result tables.
std::string_view display_name(StrategyKind kind);

/// Parses the canonical upper-case name (e.g. "GMV_MYOPIC"); case-insensitive.
StrategyKind parse_strategy(std::string_view name);

/// True for strategies that hold the riskless asset (wealth evolves with r_f).
bool uses_riskless(StrategyKind kind);

struct StrategySpec
{
    StrategyKind kind = StrategyKind::Lamps;
    double gamma = 5.0;
    Index horizon = 1;
    double w0 = 1.0;

    void validate() const;
};

struct BscPolicy
{
    Matrix theta; ///< k x p, p counts the constant entry

    WeightVector weights(const Vector &predictors) const { return {theta * predictors}; }
};

/// z = (1, predictor coordinates of the state).
Vector bsc_predictors(const Var1Model &model, const Vector &state);

/// alpha = gamma / (1 + gamma), the risk-aversion slope matching relative
/// risk aversion gamma at unit wealth.
double gamma_to_alpha(double gamma);

/// U(W) = W - (alpha/2) W^2.
inline double quadratic_utility(double wealth, double alpha)
{
    return wealth - 0.5 * alpha * wealth * wealth;
}

/// W (1 + w'X); weights must sum to one within 1e-8.
double wealth_step_risky(double wealth, const WeightVector &weights, const Vector &returns);

/// W (1 + r_f + w'(X - r_f 1)).
double wealth_step_riskless(double wealth, const WeightVector &risky_weights, const Vector &returns,
                            double r_f);

/// Back-solves the constant riskless rate whose all-riskless terminal
/// utility Rf^T - (alpha/2) Rf^{2T} equals `utility` (bisection to 1e-12).
/// Only the root below the satiation point 1/alpha is considered.
double calibrate_riskless_rate(double utility, double gamma, Index horizon);

/// How each repetition's initial VAR state is chosen.
struct InitialState
{
    enum class Kind
    {
        Mean,       ///< unconditional mean of the VAR
        Stationary, ///< draw from the stationary Gaussian distribution
        Fixed,      ///< explicit vector
    };
    Kind kind = Kind::Stationary;
    Vector fixed;

    std::string describe() const;
    static InitialState parse(const std::string &text);
};

/// Initial state for stream index `index` under `domain`.
Vector draw_initial_state(const Var1Model &model, const InitialState &initial, std::uint64_t seed,
                          std::uint64_t domain, std::uint64_t index);

/// Simulated path for repetition `rep` from streams (seed, rep, period).
StatePath simulate_repetition(const Var1Model &model, const InitialState &initial, Index horizon,
                              std::uint64_t seed, std::uint64_t path_domain,
                              std::uint64_t init_domain, std::uint64_t rep);

struct BscFitOptions
{
    Index training_paths = 10000;
    double w0 = 1.0;
    InitialState initial;
};

/// Fits theta by maximizing the sample mean of U(W_T) under w_t = theta z_t,
/// using the first-order expansion of terminal wealth in the period excess
/// returns. Over the augmented assets  xhat = sum_j c_j (z_j (x) x^_{j+1}),
/// c_j = prod_{i != j+1} Rf_i, this is a single-period quadratic problem:
///   vec(theta) = (1/(alpha W0) - prod Rf) M^{-1} m,  m = mean xhat,  M = mean xhat xhat'.
/// Exact for T = 1.
BscPolicy bsc_fit(const Var1Model &model, const RisklessMarket &market, double gamma, Index horizon,
                  std::uint64_t seed, const BscFitOptions &options = {});

/// Same closed form on explicit training paths.
BscPolicy bsc_fit_paths(const Var1Model &model, const RisklessMarket &market, double gamma,
                        const std::vector<StatePath> &paths, double w0 = 1.0);

/// Everything a policy may need besides the current state and wealth.
struct PolicyInputs
{
    const Var1Model *model = nullptr;
    const BscPolicy *bsc = nullptr;
};

/// Risky weights of `spec` at decision time T - t_index, given the current
/// VAR state and wealth. Fully invested strategies return weights summing
/// to one; the others leave 1 - w'1 in the riskless asset.
WeightVector strategy_weights(const StrategySpec &spec, const PolicyInputs &inputs,
                              const Vector &state, double wealth, Index t_index,
                              const RisklessMarket &market);

/// Threads realized wealth through the path and returns U(W_T).
double run_path(const StrategySpec &spec, const PolicyInputs &inputs, const StatePath &path,
                const RisklessMarket &market);

struct EcdfPoint
{
    double value = 0.0;
    double cum_prob = 0.0;
};

/// Right-continuous step function F(x) = #{u_i <= x} / n at each distinct value.
std::vector<EcdfPoint> ecdf(const std::vector<double> &samples);

double median(std::vector<double> samples);

/// median(|u_i - median(u)|)
double median_absolute_deviation(const std::vector<double> &samples);

struct StrategyResult
{
    StrategyKind kind = StrategyKind::Lamps;
    double median = 0.0;
    double mad = 0.0;
    /// P(utility > partial-myopic utility) over repetitions.
    double exceedance = 0.0;
    std::vector<double> samples;
};

struct SimulationMeta
{
    std::uint64_t seed = 0;
    Index repetitions = 0;
    std::string model_id;
    double gamma = 0.0;
    Index horizon = 0;
    double r_f = 0.0;
    std::string initial_state;
    Index bsc_training_paths = 0;
};

struct SimulationReport
{
    SimulationMeta meta;
    std::vector<StrategyResult> per_strategy;

    const StrategyResult &at(StrategyKind kind) const;
};

struct ExperimentOptions
{
    std::string model_id = "custom";
    InitialState initial;
    Index bsc_training_paths = 10000;
    unsigned threads = 1;
};

/// Runs `repetitions` simulated paths and evaluates every strategy on each.
/// `market` must cover `horizon` periods. Any failing path aborts with its
/// repetition index and cause.
SimulationReport monte_carlo_experiment(const Var1Model &model, const RisklessMarket &market,
                                        const std::vector<StrategyKind> &strategies, double gamma,
                                        Index horizon, Index repetitions, std::uint64_t master_seed,
                                        const ExperimentOptions &options = {});

} // namespace quadport
