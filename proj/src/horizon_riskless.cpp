#include "quadport/horizon_riskless.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace quadport
{

RisklessMarket RisklessMarket::constant(double rate, Index horizon)
{
    if (horizon < 1)
        throw std::invalid_argument("riskless market: horizon must be at least 1");
    RisklessMarket market{std::vector<double>(static_cast<std::size_t>(horizon), rate)};
    market.validate();
    return market;
}

void RisklessMarket::validate() const
{
    if (r_f.empty())
        throw std::invalid_argument("riskless market: empty rate sequence");
    for (double r : r_f)
        if (!std::isfinite(r) || !(1.0 + r > 0.0))
            throw std::invalid_argument("riskless market: gross riskless return must be positive");
}

double RisklessMarket::rate_for(Index t_index) const
{
    if (t_index < 1 || t_index > horizon())
        throw std::out_of_range("t_index " + std::to_string(t_index) + " outside [1, " +
                                std::to_string(horizon()) + "]");
    return r_f[static_cast<std::size_t>(horizon() - t_index)];
}

double RisklessMarket::tail_product(Index t_index) const
{
    rate_for(t_index);
    double product = 1.0;
    for (Index i = horizon() - t_index + 2; i <= horizon(); ++i)
        product *= gross(i);
    return product;
}

double RisklessMarket::bracket(double alpha, double wealth, Index t_index) const
{
    if (!(alpha > 0.0))
        throw std::invalid_argument("alpha must be positive");
    if (!std::isfinite(wealth) || wealth == 0.0)
        throw std::invalid_argument("wealth must be finite and nonzero");
    return (1.0 / (alpha * wealth)) / tail_product(t_index) - (1.0 + rate_for(t_index));
}

std::vector<double> eta_recursion(const std::vector<double> &s_breve)
{
    const std::size_t horizon = s_breve.size();
    for (double s : s_breve)
        if (!(s >= 0.0))
            throw std::invalid_argument("eta_recursion: s must be non-negative");
    std::vector<double> eta(horizon, 1.0);
    if (horizon == 0)
        return eta;
    for (std::size_t p = horizon - 1; p-- > 0;)
        eta[p] = (1.0 + (1.0 - eta[p + 1]) * s_breve[p]) / (1.0 + s_breve[p]);
    return eta;
}

namespace
{

void require_matching(const std::vector<MomentForecast> &forecasts, const RisklessMarket &market)
{
    market.validate();
    if (static_cast<Index>(forecasts.size()) != market.horizon())
        throw DimensionMismatch("need one forecast and one riskless rate per period");
}

} // namespace

std::vector<RisklessRecursionState> recursion_riskless_iid(const std::vector<MomentForecast> &forecasts,
                                                           const RisklessMarket &market)
{
    require_matching(forecasts, market);
    const Index horizon = market.horizon();

    std::vector<double> s_breve(static_cast<std::size_t>(horizon));
    for (Index p = 1; p <= horizon; ++p)
    {
        const MomentForecast &f = forecasts[static_cast<std::size_t>(p - 1)];
        f.validate();
        const Vector excess = f.excess_mean(market.r_f[static_cast<std::size_t>(p - 1)]);
        s_breve[static_cast<std::size_t>(p - 1)] = SpdSolve(f.sigma, "covariance").inner(excess, excess);
    }
    const std::vector<double> eta = eta_recursion(s_breve);

    std::vector<RisklessRecursionState> states(static_cast<std::size_t>(horizon));
    for (Index p = horizon; p >= 1; --p)
    {
        const MomentForecast &f = forecasts[static_cast<std::size_t>(p - 1)];
        const Vector excess = f.excess_mean(market.r_f[static_cast<std::size_t>(p - 1)]);
        // Under independence s~ of the next period is deterministic and
        // factors out of both expectations.
        const double scale = (p == horizon) ? 1.0 : 1.0 - states[static_cast<std::size_t>(p)].s_tilde;

        RisklessRecursionState st;
        st.a_breve = scale * (f.sigma + excess * excess.transpose());
        st.mu_breve_star = scale * excess;
        st.s_tilde = SpdSolve(st.a_breve, "recursion matrix").inner(st.mu_breve_star, st.mu_breve_star);
        st.eta_mean = eta[static_cast<std::size_t>(p - 1)];
        states[static_cast<std::size_t>(p - 1)] = std::move(st);
    }
    return states;
}

WeightVector weights_theorem31(const RisklessRecursionState &state, const RisklessMarket &market,
                               double alpha, double wealth, Index t_index)
{
    const double b = market.bracket(alpha, wealth, t_index);
    return {b * SpdSolve(state.a_breve, "recursion matrix").solve(state.mu_breve_star)};
}

WeightVector weights_corollary32(const std::vector<MomentForecast> &forecasts,
                                 const RisklessMarket &market, double alpha, double wealth_now,
                                 Index t_index)
{
    require_matching(forecasts, market);
    const double b = market.bracket(alpha, wealth_now, t_index);
    const MomentForecast &f = forecasts[static_cast<std::size_t>(market.horizon() - t_index)];
    const Vector excess = f.excess_mean(market.rate_for(t_index));
    const SpdSolve solver(f.sigma, "covariance");
    const Vector sigma_inv_excess = solver.solve(excess);
    const double alpha_inv = b / (1.0 + excess.dot(sigma_inv_excess));
    return {alpha_inv * sigma_inv_excess};
}

WeightVector lamps_weights(const MomentForecast &forecast, const RisklessMarket &market, double alpha,
                           double wealth_now, Index t_index)
{
    market.validate();
    const double b = market.bracket(alpha, wealth_now, t_index);
    const Vector excess = forecast.excess_mean(market.rate_for(t_index));
    const Matrix second = forecast.sigma + excess * excess.transpose();
    return {b * SpdSolve(second, "Sigma + mu mu'").solve(excess)};
}

ApproxDiagnostics approx_diagnostics(const MomentForecast &forecast)
{
    ApproxDiagnostics d;
    d.mse_bound = forecast.sigma.diagonal().cwiseMax(0.0).cwiseSqrt();
    d.sigma_mag = forecast.sigma.size() ? forecast.sigma.cwiseAbs().maxCoeff() : 0.0;
    return d;
}

WeightVector tangency_multiperiod(const MomentForecast &forecast, double r_f)
{
    return tangency_weights(forecast.mu, forecast.sigma, r_f);
}

WeightVector tangency_second_moment_form(const MomentForecast &forecast, double r_f)
{
    const Vector excess = forecast.excess_mean(r_f);
    const Matrix second = forecast.sigma + excess * excess.transpose();
    const Vector x = SpdSolve(second, "Sigma + mu mu'").solve(excess);
    const double denom = x.sum();
    if (!(std::abs(denom) >= 1e-12))
        throw std::domain_error("tangency portfolio undefined: zero denominator");
    return {x / denom};
}

std::vector<double> eta_certainty_equivalent(const Var1Model &model, const RisklessMarket &market,
                                             const Vector &y_now)
{
    market.validate();
    const auto forecasts = certainty_equivalent_forecasts(model, y_now, market.horizon());
    std::vector<double> s_breve;
    s_breve.reserve(forecasts.size());
    for (std::size_t p = 0; p < forecasts.size(); ++p)
    {
        const Vector excess = forecasts[p].excess_mean(market.r_f[p]);
        s_breve.push_back(SpdSolve(forecasts[p].sigma, "covariance").inner(excess, excess));
    }
    return eta_recursion(s_breve);
}

} // namespace quadport
