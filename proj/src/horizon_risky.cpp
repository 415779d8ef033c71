#include "quadport/horizon_risky.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace quadport
{

namespace
{

void require_wealth_alpha(double alpha, double wealth)
{
    if (!(alpha > 0.0))
        throw std::invalid_argument("alpha must be positive");
    if (!std::isfinite(wealth) || wealth == 0.0)
        throw std::invalid_argument("wealth must be finite and nonzero");
}

const MomentForecast &period(const std::vector<MomentForecast> &forecasts, Index p)
{
    return forecasts[static_cast<std::size_t>(p - 1)];
}

void require_t_index(Index t_index, Index horizon)
{
    if (t_index < 1 || t_index > horizon)
        throw std::out_of_range("t_index " + std::to_string(t_index) + " outside [1, " +
                                std::to_string(horizon) + "]");
}

} // namespace

RiskyRecursionState RiskyRecursionState::from(Matrix a, Vector mu_star)
{
    RiskyRecursionState st;
    const SpdSolve solver(a, "recursion matrix A");
    const Vector a_inv_one = solver.solve(ones(a.rows()));
    const Vector a_inv_mu = solver.solve(mu_star);
    const double one_a_one = a_inv_one.sum();
    st.q_tilde = symmetrize(solver.inverse() - a_inv_one * a_inv_one.transpose() / one_a_one);
    st.r = a_inv_mu.sum() / one_a_one;
    st.v = 1.0 / one_a_one;
    st.a = std::move(a);
    st.mu_star = std::move(mu_star);
    return st;
}

std::vector<RiskyRecursionState> recursion_iid(const std::vector<MomentForecast> &forecasts,
                                               Index horizon)
{
    if (horizon < 1)
        throw std::invalid_argument("recursion_iid: horizon must be at least 1");
    if (static_cast<Index>(forecasts.size()) != horizon)
        throw DimensionMismatch("recursion_iid: need one forecast per period");
    for (const auto &f : forecasts)
        f.validate();

    std::vector<RiskyRecursionState> states(static_cast<std::size_t>(horizon));
    for (Index p = horizon; p >= 1; --p)
    {
        const MomentForecast &f = period(forecasts, p);
        const Vector gross = f.gross_mean();
        Matrix second = f.sigma + gross * gross.transpose();
        if (p == horizon)
        {
            states[static_cast<std::size_t>(p - 1)] = RiskyRecursionState::from(second, gross);
        }
        else
        {
            const RiskyRecursionState &next = states[static_cast<std::size_t>(p)];
            states[static_cast<std::size_t>(p - 1)] =
                RiskyRecursionState::from(next.v * second, next.r * gross);
        }
    }
    return states;
}

RiskyRecursionState risky_state_mc(const Var1Model &model, const Vector &y_now, Index remaining,
                                   NormalStream &noise, const MonteCarloRecursionOptions &options)
{
    if (remaining < 1)
        throw std::invalid_argument("risky_state_mc: at least one period must remain");
    const MomentForecast f = conditional_moments(model, y_now);
    const Vector gross = f.gross_mean();
    if (remaining == 1)
        return RiskyRecursionState::from(f.sigma + gross * gross.transpose(), gross);

    const Index k = model.assets();
    const Index m = model.states();
    const Matrix factor = psd_factor(model.sigma_eps);
    const Vector drift = model.nu + model.phi * y_now;

    Matrix a_sum = Matrix::Zero(k, k);
    Vector mu_sum = Vector::Zero(k);
    for (Index s = 0; s < options.inner_samples; ++s)
    {
        const Vector y_next = drift + factor * noise.normals(m);
        const Vector x_gross = model.select(y_next).array() + 1.0;
        const RiskyRecursionState next = risky_state_mc(model, y_next, remaining - 1, noise, options);
        a_sum.noalias() += next.v * (x_gross * x_gross.transpose());
        mu_sum += next.r * x_gross;
    }
    const double n = static_cast<double>(options.inner_samples);
    Matrix a = symmetrize(a_sum / n);
    if (!is_positive_definite(a))
        throw NotPositiveDefinite(
            "recursion_mc: estimated A is not positive definite (too few samples or degenerate model)");
    return RiskyRecursionState::from(std::move(a), mu_sum / n);
}

std::vector<RiskyRecursionState> recursion_mc(const Var1Model &model, const Vector &y_now,
                                              Index horizon, NormalStream &noise,
                                              const MonteCarloRecursionOptions &options)
{
    model.validate();
    if (horizon < 1)
        throw std::invalid_argument("recursion_mc: horizon must be at least 1");
    if (options.inner_samples < 100)
        throw std::invalid_argument("recursion_mc: inner_samples must be at least 100");
    if (horizon > options.max_depth)
        throw std::invalid_argument("recursion_mc: horizon " + std::to_string(horizon) +
                                    " exceeds the configured maximum depth " +
                                    std::to_string(options.max_depth));
    std::vector<RiskyRecursionState> states;
    states.reserve(static_cast<std::size_t>(horizon));
    for (Index j = 0; j < horizon; ++j)
        states.push_back(risky_state_mc(model, y_now, horizon - j, noise, options));
    return states;
}

WeightVector weights_theorem21(const RiskyRecursionState &state, double alpha, double wealth)
{
    require_wealth_alpha(alpha, wealth);
    const SpdSolve solver(state.a, "recursion matrix A");
    const Vector a_inv_one = solver.solve(ones(state.a.rows()));
    return {a_inv_one / a_inv_one.sum() + (1.0 / (alpha * wealth)) * (state.q_tilde * state.mu_star)};
}

double corollary22_alpha_inv(const std::vector<MomentForecast> &forecasts, double alpha,
                             double wealth_now, Index t_index)
{
    require_wealth_alpha(alpha, wealth_now);
    const Index horizon = static_cast<Index>(forecasts.size());
    require_t_index(t_index, horizon);

    double product = 1.0;
    for (Index i = horizon - t_index + 2; i <= horizon; ++i)
    {
        const MomentForecast &f = period(forecasts, i);
        const FrontierStats st = frontier_stats(f.mu, f.sigma);
        const double g = 1.0 + st.r_gmv;
        product *= g / (g * g + (1.0 + st.s) * st.v_gmv);
    }
    const MomentForecast &now = period(forecasts, horizon - t_index + 1);
    const FrontierStats st = frontier_stats(now.mu, now.sigma);
    return ((1.0 / (alpha * wealth_now)) * product - 1.0 - st.r_gmv) / (1.0 + st.s);
}

WeightVector weights_corollary22(const std::vector<MomentForecast> &forecasts, double alpha,
                                 double wealth_now, Index t_index)
{
    const double alpha_inv = corollary22_alpha_inv(forecasts, alpha, wealth_now, t_index);
    const MomentForecast &f = period(forecasts, static_cast<Index>(forecasts.size()) - t_index + 1);
    return constrained_weights(f.sigma, f.mu, alpha_inv);
}

double markowitz_target(const std::vector<MomentForecast> &forecasts, double alpha,
                        double wealth_now, Index t_index)
{
    const double alpha_inv = corollary22_alpha_inv(forecasts, alpha, wealth_now, t_index);
    const MomentForecast &f = period(forecasts, static_cast<Index>(forecasts.size()) - t_index + 1);
    const FrontierStats st = frontier_stats(f.mu, f.sigma);
    return st.r_gmv + alpha_inv * st.s;
}

} // namespace quadport
