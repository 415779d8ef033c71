/**
 * @file horizon_risky.hpp
 * @brief Multi-period optimal weights for a fully invested risky portfolio.
 *
 * Periods are indexed 1..T; the decision taken at time T-t (t periods
 * before the horizon) uses the moments of period T-t+1. Recursion states
 * are returned in forward time order: states[j] is the state used for the
 * decision at time j, i.e. t = T - j.
 *
 * Backward recursion (A, mu* per period):
 *   A_T  = Sigma_T + mu~_T mu~_T',              mu*_T = mu~_T
 *   A_p  = E_{p-1}[V_{p+1} x~_p x~_p'],         mu*_p = E_{p-1}[R_{p+1} x~_p]
 * with R_p = 1'A_p^{-1}mu*_p / 1'A_p^{-1}1 and V_p = 1 / 1'A_p^{-1}1, and
 *   w_{T-t} = A^{-1}1 / 1'A^{-1}1 + (1/(alpha W_{T-t})) Q~ mu*.
 */

#pragma once

#include "quadport/frontier.hpp"
#include "quadport/moments.hpp"

#include <vector>

namespace quadport
{

struct RiskyRecursionState
{
    Matrix a;
    Vector mu_star;
    Matrix q_tilde;
    double r = 0.0;
    double v = 0.0;

    /// mu*' Q~ mu*
    double s_tilde() const { return mu_star.dot(q_tilde * mu_star); }

    /// Builds the derived quantities (Q~, R, V) from A and mu*.
    static RiskyRecursionState from(Matrix a, Vector mu_star);
};

/// Backward pass under independent returns. `forecasts[p-1]` holds the
/// moments of period p; exactly `horizon` forecasts are required.
std::vector<RiskyRecursionState> recursion_iid(const std::vector<MomentForecast> &forecasts,
                                               Index horizon);

struct MonteCarloRecursionOptions
{
    Index inner_samples = 1000;
    /// Nested cost grows as inner_samples^(T-1); deeper horizons are rejected.
    Index max_depth = 6;
};

/// Nested Monte-Carlo evaluation of the general-dependence recursion for a
/// VAR(1) return process. states[j] is the state of an investor at state
/// `y_now` with T - j periods remaining; with Phi = 0 this reproduces
/// recursion_iid on constant forecasts up to sampling error.
std::vector<RiskyRecursionState> recursion_mc(const Var1Model &model, const Vector &y_now,
                                              Index horizon, NormalStream &noise,
                                              const MonteCarloRecursionOptions &options = {});

/// Single state for `remaining` periods to go, evaluated at `y_now`.
RiskyRecursionState risky_state_mc(const Var1Model &model, const Vector &y_now, Index remaining,
                                   NormalStream &noise, const MonteCarloRecursionOptions &options = {});

/// w = A^{-1}1 / 1'A^{-1}1 + (1/(alpha W)) Q~ mu*.
WeightVector weights_theorem21(const RiskyRecursionState &state, double alpha, double wealth);

/// Effective alpha^{-1} for period T-t+1 under independent returns:
///   ((1/(alpha W)) prod_{i=T-t+2}^{T} a_i - 1 - R_GMV) / (1 + s),
///   a_i = (1 + R_GMV,i) / ((1 + R_GMV,i)^2 + (1 + s_i) V_GMV,i).
double corollary22_alpha_inv(const std::vector<MomentForecast> &forecasts, double alpha,
                             double wealth_now, Index t_index);

/// GMV(Sigma_{T-t+1}) + alpha_{T-t+1}^{-1} Q_{T-t+1} mu_{T-t+1}.
WeightVector weights_corollary22(const std::vector<MomentForecast> &forecasts, double alpha,
                                 double wealth_now, Index t_index);

/// Expected-return target of the equivalent minimum-variance problem:
///   R_GMV + alpha_{T-t+1}^{-1} s.
double markowitz_target(const std::vector<MomentForecast> &forecasts, double alpha,
                        double wealth_now, Index t_index);

} // namespace quadport
