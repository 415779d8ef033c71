/**
 * @file horizon_riskless.hpp
 * @brief Multi-period optimal weights with a riskless asset.
 *
 * Only risky weights are returned; the riskless position is 1 - w'1.
 * Period and state indexing follow horizon_risky.hpp. With
 * Rf_p = 1 + r_{f,p} and excess returns x^_p = X_p - r_{f,p} 1,
 *
 *   w_{T-t} = [ (1/(alpha W)) (prod_{i=T-t+2}^{T} Rf_i)^{-1} - Rf_{T-t+1} ] A^^{-1} mu^*
 *
 * where (A^, mu^*) come from the backward recursion (exact under
 * independence) or, for dependent returns, from the one-step moments via
 * the predictive-loss approximation (LAMPS).
 */

#pragma once

#include "quadport/frontier.hpp"
#include "quadport/moments.hpp"

#include <vector>

namespace quadport
{

/// Per-period riskless simple returns r_{f,1..T}.
struct RisklessMarket
{
    std::vector<double> r_f;

    static RisklessMarket constant(double rate, Index horizon);

    Index horizon() const { return static_cast<Index>(r_f.size()); }

    /// Rf_p = 1 + r_{f,p}, p in 1..T.
    double gross(Index p) const { return 1.0 + r_f[static_cast<std::size_t>(p - 1)]; }

    /// Simple riskless return for the period T-t+1.
    double rate_for(Index t_index) const;

    /// prod_{i=T-t+2}^{T} Rf_i (empty product = 1).
    double tail_product(Index t_index) const;

    /// (1/(alpha W)) / tail_product(t) - Rf_{T-t+1}.
    double bracket(double alpha, double wealth, Index t_index) const;

    void validate() const;
};

struct RisklessRecursionState
{
    Matrix a_breve;
    Vector mu_breve_star;
    double s_tilde = 0.0;
    double eta_mean = 1.0;
};

struct ApproxDiagnostics
{
    /// Per-asset root mean square one-step prediction error.
    Vector mse_bound;
    /// max_{i,j} |sigma_ij|.
    double sigma_mag = 0.0;
};

/// eta_T = 1, eta_p = (1 + (1 - eta_{p+1}) s_p) / (1 + s_p) for p < T.
/// `s_breve[p-1]` holds s_p = mu^_p' Sigma_p^{-1} mu^_p.
std::vector<double> eta_recursion(const std::vector<double> &s_breve);

/// Exact backward recursion under independent returns. States carry the
/// eta value of their own period.
std::vector<RisklessRecursionState> recursion_riskless_iid(const std::vector<MomentForecast> &forecasts,
                                                           const RisklessMarket &market);

/// bracket(t) * A^^{-1} mu^*.
WeightVector weights_theorem31(const RisklessRecursionState &state, const RisklessMarket &market,
                               double alpha, double wealth, Index t_index);

/// alpha_{T-t+1}^{-1} Sigma^{-1} mu^ with alpha^{-1} = bracket(t) / (1 + mu^'Sigma^{-1}mu^).
WeightVector weights_corollary32(const std::vector<MomentForecast> &forecasts,
                                 const RisklessMarket &market, double alpha, double wealth_now,
                                 Index t_index);

/// bracket(t) * (Sigma + mu^ mu^')^{-1} mu^ from the one-step moments only.
WeightVector lamps_weights(const MomentForecast &forecast, const RisklessMarket &market, double alpha,
                           double wealth_now, Index t_index);

ApproxDiagnostics approx_diagnostics(const MomentForecast &forecast);

/// Multi-period tangency portfolio: equal to tangency_weights and
/// independent of alpha, wealth and the period.
WeightVector tangency_multiperiod(const MomentForecast &forecast, double r_f);

/// Tangency weights written with the second moment A^ = Sigma + mu^ mu^'.
WeightVector tangency_second_moment_form(const MomentForecast &forecast, double r_f);

/// eta along the certainty-equivalent forecast path of a VAR(1) starting at
/// `y_now`; diagnostics only.
std::vector<double> eta_certainty_equivalent(const Var1Model &model, const RisklessMarket &market,
                                             const Vector &y_now);

} // namespace quadport
