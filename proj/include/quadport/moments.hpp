/**
 * @file moments.hpp
 * @brief Return-process models: conditional moments, VAR(1) fitting and
 *        path simulation.
 *
 * A return model supplies, for each period t, the conditional mean mu_t and
 * covariance Sigma_t of the k asset returns given information at t-1. Two
 * providers are built: independent (possibly non-identical) moments, and a
 * first-order vector autoregression over an m-dimensional state whose first
 * k selected coordinates are the asset returns and whose remaining
 * coordinates act as predictors.
 */

#pragma once

#include "quadport/linalg.hpp"
#include "quadport/rng.hpp"

#include <string>
#include <vector>

namespace quadport
{

/// Conditional mean and covariance of the asset returns for one period.
struct MomentForecast
{
    Vector mu;
    Matrix sigma;

    Index assets() const { return mu.size(); }

    /// Gross mean 1 + mu.
    Vector gross_mean() const { return mu.array() + 1.0; }

    /// Mean excess return mu - r_f 1.
    Vector excess_mean(double r_f) const { return mu.array() - r_f; }

    /// Throws unless dimensions agree and sigma is symmetric positive definite.
    void validate() const;
};

/// Y_t = nu + Phi Y_{t-1} + eps_t,  eps_t ~ N(0, sigma_eps);  X_t = L Y_t.
///
/// The selector L is stored as the list of state coordinates that are
/// asset returns (row i of L has its unit entry in column selected[i]).
struct Var1Model
{
    Vector nu;
    Matrix phi;
    Matrix sigma_eps;
    std::vector<Index> selected;

    Index states() const { return nu.size(); }
    Index assets() const { return static_cast<Index>(selected.size()); }

    /// k x m binary matrix L.
    Matrix selector_matrix() const;

    /// State coordinates not selected as assets, in increasing order.
    std::vector<Index> predictor_indices() const;

    /// L v for an m-vector v.
    Vector select(const Vector &state) const;

    /// L S L' for an m x m matrix S.
    Matrix select(const Matrix &m) const;

    /// Throws on inconsistent shapes, a non-PSD innovation covariance or a
    /// malformed selector.
    void validate() const;

    /// Builds the model from an explicit k x m selector matrix.
    static Var1Model from_selector_matrix(Vector nu, Matrix phi, Matrix sigma_eps,
                                          const Matrix &selector);
};

/// Simulated realization: states Y_0..Y_T and returns X_1..X_T.
struct StatePath
{
    std::vector<Vector> states;
    std::vector<Vector> returns;

    Index horizon() const { return static_cast<Index>(returns.size()); }
};

/// mu = L nu + L Phi y_prev,  sigma = L Sigma_eps L'.
MomentForecast conditional_moments(const Var1Model &model, const Vector &y_prev);

/// OLS estimates with their per-coefficient standard errors.
struct Var1Estimate
{
    Var1Model model;
    Vector nu_se;
    Matrix phi_se;
    Index rows = 0; ///< number of regression rows used
};

/// Per-equation OLS of Y_t on (1, Y_{t-1}); residual covariance uses the
/// n-1 divisor. The returned model selects every coordinate as an asset.
Var1Estimate fit_var1_detailed(const std::vector<Vector> &series);

Var1Model fit_var1(const std::vector<Vector> &series);

/// Y_t = nu + Phi Y_{t-1} + F noise[t-1] with F F' = Sigma_eps.
StatePath simulate_path(const Var1Model &model, const Vector &y0, Index horizon,
                        const std::vector<Vector> &noise);

/// Same, drawing the standard normal innovations from `stream`.
StatePath simulate_path(const Var1Model &model, const Vector &y0, Index horizon,
                        NormalStream &stream);

/// `horizon` copies of (mu, sigma).
std::vector<MomentForecast> iid_forecaster(const Vector &mu, const Matrix &sigma, Index horizon);

/// Validates a per-period list of independent-but-not-identical moments and
/// returns it unchanged.
std::vector<MomentForecast> iid_forecaster(std::vector<MomentForecast> per_period);

/// Forecasts for the next `horizon` periods along the path obtained by
/// propagating the VAR from `y_now` with zero innovations.
std::vector<MomentForecast> certainty_equivalent_forecasts(const Var1Model &model,
                                                           const Vector &y_now, Index horizon);

/// Unconditional mean (I - Phi)^{-1} nu. Throws if Phi has a unit root.
Vector stationary_mean(const Var1Model &model);

/// Unconditional covariance solving S = Phi S Phi' + Sigma_eps.
Matrix stationary_covariance(const Var1Model &model);

/// Column-labelled time series.
struct Series
{
    std::vector<std::string> names;
    std::vector<Vector> rows;
};

/// Reads a CSV with a header of series names and one row per time step.
/// Errors name the offending line.
Series read_series_csv(const std::string &path);

void write_series_csv(const std::string &path, const Series &series);

namespace presets
{

/// Stock/bond returns with the term spread as a predictor (3-dimensional
/// state, assets = first two coordinates).
Var1Model term_spread_model();

/// Five international equity index returns, VAR(1) over the returns
/// themselves (state = assets).
Var1Model international_model();

/// The international model with the last index used as a predictor only
/// (assets = first four coordinates).
Var1Model international_predictor_model();

} // namespace presets

} // namespace quadport
