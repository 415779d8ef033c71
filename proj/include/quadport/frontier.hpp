/**
 * @file frontier.hpp
 * @brief Single-period mean-variance analytics.
 *
 * Notation: for a covariance Sigma and mean mu,
 *   R_GMV = 1'Sigma^{-1}mu / 1'Sigma^{-1}1,  V_GMV = 1 / 1'Sigma^{-1}1,
 *   Q     = Sigma^{-1} - Sigma^{-1}11'Sigma^{-1} / 1'Sigma^{-1}1,
 *   s     = mu'Q mu.
 *
 * The rank-one reductions convert weights written in terms of the second
 * moment A = Sigma + m m' into the equivalent weights written in terms of
 * Sigma alone.
 */

#pragma once

#include "quadport/linalg.hpp"

#include <cmath>

namespace quadport
{

struct FrontierStats
{
    double r_gmv = 0.0;
    double v_gmv = 0.0;
    double s = 0.0;
};

/// Portfolio proportions; short positions are allowed.
struct WeightVector
{
    Vector w;

    Index size() const { return w.size(); }
    double sum() const { return w.sum(); }
    double operator()(Index i) const { return w(i); }

    /// Share of wealth left in the riskless asset (1 - w'1).
    double riskless_share() const { return 1.0 - w.sum(); }

    bool on_budget(double tol = kIdentityTol) const { return std::abs(w.sum() - 1.0) <= tol; }
};

/// Sigma^{-1}1 / 1'Sigma^{-1}1.
WeightVector gmv_weights(const Matrix &sigma);

/// The projector Q annihilating 1 (materialized).
Matrix q_matrix(const Matrix &sigma);

FrontierStats frontier_stats(const Vector &mu, const Matrix &sigma);

/// argmax mu'w - (alpha/2) w'Sigma w  s.t. w'1 = 1.
WeightVector markowitz_weights(const Vector &mu, const Matrix &sigma, double alpha);

/// Sigma^{-1}(mu - r_f 1) normalized to sum to one.
WeightVector tangency_weights(const Vector &mu, const Matrix &sigma, double r_f);

/// Budget-constrained weights written with a general SPD second-moment
/// matrix A and a linear term m:  A^{-1}1/(1'A^{-1}1) + c Q_A m.
WeightVector constrained_weights(const Matrix &a, const Vector &m, double c);

/// Given the coefficient alpha_tilde^{-1} multiplying Q_A mu_tilde in the
/// A-parameterized weights (A = Sigma + mu_tilde mu_tilde', mu_tilde = 1 + mu),
/// returns alpha^{-1} such that GMV(Sigma) + alpha^{-1} Q mu is the same vector:
///   alpha^{-1} = (alpha_tilde^{-1} - 1 - R_GMV) / (1 + s).
double reduce_risky(double alpha_tilde_inv, const Vector &mu, const Matrix &sigma);

/// Given gamma_tilde^{-1} multiplying Abreve^{-1} mu_excess with
/// Abreve = Sigma + mu_excess mu_excess', returns gamma^{-1} such that
/// gamma^{-1} Sigma^{-1} mu_excess is the same vector.
double reduce_riskless(double gamma_tilde_inv, const Vector &mu_excess, const Matrix &sigma);

} // namespace quadport
