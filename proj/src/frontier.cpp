#include "quadport/frontier.hpp"

#include <cmath>
#include <stdexcept>

namespace quadport
{

namespace
{

void require_mean(const Vector &mu, const Matrix &sigma, const char *what)
{
    if (mu.size() != sigma.rows())
        throw DimensionMismatch(std::string(what) + ": mean and covariance sizes differ");
}

} // namespace

WeightVector gmv_weights(const Matrix &sigma)
{
    const SpdSolve solver(sigma, "covariance");
    const Vector x = solver.solve(ones(sigma.rows()));
    return {x / x.sum()};
}

Matrix q_matrix(const Matrix &sigma)
{
    const SpdSolve solver(sigma, "covariance");
    const Matrix inv = solver.inverse();
    const Vector x = inv * ones(sigma.rows());
    return symmetrize(inv - x * x.transpose() / x.sum());
}

FrontierStats frontier_stats(const Vector &mu, const Matrix &sigma)
{
    require_mean(mu, sigma, "frontier_stats");
    const Matrix q = q_matrix(sigma);
    const SpdSolve solver(sigma, "covariance");
    const Vector x = solver.solve(ones(sigma.rows()));
    const double denom = x.sum();
    FrontierStats st;
    st.r_gmv = x.dot(mu) / denom;
    st.v_gmv = 1.0 / denom;
    st.s = mu.dot(q * mu);
    return st;
}

WeightVector markowitz_weights(const Vector &mu, const Matrix &sigma, double alpha)
{
    require_mean(mu, sigma, "markowitz_weights");
    if (!(alpha > 0.0))
        throw std::invalid_argument("markowitz_weights: alpha must be positive");
    return constrained_weights(sigma, mu, 1.0 / alpha);
}

WeightVector tangency_weights(const Vector &mu, const Matrix &sigma, double r_f)
{
    require_mean(mu, sigma, "tangency_weights");
    const SpdSolve solver(sigma, "covariance");
    const Vector excess = mu.array() - r_f;
    const Vector x = solver.solve(excess);
    const double denom = x.sum();
    if (!(std::abs(denom) >= 1e-12))
        throw std::domain_error(
            "tangency portfolio undefined: excess returns are orthogonal to Sigma^{-1}1");
    return {x / denom};
}

WeightVector constrained_weights(const Matrix &a, const Vector &m, double c)
{
    require_mean(m, a, "constrained_weights");
    const SpdSolve solver(a, "second-moment matrix");
    const Vector a_inv_one = solver.solve(ones(a.rows()));
    const Vector a_inv_m = solver.solve(m);
    const double one_a_one = a_inv_one.sum();
    // Q_A m = A^{-1}m - A^{-1}1 (1'A^{-1}m) / (1'A^{-1}1)
    const Vector q_m = a_inv_m - a_inv_one * (a_inv_m.sum() / one_a_one);
    return {a_inv_one / one_a_one + c * q_m};
}

double reduce_risky(double alpha_tilde_inv, const Vector &mu, const Matrix &sigma)
{
    const FrontierStats st = frontier_stats(mu, sigma);
    return (alpha_tilde_inv - 1.0 - st.r_gmv) / (1.0 + st.s);
}

double reduce_riskless(double gamma_tilde_inv, const Vector &mu_excess, const Matrix &sigma)
{
    require_mean(mu_excess, sigma, "reduce_riskless");
    const SpdSolve solver(sigma, "covariance");
    return gamma_tilde_inv / (1.0 + solver.inner(mu_excess, mu_excess));
}

} // namespace quadport
