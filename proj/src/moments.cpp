#include "quadport/moments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace quadport
{

void MomentForecast::validate() const
{
    const Index k = mu.size();
    if (k == 0)
        throw DimensionMismatch("forecast: empty mean vector");
    require_square(sigma, k, "forecast covariance");
    if (!mu.allFinite())
        throw std::invalid_argument("forecast: non-finite mean");
    if (!is_symmetric(sigma))
        throw std::invalid_argument("forecast: covariance is not symmetric");
    if (!is_positive_definite(sigma))
        throw NotPositiveDefinite("forecast: covariance is not positive definite");
}

Matrix Var1Model::selector_matrix() const
{
    Matrix l = Matrix::Zero(assets(), states());
    for (Index i = 0; i < assets(); ++i)
        l(i, selected[static_cast<std::size_t>(i)]) = 1.0;
    return l;
}

std::vector<Index> Var1Model::predictor_indices() const
{
    std::vector<Index> out;
    for (Index j = 0; j < states(); ++j)
        if (std::find(selected.begin(), selected.end(), j) == selected.end())
            out.push_back(j);
    return out;
}

Vector Var1Model::select(const Vector &state) const
{
    Vector x(assets());
    for (Index i = 0; i < assets(); ++i)
        x(i) = state(selected[static_cast<std::size_t>(i)]);
    return x;
}

Matrix Var1Model::select(const Matrix &m) const
{
    const Index k = assets();
    Matrix out(k, k);
    for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j)
            out(i, j) = m(selected[static_cast<std::size_t>(i)], selected[static_cast<std::size_t>(j)]);
    return out;
}

void Var1Model::validate() const
{
    const Index m = states();
    if (m == 0)
        throw DimensionMismatch("VAR(1): empty state");
    require_square(phi, m, "VAR(1) coefficient matrix");
    require_square(sigma_eps, m, "VAR(1) innovation covariance");
    if (!nu.allFinite() || !phi.allFinite() || !sigma_eps.allFinite())
        throw std::invalid_argument("VAR(1): non-finite parameters");
    if (selected.empty() || assets() > m)
        throw DimensionMismatch("VAR(1): selector must pick between 1 and m coordinates");
    std::set<Index> seen;
    for (Index j : selected)
    {
        if (j < 0 || j >= m)
            throw DimensionMismatch("VAR(1): selector index out of range");
        if (!seen.insert(j).second)
            throw std::invalid_argument("VAR(1): selector rows must be distinct");
    }
    if (!is_symmetric(sigma_eps))
        throw std::invalid_argument("VAR(1): innovation covariance is not symmetric");
    psd_factor(sigma_eps); // throws if not positive semidefinite
}

Var1Model Var1Model::from_selector_matrix(Vector nu, Matrix phi, Matrix sigma_eps,
                                          const Matrix &selector)
{
    Var1Model model{std::move(nu), std::move(phi), std::move(sigma_eps), {}};
    if (selector.cols() != model.states())
        throw DimensionMismatch("selector: column count must equal the state dimension");
    for (Index i = 0; i < selector.rows(); ++i)
    {
        Index unit = -1;
        for (Index j = 0; j < selector.cols(); ++j)
        {
            const double v = selector(i, j);
            if (v == 1.0)
            {
                if (unit >= 0)
                    throw std::invalid_argument("selector: row has more than one unit entry");
                unit = j;
            }
            else if (v != 0.0)
            {
                throw std::invalid_argument("selector: entries must be 0 or 1");
            }
        }
        if (unit < 0)
            throw std::invalid_argument("selector: row has no unit entry");
        model.selected.push_back(unit);
    }
    model.validate();
    return model;
}

MomentForecast conditional_moments(const Var1Model &model, const Vector &y_prev)
{
    if (y_prev.size() != model.states())
        throw DimensionMismatch("conditional_moments: state has " + std::to_string(y_prev.size()) +
                                " entries, model expects " + std::to_string(model.states()));
    MomentForecast f;
    f.mu = model.select(Vector(model.nu + model.phi * y_prev));
    f.sigma = model.select(model.sigma_eps);
    if (!is_positive_definite(f.sigma))
        throw NotPositiveDefinite(
            "conditional_moments: L Sigma_eps L' is not positive definite (degenerate innovations)");
    return f;
}

Var1Estimate fit_var1_detailed(const std::vector<Vector> &series)
{
    if (series.empty())
        throw std::invalid_argument("fit_var1: empty series");
    const Index m = series.front().size();
    for (const auto &y : series)
        if (y.size() != m)
            throw DimensionMismatch("fit_var1: observations have inconsistent dimension");
    const Index n_obs = static_cast<Index>(series.size());
    if (n_obs < m + 2)
        throw std::invalid_argument("fit_var1: need at least m + 2 = " + std::to_string(m + 2) +
                                    " observations, got " + std::to_string(n_obs));

    const Index n = n_obs - 1;
    Matrix x(n, m + 1);
    Matrix y(n, m);
    for (Index t = 0; t < n; ++t)
    {
        x(t, 0) = 1.0;
        x.row(t).tail(m) = series[static_cast<std::size_t>(t)].transpose();
        y.row(t) = series[static_cast<std::size_t>(t + 1)].transpose();
    }

    Eigen::ColPivHouseholderQR<Matrix> qr(x);
    // Scale-aware rank threshold: a constant column next to the intercept
    // must register as dependent.
    qr.setThreshold(1e-10);
    if (qr.rank() < m + 1)
        throw std::invalid_argument("fit_var1: regressor matrix is rank deficient (rank " +
                                    std::to_string(qr.rank()) + " < " + std::to_string(m + 1) + ")");

    const Matrix beta = qr.solve(y); // (m+1) x m, column j = equation j
    const Matrix resid = y - x * beta;

    Var1Estimate est;
    est.rows = n;
    est.model.nu = beta.row(0).transpose();
    est.model.phi = beta.bottomRows(m).transpose();
    if (n < 2)
        throw std::invalid_argument("fit_var1: too few regression rows for a covariance");
    Matrix cov = resid.transpose() * resid / static_cast<double>(n - 1);
    est.model.sigma_eps = symmetrize(cov);
    est.model.selected.resize(static_cast<std::size_t>(m));
    for (Index j = 0; j < m; ++j)
        est.model.selected[static_cast<std::size_t>(j)] = j;

    // OLS standard errors use the per-equation residual variance with n - (m+1) dof.
    const Matrix xtx_inv = SpdSolve(x.transpose() * x, "X'X").inverse();
    const double dof = static_cast<double>(n - (m + 1));
    est.nu_se.resize(m);
    est.phi_se.resize(m, m);
    for (Index eq = 0; eq < m; ++eq)
    {
        const double s2 = dof > 0 ? resid.col(eq).squaredNorm() / dof : 0.0;
        est.nu_se(eq) = std::sqrt(s2 * xtx_inv(0, 0));
        for (Index j = 0; j < m; ++j)
            est.phi_se(eq, j) = std::sqrt(s2 * xtx_inv(j + 1, j + 1));
    }
    return est;
}

Var1Model fit_var1(const std::vector<Vector> &series)
{
    return fit_var1_detailed(series).model;
}

StatePath simulate_path(const Var1Model &model, const Vector &y0, Index horizon,
                        const std::vector<Vector> &noise)
{
    const Index m = model.states();
    if (y0.size() != m)
        throw DimensionMismatch("simulate_path: initial state dimension mismatch");
    if (horizon < 0 || static_cast<Index>(noise.size()) != horizon)
        throw DimensionMismatch("simulate_path: need exactly `horizon` noise vectors");
    const Matrix factor = psd_factor(model.sigma_eps);

    StatePath path;
    path.states.reserve(static_cast<std::size_t>(horizon + 1));
    path.returns.reserve(static_cast<std::size_t>(horizon));
    path.states.push_back(y0);
    for (Index t = 0; t < horizon; ++t)
    {
        const Vector &z = noise[static_cast<std::size_t>(t)];
        if (z.size() != m)
            throw DimensionMismatch("simulate_path: noise vector dimension mismatch");
        Vector y = model.nu + model.phi * path.states.back() + factor * z;
        path.returns.push_back(model.select(y));
        path.states.push_back(std::move(y));
    }
    return path;
}

StatePath simulate_path(const Var1Model &model, const Vector &y0, Index horizon,
                        NormalStream &stream)
{
    std::vector<Vector> noise;
    noise.reserve(static_cast<std::size_t>(std::max<Index>(horizon, 0)));
    for (Index t = 0; t < horizon; ++t)
        noise.push_back(stream.normals(model.states()));
    return simulate_path(model, y0, horizon, noise);
}

std::vector<MomentForecast> iid_forecaster(const Vector &mu, const Matrix &sigma, Index horizon)
{
    if (horizon < 0)
        throw std::invalid_argument("iid_forecaster: negative horizon");
    MomentForecast f{mu, sigma};
    f.validate();
    return std::vector<MomentForecast>(static_cast<std::size_t>(horizon), f);
}

std::vector<MomentForecast> iid_forecaster(std::vector<MomentForecast> per_period)
{
    for (const auto &f : per_period)
    {
        f.validate();
        if (f.assets() != per_period.front().assets())
            throw DimensionMismatch("iid_forecaster: periods disagree on the asset count");
    }
    return per_period;
}

std::vector<MomentForecast> certainty_equivalent_forecasts(const Var1Model &model,
                                                           const Vector &y_now, Index horizon)
{
    std::vector<MomentForecast> out;
    out.reserve(static_cast<std::size_t>(horizon));
    Vector y = y_now;
    for (Index t = 0; t < horizon; ++t)
    {
        out.push_back(conditional_moments(model, y));
        y = model.nu + model.phi * y;
    }
    return out;
}

Vector stationary_mean(const Var1Model &model)
{
    const Index m = model.states();
    const Matrix a = Matrix::Identity(m, m) - model.phi;
    Eigen::FullPivLU<Matrix> lu(a);
    if (!lu.isInvertible())
        throw std::domain_error("stationary_mean: I - Phi is singular");
    return lu.solve(model.nu);
}

Matrix stationary_covariance(const Var1Model &model)
{
    const Index m = model.states();
    Eigen::ComplexEigenSolver<Matrix> es(model.phi);
    if (es.eigenvalues().cwiseAbs().maxCoeff() >= 1.0)
        throw std::domain_error("stationary_covariance: Phi is not stable");
    // vec(S) = (I - Phi (x) Phi)^{-1} vec(Sigma_eps)
    const Index mm = m * m;
    Matrix kron(mm, mm);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j)
            kron.block(i * m, j * m, m, m) = model.phi(i, j) * model.phi;
    const Matrix a = Matrix::Identity(mm, mm) - kron;
    const Vector vec_sigma = Eigen::Map<const Vector>(model.sigma_eps.data(), mm);
    const Vector vec_s = a.fullPivLu().solve(vec_sigma);
    Matrix s = Eigen::Map<const Matrix>(vec_s.data(), m, m);
    return symmetrize(s);
}

namespace
{

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string &line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ','))
        out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

} // namespace

Series read_series_csv(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open CSV file '" + path + "'");

    Series series;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (trim(line).empty())
            continue;
        series.names = split_csv(line);
        break;
    }
    if (series.names.empty())
        throw std::runtime_error(path + ": missing header row");

    const std::size_t m = series.names.size();
    while (std::getline(in, line))
    {
        ++line_no;
        if (trim(line).empty())
            continue;
        const auto cells = split_csv(line);
        const std::string where = path + ":" + std::to_string(line_no);
        if (cells.size() != m)
            throw std::runtime_error(where + ": expected " + std::to_string(m) + " fields, got " +
                                     std::to_string(cells.size()));
        Vector row(static_cast<Index>(m));
        for (std::size_t j = 0; j < m; ++j)
        {
            const std::string &c = cells[j];
            if (c.empty())
                throw std::runtime_error(where + ": missing value in column '" + series.names[j] + "'");
            double v = 0.0;
            const char *first = c.data();
            const char *last = c.data() + c.size();
            if (*first == '+')
                ++first;
            auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec != std::errc() || ptr != last || !std::isfinite(v))
                throw std::runtime_error(where + ": malformed number '" + c + "' in column '" +
                                         series.names[j] + "'");
            row(static_cast<Index>(j)) = v;
        }
        series.rows.push_back(std::move(row));
    }
    return series;
}

void write_series_csv(const std::string &path, const Series &series)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write CSV file '" + path + "'");
    for (std::size_t j = 0; j < series.names.size(); ++j)
        out << (j ? "," : "") << series.names[j];
    out << '\n';
    for (const auto &row : series.rows)
    {
        for (Index j = 0; j < row.size(); ++j)
        {
            char buf[32];
            auto res = std::to_chars(buf, buf + sizeof buf, row(j));
            out << (j ? "," : "") << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
        }
        out << '\n';
    }
    if (!out)
        throw std::runtime_error("write failed for '" + path + "'");
}

namespace presets
{

Var1Model term_spread_model()
{
    Var1Model model;
    model.nu = Vector(3);
    model.nu << 0.0059, 0.0007, -0.0028;
    // Each equation loads only on the lagged spread (third state coordinate).
    model.phi = Matrix::Zero(3, 3);
    model.phi.col(2) << 0.0060, 0.0035, 0.9597;
    model.sigma_eps = Matrix(3, 3);
    model.sigma_eps << 0.0018, 0.0002, -0.0005,
                       0.0002, 0.0006, 0.0007,
                      -0.0005, 0.0007, 0.0802;
    model.selected = {0, 1};
    model.validate();
    return model;
}

Var1Model international_model()
{
    Var1Model model;
    model.nu = Vector(5);
    model.nu << 4.83e-04, 1.20e-03, 6.74e-04, 5.54e-04, 2.79e-05;
    model.phi = Matrix(5, 5);
    model.phi << 0.2011, -0.1592, 0.01892, -0.196, 0.455,
                 0.3139, -0.1231, -0.00191, -0.511, 0.434,
                 0.0487, 0.0888, -0.12131, -0.224, 0.343,
                 0.1829, -0.0889, 0.00988, -0.441, 0.382,
                 0.0766, -0.0643, -0.03049, -0.114, 0.133;
    model.sigma_eps = Matrix(5, 5);
    model.sigma_eps << 0.0013085186, 0.0010544496, 0.0004365753, 0.0009120373, 0.0006781289,
                       0.0010544496, 0.0013833540, 0.0005648237, 0.0010218539, 0.0008332314,
                       0.0004365753, 0.0005648237, 0.0007994341, 0.0004733366, 0.0003667012,
                       0.0009120373, 0.0010218539, 0.0004733366, 0.0010176793, 0.0006927251,
                       0.0006781289, 0.0008332314, 0.0003667012, 0.0006927251, 0.0007242233;
    model.selected = {0, 1, 2, 3, 4};
    model.validate();
    return model;
}

Var1Model international_predictor_model()
{
    Var1Model model = international_model();
    model.selected = {0, 1, 2, 3};
    model.validate();
    return model;
}

} // namespace presets

} // namespace quadport
