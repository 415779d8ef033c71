// Brute-force oracles: exhaustive dynamic programming over weight grids on
// discrete-return markets, independent of the closed-form recursions.

#pragma once

#include "quadport/linalg.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace quadport::fixtures
{

struct Atom
{
    Vector x; ///< per-period simple returns
    double p = 0.0;
};

/// Product distribution of independent per-asset atoms.
inline std::vector<Atom> product_atoms(const std::vector<std::vector<std::pair<double, double>>> &marginals)
{
    std::vector<Atom> atoms{{Vector(0), 1.0}};
    for (const auto &m : marginals)
    {
        std::vector<Atom> next;
        for (const auto &a : atoms)
            for (const auto &[value, prob] : m)
            {
                Vector x(a.x.size() + 1);
                x << a.x, value;
                next.push_back({x, a.p * prob});
            }
        atoms = std::move(next);
    }
    return atoms;
}

inline Vector atom_mean(const std::vector<Atom> &atoms)
{
    Vector m = Vector::Zero(atoms.front().x.size());
    for (const auto &a : atoms)
        m += a.p * a.x;
    return m;
}

inline Matrix atom_covariance(const std::vector<Atom> &atoms)
{
    const Vector m = atom_mean(atoms);
    Matrix s = Matrix::Zero(m.size(), m.size());
    for (const auto &a : atoms)
        s += a.p * (a.x - m) * (a.x - m).transpose();
    return s;
}

inline double quad_u(double w, double alpha)
{
    return w - 0.5 * alpha * w * w;
}

struct GridResult
{
    double value = -std::numeric_limits<double>::infinity();
    double argmax = 0.0; ///< first-period grid weight
};

/// Grid over [lo, hi] with the given step; the point count is rounded so the
/// endpoints are included.
inline std::vector<double> grid(double lo, double hi, double step)
{
    const long n = std::lround((hi - lo) / step);
    std::vector<double> g(static_cast<std::size_t>(n + 1));
    for (long i = 0; i <= n; ++i)
        g[static_cast<std::size_t>(i)] = lo + static_cast<double>(i) * step;
    return g;
}

/// Two risky assets, no riskless asset, two periods, iid atoms. Weights are
/// (a, 1 - a) with a on the grid in both periods; the second-period choice is
/// optimized separately at every first-period node.
inline GridResult risky_two_period_dp(const std::vector<Atom> &atoms, double alpha, double w0, double lo,
                                      double hi, double step)
{
    const auto g = grid(lo, hi, step);
    // Second-period gross portfolio return moments for every grid weight.
    std::vector<double> m1(g.size(), 0.0), m2(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i)
        for (const auto &at : atoms)
        {
            const double r = 1.0 + g[i] * at.x(0) + (1.0 - g[i]) * at.x(1);
            m1[i] += at.p * r;
            m2[i] += at.p * r * r;
        }
    auto continuation = [&](double w) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < g.size(); ++i)
            best = std::max(best, w * m1[i] - 0.5 * alpha * w * w * m2[i]);
        return best;
    };
    GridResult out;
    for (double a : g)
    {
        double value = 0.0;
        for (const auto &at : atoms)
            value += at.p * continuation(w0 * (1.0 + a * at.x(0) + (1.0 - a) * at.x(1)));
        if (value > out.value)
            out = {value, a};
    }
    return out;
}

/// Expected terminal utility of an explicit two-period risky policy.
inline double risky_two_period_value(const std::vector<Atom> &atoms, double alpha, double w0,
                                     const Vector &first, const std::function<Vector(double)> &second)
{
    double value = 0.0;
    for (const auto &a : atoms)
    {
        const double w1 = w0 * (1.0 + first.dot(a.x));
        const Vector next = second(w1);
        for (const auto &b : atoms)
            value += a.p * b.p * quad_u(w1 * (1.0 + next.dot(b.x)), alpha);
    }
    return value;
}

/// One risky asset plus riskless, two periods, iid scalar atoms. `rf1` is
/// earned over the first period, `rf2` over the second.
inline GridResult riskless_two_period_dp(const std::vector<Atom> &atoms, double rf1, double rf2, double alpha,
                                         double w0, double lo, double hi, double step)
{
    const auto g = grid(lo, hi, step);
    std::vector<double> m1(g.size(), 0.0), m2(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i)
        for (const auto &at : atoms)
        {
            const double r = 1.0 + rf2 + g[i] * (at.x(0) - rf2);
            m1[i] += at.p * r;
            m2[i] += at.p * r * r;
        }
    auto continuation = [&](double w) {
        const double c = 0.5 * alpha * w * w;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < g.size(); ++i)
            best = std::max(best, w * m1[i] - c * m2[i]);
        return best;
    };
    GridResult out;
    for (double a : g)
    {
        double value = 0.0;
        for (const auto &at : atoms)
            value += at.p * continuation(w0 * (1.0 + rf1 + a * (at.x(0) - rf1)));
        if (value > out.value)
            out = {value, a};
    }
    return out;
}

inline double riskless_two_period_value(const std::vector<Atom> &atoms, double rf1, double rf2, double alpha,
                                        double w0, double first, const std::function<double(double)> &second)
{
    double value = 0.0;
    for (const auto &a : atoms)
    {
        const double w1 = w0 * (1.0 + rf1 + first * (a.x(0) - rf1));
        const double next = second(w1);
        for (const auto &b : atoms)
            value += a.p * b.p * quad_u(w1 * (1.0 + rf2 + next * (b.x(0) - rf2)), alpha);
    }
    return value;
}

} // namespace quadport::fixtures
