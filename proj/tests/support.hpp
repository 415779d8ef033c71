#pragma once

#include "quadport/linalg.hpp"

#include <random>

namespace quadport::fixtures
{

/// Random SPD matrix B B' / k + 0.1 I scaled to return-like magnitudes.
inline Matrix random_spd(std::mt19937_64 &gen, Index k, double scale = 0.01)
{
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix b(k, k);
    for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j)
            b(i, j) = n(gen);
    Matrix s = b * b.transpose() / static_cast<double>(k) + 0.1 * Matrix::Identity(k, k);
    return scale * 0.5 * (s + s.transpose());
}

inline Vector random_vector(std::mt19937_64 &gen, Index k, double scale = 0.01)
{
    std::normal_distribution<double> n(0.0, scale);
    Vector v(k);
    for (Index i = 0; i < k; ++i)
        v(i) = n(gen);
    return v;
}

/// Inverse by Gauss-Jordan elimination with partial pivoting, independent of
/// the Cholesky path used by the library.
inline Matrix gauss_jordan_inverse(Matrix a)
{
    const Index k = a.rows();
    Matrix inv = Matrix::Identity(k, k);
    for (Index c = 0; c < k; ++c)
    {
        Index pivot = c;
        for (Index r = c + 1; r < k; ++r)
            if (std::abs(a(r, c)) > std::abs(a(pivot, c)))
                pivot = r;
        a.row(c).swap(a.row(pivot));
        inv.row(c).swap(inv.row(pivot));
        const double d = a(c, c);
        a.row(c) /= d;
        inv.row(c) /= d;
        for (Index r = 0; r < k; ++r)
            if (r != c)
            {
                const double f = a(r, c);
                a.row(r) -= f * a.row(c);
                inv.row(r) -= f * inv.row(c);
            }
    }
    return inv;
}

} // namespace quadport::fixtures
