/**
 * @file linalg.hpp
 * @brief Dense linear-algebra helpers shared by every allocator.
 *
 * All inverses of covariance-like matrices go through SpdSolve, a thin
 * wrapper around a Cholesky factorization that refuses (rather than
 * regularizes) matrices that are not positive definite.
 */

#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace quadport
{

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Absolute tolerance for symmetry checks.
inline constexpr double kSymmetryTol = 1e-12;

/// Absolute tolerance for algebraic identities (budget, Q-identities).
inline constexpr double kIdentityTol = 1e-10;

/// Raised when a matrix that must be positive definite is not.
class NotPositiveDefinite : public std::domain_error
{
public:
    explicit NotPositiveDefinite(const std::string &what)
        : std::domain_error(what) {}
};

/// Raised on inconsistent vector/matrix shapes.
class DimensionMismatch : public std::invalid_argument
{
public:
    explicit DimensionMismatch(const std::string &what)
        : std::invalid_argument(what) {}
};

inline Vector ones(Index k) { return Vector::Ones(k); }

bool is_symmetric(const Matrix &m, double tol = kSymmetryTol);

/// Throws DimensionMismatch unless `m` is square of size `k`.
void require_square(const Matrix &m, Index k, const char *what);

/// Cholesky-backed solver for symmetric positive-definite systems.
class SpdSolve
{
public:
    /// `what` names the matrix in error messages.
    explicit SpdSolve(const Matrix &a, const char *what = "matrix");

    Index size() const { return llt_.rows(); }

    Vector solve(const Vector &b) const { return llt_.solve(b); }
    Matrix solve(const Matrix &b) const { return llt_.solve(b); }

    /// Explicit inverse; only for places where the inverse enters products.
    Matrix inverse() const;

    /// x' A^{-1} y
    double inner(const Vector &x, const Vector &y) const;

private:
    Eigen::LLT<Matrix> llt_;
};

/// True when `a` admits a Cholesky factorization.
bool is_positive_definite(const Matrix &a);

/// Symmetric square root F with F F' = a, tolerating zero eigenvalues.
/// Uses a pivoted LDL' factorization; pivots below -tol are rejected.
Matrix psd_factor(const Matrix &a, double tol = 1e-14);

/// (a + a') / 2
inline Matrix symmetrize(const Matrix &a) { return 0.5 * (a + a.transpose()); }

} // namespace quadport
