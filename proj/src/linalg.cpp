#include "quadport/linalg.hpp"

#include <cmath>

namespace quadport
{

bool is_symmetric(const Matrix &m, double tol)
{
    if (m.rows() != m.cols())
        return false;
    return ((m - m.transpose()).cwiseAbs().maxCoeff() <= tol) || m.size() == 0;
}

void require_square(const Matrix &m, Index k, const char *what)
{
    if (m.rows() != k || m.cols() != k)
    {
        throw DimensionMismatch(std::string(what) + ": expected " + std::to_string(k) + "x" +
                                std::to_string(k) + ", got " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()));
    }
}

SpdSolve::SpdSolve(const Matrix &a, const char *what)
{
    if (a.rows() != a.cols() || a.rows() == 0)
        throw DimensionMismatch(std::string(what) + " must be a non-empty square matrix");
    if (!a.allFinite())
        throw NotPositiveDefinite(std::string(what) + " has non-finite entries");
    llt_.compute(a);
    if (llt_.info() != Eigen::Success)
        throw NotPositiveDefinite(std::string(what) + " is not positive definite");
}

Matrix SpdSolve::inverse() const
{
    return llt_.solve(Matrix::Identity(size(), size()));
}

double SpdSolve::inner(const Vector &x, const Vector &y) const
{
    return x.dot(llt_.solve(y));
}

bool is_positive_definite(const Matrix &a)
{
    if (a.rows() != a.cols() || a.rows() == 0 || !a.allFinite())
        return false;
    Eigen::LLT<Matrix> llt(a);
    return llt.info() == Eigen::Success;
}

Matrix psd_factor(const Matrix &a, double tol)
{
    if (a.rows() != a.cols())
        throw DimensionMismatch("psd_factor: matrix must be square");
    const Index m = a.rows();
    if (m == 0)
        return Matrix(0, 0);
    if (a.cwiseAbs().maxCoeff() == 0.0)
        return Matrix::Zero(m, m);

    Eigen::LDLT<Matrix> ldlt(a);
    if (ldlt.info() != Eigen::Success)
        throw NotPositiveDefinite("psd_factor: LDL' factorization failed");

    const double scale = a.cwiseAbs().maxCoeff();
    Vector d = ldlt.vectorD();
    for (Index i = 0; i < m; ++i)
    {
        if (d(i) < -tol * scale)
            throw NotPositiveDefinite("psd_factor: matrix has a negative pivot");
        d(i) = d(i) > 0.0 ? std::sqrt(d(i)) : 0.0;
    }
    // A = P' L D L' P  =>  F = P' L D^{1/2}
    Matrix l = ldlt.matrixL();
    Matrix f = ldlt.transpositionsP().transpose() * (l * d.asDiagonal());
    return f;
}

} // namespace quadport
