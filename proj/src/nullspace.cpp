#include "gjbd/nullspace.hpp"

#include "gjbd/matkernels.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gjbd {

Matrix build_stacked_operator(const MatrixSet& a)
{
    const Index n = a.order(), nn = n * n;
    const Matrix eye = Matrix::Identity(n, n);
    const std::vector<Index> shuffle = perfect_shuffle(n);
    Matrix op(a.count() * nn, nn);
    for (Index i = 0; i < a.count(); ++i)
    {
        const Matrix transposed_term = kron(a[i].transpose(), eye);
        Matrix shuffled(nn, nn);
        for (Index c = 0; c < nn; ++c) shuffled.col(c) = transposed_term.col(shuffle[static_cast<std::size_t>(c)]);
        op.middleRows(i * nn, nn) = kron(eye, a[i]) - shuffled;
    }
    return op;
}

double residual(const MatrixSet& a, const Matrix& z)
{
    if (z.rows() != a.order() || z.cols() != a.order()) throw std::invalid_argument("residual: dimension mismatch");
    double s = 0.0;
    for (const Matrix& ai : a) s += (ai * z - z.transpose() * ai).squaredNorm();
    return s;
}

double exact_tolerance(const MatrixSet& a, double sigma_max)
{
    const double nn = static_cast<double>(a.order() * a.order());
    return std::max(static_cast<double>(a.count()) * nn, nn) * std::numeric_limits<double>::epsilon() * sigma_max;
}

namespace {

enum class Threshold
{
    Gamma,
    Exact
};

NullSpaceBasis compute_nullspace(const MatrixSet& a, double gamma, Threshold mode)
{
    const Index n = a.order(), nn = n * n;
    const Matrix op = build_stacked_operator(a);
    Eigen::JacobiSVD<Matrix> svd(op, Eigen::ComputeThinV);

    NullSpaceBasis out;
    out.sigma = svd.singularValues();
    const double sigma_max = out.sigma(0);
    const double tol = exact_tolerance(a, sigma_max);

    std::vector<Index> chosen;
    if (sigma_max == 0.0)
    {
        // Every direction is null (n = 1, or all A_i vanish).
        out.exact_mode = true;
        out.delta = 0.0;
        for (Index k = 0; k < nn; ++k) chosen.push_back(k);
    }
    else
    {
        const double second_smallest = out.sigma(nn - 2);
        out.exact_mode = mode == Threshold::Exact || second_smallest <= tol;
        out.delta = out.exact_mode ? tol : gamma * second_smallest;
        for (Index k = 0; k < nn; ++k)
            if (out.sigma(k) < out.delta) chosen.push_back(k);
    }

    // Smallest singular value first: Z_j = reshape(v_{n^2-j+1}).
    std::sort(chosen.begin(), chosen.end(), std::greater<>());
    const Matrix& v = svd.matrixV();
    for (Index k : chosen) out.basis.push_back(reshape(v.col(k), n, n));

    const Vector e = vec(Matrix::Identity(n, n)) / std::sqrt(static_cast<double>(n));
    double captured = 0.0;
    for (const Matrix& z : out.basis)
    {
        const double c = vec(z).dot(e);
        captured += c * c;
    }
    out.includes_identity_direction = captured > 0.5;
    return out;
}

}  // namespace

NullSpaceBasis delta_nullspace(const MatrixSet& a, double gamma)
{
    if (!(gamma > 1.0)) throw std::invalid_argument("delta_nullspace: gamma must exceed 1");
    return compute_nullspace(a, gamma, Threshold::Gamma);
}

NullSpaceBasis exact_nullspace(const MatrixSet& a) { return compute_nullspace(a, 0.0, Threshold::Exact); }

Index exact_null_dimension(const MatrixSet& a) { return static_cast<Index>(exact_nullspace(a).basis.size()); }

std::vector<Matrix> basis_excluding_identity(const NullSpaceBasis& b)
{
    if (b.basis.empty()) return {};
    const Index n = b.basis.front().rows(), nn = n * n;
    const Index l = static_cast<Index>(b.basis.size());
    const Vector e = vec(Matrix::Identity(n, n)) / std::sqrt(static_cast<double>(n));

    Matrix projected(nn, l);
    for (Index j = 0; j < l; ++j)
    {
        const Vector v = vec(b.basis[static_cast<std::size_t>(j)]);
        projected.col(j) = v - e * e.dot(v);
    }
    // Singular values of the projected orthonormal basis are 1 except for the
    // one carrying the identity component, which drops to near zero.
    Eigen::JacobiSVD<Matrix> svd(projected, Eigen::ComputeThinU);
    const Index keep = b.includes_identity_direction ? l - 1 : l;
    std::vector<Matrix> out;
    for (Index j = 0; j < keep; ++j)
    {
        Vector u = svd.matrixU().col(j);
        u -= e * e.dot(u);
        u.normalize();
        out.push_back(reshape(u, n, n));
    }
    return out;
}

Matrix trace_gram(std::span<const Matrix> zs)
{
    const Index l = static_cast<Index>(zs.size());
    Matrix h(l, l);
    for (Index j = 0; j < l; ++j)
    {
        for (Index k = j; k < l; ++k)
        {
            const Matrix& zj = zs[static_cast<std::size_t>(j)];
            const Matrix& zk = zs[static_cast<std::size_t>(k)];
            if (zj.rows() != zk.rows() || zj.cols() != zk.cols())
                throw std::invalid_argument("trace_gram: matrices differ in order");
            h(j, k) = h(k, j) = zj.cwiseProduct(zk.transpose()).sum();
        }
    }
    return h;
}

}  // namespace gjbd
