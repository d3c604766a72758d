#pragma once

#include "gjbd/matrix_set.hpp"

#include <span>
#include <vector>

namespace gjbd {

/// The m n^2 x n^2 operator whose i-th block row maps vec(Z) to
/// vec(A_i Z - Z^T A_i), i.e. I (x) A_i - (A_i^T (x) I) Pi.
Matrix build_stacked_operator(const MatrixSet& a);

/// sum_i ||A_i Z - Z^T A_i||_F^2
double residual(const MatrixSet& a, const Matrix& z);

struct NullSpaceBasis
{
    double delta = 0.0;
    Vector sigma;               // all n^2 singular values, non-increasing
    std::vector<Matrix> basis;  // directions with sigma < delta, smallest sigma first
    bool includes_identity_direction = false;
    bool exact_mode = false;
};

/// Numerical-rank cutoff max(m n^2, n^2) * eps * sigma_1.
double exact_tolerance(const MatrixSet& a, double sigma_max);

/// delta-null space with delta = gamma * sigma_{n^2-1}. Falls back to the exact
/// cutoff when sigma_{n^2-1} is itself below it.
NullSpaceBasis delta_nullspace(const MatrixSet& a, double gamma);

/// Null space under the exact numerical-rank cutoff, regardless of gamma.
NullSpaceBasis exact_nullspace(const MatrixSet& a);

/// Dimension of the exact null space.
Index exact_null_dimension(const MatrixSet& a);

/// Orthonormal basis (trace inner product) of the delta-null space modulo
/// span{I_n}; every element is orthogonal to I_n. May be empty.
std::vector<Matrix> basis_excluding_identity(const NullSpaceBasis& b);

/// h_jk = tr(Z_j Z_k)
Matrix trace_gram(std::span<const Matrix> zs);

}  // namespace gjbd
