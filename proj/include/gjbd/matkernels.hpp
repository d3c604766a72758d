#pragma once

#include "gjbd/matrix_set.hpp"

#include <span>
#include <vector>

namespace gjbd {

/// Index permutation p of size n*n with vec(Z^T)[k] = vec(Z)[p[k]] for every
/// n x n matrix Z (column-major vec). The permutation is an involution.
std::vector<Index> perfect_shuffle(Index n);

/// Applies a permutation produced by perfect_shuffle: out[k] = v[p[k]].
Vector apply_permutation(std::span<const Index> p, const Vector& v);

/// Column-major vectorization and its inverse.
Vector vec(const Matrix& z);
Matrix reshape(const Vector& v, Index rows, Index cols);

Matrix kron(const Matrix& a, const Matrix& b);

/// Real Schur form z = q t q^T with eigenvalue real parts in ascending order.
struct SchurForm
{
    Matrix q;
    Matrix t;
    std::vector<double> eig_real_parts;
    std::vector<bool> pair_flags;

    Index order() const { return t.rows(); }
};

/// Computes the real Schur form and reorders its diagonal blocks by adjacent
/// swaps so that real parts are non-decreasing. 2x2 blocks (complex pairs)
/// move as units. Throws NumericalFailure if the QR iteration does not converge.
SchurForm real_schur_ordered(const Matrix& z);

struct BlockDiagonalization
{
    Matrix w;                    // unit block upper triangular
    std::vector<Matrix> blocks;  // diagonal blocks of t, one per cluster
};

/// Finds w with w^{-1} t w = diag(blocks) for the clusters of schur.t delimited
/// by boundaries, annihilating the coupling blocks with Sylvester solves.
/// Throws InseparableClusters when two clusters share an eigenvalue.
BlockDiagonalization block_diagonalize_similarity(const SchurForm& schur, std::span<const Index> boundaries);

/// Solves a x - x b = c through its Kronecker form. Returns the solution and
/// reports the smallest singular value of the operator.
Matrix solve_sylvester(const Matrix& a, const Matrix& b, const Matrix& c, double* sigma_min = nullptr);

struct QrFactors
{
    Matrix u;  // n x k, orthonormal columns
    Matrix r;  // k x k, upper triangular with non-negative diagonal
};

/// Thin Householder QR. Throws DegenerateBasis when a is rank deficient.
QrFactors economic_qr(const Matrix& a);

/// Largest principal angle between the column spaces of e and f, in [0, pi/2].
double largest_principal_angle(const Matrix& e, const Matrix& f);

/// Smallest singular value of X -> gj^T X - X gk.
double sep_lower(const Matrix& gj, const Matrix& gk);

/// w (w^T w)^{-1/2}, the orthogonal polar factor of a nonsingular w.
Matrix symmetric_orthogonalize(const Matrix& w);

}  // namespace gjbd
