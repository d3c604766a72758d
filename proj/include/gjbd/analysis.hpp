#pragma once

#include "gjbd/matrix_set.hpp"
#include "gjbd/partition.hpp"
#include "gjbd/solution.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gjbd {

Matrix bdiag(const Matrix& a, const Partition& p);
Matrix offbdiag(const Matrix& a, const Partition& p);

/// f(tau, W) = sum_i ||OffBdiag_tau(W^T A_i W)||_F^2
double cost_ls(const MatrixSet& a, const Partition& p, const Matrix& w);

/// Per-block QR so that Bdiag_p(W^T W) = I, keeping each block's column space.
Matrix normalize(const Matrix& w, const Partition& p);

/// Columns of w belonging to block j of p.
Matrix block_columns(const Matrix& w, const Partition& p, Index j);

/// Min over block matchings of the max largest principal angle between the
/// column blocks of v_inv (by p_true) and w (by p_hat). When p_hat refines
/// p_true the hat blocks are grouped by every map from refines(). Returns
/// nullopt for an incorrect partition.
std::optional<double> performance_index(const Matrix& v_inv, const Matrix& w, const Partition& p_true,
                                        const Partition& p_hat);

/// The Gram-type matrix M_jk built from the diagonal blocks of W^T A_i W.
Matrix equivalence_matrix(const std::vector<Matrix>& jj_blocks, const std::vector<Matrix>& kk_blocks);

struct EquivalenceReport
{
    bool all_equivalent = false;
    std::vector<std::pair<Index, Index>> singular_pairs;
    bool per_block_spectra_ok = false;
    std::vector<double> pair_sigma_min;  // smallest singular value of each M_jk, (0,1), (0,2), ... order
};

/// Checks whether every exact solution is equivalent to (p, w): each M_jk must
/// be nonsingular and each block's null space may only contain matrices whose
/// spectrum is one real value or one conjugate pair (sampled).
EquivalenceReport equivalence_check(const MatrixSet& a, const Partition& p, const Matrix& w,
                                    std::uint64_t seed = 0);

struct BoundReport
{
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
    bool applicable = true;
    std::string flag;  // "", "infinite-rhs", "inapplicable"
    std::map<std::string, double> components;
};

/// f(tau, W) <= delta^2 ||Z||_F^2 ||W||_2^4 / sep(G)^2 where G = W^{-1} Z W is
/// read off the solution's blocks.
BoundReport verify_offblock_bound(const MatrixSet& a, const Matrix& z, double delta, const Solution& solution);

/// For each eigenpair (lambda, x) of z with ||x|| = 1: |lambda - conj(lambda)|
/// against delta ||Z||_F / sqrt(sum_i |x^* A_i x|^2).
std::vector<BoundReport> verify_imag_bound(const MatrixSet& a, const Matrix& z, double delta);

/// Largest consecutive gap g of eigenvalue real parts of a trace-free z
/// against sqrt(8 eta / ((n-1) n^2)), eta = tr(z^2).
BoundReport gap_lower_bound(const Matrix& z);

/// Dimensions for the blockwise null-space identity: exact null dimension of
/// the whole set and of each compressed diagonal block.
struct NullDimensionReport
{
    Index total = 0;
    std::vector<Index> per_block;
    Index block_sum() const;
};
NullDimensionReport null_dimension_check(const MatrixSet& a, const Partition& p, const Matrix& w);

}  // namespace gjbd
