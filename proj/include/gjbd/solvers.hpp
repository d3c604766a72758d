#pragma once

#include "gjbd/matrix_set.hpp"
#include "gjbd/matkernels.hpp"
#include "gjbd/partition.hpp"
#include "gjbd/solution.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace gjbd {

struct SolverConfig
{
    double gamma = 1.2;
    std::optional<double> mu;  // default 1 / (8 (n - 1))
    double epsilon = 0.0;
    std::uint64_t seed = 0;

    double mu_for(Index n) const;
    void validate() const;
};

struct EigenDecomposition
{
    Matrix w;                    // Q [U_1 ... U_t]
    std::vector<Matrix> blocks;  // G_j = W_j^{-1}-side blocks, w^{-1} z w = diag(G_j)
};

/// Eigenvalue decomposition of z for the given clustering of its ordered
/// Schur form, with each column block orthonormalized.
EigenDecomposition eig_decomp_for_partition(const SchurForm& schur, const Clustering& clustering);
EigenDecomposition eig_decomp_for_partition(const Matrix& z, const Clustering& clustering);

/// Intermediates of a greedy or exact solve.
struct GreedyTrace
{
    Solution solution;
    Matrix z;
    double delta = 0.0;
    std::vector<Matrix> blocks;
};

GreedyTrace greedy_solve_traced(const MatrixSet& a, const SolverConfig& cfg);
Solution greedy_solve(const MatrixSet& a, const SolverConfig& cfg);

/// Exact-null-space variant: clusters the spectrum of a random null-space
/// element by distinct eigenvalues instead of relative gaps.
GreedyTrace exact_solve_traced(const MatrixSet& a, std::uint64_t seed);
Solution exact_solve(const MatrixSet& a, std::uint64_t seed);

struct OneStepResult
{
    Partition partition;  // card 2
    Matrix w;
    double cost = 0.0;
    Matrix z;
    double delta = 0.0;
    std::vector<Matrix> blocks;
};

/// Two-block split at the largest real-part gap of the trace-free Z that
/// maximizes tr(Z^2) over the delta-null space. Throws Unsplittable.
OneStepResult one_step_split(const MatrixSet& a, double gamma);

/// Record of one tentative split evaluated inside conservative_solve.
struct SplitRecord
{
    MatrixSet compressed;
    OneStepResult split;
};

struct ConservativeTrace
{
    Solution solution;
    std::vector<SplitRecord> splits;
};

ConservativeTrace conservative_solve_traced(const MatrixSet& a, const SolverConfig& cfg);
Solution conservative_solve(const MatrixSet& a, const SolverConfig& cfg);

}  // namespace gjbd
