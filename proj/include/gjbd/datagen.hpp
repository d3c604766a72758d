#pragma once

#include "gjbd/matrix_set.hpp"
#include "gjbd/partition.hpp"

#include <cstdint>
#include <vector>

namespace gjbd {

/// A_i = V^T D_i V with standard normal V and Bdiag(D_i), and off-block noise
/// of standard deviation sigma = 10^(-snr/20).
struct ModelInstance
{
    MatrixSet a;
    Matrix v;
    Matrix v_inv;
    std::vector<Matrix> d;
    Partition p_true;
    double snr = 0.0;
    std::uint64_t seed = 0;
};

/// Noise level for a signal-to-noise ratio in decibels; infinity gives 0.
double noise_sigma(double snr);

/// Deterministic in seed. snr may be +infinity for exactly block diagonal D_i.
/// V is redrawn until its condition number is at most 1e8.
ModelInstance generate_model(const Partition& p, Index m, double snr, std::uint64_t seed);

struct NonuniqueExample
{
    MatrixSet a;
    Matrix w4;
};

/// A_i = diag(B_i, B_i) with B_i = [[0, a_i], [a_i, b_i]]; both I_4 and w4
/// block diagonalize the set with partition (2,2) but are not equivalent.
NonuniqueExample nonunique_example(const std::vector<double>& a_coeffs, const std::vector<double>& b_coeffs);

/// {I_n} followed by the matrices of a.
MatrixSet augment_identity(const MatrixSet& a);

}  // namespace gjbd
