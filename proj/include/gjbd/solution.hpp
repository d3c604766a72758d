#pragma once

#include "gjbd/matrix_set.hpp"
#include "gjbd/partition.hpp"

namespace gjbd {

/// (tau_n, W, f): a partition, a diagonalizer whose column blocks are
/// orthonormal, and the off-block-diagonal cost of W^T A_i W.
struct Solution
{
    Partition partition;
    Matrix w;
    double cost = 0.0;
    bool trivial = false;  // no split found; ((n), I_n, 0)

    static Solution trivial_for(Index n)
    {
        return Solution{Partition::whole(n), Matrix::Identity(n, n), 0.0, true};
    }
};

}  // namespace gjbd
