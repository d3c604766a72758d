#pragma once

#include "gjbd/matrix_set.hpp"

#include <optional>
#include <span>
#include <vector>

namespace gjbd {

/// An ordered list of positive block sizes (n_1, ..., n_t) summing to n.
class Partition
{
 public:
    explicit Partition(std::vector<Index> sizes);

    /// Single block of size n.
    static Partition whole(Index n);

    /// Partition induced by split indices i_1 < ... < i_{t-1} in 1..n-1,
    /// with n_j = i_j - i_{j-1}, i_0 = 0 and i_t = n.
    static Partition from_boundaries(Index n, std::span<const Index> boundaries);

    const std::vector<Index>& sizes() const { return sizes_; }
    Index card() const { return static_cast<Index>(sizes_.size()); }
    Index order() const { return n_; }
    Index size(Index j) const { return sizes_[static_cast<std::size_t>(j)]; }
    Index offset(Index j) const { return offsets_[static_cast<std::size_t>(j)]; }

    /// Inverse of from_boundaries.
    std::vector<Index> boundaries() const;

    /// Replaces block j by consecutive blocks of the given sizes.
    Partition split_block(Index j, std::span<const Index> parts) const;

    bool operator==(const Partition& other) const { return sizes_ == other.sizes_; }

 private:
    std::vector<Index> sizes_;
    std::vector<Index> offsets_;
    Index n_ = 0;
};

struct Clustering
{
    std::vector<Index> boundaries;
    double threshold_used = 0.0;

    Partition partition(Index n) const { return Partition::from_boundaries(n, boundaries); }
};

/// Groups an ascending list of eigenvalue real parts at every gap of at least
/// mu * (max - min). Boundaries never separate the two halves of a complex pair.
Clustering cluster_by_gap(std::span<const double> eig_real_parts, const std::vector<bool>& pair_flags,
                          double mu);

/// Same as cluster_by_gap but with an absolute gap threshold.
Clustering cluster_by_absolute_gap(std::span<const double> eig_real_parts, const std::vector<bool>& pair_flags,
                                   double threshold);

/// Equal cardinality and equal multiset of sizes.
bool partition_equivalent(const Partition& p, const Partition& q);

/// Permutation matrix P such that M * P has block columns (by p) in the order
/// perm[0], perm[1], ... (zero-based block indices).
Matrix block_permutation(const Partition& p, std::span<const Index> perm);

/// Every assignment of p_hat's blocks to p_true's blocks such that the sizes
/// assigned to true block j sum to p_true.size(j). Entry k of a map is the
/// true block receiving hat block k. An empty result means p_hat is not a
/// correct partition with respect to p_true.
std::vector<std::vector<Index>> refines(const Partition& p_hat, const Partition& p_true);

/// Positions that are the first of a 2x2 conjugate-pair block, recovered from
/// pair flags (runs of flags chunk into consecutive pairs).
std::vector<bool> pair_starts(const std::vector<bool>& pair_flags);

}  // namespace gjbd
