#include "gjbd/partition.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace gjbd {

Partition::Partition(std::vector<Index> sizes) : sizes_(std::move(sizes))
{
    if (sizes_.empty()) throw std::invalid_argument("partition must have at least one block");
    offsets_.reserve(sizes_.size());
    for (Index s : sizes_)
    {
        if (s < 1) throw std::invalid_argument("partition block sizes must be positive");
        offsets_.push_back(n_);
        n_ += s;
    }
}

Partition Partition::whole(Index n) { return Partition({n}); }

Partition Partition::from_boundaries(Index n, std::span<const Index> boundaries)
{
    std::vector<Index> sizes;
    Index prev = 0;
    for (Index b : boundaries)
    {
        if (b <= prev || b >= n) throw std::invalid_argument("boundaries must be strictly increasing within 1..n-1");
        sizes.push_back(b - prev);
        prev = b;
    }
    sizes.push_back(n - prev);
    return Partition(std::move(sizes));
}

std::vector<Index> Partition::boundaries() const
{
    return std::vector<Index>(offsets_.begin() + 1, offsets_.end());
}

Partition Partition::split_block(Index j, std::span<const Index> parts) const
{
    if (std::accumulate(parts.begin(), parts.end(), Index{0}) != size(j))
        throw std::invalid_argument("split_block: parts do not sum to the block size");
    std::vector<Index> sizes(sizes_.begin(), sizes_.begin() + j);
    sizes.insert(sizes.end(), parts.begin(), parts.end());
    sizes.insert(sizes.end(), sizes_.begin() + j + 1, sizes_.end());
    return Partition(std::move(sizes));
}

std::vector<bool> pair_starts(const std::vector<bool>& pair_flags)
{
    std::vector<bool> starts(pair_flags.size(), false);
    for (std::size_t i = 0; i + 1 < pair_flags.size();)
    {
        if (pair_flags[i] && pair_flags[i + 1])
        {
            starts[i] = true;
            i += 2;
        }
        else
            ++i;
    }
    return starts;
}

namespace {

// A boundary at i separates positions i-1 and i (zero-based).
bool splits_pair(const std::vector<bool>& starts, std::size_t i) { return i >= 1 && starts[i - 1]; }

}  // namespace

Clustering cluster_by_absolute_gap(std::span<const double> re, const std::vector<bool>& pair_flags, double threshold)
{
    if (re.empty()) throw std::invalid_argument("cluster_by_gap: empty spectrum");
    if (pair_flags.size() != re.size()) throw std::invalid_argument("cluster_by_gap: pair flags size mismatch");
    Clustering c;
    c.threshold_used = threshold;
    const double range = re.back() - re.front();
    if (!(range > 0.0)) return c;
    const std::vector<bool> starts = pair_starts(pair_flags);
    for (std::size_t i = 1; i < re.size(); ++i)
    {
        if (splits_pair(starts, i)) continue;
        if (re[i] - re[i - 1] >= threshold) c.boundaries.push_back(static_cast<Index>(i));
    }
    return c;
}

Clustering cluster_by_gap(std::span<const double> re, const std::vector<bool>& pair_flags, double mu)
{
    if (re.empty()) throw std::invalid_argument("cluster_by_gap: empty spectrum");
    const double range = re.back() - re.front();
    Clustering c = cluster_by_absolute_gap(re, pair_flags, mu * range);
    c.threshold_used = mu * range;
    return c;
}

bool partition_equivalent(const Partition& p, const Partition& q)
{
    if (p.card() != q.card()) return false;
    std::vector<Index> a = p.sizes(), b = q.sizes();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

Matrix block_permutation(const Partition& p, std::span<const Index> perm)
{
    const Index t = p.card();
    if (static_cast<Index>(perm.size()) != t) throw std::invalid_argument("block_permutation: wrong permutation length");
    std::vector<bool> seen(static_cast<std::size_t>(t), false);
    for (Index k : perm)
    {
        if (k < 0 || k >= t || seen[static_cast<std::size_t>(k)])
            throw std::invalid_argument("block_permutation: not a permutation");
        seen[static_cast<std::size_t>(k)] = true;
    }
    const Index n = p.order();
    Matrix out = Matrix::Zero(n, n);
    Index col = 0;
    for (Index k = 0; k < t; ++k)
    {
        const Index src = perm[static_cast<std::size_t>(k)];
        for (Index c = 0; c < p.size(src); ++c) out(p.offset(src) + c, col++) = 1.0;
    }
    return out;
}

namespace {

class GroupingSearch
{
 public:
    GroupingSearch(const Partition& hat, const Partition& truth) : hat_(hat.sizes()), remaining_(truth.sizes())
    {
        assignment_.resize(hat_.size());
    }

    std::vector<std::vector<Index>> run()
    {
        descend(0);
        return std::move(results_);
    }

 private:
    // Memoized on (next hat block, remaining capacities): whether any
    // completion exists. Prunes dead branches so enumeration is output-sensitive.
    bool feasible(std::size_t k)
    {
        if (k == hat_.size())
            return std::all_of(remaining_.begin(), remaining_.end(), [](Index r) { return r == 0; });
        auto key = std::make_pair(k, remaining_);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        bool ok = false;
        for (std::size_t g = 0; g < remaining_.size() && !ok; ++g)
        {
            if (remaining_[g] < hat_[k]) continue;
            remaining_[g] -= hat_[k];
            ok = feasible(k + 1);
            remaining_[g] += hat_[k];
        }
        memo_.emplace(std::move(key), ok);
        return ok;
    }

    void descend(std::size_t k)
    {
        if (!feasible(k)) return;
        if (k == hat_.size())
        {
            results_.push_back(assignment_);
            return;
        }
        for (std::size_t g = 0; g < remaining_.size(); ++g)
        {
            if (remaining_[g] < hat_[k]) continue;
            remaining_[g] -= hat_[k];
            assignment_[k] = static_cast<Index>(g);
            descend(k + 1);
            remaining_[g] += hat_[k];
        }
    }

    std::vector<Index> hat_;
    std::vector<Index> remaining_;
    std::vector<Index> assignment_;
    std::vector<std::vector<Index>> results_;
    std::map<std::pair<std::size_t, std::vector<Index>>, bool> memo_;
};

}  // namespace

std::vector<std::vector<Index>> refines(const Partition& p_hat, const Partition& p_true)
{
    if (p_hat.order() != p_true.order() || p_hat.card() < p_true.card()) return {};
    return GroupingSearch(p_hat, p_true).run();
}

}  // namespace gjbd
