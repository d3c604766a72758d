#include "gjbd/solvers.hpp"

#include "gjbd/analysis.hpp"
#include "gjbd/errors.hpp"
#include "gjbd/nullspace.hpp"
#include "gjbd/rng.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gjbd {

double SolverConfig::mu_for(Index n) const
{
    if (mu) return *mu;
    return n > 1 ? 1.0 / (8.0 * static_cast<double>(n - 1)) : 1.0;
}

void SolverConfig::validate() const
{
    if (!(gamma > 1.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be a finite number > 1");
    if (mu && !(*mu > 0.0 && *mu < 1.0)) throw std::invalid_argument("mu must lie in (0, 1)");
    if (!(epsilon >= 0.0) || std::isnan(epsilon)) throw std::invalid_argument("epsilon must be nonnegative");
}

EigenDecomposition eig_decomp_for_partition(const SchurForm& schur, const Clustering& clustering)
{
    const Index n = schur.order();
    const BlockDiagonalization bd = block_diagonalize_similarity(schur, clustering.boundaries);
    const Partition p = clustering.partition(n);

    EigenDecomposition out;
    Matrix u(n, n);
    for (Index j = 0; j < p.card(); ++j)
    {
        const QrFactors qr = economic_qr(bd.w.middleCols(p.offset(j), p.size(j)));
        u.middleCols(p.offset(j), p.size(j)) = qr.u;
        // T U_j = U_j (R_j T_j R_j^{-1})
        const Matrix rt = qr.r * bd.blocks[static_cast<std::size_t>(j)];
        out.blocks.push_back(qr.r.transpose().triangularView<Eigen::Lower>().solve(rt.transpose()).transpose());
    }
    out.w = schur.q * u;
    return out;
}

EigenDecomposition eig_decomp_for_partition(const Matrix& z, const Clustering& clustering)
{
    return eig_decomp_for_partition(real_schur_ordered(z), clustering);
}

namespace {

enum class Mode
{
    Greedy,
    Exact
};

GreedyTrace solve_with(const MatrixSet& a, const NullSpaceBasis& ns, Mode mode, double mu, std::uint64_t seed)
{
    const Index n = a.order();
    GreedyTrace trace{Solution::trivial_for(n), Matrix::Zero(n, n), ns.delta, {}};
    if (n == 1 || basis_excluding_identity(ns).empty()) return trace;

    Rng rng(seed);
    Matrix z = Matrix::Zero(n, n);
    for (const Matrix& zj : ns.basis) z += rng.normal() * zj;
    trace.z = z;

    const SchurForm schur = real_schur_ordered(z);
    const Clustering clustering =
        mode == Mode::Exact
            ? cluster_by_absolute_gap(schur.eig_real_parts, schur.pair_flags, 1e-6 * z.norm())
            : cluster_by_gap(schur.eig_real_parts, schur.pair_flags, mu);
    if (clustering.boundaries.empty()) return trace;

    EigenDecomposition ed = eig_decomp_for_partition(schur, clustering);
    Partition p = clustering.partition(n);
    const double cost = cost_ls(a, p, ed.w);
    trace.solution = Solution{std::move(p), std::move(ed.w), cost, false};
    trace.blocks = std::move(ed.blocks);
    return trace;
}

}  // namespace

GreedyTrace greedy_solve_traced(const MatrixSet& a, const SolverConfig& cfg)
{
    cfg.validate();
    return solve_with(a, delta_nullspace(a, cfg.gamma), Mode::Greedy, cfg.mu_for(a.order()), cfg.seed);
}

Solution greedy_solve(const MatrixSet& a, const SolverConfig& cfg) { return greedy_solve_traced(a, cfg).solution; }

GreedyTrace exact_solve_traced(const MatrixSet& a, std::uint64_t seed)
{
    return solve_with(a, exact_nullspace(a), Mode::Exact, 0.0, seed);
}

Solution exact_solve(const MatrixSet& a, std::uint64_t seed) { return exact_solve_traced(a, seed).solution; }

OneStepResult one_step_split(const MatrixSet& a, double gamma)
{
    const Index n = a.order();
    if (n < 2) throw Unsplittable("one_step_split: a block of order 1 cannot be split");
    const NullSpaceBasis ns = delta_nullspace(a, gamma);
    const std::vector<Matrix> basis = basis_excluding_identity(ns);
    if (basis.empty()) throw Unsplittable("one_step_split: the null space holds nothing beyond the identity");

    const Eigen::SelfAdjointEigenSolver<Matrix> es(trace_gram(basis));
    Vector alpha = es.eigenvectors().col(es.eigenvectors().cols() - 1);
    Index lead = 0;
    alpha.cwiseAbs().maxCoeff(&lead);
    if (alpha(lead) < 0) alpha = -alpha;

    Matrix z = Matrix::Zero(n, n);
    for (std::size_t j = 0; j < basis.size(); ++j) z += alpha(static_cast<Index>(j)) * basis[j];

    const SchurForm schur = real_schur_ordered(z);
    const std::vector<bool> starts = pair_starts(schur.pair_flags);
    Index cut = 0;
    double best = 0.0;
    for (Index i = 1; i < n; ++i)
    {
        if (starts[static_cast<std::size_t>(i - 1)]) continue;
        const double gap = schur.eig_real_parts[static_cast<std::size_t>(i)] -
                           schur.eig_real_parts[static_cast<std::size_t>(i - 1)];
        if (gap > best)
        {
            best = gap;
            cut = i;
        }
    }
    if (cut == 0) throw Unsplittable("one_step_split: no admissible gap in the spectrum");

    Clustering clustering{{cut}, best};
    EigenDecomposition ed = eig_decomp_for_partition(schur, clustering);
    Partition p = clustering.partition(n);
    const double cost = cost_ls(a, p, ed.w);
    return OneStepResult{std::move(p), std::move(ed.w), cost, std::move(z), ns.delta, std::move(ed.blocks)};
}

ConservativeTrace conservative_solve_traced(const MatrixSet& a, const SolverConfig& cfg)
{
    cfg.validate();
    const Index n = a.order();
    const double eps2 = cfg.epsilon * cfg.epsilon;
    ConservativeTrace trace{Solution::trivial_for(n), {}};

    // Pending one-step result per block of the accepted partition.
    std::vector<std::optional<OneStepResult>> pending;
    auto evaluate = [&](const MatrixSet& block) -> std::optional<OneStepResult> {
        if (block.order() < 2) return std::nullopt;
        try
        {
            OneStepResult r = one_step_split(block, cfg.gamma);
            trace.splits.push_back(SplitRecord{block, r});
            return r;
        }
        catch (const Unsplittable&)
        {
            return std::nullopt;
        }
    };

    pending.push_back(evaluate(a));
    if (!pending.front()) return trace;

    Partition tau = Partition::whole(n);
    Matrix w = Matrix::Identity(n, n);
    Index chosen = 0;
    Partition tau_hat = pending.front()->partition;
    Matrix w_hat = pending.front()->w;
    double f_hat = pending.front()->cost;

    while (f_hat <= eps2)
    {
        tau = tau_hat;
        w = w_hat;
        trace.solution = Solution{tau, w, f_hat, false};

        // Block `chosen` became blocks chosen and chosen + 1.
        pending.erase(pending.begin() + chosen);
        for (Index k : {chosen, chosen + 1})
        {
            const MatrixSet block = a.compress(block_columns(w, tau, k));
            pending.insert(pending.begin() + k, evaluate(block));
        }

        double best = std::numeric_limits<double>::infinity();
        bool found = false;
        for (Index j = 0; j < tau.card(); ++j)
        {
            const auto& r = pending[static_cast<std::size_t>(j)];
            if (r && (!found || r->cost < best))
            {
                best = r->cost;
                chosen = j;
                found = true;
            }
        }
        if (!found) break;

        const OneStepResult& split = *pending[static_cast<std::size_t>(chosen)];
        tau_hat = tau.split_block(chosen, split.partition.sizes());
        w_hat = w;
        w_hat.middleCols(tau.offset(chosen), tau.size(chosen)) = block_columns(w, tau, chosen) * split.w;
        f_hat = cost_ls(a, tau_hat, w_hat);
    }
    return trace;
}

Solution conservative_solve(const MatrixSet& a, const SolverConfig& cfg)
{
    return conservative_solve_traced(a, cfg).solution;
}

}  // namespace gjbd
