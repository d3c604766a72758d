#include "gjbd/analysis.hpp"

#include "gjbd/matkernels.hpp"
#include "gjbd/nullspace.hpp"
#include "gjbd/rng.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace gjbd {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSlack = 1e-8;

void require_order(const Matrix& a, const Partition& p, const char* who)
{
    if (a.rows() != p.order() || a.cols() != p.order())
        throw std::invalid_argument(std::string(who) + ": matrix order does not match the partition");
}

bool within(double lhs, double rhs) { return lhs <= rhs * (1.0 + kSlack); }

}  // namespace

Matrix bdiag(const Matrix& a, const Partition& p)
{
    require_order(a, p, "bdiag");
    Matrix out = Matrix::Zero(a.rows(), a.cols());
    for (Index j = 0; j < p.card(); ++j)
        out.block(p.offset(j), p.offset(j), p.size(j), p.size(j)) = a.block(p.offset(j), p.offset(j), p.size(j), p.size(j));
    return out;
}

Matrix offbdiag(const Matrix& a, const Partition& p) { return a - bdiag(a, p); }

double cost_ls(const MatrixSet& a, const Partition& p, const Matrix& w)
{
    require_order(w, p, "cost_ls");
    if (a.order() != p.order()) throw std::invalid_argument("cost_ls: matrix set order does not match the partition");
    double f = 0.0;
    for (const Matrix& ai : a)
    {
        const Matrix c = w.transpose() * ai * w;
        for (Index j = 0; j < p.card(); ++j)
            for (Index k = 0; k < p.card(); ++k)
                if (j != k) f += c.block(p.offset(j), p.offset(k), p.size(j), p.size(k)).squaredNorm();
    }
    return f;
}

Matrix block_columns(const Matrix& w, const Partition& p, Index j) { return w.middleCols(p.offset(j), p.size(j)); }

Matrix normalize(const Matrix& w, const Partition& p)
{
    require_order(w, p, "normalize");
    Matrix out(w.rows(), w.cols());
    for (Index j = 0; j < p.card(); ++j) out.middleCols(p.offset(j), p.size(j)) = economic_qr(block_columns(w, p, j)).u;
    return out;
}

std::optional<double> performance_index(const Matrix& v_inv, const Matrix& w, const Partition& p_true,
                                        const Partition& p_hat)
{
    require_order(v_inv, p_true, "performance_index");
    require_order(w, p_hat, "performance_index");
    const auto maps = refines(p_hat, p_true);
    if (maps.empty()) return std::nullopt;
    if (p_hat.card() > 63) throw std::invalid_argument("performance_index: too many blocks");

    // Angles depend only on (true block, set of hat blocks), shared across maps.
    std::map<std::pair<Index, std::uint64_t>, double> cache;
    auto angle = [&](Index j, std::uint64_t mask) {
        auto key = std::make_pair(j, mask);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
        Matrix cols(w.rows(), p_true.size(j));
        Index c = 0;
        for (Index k = 0; k < p_hat.card(); ++k)
        {
            if (!(mask >> k & 1u)) continue;
            cols.middleCols(c, p_hat.size(k)) = block_columns(w, p_hat, k);
            c += p_hat.size(k);
        }
        const double theta = largest_principal_angle(block_columns(v_inv, p_true, j), cols);
        cache.emplace(key, theta);
        return theta;
    };

    double best = std::numeric_limits<double>::infinity();
    for (const auto& map : maps)
    {
        std::vector<std::uint64_t> masks(static_cast<std::size_t>(p_true.card()), 0);
        for (Index k = 0; k < p_hat.card(); ++k)
            masks[static_cast<std::size_t>(map[static_cast<std::size_t>(k)])] |= std::uint64_t{1} << k;
        double worst = 0.0;
        for (Index j = 0; j < p_true.card() && worst < best; ++j)
            worst = std::max(worst, angle(j, masks[static_cast<std::size_t>(j)]));
        best = std::min(best, worst);
    }
    return best;
}

// ---------------------------------------------------------------------------
// Equivalence of exact solutions

Matrix equivalence_matrix(const std::vector<Matrix>& jj_blocks, const std::vector<Matrix>& kk_blocks)
{
    if (jj_blocks.size() != kk_blocks.size() || jj_blocks.empty())
        throw std::invalid_argument("equivalence_matrix: block lists must be nonempty and of equal length");
    const Index nj = jj_blocks.front().rows(), nk = kk_blocks.front().rows();
    const Matrix ij = Matrix::Identity(nj, nj), ik = Matrix::Identity(nk, nk);
    Matrix m = Matrix::Zero(2 * nj * nk, 2 * nj * nk);
    const Index h = nj * nk;
    for (std::size_t i = 0; i < jj_blocks.size(); ++i)
    {
        const Matrix& ajj = jj_blocks[i];
        const Matrix& akk = kk_blocks[i];
        const Matrix coupling = kron(akk, ajj) + kron(akk.transpose(), ajj.transpose());
        m.topLeftCorner(h, h) += kron(ik, ajj.transpose() * ajj + ajj * ajj.transpose());
        m.topRightCorner(h, h) += coupling;
        m.bottomLeftCorner(h, h) += coupling;
        m.bottomRightCorner(h, h) += kron(akk.transpose() * akk + akk * akk.transpose(), ij);
    }
    return m;
}

namespace {

// Every sampled element of the block's null space must have one real
// eigenvalue or one conjugate pair.
bool block_spectrum_ok(const MatrixSet& block, Rng& rng)
{
    if (block.order() == 1) return true;
    const NullSpaceBasis ns = exact_nullspace(block);
    for (int sample = 0; sample < 20; ++sample)
    {
        Matrix z = Matrix::Zero(block.order(), block.order());
        for (const Matrix& zj : ns.basis) z += rng.normal() * zj;
        const double tol = 1e-6 * std::max(z.norm(), std::numeric_limits<double>::min());
        const Eigen::VectorXcd ev = Eigen::EigenSolver<Matrix>(z, false).eigenvalues();
        const std::complex<double> ref = ev(0);
        for (Index k = 1; k < ev.size(); ++k)
        {
            const double dist = std::min(std::abs(ev(k) - ref), std::abs(ev(k) - std::conj(ref)));
            if (dist > tol) return false;
        }
    }
    return true;
}

std::vector<Matrix> diagonal_blocks_of(const MatrixSet& a, const Partition& p, const Matrix& w, Index j)
{
    std::vector<Matrix> out;
    const Matrix wj = block_columns(w, p, j);
    for (const Matrix& ai : a) out.push_back(wj.transpose() * ai * wj);
    return out;
}

}  // namespace

EquivalenceReport equivalence_check(const MatrixSet& a, const Partition& p, const Matrix& w, std::uint64_t seed)
{
    require_order(w, p, "equivalence_check");
    std::vector<std::vector<Matrix>> blocks;
    for (Index j = 0; j < p.card(); ++j) blocks.push_back(diagonal_blocks_of(a, p, w, j));

    EquivalenceReport report;
    for (Index j = 0; j < p.card(); ++j)
    {
        for (Index k = j + 1; k < p.card(); ++k)
        {
            const Matrix m = equivalence_matrix(blocks[static_cast<std::size_t>(j)], blocks[static_cast<std::size_t>(k)]);
            const Vector s = Eigen::JacobiSVD<Matrix>(m).singularValues();
            const double smin = s(s.size() - 1);
            report.pair_sigma_min.push_back(smin);
            if (!(smin > 1e3 * kEps * s(0))) report.singular_pairs.emplace_back(j, k);
        }
    }

    Rng rng(seed);
    report.per_block_spectra_ok = true;
    for (Index j = 0; j < p.card(); ++j)
    {
        if (!block_spectrum_ok(MatrixSet(blocks[static_cast<std::size_t>(j)]), rng))
        {
            report.per_block_spectra_ok = false;
            break;
        }
    }
    report.all_equivalent = report.singular_pairs.empty() && report.per_block_spectra_ok;
    return report;
}

// ---------------------------------------------------------------------------
// Error bounds

BoundReport verify_offblock_bound(const MatrixSet& a, const Matrix& z, double delta, const Solution& solution)
{
    const Partition& p = solution.partition;
    const Matrix& w = solution.w;
    BoundReport r;
    r.lhs = cost_ls(a, p, w);

    const Matrix g = w.partialPivLu().solve(z * w);
    double sep = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < p.card(); ++j)
    {
        const Matrix gj = g.block(p.offset(j), p.offset(j), p.size(j), p.size(j));
        for (Index k = 0; k < p.card(); ++k)
        {
            if (k == j) continue;
            sep = std::min(sep, sep_lower(gj, g.block(p.offset(k), p.offset(k), p.size(k), p.size(k))));
        }
    }
    const double w2 = Eigen::JacobiSVD<Matrix>(w).singularValues()(0);
    const double znorm = z.norm();
    r.components = {{"delta", delta},
                    {"z_norm", znorm},
                    {"w_norm2", w2},
                    {"sep", sep},
                    {"residual", residual(a, z)},
                    {"g_offblock_norm", offbdiag(g, p).norm()}};

    if (p.card() == 1)
    {
        r.rhs = 0.0;
    }
    else if (sep == 0.0)
    {
        r.rhs = std::numeric_limits<double>::infinity();
        r.flag = "infinite-rhs";
    }
    else
    {
        r.rhs = delta * delta * znorm * znorm * std::pow(w2, 4) / (sep * sep);
    }
    r.satisfied = std::isinf(r.rhs) || within(r.lhs, r.rhs);
    return r;
}

std::vector<BoundReport> verify_imag_bound(const MatrixSet& a, const Matrix& z, double delta)
{
    Eigen::EigenSolver<Matrix> es(z, true);
    if (es.info() != Eigen::Success) throw std::runtime_error("verify_imag_bound: eigen decomposition failed");
    const double znorm = z.norm();
    const double floor = kEps * kEps * a.squared_norm();

    std::vector<BoundReport> out;
    for (Index k = 0; k < z.rows(); ++k)
    {
        const std::complex<double> lambda = es.eigenvalues()(k);
        Eigen::VectorXcd x = es.eigenvectors().col(k);
        x.normalize();
        double den = 0.0;
        for (const Matrix& ai : a) den += std::norm(x.dot(ai.cast<std::complex<double>>() * x));

        BoundReport r;
        r.lhs = 2.0 * std::abs(lambda.imag());
        r.components = {{"re_lambda", lambda.real()}, {"im_lambda", lambda.imag()},
                        {"delta", delta},            {"z_norm", znorm},
                        {"sum_xAx_sq", den}};
        if (!(den > floor))
        {
            r.applicable = false;
            r.flag = "inapplicable";
            r.rhs = std::numeric_limits<double>::infinity();
            r.satisfied = true;
        }
        else
        {
            r.rhs = delta * znorm / std::sqrt(den);
            r.components["rhs_squared"] = r.rhs * r.rhs;
            r.satisfied = within(r.lhs, r.rhs);
        }
        out.push_back(std::move(r));
    }
    return out;
}

BoundReport gap_lower_bound(const Matrix& z)
{
    const Index n = z.rows();
    BoundReport r;
    const double eta = (z * z).trace();
    r.components = {{"eta", eta}, {"trace", z.trace()}};
    const double trace_tol = 1e-10 * std::sqrt(static_cast<double>(n)) * std::max(z.norm(), 1e-300);
    if (n < 2 || std::abs(z.trace()) > trace_tol || eta < 0.0)
    {
        r.applicable = false;
        r.flag = "inapplicable";
        r.satisfied = true;
        return r;
    }
    const Eigen::VectorXcd ev = Eigen::EigenSolver<Matrix>(z, false).eigenvalues();
    std::vector<double> re(static_cast<std::size_t>(n));
    for (Index k = 0; k < n; ++k) re[static_cast<std::size_t>(k)] = ev(k).real();
    std::sort(re.begin(), re.end());
    double g = 0.0;
    for (std::size_t k = 1; k < re.size(); ++k) g = std::max(g, re[k] - re[k - 1]);
    const double nd = static_cast<double>(n);
    r.lhs = std::sqrt(8.0 * eta / ((nd - 1.0) * nd * nd));
    r.rhs = g;
    r.components["g"] = g;
    // The bound is a lower bound on g: lhs (the bound) must not exceed g.
    r.satisfied = within(r.lhs, r.rhs);
    return r;
}

Index NullDimensionReport::block_sum() const
{
    Index s = 0;
    for (Index d : per_block) s += d;
    return s;
}

NullDimensionReport null_dimension_check(const MatrixSet& a, const Partition& p, const Matrix& w)
{
    require_order(w, p, "null_dimension_check");
    NullDimensionReport r;
    r.total = exact_null_dimension(a);
    for (Index j = 0; j < p.card(); ++j) r.per_block.push_back(exact_null_dimension(a.compress(block_columns(w, p, j))));
    return r;
}

}  // namespace gjbd
