#include "gjbd/matkernels.hpp"

#include "gjbd/errors.hpp"
#include "gjbd/partition.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gjbd {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

std::vector<Index> perfect_shuffle(Index n)
{
    if (n < 1) throw std::invalid_argument("perfect_shuffle: n must be positive");
    std::vector<Index> p(static_cast<std::size_t>(n * n));
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) p[static_cast<std::size_t>(i + j * n)] = j + i * n;
    return p;
}

Vector apply_permutation(std::span<const Index> p, const Vector& v)
{
    if (static_cast<Index>(p.size()) != v.size()) throw std::invalid_argument("apply_permutation: size mismatch");
    Vector out(v.size());
    for (Index k = 0; k < v.size(); ++k) out(k) = v(p[static_cast<std::size_t>(k)]);
    return out;
}

Vector vec(const Matrix& z) { return Eigen::Map<const Vector>(z.data(), z.size()); }

Matrix reshape(const Vector& v, Index rows, Index cols)
{
    if (v.size() != rows * cols) throw std::invalid_argument("reshape: size mismatch");
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Matrix kron(const Matrix& a, const Matrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

// ---------------------------------------------------------------------------
// Ordered real Schur form

namespace {

struct DiagBlock
{
    Index start;
    Index size;
};

std::vector<DiagBlock> diagonal_blocks(const Matrix& t)
{
    std::vector<DiagBlock> blocks;
    const Index n = t.rows();
    for (Index i = 0; i < n;)
    {
        const Index s = (i + 1 < n && t(i + 1, i) != 0.0) ? 2 : 1;
        blocks.push_back({i, s});
        i += s;
    }
    return blocks;
}

double real_part(const Matrix& t, const DiagBlock& b)
{
    return b.size == 1 ? t(b.start, b.start) : 0.5 * (t(b.start, b.start) + t(b.start + 1, b.start + 1));
}

void rotate(Matrix& t, Matrix& q, Index k, const Matrix& rot)
{
    const Index r = rot.rows();
    t.middleRows(k, r) = rot.transpose() * t.middleRows(k, r);
    t.middleCols(k, r) = t.middleCols(k, r) * rot;
    q.middleCols(k, r) = q.middleCols(k, r) * rot;
}

// A 2x2 block with real eigenvalues is triangularized by a rotation built
// from one of its eigenvectors; complex blocks are left alone.
void split_real_2x2(Matrix& t, Matrix& q, Index s)
{
    const double a = t(s, s), b = t(s, s + 1), c = t(s + 1, s), d = t(s + 1, s + 1);
    const double half = 0.5 * (a - d);
    const double disc = half * half + b * c;
    if (disc < 0.0) return;
    const double mean = 0.5 * (a + d);
    const double root = std::sqrt(disc);
    const double lambda = mean + (half >= 0.0 ? root : -root);
    Eigen::Vector2d v1(b, lambda - a), v2(lambda - d, c);
    Eigen::Vector2d v = v1.norm() >= v2.norm() ? v1 : v2;
    if (v.norm() == 0.0)
    {
        t(s + 1, s) = 0.0;
        return;
    }
    v.normalize();
    Matrix rot(2, 2);
    rot << v(0), -v(1), v(1), v(0);
    rotate(t, q, s, rot);
    t(s + 1, s) = 0.0;
}

// Exchanges the adjacent diagonal blocks starting at k with sizes p and r.
void swap_blocks(Matrix& t, Matrix& q, Index k, Index p, Index r)
{
    const Matrix a = t.block(k, k, p, p);
    const Matrix b = t.block(k + p, k + p, r, r);
    const Matrix c = t.block(k, k + p, p, r);
    const Matrix x = solve_sylvester(a, b, c);

    // [-x; I] spans the invariant subspace belonging to b.
    Matrix basis(p + r, r);
    basis.topRows(p) = -x;
    basis.bottomRows(r).setIdentity();
    Eigen::HouseholderQR<Matrix> qr(basis);
    const Matrix rot = qr.householderQ();
    rotate(t, q, k, rot);
    t.block(k + r, k, p, r).setZero();
    if (r == 2) split_real_2x2(t, q, k);
    if (p == 2) split_real_2x2(t, q, k + r);
}

}  // namespace

SchurForm real_schur_ordered(const Matrix& z)
{
    if (z.rows() != z.cols()) throw std::invalid_argument("real_schur_ordered: matrix must be square");
    if (!z.allFinite()) throw std::invalid_argument("real_schur_ordered: matrix has non-finite entries");
    const Index n = z.rows();

    Eigen::RealSchur<Matrix> rs(z);
    if (rs.info() != Eigen::Success)
        throw NumericalFailure("real Schur iteration did not converge for a " + std::to_string(n) + "x" +
                               std::to_string(n) + " matrix");
    SchurForm out;
    out.q = rs.matrixU();
    out.t = rs.matrixT();
    for (Index j = 0; j + 1 < n; ++j)
        for (Index i = j + 2; i < n; ++i) out.t(i, j) = 0.0;

    // Bubble sort over diagonal blocks. Differences below the tolerance are
    // ties; swapping them could cycle on rounding noise.
    const double tie = 100.0 * kEps * std::max(out.t.norm(), std::numeric_limits<double>::min());
    const Index max_swaps = 4 * n * n + 16;
    Index swaps = 0;
    for (bool moved = true; moved && swaps < max_swaps;)
    {
        moved = false;
        const auto blocks = diagonal_blocks(out.t);
        for (std::size_t i = 0; i + 1 < blocks.size(); ++i)
        {
            if (real_part(out.t, blocks[i + 1]) < real_part(out.t, blocks[i]) - tie)
            {
                swap_blocks(out.t, out.q, blocks[i].start, blocks[i].size, blocks[i + 1].size);
                moved = true;
                ++swaps;
                break;
            }
        }
    }

    out.eig_real_parts.resize(static_cast<std::size_t>(n));
    out.pair_flags.assign(static_cast<std::size_t>(n), false);
    double running = -std::numeric_limits<double>::infinity();
    for (const DiagBlock& b : diagonal_blocks(out.t))
    {
        running = std::max(running, real_part(out.t, b));
        for (Index i = 0; i < b.size; ++i)
        {
            out.eig_real_parts[static_cast<std::size_t>(b.start + i)] = running;
            out.pair_flags[static_cast<std::size_t>(b.start + i)] = b.size == 2;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sylvester-based block diagonalization

Matrix solve_sylvester(const Matrix& a, const Matrix& b, const Matrix& c, double* sigma_min)
{
    const Index p = a.rows(), r = b.rows();
    const Matrix op = kron(Matrix::Identity(r, r), a) - kron(b.transpose(), Matrix::Identity(p, p));
    Eigen::JacobiSVD<Matrix> svd(op, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (sigma_min) *sigma_min = svd.singularValues().size() ? svd.singularValues().minCoeff() : 0.0;
    const Vector x = svd.solve(vec(c));
    return reshape(x, p, r);
}

BlockDiagonalization block_diagonalize_similarity(const SchurForm& schur, std::span<const Index> boundaries)
{
    const Matrix& t = schur.t;
    const Index n = t.rows();
    const std::vector<bool> starts = pair_starts(schur.pair_flags);
    for (Index b : boundaries)
    {
        if (b >= 1 && b < n && starts[static_cast<std::size_t>(b - 1)])
            throw std::invalid_argument("block_diagonalize_similarity: boundary splits a complex pair");
    }
    const Partition part = Partition::from_boundaries(n, boundaries);
    const Index nb = part.card();
    const double tol = 1e3 * kEps * t.norm();

    BlockDiagonalization out;
    out.w = Matrix::Identity(n, n);
    for (Index j = 0; j < nb; ++j) out.blocks.push_back(t.block(part.offset(j), part.offset(j), part.size(j), part.size(j)));

    // Column block j of w is [X_0; ...; X_{j-1}; I; 0], obtained by back
    // substitution T_ii X_i - X_i T_jj = -sum_{k=i+1..j} T_ik X_k.
    for (Index j = 1; j < nb; ++j)
    {
        const Index oj = part.offset(j), nj = part.size(j);
        for (Index i = j - 1; i >= 0; --i)
        {
            const Index oi = part.offset(i), ni = part.size(i);
            Matrix rhs = -t.block(oi, oj, ni, nj);
            for (Index k = i + 1; k < j; ++k)
                rhs -= t.block(oi, part.offset(k), ni, part.size(k)) * out.w.block(part.offset(k), oj, part.size(k), nj);
            double smin = 0.0;
            const Matrix x = solve_sylvester(out.blocks[static_cast<std::size_t>(i)],
                                             out.blocks[static_cast<std::size_t>(j)], rhs, &smin);
            if (!(smin > tol))
                throw InseparableClusters(static_cast<int>(i), static_cast<int>(j),
                                          "inseparable clusters " + std::to_string(i) + " and " + std::to_string(j));
            out.w.block(oi, oj, ni, nj) = x;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

QrFactors economic_qr(const Matrix& a)
{
    const Index n = a.rows(), k = a.cols();
    if (k > n || k == 0) throw std::invalid_argument("economic_qr: need 1 <= k <= n");
    Eigen::HouseholderQR<Matrix> qr(a);
    QrFactors out;
    out.u = qr.householderQ() * Matrix::Identity(n, k);
    out.r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (Index j = 0; j < k; ++j)
    {
        if (out.r(j, j) < 0.0)
        {
            out.r.row(j) *= -1.0;
            out.u.col(j) *= -1.0;
        }
    }
    const double tol = static_cast<double>(std::max(n, k)) * kEps * a.norm();
    const double dmin = out.r.diagonal().minCoeff();
    if (!(dmin > tol)) throw DegenerateBasis("degenerate block basis: column block is numerically rank deficient");
    return out;
}

double largest_principal_angle(const Matrix& e, const Matrix& f)
{
    if (e.rows() != f.rows()) throw std::invalid_argument("largest_principal_angle: row count mismatch");
    Matrix qe = economic_qr(e).u;
    Matrix qf = economic_qr(f).u;
    if (qe.cols() < qf.cols()) std::swap(qe, qf);
    // qf has the fewer columns; its angles to span(qe) are the principal angles.
    const Matrix residual = qf - qe * (qe.transpose() * qf);
    const double sine = std::min(1.0, residual.norm() > 0.0
                                          ? Eigen::JacobiSVD<Matrix>(residual).singularValues()(0)
                                          : 0.0);
    if (sine < std::sqrt(0.5)) return std::asin(sine);
    const double cosine = Eigen::JacobiSVD<Matrix>(qe.transpose() * qf).singularValues().minCoeff();
    return std::acos(std::min(1.0, cosine));
}

double sep_lower(const Matrix& gj, const Matrix& gk)
{
    const Index nj = gj.rows(), nk = gk.rows();
    const Matrix op = kron(Matrix::Identity(nk, nk), gj.transpose()) - kron(gk.transpose(), Matrix::Identity(nj, nj));
    return Eigen::JacobiSVD<Matrix>(op).singularValues().minCoeff();
}

Matrix symmetric_orthogonalize(const Matrix& w)
{
    Eigen::JacobiSVD<Matrix> svd(w, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (!(svd.singularValues().minCoeff() > w.rows() * kEps * svd.singularValues()(0)))
        throw DegenerateBasis("symmetric_orthogonalize: matrix is singular");
    return svd.matrixU() * svd.matrixV().transpose();
}

}  // namespace gjbd
