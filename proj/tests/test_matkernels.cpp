#include "gjbd/errors.hpp"
#include "gjbd/matkernels.hpp"
#include "gjbd/partition.hpp"
#include "gjbd/rng.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

using namespace gjbd;

namespace {

Matrix random_matrix(Rng& rng, Index r, Index c)
{
    Matrix m(r, c);
    for (Index j = 0; j < c; ++j)
        for (Index i = 0; i < r; ++i) m(i, j) = rng.normal();
    return m;
}

std::vector<std::complex<double>> sorted_eigs(const Matrix& m)
{
    const Eigen::VectorXcd ev = Eigen::EigenSolver<Matrix>(m, false).eigenvalues();
    std::vector<std::complex<double>> v(ev.data(), ev.data() + ev.size());
    std::sort(v.begin(), v.end(), [](auto a, auto b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return v;
}

Matrix diag_of(std::initializer_list<double> d)
{
    Vector v(static_cast<Index>(d.size()));
    Index i = 0;
    for (double x : d) v(i++) = x;
    return v.asDiagonal();
}

}  // namespace

TEST(PerfectShuffle, SmallCases)
{
    EXPECT_EQ(perfect_shuffle(1), std::vector<Index>{0});
    EXPECT_EQ(perfect_shuffle(2), (std::vector<Index>{0, 2, 1, 3}));
}

TEST(PerfectShuffle, TransposesAndIsInvolution)
{
    Rng rng(1);
    for (Index n = 2; n <= 8; ++n)
    {
        const auto p = perfect_shuffle(n);
        for (int k = 0; k < 100; ++k)
        {
            const Matrix z = random_matrix(rng, n, n);
            ASSERT_EQ(apply_permutation(p, vec(z)), vec(z.transpose()));
            const Vector v = vec(z);
            ASSERT_EQ(apply_permutation(p, apply_permutation(p, v)), v);
        }
    }
}

TEST(Vec, ReshapeRoundTrip)
{
    Matrix z(2, 3);
    z << 1, 2, 3, 4, 5, 6;
    EXPECT_EQ(vec(z), (Vector(6) << 1, 4, 2, 5, 3, 6).finished());
    EXPECT_EQ(reshape(vec(z), 2, 3), z);
}

TEST(Kron, VecIdentity)
{
    // vec(A X B) = (B^T kron A) vec(X)
    Rng rng(2);
    const Matrix a = random_matrix(rng, 3, 3), x = random_matrix(rng, 3, 3), b = random_matrix(rng, 3, 3);
    EXPECT_LE((kron(b.transpose(), a) * vec(x) - vec(a * x * b)).norm(), 1e-12 * (a * x * b).norm());
}

TEST(RealSchurOrdered, DiagonalInput)
{
    const SchurForm s = real_schur_ordered(diag_of({3, 1, 2}));
    EXPECT_EQ(s.eig_real_parts, (std::vector<double>{1, 2, 3}));
    EXPECT_LE((s.q.cwiseAbs() * s.q.cwiseAbs().transpose() - Matrix::Identity(3, 3)).norm(), 1e-14);
    EXPECT_LE((s.q * s.t * s.q.transpose() - diag_of({3, 1, 2})).norm(), 1e-14);
}

TEST(RealSchurOrdered, SymmetricTwoByTwo)
{
    Matrix z(2, 2);
    z << 0, 1, 1, 0;
    const SchurForm s = real_schur_ordered(z);
    EXPECT_NEAR(s.eig_real_parts[0], -1, 1e-15);
    EXPECT_NEAR(s.eig_real_parts[1], 1, 1e-15);
    EXPECT_EQ(s.pair_flags, (std::vector<bool>{false, false}));
}

TEST(RealSchurOrdered, RotationIsOnePair)
{
    Matrix z(2, 2);
    z << 0, -1, 1, 0;
    const SchurForm s = real_schur_ordered(z);
    EXPECT_NEAR(s.eig_real_parts[0], 0, 1e-15);
    EXPECT_NEAR(s.eig_real_parts[1], 0, 1e-15);
    EXPECT_EQ(s.pair_flags, (std::vector<bool>{true, true}));
}

TEST(RealSchurOrdered, RandomInvariants)
{
    Rng rng(3);
    for (int k = 0; k < 100; ++k)
    {
        const Index n = 1 + k % 20;
        const Matrix z = random_matrix(rng, n, n);
        const SchurForm s = real_schur_ordered(z);
        ASSERT_LE((s.q * s.t * s.q.transpose() - z).norm(), 1e-10 * z.norm());
        ASSERT_LE((s.q.transpose() * s.q - Matrix::Identity(n, n)).norm(), 1e-12 * n);
        ASSERT_TRUE(std::is_sorted(s.eig_real_parts.begin(), s.eig_real_parts.end()));

        // quasi-triangular, 2x2 blocks hold complex pairs with shared real part
        for (Index i = 0; i < n; ++i)
        {
            for (Index j = 0; j + 1 < i; ++j) ASSERT_EQ(s.t(i, j), 0.0);
            if (i + 1 < n && s.t(i + 1, i) != 0.0)
            {
                ASSERT_TRUE(s.pair_flags[static_cast<std::size_t>(i)]);
                ASSERT_TRUE(s.pair_flags[static_cast<std::size_t>(i + 1)]);
                const Matrix b = s.t.block(i, i, 2, 2);
                const double disc = std::pow(b(0, 0) - b(1, 1), 2) + 4 * b(0, 1) * b(1, 0);
                ASSERT_LT(disc, 0.0);
                ASSERT_EQ(s.eig_real_parts[static_cast<std::size_t>(i)],
                          s.eig_real_parts[static_cast<std::size_t>(i + 1)]);
            }
        }

        // same spectrum as z
        const auto ez = sorted_eigs(z), et = sorted_eigs(s.t);
        for (std::size_t i = 0; i < ez.size(); ++i) ASSERT_LE(std::abs(ez[i] - et[i]), 1e-8 * (1 + z.norm()));
    }
}

TEST(BlockDiagonalize, HandExample)
{
    SchurForm s;
    s.q = Matrix::Identity(2, 2);
    s.t.resize(2, 2);
    s.t << 1, 5, 0, 2;
    s.eig_real_parts = {1, 2};
    s.pair_flags = {false, false};
    const std::vector<Index> b{1};
    const BlockDiagonalization bd = block_diagonalize_similarity(s, b);
    Matrix w(2, 2);
    w << 1, 5, 0, 1;
    EXPECT_LE((bd.w - w).norm(), 1e-14);
    ASSERT_EQ(bd.blocks.size(), 2u);
    EXPECT_EQ(bd.blocks[0](0, 0), 1.0);
    EXPECT_EQ(bd.blocks[1](0, 0), 2.0);
}

TEST(BlockDiagonalize, AlreadyBlockDiagonal)
{
    const SchurForm s = real_schur_ordered(diag_of({1, 2, 4}));
    const std::vector<Index> b{1, 2};
    EXPECT_EQ(block_diagonalize_similarity(s, b).w, Matrix::Identity(3, 3));
}

TEST(BlockDiagonalize, SharedEigenvalueThrows)
{
    SchurForm s;
    s.q = Matrix::Identity(2, 2);
    s.t.resize(2, 2);
    s.t << 1, 1, 0, 1;
    s.eig_real_parts = {1, 1};
    s.pair_flags = {false, false};
    const std::vector<Index> b{1};
    try
    {
        block_diagonalize_similarity(s, b);
        FAIL() << "expected InseparableClusters";
    }
    catch (const InseparableClusters& e)
    {
        EXPECT_EQ(e.first(), 0);
        EXPECT_EQ(e.second(), 1);
    }
}

TEST(BlockDiagonalize, BoundaryInsidePairThrows)
{
    Matrix z(3, 3);
    z << 0, -1, 0, 1, 0, 0, 0, 0, 5;
    const SchurForm s = real_schur_ordered(z);
    const std::vector<Index> b{1};
    EXPECT_THROW(block_diagonalize_similarity(s, b), std::invalid_argument);
}

TEST(BlockDiagonalize, RandomResiduals)
{
    Rng rng(4);
    const double eps = std::numeric_limits<double>::epsilon();
    for (int k = 0; k < 100; ++k)
    {
        const Index n = 2 + k % 19;
        const Matrix z = random_matrix(rng, n, n);
        const SchurForm s = real_schur_ordered(z);
        const Clustering c = cluster_by_gap(s.eig_real_parts, s.pair_flags, 1.0 / (8.0 * static_cast<double>(n - 1)));
        if (c.boundaries.empty()) continue;
        const BlockDiagonalization bd = block_diagonalize_similarity(s, c.boundaries);
        const Partition p = c.partition(n);
        Matrix d = Matrix::Zero(n, n);
        for (Index j = 0; j < p.card(); ++j)
        {
            const Matrix& g = bd.blocks[static_cast<std::size_t>(j)];
            d.block(p.offset(j), p.offset(j), p.size(j), p.size(j)) = g;
            // block j carries exactly cluster j's eigenvalues
            const auto eg = sorted_eigs(g);
            for (std::size_t i = 0; i < eg.size(); ++i)
                ASSERT_NEAR(eg[i].real(), s.eig_real_parts[static_cast<std::size_t>(p.offset(j)) + i],
                            1e-8 * (1 + z.norm()));
        }
        const Vector sv = Eigen::JacobiSVD<Matrix>(bd.w).singularValues();
        const double kappa = sv(0) / sv(n - 1);
        ASSERT_LE((bd.w.lu().solve(s.t * bd.w) - d).norm(), 100.0 * static_cast<double>(n) * eps * kappa * s.t.norm());
    }
}

TEST(Sylvester, SolvesAndReportsSeparation)
{
    Rng rng(5);
    const Matrix a = random_matrix(rng, 3, 3), b = random_matrix(rng, 2, 2) + 10 * Matrix::Identity(2, 2);
    const Matrix c = random_matrix(rng, 3, 2);
    double smin = 0;
    const Matrix x = solve_sylvester(a, b, c, &smin);
    EXPECT_LE((a * x - x * b - c).norm(), 1e-12 * c.norm() * 10);
    EXPECT_GT(smin, 0.0);
}

TEST(EconomicQr, ScaledColumn)
{
    Matrix a(2, 1);
    a << 2, 0;
    const QrFactors f = economic_qr(a);
    EXPECT_NEAR(f.u(0, 0), 1.0, 1e-15);
    EXPECT_NEAR(f.u(1, 0), 0.0, 1e-15);
    EXPECT_NEAR(f.r(0, 0), 2.0, 1e-15);
}

TEST(EconomicQr, OrthonormalInputKept)
{
    Rng rng(6);
    const Matrix q = Eigen::HouseholderQR<Matrix>(random_matrix(rng, 5, 5)).householderQ();
    const Matrix a = q.leftCols(3);
    const QrFactors f = economic_qr(a);
    EXPECT_LE((f.u.cwiseAbs() - a.cwiseAbs()).norm(), 1e-13);
    EXPECT_LE((f.r.cwiseAbs() - Matrix::Identity(3, 3)).norm(), 1e-13);
}

TEST(EconomicQr, RandomProperty)
{
    Rng rng(7);
    for (int k = 0; k < 20; ++k)
    {
        const Matrix a = random_matrix(rng, 5, 2);
        const QrFactors f = economic_qr(a);
        ASSERT_LE((f.u.transpose() * f.u - Matrix::Identity(2, 2)).norm(), 1e-12);
        ASSERT_LE((f.u * f.r - a).norm(), 1e-12 * a.norm());
        ASSERT_EQ(f.r(1, 0), 0.0);
        ASSERT_GE(f.r.diagonal().minCoeff(), 0.0);
    }
}

TEST(EconomicQr, RankDeficientThrows)
{
    Matrix a(3, 2);
    a << 1, 2, 2, 4, 3, 6;
    EXPECT_THROW(economic_qr(a), DegenerateBasis);
}

TEST(PrincipalAngle, Examples)
{
    Rng rng(8);
    const Matrix e = random_matrix(rng, 6, 3);
    EXPECT_NEAR(largest_principal_angle(e, e), 0.0, 1e-12);
    EXPECT_NEAR(largest_principal_angle(e, e * random_matrix(rng, 3, 3)), 0.0, 1e-10);

    const Matrix e1 = Matrix::Identity(2, 2).col(0), e2 = Matrix::Identity(2, 2).col(1);
    EXPECT_NEAR(largest_principal_angle(e1, e2), std::numbers::pi / 2, 1e-15);
    EXPECT_NEAR(largest_principal_angle(e1, (e1 + e2) / std::sqrt(2.0)), std::numbers::pi / 4, 1e-15);
}

TEST(PrincipalAngle, SmallAnglesAreAccurate)
{
    // line spanned by (1, t): angle atan(t) even for tiny t
    Matrix e(2, 1), f(2, 1);
    e << 1, 0;
    f << 1, 1e-12;
    EXPECT_NEAR(largest_principal_angle(e, f), 1e-12, 1e-24);
}

TEST(PrincipalAngle, MatchesProjectorOracle)
{
    // sin of the largest angle equals ||P_E - P_F||_2 for equal dimensions
    Rng rng(9);
    for (int k = 0; k < 20; ++k)
    {
        const Matrix e = random_matrix(rng, 7, 3), f = random_matrix(rng, 7, 3);
        const Matrix qe = Eigen::HouseholderQR<Matrix>(e).householderQ() * Matrix::Identity(7, 3);
        const Matrix qf = Eigen::HouseholderQR<Matrix>(f).householderQ() * Matrix::Identity(7, 3);
        const Matrix diff = qe * qe.transpose() - qf * qf.transpose();
        const double s = Eigen::JacobiSVD<Matrix>(diff).singularValues()(0);
        ASSERT_NEAR(std::sin(largest_principal_angle(e, f)), s, 1e-12);
    }
}

TEST(PrincipalAngle, RankDeficientThrows)
{
    EXPECT_THROW(largest_principal_angle(Matrix::Zero(3, 1), Matrix::Identity(3, 1)), std::exception);
}

TEST(SepLower, Examples)
{
    EXPECT_NEAR(sep_lower(Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 3.0)), 2.0, 1e-15);
    Rng rng(10);
    const Matrix g = random_matrix(rng, 3, 3);
    EXPECT_NEAR(sep_lower(g, g.transpose()), 0.0, 1e-12);
    Matrix rot(2, 2);
    rot << 0, -1, 1, 0;
    EXPECT_NEAR(sep_lower(Matrix::Zero(1, 1), rot), 1.0, 1e-15);
}

TEST(SepLower, ZeroExactlyOnSharedEigenvalue)
{
    Rng rng(11);
    const Matrix s = random_matrix(rng, 3, 3);
    const Matrix gj = s * diag_of({1, 2, 3}) * s.inverse();
    const Matrix gk = diag_of({3, 7});
    // X -> gj^T X - X gk is singular since 3 is shared
    EXPECT_LE(sep_lower(gj, gk), 1e-12 * gj.norm());
    EXPECT_GT(sep_lower(gj, diag_of({4, 7})), 1e-3);
}

TEST(SymmetricOrthogonalize, PolarFactor)
{
    Rng rng(12);
    const Matrix w = random_matrix(rng, 4, 4);
    const Matrix u = symmetric_orthogonalize(w);
    EXPECT_LE((u.transpose() * u - Matrix::Identity(4, 4)).norm(), 1e-12);
    // u^T w is symmetric positive definite
    const Matrix h = u.transpose() * w;
    EXPECT_LE((h - h.transpose()).norm(), 1e-12 * h.norm());
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (h + h.transpose())).eigenvalues().minCoeff(), 0.0);
}
