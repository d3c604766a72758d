#include "gjbd/analysis.hpp"
#include "gjbd/datagen.hpp"
#include "gjbd/errors.hpp"
#include "gjbd/matkernels.hpp"
#include "gjbd/nullspace.hpp"
#include "gjbd/rng.hpp"
#include "gjbd/solvers.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace gjbd;

namespace {

void expect_normalized(const Solution& s)
{
    const Index n = s.w.rows();
    EXPECT_LE((bdiag(s.w.transpose() * s.w, s.partition) - Matrix::Identity(n, n)).norm(), 1e-12);
}

}  // namespace

TEST(SolverConfig, Validation)
{
    SolverConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    EXPECT_DOUBLE_EQ(cfg.mu_for(9), 1.0 / 64);
    cfg.gamma = 1.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = SolverConfig{};
    cfg.mu = 1.5;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = SolverConfig{};
    cfg.epsilon = -1;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(EigDecomp, DiagonalInput)
{
    Matrix z = Matrix::Zero(3, 3);
    z.diagonal() << 1, 1, 2;
    const EigenDecomposition ed = eig_decomp_for_partition(z, Clustering{{2}, 0.0});
    // w = I up to orthogonal factors within each block
    EXPECT_LE((ed.w.cwiseAbs() - Matrix::Identity(3, 3)).norm(), 1e-14);
    EXPECT_NEAR(ed.blocks[1](0, 0), 2.0, 1e-14);
}

TEST(EigDecomp, HandExampleThroughQr)
{
    Matrix z(2, 2);
    z << 1, 5, 0, 2;
    const EigenDecomposition ed = eig_decomp_for_partition(z, Clustering{{1}, 0.0});
    // columns orthonormalized from (1,0) and (5,1)
    Vector c0(2), c1(2);
    c0 << 1, 0;
    c1 << 5, 1;
    c1.normalize();
    EXPECT_NEAR(std::abs(ed.w.col(0).dot(c0)), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(ed.w.col(1).dot(c1)), 1.0, 1e-14);
    const Matrix g = ed.w.inverse() * z * ed.w;
    EXPECT_NEAR(g(0, 1), 0.0, 1e-13);
    EXPECT_NEAR(g(1, 0), 0.0, 1e-13);
    EXPECT_NEAR(g(0, 0), ed.blocks[0](0, 0), 1e-13);
    EXPECT_NEAR(g(1, 1), ed.blocks[1](0, 0), 1e-13);
}

TEST(EigDecomp, CoincidentClustersThrow)
{
    Matrix z(2, 2);
    z << 1, 1, 0, 1;
    EXPECT_THROW(eig_decomp_for_partition(z, Clustering{{1}, 0.0}), InseparableClusters);
}

TEST(GreedySolve, IdentityGivesZeroCostSplit)
{
    const MatrixSet a({Matrix::Identity(4, 4)});
    const Solution s = greedy_solve(a, SolverConfig{});
    EXPECT_GE(s.partition.card(), 2);
    EXPECT_LE(s.cost, 1e-24);
    expect_normalized(s);
}

TEST(GreedySolve, ExactModelRecovery)
{
    const Partition p({3, 3, 3});
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        const ModelInstance inst = generate_model(p, 20, INFINITY, seed);
        SolverConfig cfg;
        cfg.seed = seed;
        const Solution s = greedy_solve(inst.a, cfg);
        EXPECT_TRUE(partition_equivalent(s.partition, p)) << "seed " << seed;
        EXPECT_LE(s.cost, 1e-16 * inst.a.squared_norm());
        expect_normalized(s);
        const auto pi = performance_index(inst.v_inv, s.w, p, s.partition);
        ASSERT_TRUE(pi.has_value());
        EXPECT_LE(*pi, 1e-8);
    }
}

TEST(GreedySolve, DeterministicAndCostConsistent)
{
    const ModelInstance inst = generate_model(Partition({1, 2, 3, 4}), 20, 60, 4);
    SolverConfig cfg;
    cfg.seed = 17;
    const Solution a = greedy_solve(inst.a, cfg), b = greedy_solve(inst.a, cfg);
    EXPECT_EQ(a.partition, b.partition);
    EXPECT_EQ(a.w, b.w);
    EXPECT_EQ(a.cost, b.cost);
    EXPECT_NEAR(cost_ls(inst.a, a.partition, a.w), a.cost, 1e-12 * a.cost);
}

TEST(GreedySolve, CaseTwoHighSnrMostlyCorrect)
{
    const Partition p({1, 2, 3, 4});
    int correct = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        const ModelInstance inst = generate_model(p, 20, 80, seed);
        SolverConfig cfg;
        cfg.seed = seed;
        const Solution s = greedy_solve(inst.a, cfg);
        if (performance_index(inst.v_inv, s.w, p, s.partition)) ++correct;
    }
    EXPECT_GE(correct, 16);
}

TEST(GreedySolve, TrivialWhenNoSplit)
{
    const MatrixSet a({Matrix::Constant(1, 1, 3.0)});
    const Solution s = greedy_solve(a, SolverConfig{});
    EXPECT_TRUE(s.trivial);
    EXPECT_EQ(s.partition, Partition::whole(1));

    // a generic unstructured set has only the identity in its null space
    const ModelInstance inst = generate_model(Partition({5}), 3, INFINITY, 1);
    EXPECT_TRUE(exact_solve(inst.a, 0).trivial);
}

TEST(ExactSolve, DiagonalMatrices)
{
    Matrix d1 = Matrix::Zero(3, 3), d2 = Matrix::Zero(3, 3);
    d1.diagonal() << 1, 2, 3;
    d2.diagonal() << 4, 5, 6;
    const Solution s = exact_solve(MatrixSet({d1, d2}), 0);
    EXPECT_EQ(s.partition, Partition({1, 1, 1}));
    // column-scaled permutation of I: one nonzero per column
    for (Index c = 0; c < 3; ++c)
    {
        const Vector col = s.w.col(c).cwiseAbs();
        EXPECT_NEAR(col.maxCoeff(), 1.0, 1e-12);
        EXPECT_NEAR(col.sum(), 1.0, 1e-12);
    }
    EXPECT_LE(s.cost, 1e-24);
}

TEST(ExactSolve, NonuniqueExampleHasTwoBlocks)
{
    const NonuniqueExample ex = nonunique_example({1.3, -0.4, 2.2}, {0.7, 1.9, -1.1});
    for (std::uint64_t seed = 0; seed < 5; ++seed)
    {
        const Solution s = exact_solve(ex.a, seed);
        EXPECT_EQ(s.partition, Partition({2, 2})) << "seed " << seed;
        EXPECT_LE(s.cost, 1e-10 * ex.a.squared_norm());
    }
}

TEST(ExactSolve, IdentityGivesFullSplit)
{
    const Solution s = exact_solve(MatrixSet({Matrix::Identity(5, 5)}), 3);
    EXPECT_EQ(s.partition.card(), 5);
    EXPECT_LE(s.cost, 1e-24);
}

TEST(OneStepSplit, ExactTwoBlocks)
{
    const Partition p({2, 3});
    for (std::uint64_t seed = 0; seed < 5; ++seed)
    {
        const ModelInstance inst = generate_model(p, 10, INFINITY, seed);
        const OneStepResult r = one_step_split(inst.a, 1.2);
        EXPECT_TRUE(partition_equivalent(r.partition, p));
        EXPECT_LE(r.cost, 1e-16 * inst.a.squared_norm());
        EXPECT_NEAR(r.z.trace(), 0.0, 1e-10);
    }
}

TEST(OneStepSplit, IdentityTwoByTwo)
{
    const OneStepResult r = one_step_split(MatrixSet({Matrix::Identity(2, 2)}), 1.2);
    EXPECT_EQ(r.partition, Partition({1, 1}));
    EXPECT_NEAR((r.z * r.z).trace(), 1.0, 1e-12);
    EXPECT_LE(r.cost, 1e-28);
}

TEST(OneStepSplit, MaximizesTraceOfSquare)
{
    // no unit combination of the identity-free basis has a larger tr(Z^2)
    const ModelInstance inst = generate_model(Partition({1, 2, 3}), 10, 40, 2);
    const OneStepResult r = one_step_split(inst.a, 1.2);
    const double best = (r.z * r.z).trace();
    const auto basis = basis_excluding_identity(delta_nullspace(inst.a, 1.2));
    Rng rng(1);
    for (int k = 0; k < 200; ++k)
    {
        Vector alpha(static_cast<Index>(basis.size()));
        for (Index j = 0; j < alpha.size(); ++j) alpha(j) = rng.normal();
        alpha.normalize();
        Matrix z = Matrix::Zero(6, 6);
        for (std::size_t j = 0; j < basis.size(); ++j) z += alpha(static_cast<Index>(j)) * basis[j];
        ASSERT_LE((z * z).trace(), best * (1 + 1e-12));
    }
}

TEST(OneStepSplit, Unsplittable)
{
    EXPECT_THROW(one_step_split(MatrixSet({Matrix::Constant(1, 1, 2.0)}), 1.2), Unsplittable);

    // null space span{I, J} with J a rotation: the only split would cut a conjugate pair
    Matrix a1(2, 2), a2(2, 2);
    a1 << 1, 0, 0, -1;
    a2 << 0, 1, 1, 0;
    const MatrixSet a({a1, a2});
    EXPECT_EQ(exact_null_dimension(a), 2);
    EXPECT_THROW(one_step_split(a, 1.2), Unsplittable);
    EXPECT_TRUE(greedy_solve(a, SolverConfig{}).trivial);
    SolverConfig cfg;
    cfg.epsilon = 1.0;
    EXPECT_TRUE(conservative_solve(a, cfg).trivial);
}

TEST(ConservativeSolve, ZeroEpsilonOnNoisyData)
{
    const ModelInstance inst = generate_model(Partition({3, 3, 3}), 20, 40, 1);
    const Solution s = conservative_solve(inst.a, SolverConfig{});
    EXPECT_TRUE(s.trivial);
    EXPECT_EQ(s.partition, Partition::whole(9));
    EXPECT_EQ(s.w, Matrix::Identity(9, 9));
    EXPECT_EQ(s.cost, 0.0);
}

TEST(ConservativeSolve, ExactFullRecovery)
{
    const Partition p({1, 2, 3, 4});
    for (std::uint64_t seed = 0; seed < 5; ++seed)
    {
        const ModelInstance inst = generate_model(p, 20, INFINITY, seed);
        SolverConfig cfg;
        cfg.epsilon = 1e-6 * std::sqrt(inst.a.squared_norm());
        const Solution s = conservative_solve(inst.a, cfg);
        EXPECT_TRUE(partition_equivalent(s.partition, p)) << "seed " << seed;
        EXPECT_LE(s.cost, cfg.epsilon * cfg.epsilon);
        expect_normalized(s);
    }
}

TEST(ConservativeSolve, CostWithinEpsilonSquared)
{
    for (double snr : {20.0, 40.0})
    {
        for (std::uint64_t seed = 0; seed < 5; ++seed)
        {
            const ModelInstance inst = generate_model(Partition({3, 3, 3}), 20, snr, seed);
            SolverConfig cfg;
            cfg.epsilon = 3.0 * 81 * std::pow(10.0, -snr / 20);
            const ConservativeTrace t = conservative_solve_traced(inst.a, cfg);
            EXPECT_LE(t.solution.cost, cfg.epsilon * cfg.epsilon);
            EXPECT_NEAR(cost_ls(inst.a, t.solution.partition, t.solution.w), t.solution.cost,
                        1e-12 * std::max(t.solution.cost, 1e-300));
            expect_normalized(t.solution);
            EXPECT_FALSE(t.splits.empty());
        }
    }
}

TEST(ConservativeSolve, IdentitySplitsCompletely)
{
    SolverConfig cfg;
    cfg.epsilon = 0.1;
    const Solution s = conservative_solve(MatrixSet({Matrix::Identity(4, 4)}), cfg);
    EXPECT_EQ(s.partition.card(), 4);
    EXPECT_LE(s.cost, 1e-24);
}
