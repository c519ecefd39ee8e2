#include "gaugesep/errors.hpp"
#include "gaugesep/geometry.hpp"

#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace gaugesep {
namespace {

using testing::gaussian;
using testing::Rng;

TEST(SpanBasis, ZAxisFromExampleTwo) {
    const Subspace s = span_basis(std::vector<Vector>{Vector{{0.0, 0.0, 1.0}}}, 3);
    ASSERT_EQ(s.dim(), 1);
    EXPECT_NEAR(std::abs(s.basis_vector(0)(2)), 1.0, 1e-15);
    EXPECT_TRUE(s.contains(Vector{{0.0, 0.0, -7.0}}));
    EXPECT_FALSE(s.contains(Vector{{1.0, 0.0, 0.0}}));
}

TEST(SpanBasis, EmptyListGivesZeroSubspace) {
    const Subspace s = span_basis({}, 4);
    EXPECT_EQ(s.dim(), 0);
    EXPECT_EQ(s.ambient_dim(), 4);
    EXPECT_DOUBLE_EQ(s.residual(Vector{{1.0, 0.0, 0.0, 0.0}}), 1.0);
}

TEST(SpanBasis, CollinearInputsCompress) {
    const Subspace s = span_basis(std::vector<Vector>{Vector{{1.0, 0.0}}, Vector{{2.0, 0.0}}}, 2);
    EXPECT_EQ(s.dim(), 1);
    EXPECT_TRUE(s.contains(Vector{{-3.0, 0.0}}));
}

TEST(SpanBasis, DimensionMismatchIsInputError) {
    EXPECT_THROW(span_basis(std::vector<Vector>{Vector{{1.0, 0.0}}, Vector{{1.0, 0.0, 0.0}}}, 2), InputError);
}

TEST(SpanBasis, IdempotentProjector) {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 5;
        std::vector<Vector> vs;
        for (int i = 0; i < 1 + trial % n; ++i) vs.push_back(gaussian(rng, n));
        if (trial % 3 == 0) vs.push_back(vs.front() * 2.5);  // rank deficiency
        const Subspace first = span_basis(vs, n);
        std::vector<Vector> again;
        for (int i = 0; i < first.dim(); ++i) again.push_back(first.basis_vector(i));
        const Subspace second = span_basis(again, n);
        ASSERT_EQ(first.dim(), second.dim());
        EXPECT_LT((first.projector() - second.projector()).cwiseAbs().maxCoeff(), 1e-10);
        const Matrix gram = first.basis().transpose() * first.basis();
        EXPECT_LT((gram - Matrix::Identity(first.dim(), first.dim())).cwiseAbs().maxCoeff(), kTolOrtho);
    }
}

TEST(ComplementBasis, CoordinateSubspace) {
    const std::vector<Vector> c = complement_basis(testing::z_axis());
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c[0], Vector::Unit(3, 0));
    EXPECT_EQ(c[1], Vector::Unit(3, 1));
}

TEST(ComplementBasis, FullSpaceHasEmptyComplement) {
    const Subspace full = span_basis(std::vector<Vector>{Vector{{1.0, 0.0}}, Vector{{0.0, 1.0}}}, 2);
    EXPECT_TRUE(complement_basis(full).empty());
}

TEST(ComplementBasis, DiagonalLine) {
    // Gram-Schmidt by hand: e1 - (e1.u)u = (1/2, -1/2), normalized (1, -1)/sqrt2.
    const Subspace s = span_basis(std::vector<Vector>{Vector{{1.0, 1.0}} / std::sqrt(2.0)}, 2);
    const std::vector<Vector> c = complement_basis(s);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_NEAR(c[0](0), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(c[0](1), -1.0 / std::sqrt(2.0), 1e-15);
}

TEST(ComplementBasis, DeterministicBitForBit) {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const Subspace s = testing::random_subspace(rng, 5, trial % 5);
        const auto a = complement_basis(s);
        const auto b = complement_basis(s);
        ASSERT_EQ(a.size(), b.size());
        ASSERT_EQ(static_cast<int>(a.size()) + s.dim(), 5);
        for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
    }
}

TEST(Decompose, ExampleTwoPoint) {
    const Decomposition d = decompose(Vector{{1.0, -3.0, 5.0}}, testing::z_axis(), Vector{{1.0, -3.0, 0.0}});
    EXPECT_NEAR(d.t, 1.0, 1e-15);
    ASSERT_EQ(d.s_coords.size(), 1);
    EXPECT_NEAR(std::abs(d.s_coords(0)), 5.0, 1e-14);
}

TEST(Decompose, ZeroVector) {
    const Decomposition d = decompose(Vector::Zero(3), testing::z_axis(), Vector{{1.0, -3.0, 0.0}});
    EXPECT_EQ(d.t, 0.0);
    EXPECT_EQ(d.s_coords(0), 0.0);
}

TEST(Decompose, ExampleOneLine) {
    const Decomposition d = decompose(Vector{{2.0, 0.0}}, Subspace(2), Vector{{1.0, 0.0}});
    EXPECT_DOUBLE_EQ(d.t, 2.0);
    EXPECT_EQ(d.s_coords.size(), 0);
}

TEST(Decompose, Errors) {
    EXPECT_THROW(decompose(Vector{{0.0, 0.0, 1.0}}, testing::z_axis(), Vector{{0.0, 0.0, 2.0}}), DegenerateError);
    EXPECT_THROW(decompose(Vector{{0.0, 1.0, 0.0}}, testing::z_axis(), Vector{{1.0, 0.0, 0.0}}), InputError);
}

TEST(Decompose, RecoversRandomSplits) {
    Rng rng(2024);
    for (int n = 2; n <= 6; ++n) {
        double worst = 0.0;
        for (int trial = 0; trial < 1000; ++trial) {
            const Subspace s = testing::random_subspace(rng, n, static_cast<int>(rng() % n));
            Vector x = gaussian(rng, n);
            if (s.residual(x) < 1e-2) continue;
            const Vector coords = gaussian(rng, s.dim());
            const double t = testing::uniform(rng, -5.0, 5.0);
            const Vector z = s.dim() == 0 ? Vector::Zero(n) : Vector(s.basis() * coords);
            const Decomposition d = decompose(z + t * x, s, x);
            worst = std::max(worst, std::abs(d.t - t));
            if (s.dim() > 0) worst = std::max(worst, (d.s_coords - coords).cwiseAbs().maxCoeff());
        }
        EXPECT_LT(worst, 1e-9) << "n = " << n;
    }
}

TEST(KernelHyperplane, UnitNormal) {
    const Hyperplane h = kernel_hyperplane(Vector{{1.0, 0.0, 0.0}});
    EXPECT_EQ(h.normal, Vector::Unit(3, 0));
    EXPECT_TRUE(h.contains(Vector{{0.0, 4.0, -2.0}}));

    const double b = -0.4;
    const Hyperplane line = kernel_hyperplane(Vector{{1.0, b}});
    EXPECT_NEAR(line.normal.norm(), 1.0, 1e-15);
    EXPECT_NEAR(line.normal(1) / line.normal(0), b, 1e-15);
}

TEST(KernelHyperplane, ZeroFunctionalIsDegenerate) {
    EXPECT_THROW(kernel_hyperplane(Vector::Zero(2)), DegenerateError);
}

TEST(PartialFunctional, LinearOnDomain) {
    const Subspace l = span_basis(std::vector<Vector>{Vector{{1.0, 1.0, 0.0}}, Vector{{0.0, 0.0, 1.0}}}, 3);
    const PartialFunctional f(l, Vector{{0.5, -2.0}});
    const Vector u = l.basis_vector(0) * 3.0 - l.basis_vector(1);
    EXPECT_NEAR(f(u), 3.0 * 0.5 + 2.0, 1e-14);
    EXPECT_NEAR(f.representer().dot(u), f(u), 1e-14);
    EXPECT_THROW(PartialFunctional(l, Vector{{1.0}}), InputError);
}

}  // namespace
}  // namespace gaugesep
