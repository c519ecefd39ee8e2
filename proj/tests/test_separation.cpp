#include "gaugesep/errors.hpp"
#include "gaugesep/separation.hpp"

#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace gaugesep {
namespace {

using testing::gaussian;
using testing::Rng;
using testing::uniform;

bool angle_admitted(const std::vector<double>& admissible, double theta, double step) {
    return std::any_of(admissible.begin(), admissible.end(), [&](double a) {
        const double d = std::abs(a - theta);
        return std::min(d, M_PI - d) <= step;
    });
}

TEST(Separate, ExampleOneDisk) {
    const SeparationResult r = separate(testing::example1_disk(), Subspace(2));
    ASSERT_TRUE(r.certificate.valid);
    EXPECT_FALSE(r.empty_set_branch);
    ASSERT_TRUE(r.anchor_x.has_value());
    EXPECT_EQ(*r.anchor_x, (Vector{{2.0, 0.0}}));
    // g = (1/2, b/2) with the anchor (2, 0); every |b| <= 1 separates.
    const double b = r.g(1) / r.g(0);
    EXPECT_LE(std::abs(b), 1.0 + 1e-6);
    EXPECT_GT(r.certificate.a_clearance, 0.0);
    const double theta = kernel_line_angle(r.hyperplane.normal);
    EXPECT_TRUE(angle_admitted(brute_force_2d_normals(testing::example1_disk(), 3600), theta, M_PI / 3600 + 1e-6));
}

TEST(Separate, ExampleOneRules) {
    SeparationOptions opts;
    opts.anchor = Vector{{1.0, 0.0}};
    opts.rule = GammaRule::Upper;
    const SeparationResult upper = separate(testing::example1_disk(), Subspace(2), opts);
    EXPECT_NEAR(upper.g(0), 1.0, 1e-8);
    EXPECT_NEAR(upper.g(1), 1.0, 1e-6);
    EXPECT_TRUE(upper.certificate.valid);

    opts.rule = GammaRule::Midpoint;
    const SeparationResult mid = separate(testing::example1_disk(), Subspace(2), opts);
    EXPECT_NEAR(mid.g(0), 1.0, 1e-8);
    EXPECT_NEAR(mid.g(1), 0.0, 1e-6);
    EXPECT_TRUE(mid.certificate.valid);
    EXPECT_NEAR(std::abs(mid.hyperplane.normal(0)), 1.0, 1e-6);
}

TEST(Separate, ExampleTwoHalfSpace) {
    SeparationOptions opts;
    opts.anchor = Vector{{1.0, -3.0, 0.0}};
    const SeparationResult r = separate(testing::example2_halfspace(), testing::z_axis(), opts);
    ASSERT_TRUE(r.certificate.valid);
    EXPECT_NEAR(r.g(0), 1.0, 1e-9);
    EXPECT_NEAR(r.g(1), 0.0, 1e-9);
    EXPECT_NEAR(r.g(2), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(r.hyperplane.normal(0)), 1.0, 1e-9);
    ASSERT_EQ(r.interval_history.size(), 1u);
    EXPECT_LT(r.interval_history[0].interval.width(), 1e-8);
    EXPECT_TRUE(r.certificate.a_separated);
    EXPECT_LT(r.certificate.s_in_h_residual, 1e-12);
}

TEST(Separate, EmptySetBranch) {
    Matrix a(2, 2);
    a << 1.0, 0.0, -1.0, 0.0;
    const ConvexSet empty = ConvexSet::polyhedron(a, Vector{{0.0, -1.0}});
    const Subspace s = span_basis(std::vector<Vector>{Vector{{1.0, 0.0}}}, 2);
    const SeparationResult r = separate(empty, s);
    EXPECT_TRUE(r.empty_set_branch);
    EXPECT_FALSE(r.anchor_x.has_value());
    EXPECT_EQ(r.hyperplane.normal, Vector::Unit(2, 1));
    EXPECT_TRUE(r.certificate.valid);
}

TEST(Separate, IntersectingInputIsRejected) {
    const ConvexSet disk = ConvexSet::ball(Vector{{0.5, 0.0}}, 1.0);
    EXPECT_TRUE(intersects_subspace(disk, Subspace(2)));
    EXPECT_THROW(separate(disk, Subspace(2)), InputError);
    const Subspace line = span_basis(std::vector<Vector>{Vector{{1.0, 0.0}}}, 2);
    EXPECT_THROW(separate(testing::example1_disk(), line), InputError);
}

TEST(Separate, FullSpaceSubspaceIsRejected) {
    const Subspace full = span_basis(std::vector<Vector>{Vector{{1.0, 0.0}}, Vector{{0.0, 1.0}}}, 2);
    EXPECT_THROW(separate(testing::example1_disk(), full), InputError);
}

TEST(Verify, RejectsCrossingHyperplane) {
    // Ker(0, 1) is the horizontal axis, which runs through the disk.
    const SeparationCertificate c =
        verify_separation(testing::example1_disk(), Subspace(2), Hyperplane{Vector{{0.0, 1.0}}});
    EXPECT_FALSE(c.valid);
    EXPECT_LT(c.a_clearance, 0.0);
    EXPECT_FALSE(c.a_separated);
}

TEST(Verify, SubspaceResidualReflectsTilt) {
    const Vector tilted = Vector{{1.0, 0.0, 1e-3}}.normalized();
    const SeparationCertificate c =
        verify_separation(testing::example2_halfspace(), testing::z_axis(), Hyperplane{tilted});
    EXPECT_GT(c.s_in_h_residual, 1e-4);
    EXPECT_FALSE(c.valid);
}

TEST(Verify, ExampleOneBoundaryNormals) {
    // |b| = 1 gives lines tangent to the open disk: still separating, zero clearance.
    for (double b : {1.0, -1.0}) {
        const SeparationCertificate c =
            verify_separation(testing::example1_disk(), Subspace(2), Hyperplane{Vector{{1.0, b}}.normalized()});
        EXPECT_NEAR(c.a_clearance, 0.0, 1e-12);
        EXPECT_TRUE(c.a_separated);
        EXPECT_TRUE(c.valid);
    }
    const SeparationCertificate outside =
        verify_separation(testing::example1_disk(), Subspace(2), Hyperplane{Vector{{1.0, 1.2}}.normalized()});
    EXPECT_FALSE(outside.valid);
}

TEST(Remark2, ExampleOneCases) {
    SeparationOptions opts;
    opts.anchor = Vector{{1.0, 0.0}};
    const PipelineInstance inst = prepare_pipeline(testing::example1_disk(), Subspace(2), opts);
    const Remark2Verdict good = remark2_equivalence_check(inst, Vector{{1.0, 0.5}});
    EXPECT_TRUE(good.dominated);
    EXPECT_TRUE(good.disjoint);
    const Remark2Verdict bad = remark2_equivalence_check(inst, Vector{{1.0, 2.0}});
    EXPECT_FALSE(bad.dominated);
    EXPECT_FALSE(bad.disjoint);
}

TEST(Remark2, RandomCandidatesAgree) {
    Rng rng(41);
    int agreements = 0;
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const auto inst = testing::random_instance(rng, 2 + trial % 2, trial % 2, false);
        const PipelineInstance p = prepare_pipeline(inst.a, inst.s);
        const Vector base = separate(inst.a, inst.s).g;
        const std::vector<Vector> comp = complement_basis(p.f.domain);
        for (int k = 0; k < 5; ++k) {
            Vector g = base;
            for (const Vector& z : comp) g += uniform(rng, -2.0, 2.0) * z;
            const Remark2Verdict v = remark2_equivalence_check(p, g, trial);
            // Candidates on the boundary of the admissible set are ambiguous to sampling.
            if (std::abs(v.violation) < 1e-6 || std::abs(v.clearance) < 1e-6) continue;
            ++checked;
            if (v.dominated == v.disjoint) ++agreements;
        }
    }
    EXPECT_GT(checked, 50);
    EXPECT_EQ(agreements, checked);
}

TEST(BruteForce2d, ExampleOneCone) {
    const std::vector<double> admissible = brute_force_2d_normals(testing::example1_disk(), 1800);
    ASSERT_FALSE(admissible.empty());
    const double lo = *std::min_element(admissible.begin(), admissible.end());
    const double hi = *std::max_element(admissible.begin(), admissible.end());
    EXPECT_NEAR(lo, M_PI / 4, M_PI / 1800 + 1e-12);
    EXPECT_NEAR(hi, 3 * M_PI / 4, M_PI / 1800 + 1e-12);
}

TEST(BruteForce2d, UpperHalfPlaneOnlyHorizontal) {
    Matrix a(1, 2);
    a << 0.0, -1.0;
    const std::vector<double> admissible =
        brute_force_2d_normals(ConvexSet::polyhedron(a, Vector::Zero(1), Vector{{0.0, 1.0}}), 720);
    ASSERT_EQ(admissible.size(), 1u);
    EXPECT_EQ(admissible[0], 0.0);
}

TEST(BruteForce2d, TinyFarDiskNarrowBand) {
    const ConvexSet disk = ConvexSet::ball(Vector{{10.0, 0.0}}, 0.01);
    const std::vector<double> admissible = brute_force_2d_normals(disk, 3600);
    const double half_width = std::asin(0.01 / 10.0);
    for (double theta : admissible) EXPECT_GE(std::min(theta, M_PI - theta), half_width - 1e-12);
    EXPECT_EQ(static_cast<int>(admissible.size()), 3600 - 1 - 2 * static_cast<int>(half_width / (M_PI / 3600)));
}

TEST(BruteForce2d, SeparationAgreesOnRandomInstances) {
    Rng rng(808);
    for (int trial = 0; trial < 30; ++trial) {
        const auto inst = testing::random_instance(rng, 2, 0, trial % 3 == 0);
        const SeparationResult r = separate(inst.a, inst.s);
        ASSERT_TRUE(r.certificate.valid) << "trial " << trial;
        const double theta = kernel_line_angle(r.hyperplane.normal);
        EXPECT_TRUE(angle_admitted(brute_force_2d_normals(inst.a, 3600), theta, M_PI / 3600 + 1e-6))
            << "trial " << trial;
    }
}

TEST(ExtendViaSeparation, ExampleOne) {
    Matrix a(4, 2);
    a << 1, 1, 1, -1, -1, 1, -1, -1;
    const Seminorm p = Seminorm::polyhedral(a, Vector::Ones(4));
    const PartialFunctional f(span_basis(std::vector<Vector>{Vector{{1.0, 0.0}}}, 2), Vector{{1.0}});
    const Vector g = extend_via_separation(f, p);
    EXPECT_NEAR(g(0), 1.0, 1e-8);
    EXPECT_LE(std::abs(g(1)), 1.0 + 1e-8);
    EXPECT_LE(domination_check(g, p, 1, 1000), 1e-6);
}

TEST(ExtendViaSeparation, ExampleTwo) {
    Matrix c(1, 3);
    c << 1.0, 0.0, 0.0;
    const Seminorm psi = Seminorm::explicit_rows(c);
    const Subspace l = span_basis(std::vector<Vector>{Vector{{0.0, 0.0, 1.0}}, Vector{{1.0, -3.0, 0.0}}}, 3);
    Vector values(2);
    for (int i = 0; i < 2; ++i) values(i) = l.basis_vector(i)(0);
    const Vector g = extend_via_separation(PartialFunctional(l, values), psi);
    EXPECT_NEAR(g(0), 1.0, 1e-8);
    EXPECT_NEAR(g(1), 0.0, 1e-8);
    EXPECT_NEAR(g(2), 0.0, 1e-8);
}

TEST(ExtendViaSeparation, ZeroFunctional) {
    Matrix c(1, 2);
    c << 1.0, 2.0;
    const Vector g = extend_via_separation(
        PartialFunctional(span_basis(std::vector<Vector>{Vector{{1.0, 1.0}}}, 2), Vector{{0.0}}),
        Seminorm::explicit_rows(c));
    EXPECT_LT(g.norm(), 1e-12);
}

TEST(ExtendViaSeparation, RandomDominatedInstances) {
    Rng rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + trial % 3;
        Matrix c(n + 2, n);
        for (int i = 0; i < c.rows(); ++i) c.row(i) = gaussian(rng, n).transpose();
        const Seminorm p = Seminorm::explicit_rows(c);
        const Subspace dom = testing::random_subspace(rng, n, 1 + trial % (n - 1));
        Vector lambda = gaussian(rng, c.rows());
        lambda *= uniform(rng, 0.3, 0.9) / lambda.cwiseAbs().sum();
        const Vector full = c.transpose() * lambda;
        const PartialFunctional f(dom, dom.basis().transpose() * full);
        const Vector g = extend_via_separation(f, p);
        for (int i = 0; i < dom.dim(); ++i) EXPECT_NEAR(g.dot(dom.basis_vector(i)), f.values(i), 1e-8);
        EXPECT_LE(domination_check(g, p, trial, 500), 1e-6);
    }
}

void expect_sound(const testing::Instance& inst, const SeparationResult& r, int trial) {
    EXPECT_TRUE(r.certificate.valid) << "trial " << trial;
    EXPECT_LT(r.certificate.s_in_h_residual, kTolSubspaceResidual);
    EXPECT_EQ(r.certificate.cone_violations, 0);
    EXPECT_NEAR(r.hyperplane.normal.norm(), 1.0, 1e-12);
    ASSERT_TRUE(r.gauge_used && r.anchor_x);
    EXPECT_NEAR((*r.gauge_used)(*r.anchor_x), 1.0, 1e-6) << "trial " << trial;
    // Independent spot check: hit-and-run samples of A stay on one side.
    const auto pts = sample_interior(inst.a, 300, trial + 1);
    int pos = 0;
    int neg = 0;
    for (const Vector& e : pts) (r.hyperplane.normal.dot(e) > 0 ? pos : neg)++;
    EXPECT_TRUE(pos == 0 || neg == 0) << "trial " << trial;
}

TEST(EndToEnd, RandomInstancesAreSound) {
    Rng rng(20240);
    int balls = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 3;
        const bool ball = trial % 4 == 0;
        balls += ball;
        const auto inst = testing::random_instance(rng, n, static_cast<int>(rng() % n), ball);
        SeparationOptions opts;
        opts.seed = trial;
        opts.clearance_samples = 2000;
        opts.cone_samples = 500;
        expect_sound(inst, separate(inst.a, inst.s, opts), trial);

        // An interior pick at every step keeps A off the closed side: strict clearance.
        opts.rule = GammaRule::Midpoint;
        const SeparationResult mid = separate(inst.a, inst.s, opts);
        expect_sound(inst, mid, trial);
        EXPECT_GT(mid.certificate.a_clearance, 0.0) << "trial " << trial;
    }
    EXPECT_GT(balls, 40);
}

TEST(EndToEnd, HigherDimensionsAreSound) {
    Rng rng(4048);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 5 + trial % 2;
        const auto inst = testing::random_instance(rng, n, static_cast<int>(rng() % n), trial % 4 == 0);
        SeparationOptions opts;
        opts.seed = trial;
        opts.clearance_samples = 2000;
        opts.cone_samples = 500;
        expect_sound(inst, separate(inst.a, inst.s, opts), trial);
    }
}

TEST(Pipeline, FunctionalDominatedOnL) {
    Rng rng(515);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 3;
        const auto inst = testing::random_instance(rng, n, static_cast<int>(rng() % n), trial % 2 == 0);
        const PipelineInstance pi = prepare_pipeline(inst.a, inst.s);
        for (int k = 0; k < 500; ++k) {
            const Vector z = inst.s.basis() * gaussian(rng, inst.s.dim(), 3.0);
            const double t = uniform(rng, -5.0, 5.0);
            const Vector e = z + t * pi.anchor;
            EXPECT_NEAR(pi.f(e), t, 1e-9 * (1.0 + e.norm()));
            EXPECT_LE(std::abs(t), pi.p(e) + 1e-7) << "trial " << trial;
        }
    }
}

TEST(EndToEnd, OracleGaugeAgreesInTwoDimensions) {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const auto inst = testing::random_instance(rng, 2, 0, trial % 2 == 0);
        SeparationOptions opts;
        opts.gauge_mode = GaugeMode::Oracle;
        opts.clearance_samples = 2000;
        const SeparationResult oracle = separate(inst.a, inst.s, opts);
        EXPECT_TRUE(oracle.certificate.valid) << "trial " << trial;
        const double theta = kernel_line_angle(oracle.hyperplane.normal);
        EXPECT_TRUE(angle_admitted(brute_force_2d_normals(inst.a, 3600), theta, M_PI / 3600 + 1e-6))
            << "trial " << trial;
    }
}

}  // namespace
}  // namespace gaugesep
