#include "gsqr/errors.hpp"
#include "gsqr/subgrad.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gsqr;
using gsqr::testing::vec;
using gsqr::testing::worked_example;

TEST(RhoSubdifferential, ThreeCases) {
    const Interval pos = rho_subdifferential(8, 0.5);
    EXPECT_EQ(pos.lo, 1.0);
    EXPECT_EQ(pos.hi, 1.0);
    const Interval zero = rho_subdifferential(0, 0.5);
    EXPECT_EQ(zero.lo, -1.0);
    EXPECT_EQ(zero.hi, 1.0);
    const Interval neg = rho_subdifferential(-3, 0.9);
    EXPECT_NEAR(neg.lo, -0.2, 1e-15);
    EXPECT_NEAR(neg.hi, -0.2, 1e-15);
    EXPECT_TRUE(neg.degenerate());
}

TEST(RhoSubdifferential, ProjectionIsIdempotent) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> r(-3, 3), tau(0.05, 0.95), cand(-4, 4);
    for (int k = 0; k < 2000; ++k) {
        const double ri = k % 5 == 0 ? 0.0 : r(rng);
        const Interval I = rho_subdifferential(ri, tau(rng));
        const double once = I.project(cand(rng));
        EXPECT_TRUE(I.contains(once));
        EXPECT_EQ(I.project(once), once);
    }
}

TEST(GroupNormSubgradient, Examples) {
    EXPECT_TRUE(group_norm_subgradient_check(vec({1, 1}), vec({11.0 / 17, 6.0 / 17}), 1e-12));
    EXPECT_TRUE(group_norm_subgradient_check(vec({0}), vec({-12.0 / 17}), 1e-12));
    EXPECT_FALSE(group_norm_subgradient_check(vec({27.0 / 22, 19.0 / 22}), vec({1, 0.1}), 1e-12));
}

TEST(GroupNormSubgradient, EdgeCases) {
    // zero group: anything in the unit l1-ball
    EXPECT_TRUE(group_norm_subgradient_check(vec({0, 0}), vec({0.5, -0.5}), 1e-12));
    EXPECT_FALSE(group_norm_subgradient_check(vec({0, 0}), vec({0.75, -0.5}), 1e-12));
    // nonzero group needs ||u||_1 = 1
    EXPECT_FALSE(group_norm_subgradient_check(vec({2, -1}), vec({0.5, 0}), 1e-12));
    // maximal components must carry sign-consistent weight
    EXPECT_TRUE(group_norm_subgradient_check(vec({2, -2}), vec({0.25, -0.75}), 1e-12));
    EXPECT_FALSE(group_norm_subgradient_check(vec({2, -2}), vec({1.25, 0.25}), 1e-12));
    EXPECT_FALSE(group_norm_subgradient_check(vec({-2, 1}), vec({1, 0}), 1e-12));
    EXPECT_THROW(group_norm_subgradient_check(vec({1, 2}), vec({1}), 1e-12), InputError);
}

TEST(KktVerify, WorkedExampleNodes) {
    const auto p = worked_example();
    const auto node3 = kkt_verify(vec({-1, 0.5, 0.5}), 20.0 / 3, vec({-1, 1, 0}), vec({-1.0 / 6, 5.0 / 6, -1}), p);
    EXPECT_TRUE(node3.ok) << node3.summary();

    const auto node0 = kkt_verify(Vector::Zero(3), 20.0, vec({-12.0 / 20, 11.0 / 20, 6.0 / 20}), vec({1, 1, -1}), p);
    EXPECT_TRUE(node0.ok) << node0.summary();
}

TEST(KktVerify, DetectsPerturbation) {
    const auto p = worked_example();
    const auto bad = kkt_verify(vec({-1, 0.5, 0.5}), 20.0 / 3, vec({-1, 1, 0.5}), vec({-1.0 / 6, 5.0 / 6, -1}), p);
    EXPECT_FALSE(bad.ok);
    EXPECT_GT(bad.max_stationarity_violation, 1.0);
    EXPECT_FALSE(bad.u_violations.empty());
    EXPECT_GT(bad.worst, 1.0);
}

TEST(KktVerify, DetectsWOutOfRangeAndInconsistentSign) {
    const auto p = worked_example();
    // w_1 interior while r_1 = 8 > 0
    const auto rep = kkt_verify(Vector::Zero(3), 20.0, vec({-12.0 / 20, 11.0 / 20, 6.0 / 20}), vec({0.5, 1, -1}), p);
    EXPECT_FALSE(rep.ok);
    EXPECT_FALSE(rep.consistency_violations.empty());
    const auto range = kkt_verify(Vector::Zero(3), 20.0, Vector::Zero(3), vec({1.5, 1, -1}), p);
    EXPECT_FALSE(range.ok);
    EXPECT_FALSE(range.w_violations.empty());
}

TEST(KktVerify, RejectsBadArguments) {
    const auto p = worked_example();
    EXPECT_THROW(kkt_verify(Vector::Zero(3), -1.0, Vector::Zero(3), Vector::Zero(3), p), InputError);
    EXPECT_THROW(kkt_verify(Vector::Zero(2), 1.0, Vector::Zero(3), Vector::Zero(3), p), InputError);
}
