#include <gtest/gtest.h>

#include <cmath>

#include "vortexflow/profile.hpp"

namespace vf = vortexflow;

namespace {

// eps^2 times the ODE residual, by central differences of step h on the interpolant.
double scaled_residual(const vf::RadialProfile& p, double r, double h) {
    const double fm = vf::eval_profile(p, r - h), f0 = vf::eval_profile(p, r), fp = vf::eval_profile(p, r + h);
    const double ode = (fp - 2 * f0 + fm) / (h * h) + (fp - fm) / (2 * h * r) - f0 / (r * r) +
                       (1 - f0 * f0) * f0 / (p.epsilon * p.epsilon);
    return p.epsilon * p.epsilon * ode;
}

const vf::RadialProfile& reference_profile() {
    static const vf::RadialProfile p = vf::solve_profile(0.03, 0.3, 1e-5);
    return p;
}

}  // namespace

TEST(Profile, BoundaryValuesAndShape) {
    const auto& p = reference_profile();
    EXPECT_EQ(p.values.front(), 0.0);
    EXPECT_EQ(p.values.back(), 1.0);
    EXPECT_EQ(p.values.size(), 30001u);
    EXPECT_NEAR(p.ratio(), 10.0, 1e-12);
    for (std::size_t i = 1; i < p.values.size(); ++i) {
        EXPECT_GT(p.values[i], p.values[i - 1]) << "node " << i;
        EXPECT_LE(p.values[i], 1.0);
    }
    EXPECT_LE(p.residual, 1e-10);
}

TEST(Profile, MatchesIndependentCollocationSolve) {
    // Reference values from a collocation BVP solver (tolerance 1e-10) on the
    // same problem in the scaled variable r / eps with outer radius 10.
    const auto& p = reference_profile();
    EXPECT_NEAR(vf::eval_profile(p, 0.03), 0.5200518682443958, 1e-8);
    EXPECT_NEAR(vf::eval_profile(p, 0.18), 0.9847557006392994, 1e-8);
    const double f_eps = vf::eval_profile(p, 0.03);
    EXPECT_GT(f_eps, 0.4);
    EXPECT_LT(f_eps, 0.8);
    // Well outside the core the profile is within 1/(2 s^2) of one (s = r / eps).
    for (double s = 7.5; s < 10.0; s += 0.25) EXPECT_GT(vf::eval_profile(p, s * 0.03), 0.99) << s;
}

TEST(Profile, DependsOnlyOnTheRatio) {
    const auto& p = reference_profile();
    const auto half = vf::solve_profile(0.015, 0.15, 5e-6);
    double worst = 0.0;
    for (double r = 1e-4; r < 0.3; r += 3.7e-4) {
        worst = std::max(worst, std::abs(vf::eval_profile(p, r) - vf::eval_profile(half, r / 2)));
    }
    EXPECT_LE(worst, 1e-8);

    // With a common spacing the two solves differ only by discretization error.
    const auto same_dr = vf::solve_profile(0.015, 0.15, 1e-5);
    worst = 0.0;
    for (double r = 1e-4; r < 0.3; r += 3.7e-4) {
        worst = std::max(worst, std::abs(vf::eval_profile(p, r) - vf::eval_profile(same_dr, r / 2)));
    }
    EXPECT_LE(worst, 1e-8);
}

TEST(Profile, ContinuousResidualIsSmall) {
    const auto& p = reference_profile();
    for (double r = 0.003; r < 0.2995; r += 1.3e-4) EXPECT_LE(std::abs(scaled_residual(p, r, 2e-5)), 1e-6) << r;
}

TEST(Profile, SecondOrderMeshConvergence) {
    const auto coarse = vf::solve_profile(0.03, 0.3, 1e-3);
    const auto medium = vf::solve_profile(0.03, 0.3, 5e-4);
    const auto fine = vf::solve_profile(0.03, 0.3, 2.5e-4);
    double d1 = 0.0, d2 = 0.0;
    for (int i = 1; i < 300; ++i) {  // shared nodes of the coarse mesh
        const double r = i * 1e-3;
        d1 = std::max(d1, std::abs(coarse.values[i] - vf::eval_profile(medium, r)));
        d2 = std::max(d2, std::abs(medium.values[2 * i] - vf::eval_profile(fine, r)));
    }
    EXPECT_NEAR(d1 / d2, 4.0, 0.4);
}

TEST(Profile, InterpolationMatchesRefinedSolve) {
    const auto& p = reference_profile();
    const auto refined = vf::solve_profile(0.03, 0.3, 5e-6);
    for (double r = 3.3e-6; r < 0.3; r += 7.77e-4) {
        EXPECT_NEAR(vf::eval_profile(p, r), vf::eval_profile(refined, r), 1e-8) << r;
    }
}

TEST(Profile, EvaluationAtSpecialRadii) {
    const auto& p = reference_profile();
    EXPECT_EQ(vf::eval_profile(p, 0.0), 0.0);
    EXPECT_EQ(vf::eval_profile(p, 0.3), 1.0);
    EXPECT_EQ(vf::eval_profile(p, 0.6), 1.0);
    EXPECT_EQ(vf::eval_profile(p, -1.0), 0.0);
    EXPECT_NEAR(vf::eval_profile(p, 2e-5), p.values[2], 1e-15);
    for (double r = 0.0; r < 0.31; r += 1e-3) {
        const double f = vf::eval_profile(p, r);
        EXPECT_GE(f, 0.0);
        EXPECT_LE(f, 1.0);
    }
}

TEST(Profile, SmallCoreStillConverges) {
    const auto p = vf::solve_profile(1e-3, 0.1, 1e-5);
    EXPECT_LT(p.newton_iterations, 20);
    EXPECT_LE(p.residual, 1e-10);
    EXPECT_GT(vf::eval_profile(p, 1e-3), 0.4);
    EXPECT_LT(vf::eval_profile(p, 1e-3), 0.8);
}

TEST(Profile, RejectsUnderResolvedOrDegenerateInput) {
    EXPECT_THROW(vf::solve_profile(0.03, 0.3, 0.01), std::invalid_argument);
    EXPECT_THROW(vf::solve_profile(0.0, 0.3, 1e-5), std::invalid_argument);
    EXPECT_THROW(vf::solve_profile(0.03, -0.3, 1e-5), std::invalid_argument);
    EXPECT_THROW(vf::solve_profile(0.03, 0.3, 1e-5, 1e-10, 0), vf::ConvergenceError);
}
