#include <cmath>
#include <cstdint>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wboxdim/box_counting.hpp"

using namespace wboxdim;

TEST(BoxCount, ConstantFunctionNeedsOneBoxPerColumn) {
    for (int n_b : {3, 4}) {
        for (int m = 1; m <= 6; ++m) {
            EXPECT_EQ(count_boxes([](double) { return 0.25; }, n_b, m), column_count(n_b, m));
        }
    }
}

TEST(BoxCount, LinearFunctionNeedsOneOrTwoBoxesPerColumn) {
    for (int n_b : {3, 4}) {
        for (int m = 1; m <= 6; ++m) {
            const std::uint64_t n = count_boxes([](double x) { return x; }, n_b, m);
            EXPECT_GE(n, column_count(n_b, m));
            EXPECT_LE(n, 2 * column_count(n_b, m));
        }
    }
}

TEST(BoxCount, AgreesWithOversampledReference) {
    const auto p = new_params(0.5, 3);
    const int m = 4;
    const std::uint64_t fast = count_boxes(p, m);
    BoxCountOptions dense;
    dense.samples_per_column = 320;
    const std::uint64_t reference =
        count_boxes([](double x) { return oracle::naive_w(0.5, 3, x, 60); }, 3, m, dense);
    EXPECT_LE(std::abs(static_cast<double>(fast) - static_cast<double>(reference)) / static_cast<double>(reference), 0.02);
}

TEST(BoxCount, SmoothStubsHaveUnitSlope) {
    const auto constant = estimate_dimension([](double) { return 1.0; }, 3, 3, 8);
    EXPECT_NEAR(constant.slope, 1.0, 1e-12);
    const auto linear = estimate_dimension([](double x) { return 0.5 * x; }, 3, 3, 8);
    EXPECT_NEAR(linear.slope, 1.0, 0.05);
    const auto sine = estimate_dimension([](double x) { return std::sin(6.0 * x); }, 4, 2, 6);
    EXPECT_NEAR(sine.slope, 1.0, 0.05);
}

TEST(BoxCount, CountsGrowWithLevel) {
    const auto p = new_params(0.5, 3);
    std::uint64_t previous = 0;
    for (int m = 1; m <= 7; ++m) {
        const std::uint64_t n = count_boxes(p, m);
        EXPECT_GT(n, previous);
        EXPECT_GE(n, column_count(3, m));
        previous = n;
    }
}

TEST(BoxCount, CountBelowExplicitCover) {
    for (int n_b : {3, 4}) {
        const auto p = new_params(0.5, n_b);
        for (int m = 1; m <= 6; ++m) {
            const std::uint64_t n = count_boxes(p, m);
            const CoverSpec cover = corollary_cover(p, m);
            EXPECT_GE(n, cover.n_columns);
            EXPECT_LE(n, cover.product) << n_b << " " << m;
        }
    }
}

TEST(BoxCount, DimensionEstimate) {
    const auto r = estimate_dimension(new_params(0.5, 3), 3, 7);
    ASSERT_EQ(r.counts.size(), 5u);
    EXPECT_EQ(r.levels.front(), 3);
    EXPECT_NEAR(r.scales.front(), 1.0 / 54.0, 1e-17);
    EXPECT_NEAR(r.slope, box_dimension(new_params(0.5, 3)).d_w, 0.05);
    EXPECT_GE(r.r_squared, 0.999);
    EXPECT_THROW(estimate_dimension(new_params(0.5, 3), 3, 3), Error);
    EXPECT_THROW(estimate_dimension(new_params(0.5, 3), 0, 3), Error);
}

TEST(BoxCount, Budget) {
    BoxCountOptions opt;
    opt.budget = 1000;
    try {
        count_boxes(new_params(0.5, 3), 5, opt);
        FAIL() << "expected BudgetExceeded";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BudgetExceeded);
    }
    EXPECT_THROW(column_count(3, 60), Error);
}

TEST(Cover, FirstLevelBySubstitution) {
    const auto p = new_params(0.5, 3);
    const CoverSpec c = corollary_cover(p, 1);
    const double d = box_dimension(p).d_w;
    EXPECT_EQ(c.n_columns, 6u);
    EXPECT_NEAR(c.l_m, 1.0 / 6.0, 1e-17);
    EXPECT_EQ(c.c_const, eta_w(p));
    const auto rows = static_cast<std::uint64_t>(std::floor(eta_w(p) * std::pow(6.0, d - 1.0)) + 1.0);
    EXPECT_EQ(c.rows_per_column, rows);
    EXPECT_EQ(c.product, 6 * rows);
    const auto r = cover_power_law(p, 1, 1);
    EXPECT_NEAR(r.front(), 6.0 * static_cast<double>(rows) * std::pow(6.0, -d), 1e-12);
}

TEST(Cover, PowerLawConstantApproachesCoverConstant) {
    for (int n_b : {3, 4}) {
        const auto p = new_params(0.5, n_b);
        const double c = lower_bound_constants(p).cover_c;
        const auto r = cover_power_law(p, 5, 10);
        for (double v : r) EXPECT_LE(std::abs(v - c) / c, 0.1);
    }
    EXPECT_THROW(corollary_cover(new_params(0.5, 3), 0), Error);
}

TEST(Regression, ExactLine) {
    const auto fit = least_squares({1, 2, 3, 4}, {3, 5, 7, 9});
    EXPECT_NEAR(fit.slope, 2.0, 1e-14);
    EXPECT_NEAR(fit.intercept, 1.0, 1e-14);
    EXPECT_NEAR(fit.r_squared, 1.0, 1e-14);
    EXPECT_THROW(least_squares({1}, {1}), Error);
    EXPECT_THROW(least_squares({1, 1}, {1, 2}), Error);
    EXPECT_THROW(least_squares({1, 2}, {1}), Error);
}
