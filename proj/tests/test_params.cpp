#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "wboxdim/params.hpp"

using namespace wboxdim;

namespace {

ErrorCode code_of(double lambda, int n_b) {
    try {
        new_params(lambda, n_b);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error for (" << lambda << ", " << n_b << ")";
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Params, AcceptsValidPairs) {
    EXPECT_NO_THROW(new_params(0.5, 3));
    EXPECT_NO_THROW(new_params(0.5, 4));
    const auto p = new_params(0.5, 4);
    EXPECT_EQ(p.lambda(), 0.5);
    EXPECT_EQ(p.n_b(), 4);
    EXPECT_TRUE(p.even());
}

TEST(Params, RejectsInvalidPairs) {
    EXPECT_EQ(code_of(0.2, 3), ErrorCode::ContractivityViolation);
    EXPECT_EQ(code_of(1.0 / 3.0, 3), ErrorCode::ContractivityViolation);
    EXPECT_EQ(code_of(0.0, 3), ErrorCode::OutOfRange);
    EXPECT_EQ(code_of(1.0, 3), ErrorCode::OutOfRange);
    EXPECT_EQ(code_of(-0.5, 3), ErrorCode::OutOfRange);
    EXPECT_EQ(code_of(std::numeric_limits<double>::quiet_NaN(), 3), ErrorCode::OutOfRange);
    EXPECT_EQ(code_of(0.9, 2), ErrorCode::BaseTooSmall);
    EXPECT_EQ(code_of(0.9, -1), ErrorCode::BaseTooSmall);
}

TEST(Params, DimensionValues) {
    EXPECT_NEAR(box_dimension(new_params(0.5, 4)).d_w, 1.5, 1e-15);
    EXPECT_NEAR(box_dimension(new_params(0.5, 3)).d_w, 1.3690702464285427, 1e-15);
    // lambda just above 1/N_b: 2 + ln(1.001/3)/ln 3 = 1 + ln(1.001)/ln 3
    EXPECT_NEAR(box_dimension(new_params(1.001 / 3.0, 3)).d_w, 1.0, 1e-3);
    EXPECT_GT(box_dimension(new_params(1.001 / 3.0, 3)).d_w, 1.0);
}

TEST(Params, DimensionRangeAndRoundTrip) {
    for (int n_b = 3; n_b <= 64; ++n_b) {
        for (double t : {0.001, 0.1, 0.3, 0.5, 0.7, 0.9, 0.999}) {
            const double lambda = 1.0 / n_b + t * (1.0 - 1.0 / n_b);
            if (!(lambda * n_b > 1.0) || lambda >= 1.0) continue;
            const auto p = new_params(lambda, n_b);
            const auto d = box_dimension(p);
            EXPECT_GT(d.d_w, 1.0);
            EXPECT_LT(d.d_w, 2.0);
            EXPECT_LE(std::abs(lambda_from_dimension(d, n_b) - lambda) / lambda, 1e-14) << lambda << " " << n_b;
        }
    }
}

TEST(Params, EtaMatchesHandEvaluation) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    // (2N-1) l (N^2-1) / ((N-1)^2 (1-l)(l N^2-1)) = 20/7 and 2N/((l N^2-1)(l N^3-1)) = 6/43.75 at (1/2, 3)
    EXPECT_NEAR(eta_w(new_params(0.5, 3)), 2.0 * pi2 * (20.0 / 7.0 + 6.0 / 43.75), 1e-12);
    EXPECT_NEAR(eta_w(new_params(0.5, 3)), 59.10, 5e-3);
    // 52.5/31.5 = 5/3 and 8/(7*31) = 8/217 at (1/2, 4)
    EXPECT_NEAR(eta_w(new_params(0.5, 4)), 2.0 * pi2 * (5.0 / 3.0 + 8.0 / 217.0), 1e-12);
}

TEST(Params, EtaPositiveAndDecreasingInBase) {
    for (double lambda : {0.4, 0.5, 0.7, 0.9}) {
        double previous = std::numeric_limits<double>::infinity();
        for (int n_b = 3; n_b <= 64; ++n_b) {
            if (lambda * n_b <= 1.0) continue;
            const double eta = eta_w(new_params(lambda, n_b));
            EXPECT_GT(eta, 0.0);
            EXPECT_LT(eta, previous) << "lambda=" << lambda << " n_b=" << n_b;
            previous = eta;
        }
    }
}

TEST(Params, LowerConstants) {
    const auto c3 = lower_bound_constants(new_params(0.5, 3));
    EXPECT_NEAR(c3.lower_odd, 4.0 - 2.0 * std::numbers::pi / 3.0, 1e-14);
    EXPECT_NEAR(c3.lower_odd, 1.9056, 1e-4);
    EXPECT_FALSE(c3.even_branch);
    EXPECT_EQ(c3.effective_lower_raw, c3.lower_odd);
    EXPECT_EQ(c3.cover_c, c3.eta_w);

    const auto c4 = lower_bound_constants(new_params(0.5, 4));
    EXPECT_NEAR(c4.lower_even_second, 0.015625, 1e-17);
    EXPECT_TRUE(c4.even_branch);
    // min over all j hits the vanishing sine, leaving only the negative series term
    EXPECT_NEAR(c4.lower_even_first_all_j, -2.0 * std::numbers::pi / 12.0, 1e-14);
    EXPECT_GT(c4.lower_even_first, 0.0);
    EXPECT_EQ(c4.effective_lower_raw, c4.lower_even_second);
}

TEST(Params, LowerConstantSignIsReported) {
    const auto c = lower_bound_constants(new_params(1.01 / 3.0, 3));
    EXPECT_LT(c.lower_odd, 0.0);
    EXPECT_FALSE(c.lower_positive());
    EXPECT_EQ(c.effective_lower(), 0.0);
    EXPECT_GE(c.cover_c, c.eta_w);
}

TEST(Params, ConstantInvariants) {
    for (int n_b = 3; n_b <= 20; ++n_b) {
        for (double lambda : {0.35, 0.5, 0.8}) {
            if (lambda * n_b <= 1.0) continue;
            const auto c = lower_bound_constants(new_params(lambda, n_b));
            EXPECT_GT(c.eta_w, 0.0);
            EXPECT_GT(c.lower_even_second, 0.0);
            EXPECT_GE(c.cover_c, c.eta_w);
            EXPECT_EQ(c.cover_c, std::max(c.effective_lower_raw, c.eta_w));
            EXPECT_LT(c.effective_lower(), c.eta_w);
        }
    }
}

TEST(Params, DegenerateIndex) {
    EXPECT_EQ(degenerate_j(new_params(0.5, 4)), 1);
    EXPECT_EQ(degenerate_j(new_params(0.5, 3)), std::nullopt);
    EXPECT_EQ(degenerate_j(new_params(0.5, 6)), 2);
    for (int n_b = 3; n_b <= 64; ++n_b) {
        const auto p = new_params(0.9, n_b);
        const auto j = degenerate_j(p);
        EXPECT_EQ(j.has_value(), n_b % 2 == 0);
        for (int k = 0; k < n_b; ++k) {
            const double s = std::sin(std::numbers::pi * (2 * k + 1) / (n_b - 1));
            if (j && *j == k) {
                EXPECT_LE(std::abs(s), 1e-14);
                EXPECT_EQ(detail::sin_pi_ratio(2 * k + 1, n_b - 1), 0.0);
            } else {
                EXPECT_GT(std::abs(s), 1e-3) << n_b << " " << k;
            }
        }
    }
}

TEST(Params, MinimumSineBound) {
    for (int n_b = 3; n_b <= 64; ++n_b) {
        const auto p = new_params(0.9, n_b);
        const double s1 = std::sin(std::numbers::pi / (n_b - 1));
        EXPECT_GE(min_abs_sine(p, true), s1 - 1e-14);
        EXPECT_GE(s1, 2.0 / (n_b - 1));
    }
}
