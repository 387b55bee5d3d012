#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <tuple>
#include <vector>

#include "wboxdim/error.hpp"
#include "wboxdim/params.hpp"
#include "wboxdim/prefractal.hpp"

namespace wboxdim {

inline constexpr double kSlackAbs = 1e-12;
inline constexpr double kSlackRel = 1e-10;

/// h_{j,m} = y(T_M(P_{j+1})) - y(T_M(P_j)), j in {0, ..., N_b - 2}.
inline double increment_h(const FractalParams& p, const Word& w, int j) {
    if (j < 0 || j > p.n_b() - 2) throw Error(ErrorCode::IndexOutOfRange, "increment index j out of range");
    return apply_word(p, w, fixed_point(p, j + 1)).y - apply_word(p, w, fixed_point(p, j)).y;
}

struct IncrementDecomposition {
    double leading;  ///< lambda^m (y_{j+1} - y_j) as a product of sines
    double series;   ///< the m product-of-sines correction terms
};

/// Splits h_{j,m} into lambda^m (y_{j+1} - y_j) and the remainder, each in
/// product-of-sines form:
///   leading = -2 lambda^m / (1 - lambda) sin(pi/(N_b-1)) sin(pi (2j+1)/(N_b-1))
///   series  = -2 sum_s lambda^(m-s) sin(pi/((N_b-1) N_b^s)) sin(pi (xi_s + xi'_s))
/// where xi_s, xi'_s are the orbit abscissae of P_j and P_{j+1}.
inline IncrementDecomposition increment_decomposition(const FractalParams& p, const Word& w, int j) {
    if (j < 0 || j > p.n_b() - 2) throw Error(ErrorCode::IndexOutOfRange, "increment index j out of range");
    const int m = w.length();
    const int den = p.n_b() - 1;
    const double lm = std::pow(p.lambda(), m);

    IncrementDecomposition d{};
    d.leading = -2.0 * lm / (1.0 - p.lambda()) * detail::sin_pi_ratio(1, den) * detail::sin_pi_ratio(2 * j + 1, den);

    const auto xi_lo = orbit_abscissae(p, w, j);
    const auto xi_hi = orbit_abscissae(p, w, j + 1);
    for (int s = 1; s <= m; ++s) {
        const auto k = static_cast<std::size_t>(s - 1);
        const double half_gap = std::sin(std::numbers::pi / (den * std::pow(p.base(), s)));
        d.series += -2.0 * std::pow(p.lambda(), m - s) * half_gap * std::sin(std::numbers::pi * (xi_lo[k] + xi_hi[k]));
    }
    return d;
}

/// Geometric majorant of |series|: lambda^m 2 pi / ((N_b - 1)(lambda N_b - 1)) (1 - (lambda N_b)^-m).
inline double series_majorant(const FractalParams& p, int m) {
    const double ln = p.lambda() * p.base();
    return std::pow(p.lambda(), m) * 2.0 * std::numbers::pi / ((p.base() - 1.0) * (ln - 1.0)) *
           (1.0 - std::pow(ln, -m));
}

/// L_m^(2 - D_W) (N_b - 1)^(2 - D_W), which equals lambda^m.
inline double bound_scale(const FractalParams& p, int m) {
    const double e = 2.0 - box_dimension(p).d_w;
    return std::pow(cell_step(p, m), e) * std::pow(p.base() - 1.0, e);
}

struct TheoremBounds {
    double lower;      ///< clamped at zero
    double lower_raw;
    double upper;
};

inline TheoremBounds theorem_bounds(const FractalParams& p, int m) {
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "increment bounds need m >= 1");
    const BoundConstants c = lower_bound_constants(p);
    const double scale = bound_scale(p, m);
    return {c.effective_lower() * scale, c.effective_lower_raw * scale, c.eta_w * scale};
}

struct IncrementRecord {
    Word word;
    int j;
    double l_m;
    double h;
    double lower;
    double upper;
    double lower_raw;
};

struct BoundsReport {
    int m = 0;
    std::uint64_t pairs_checked = 0;
    bool exhaustive = false;
    std::uint64_t violations_lower = 0;
    std::uint64_t violations_upper = 0;
    std::uint64_t skipped_nonpositive_lower = 0;
    std::optional<double> min_ratio_lower;  ///< min |h| / lower, only when lower > 0
    double max_ratio_upper = 0.0;
    std::vector<IncrementRecord> worst;

    bool passed() const noexcept { return violations_lower == 0 && violations_upper == 0; }
};

inline constexpr std::size_t kWorstCases = 5;

namespace detail {

/// Uniform draw in [0, n) from the raw mt19937_64 stream; the standard
/// distributions are implementation-defined and would break reproducibility.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    for (;;) {
        const std::uint64_t r = gen();
        if (r < limit) return r % n;
    }
}

/// How badly a record approaches its bounds: the larger of |h|/upper and lower/|h|.
inline double severity(const IncrementRecord& r) {
    const double a = std::abs(r.h);
    double s = a / r.upper;
    if (r.lower > 0.0) s = std::max(s, a > 0.0 ? r.lower / a : std::numeric_limits<double>::infinity());
    return s;
}

}  // namespace detail

/// Checks lower <= |h_{j,m}| <= upper over every within-cell pair when
/// (N_b - 1) N_b^m <= budget, otherwise over `budget` pairs drawn with the
/// given seed. Junction pairs have zero increment and are not checked.
/// A non-positive lower constant is counted as skipped, not as a pass.
inline BoundsReport verify_theorem(const FractalParams& p, int m, std::uint64_t budget, std::uint64_t seed) {
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "verification needs m >= 1");
    if (budget == 0) throw Error(ErrorCode::InvalidArgument, "budget must be positive");

    const TheoremBounds tb = theorem_bounds(p, m);
    const double l_m = cell_step(p, m);
    const std::uint64_t per_cell = static_cast<std::uint64_t>(p.n_b() - 1);
    const auto cells = detail::checked_pow(static_cast<std::uint64_t>(p.n_b()), m);
    const bool exhaustive = cells && *cells <= budget / per_cell;

    BoundsReport report;
    report.m = m;
    report.exhaustive = exhaustive;

    std::vector<IncrementRecord> worst;
    auto check = [&](std::uint64_t cell, int j) {
        IncrementRecord r{Word::from_cell(cell, m, p.n_b()), j, l_m, 0.0, tb.lower, tb.upper, tb.lower_raw};
        r.h = increment_h(p, r.word, j);
        const double a = std::abs(r.h);
        ++report.pairs_checked;
        if (a > tb.upper + kSlackAbs + kSlackRel * tb.upper) ++report.violations_upper;
        report.max_ratio_upper = std::max(report.max_ratio_upper, a / tb.upper);
        if (tb.lower_raw > 0.0) {
            if (a < tb.lower - kSlackAbs - kSlackRel * tb.lower) ++report.violations_lower;
            const double ratio = a / tb.lower;
            report.min_ratio_lower = report.min_ratio_lower ? std::min(*report.min_ratio_lower, ratio) : ratio;
        } else {
            ++report.skipped_nonpositive_lower;
        }
        worst.push_back(std::move(r));
        if (worst.size() > 4 * kWorstCases) {
            std::nth_element(worst.begin(), worst.begin() + kWorstCases, worst.end(),
                             [](const IncrementRecord& a, const IncrementRecord& b) {
                                 const double sa = detail::severity(a), sb = detail::severity(b);
                                 return sa != sb ? sa > sb : std::tie(a.word, a.j) < std::tie(b.word, b.j);
                             });
            worst.resize(kWorstCases);
        }
    };

    if (exhaustive) {
        for (std::uint64_t c = 0; c < *cells; ++c) {
            for (int j = 0; j + 1 < p.n_b(); ++j) check(c, j);
        }
    } else {
        const auto total_cells = detail::checked_pow(static_cast<std::uint64_t>(p.n_b()), m,
                                                     std::numeric_limits<std::uint64_t>::max() / per_cell);
        if (!total_cells) throw Error(ErrorCode::BudgetExceeded, "pair count overflows 64 bits");
        std::mt19937_64 gen(seed);
        for (std::uint64_t k = 0; k < budget; ++k) {
            const std::uint64_t pick = detail::uniform_below(gen, *total_cells * per_cell);
            check(pick / per_cell, static_cast<int>(pick % per_cell));
        }
    }

    std::sort(worst.begin(), worst.end(), [](const IncrementRecord& a, const IncrementRecord& b) {
        const double sa = detail::severity(a), sb = detail::severity(b);
        return sa != sb ? sa > sb : std::tie(a.word, a.j) < std::tie(b.word, b.j);
    });
    if (worst.size() > kWorstCases) worst.resize(kWorstCases);
    report.worst = std::move(worst);
    return report;
}

}  // namespace wboxdim
