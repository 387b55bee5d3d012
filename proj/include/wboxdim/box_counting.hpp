#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "wboxdim/error.hpp"
#include "wboxdim/params.hpp"
#include "wboxdim/prefractal.hpp"
#include "wboxdim/weierstrass.hpp"

namespace wboxdim {

struct BoxCountOptions {
    int samples_per_column = 32;              ///< grid intervals per column
    std::uint64_t budget = 100'000'000;       ///< max function evaluations per level
    double tol = 1e-12;                       ///< series tolerance for W
};

struct BoxCountResult {
    std::vector<int> levels;
    std::vector<double> scales;               ///< epsilon_m = L_m
    std::vector<std::uint64_t> counts;        ///< N(epsilon_m)
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

struct LinearFit {
    double slope;
    double intercept;
    double r_squared;
};

/// Ordinary least squares y = slope * x + intercept.
inline LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "regression needs at least two points");
    }
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw Error(ErrorCode::InvalidArgument, "regression abscissae are all equal");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (slope * x[i] + intercept);
        ss_res += r * r;
    }
    return {slope, intercept, syy > 0.0 ? 1.0 - ss_res / syy : 1.0};
}

/// Number of columns (N_b - 1) N_b^m of width L_m covering [0, 1].
inline std::uint64_t column_count(int n_b, int m) {
    const auto cells = detail::checked_pow(static_cast<std::uint64_t>(n_b), m,
                                           std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(n_b));
    if (m < 0 || !cells) throw Error(ErrorCode::BudgetExceeded, "column count overflows at m=" + std::to_string(m));
    return *cells * static_cast<std::uint64_t>(n_b - 1);
}

/// Grid-box count of the graph of f over [0, 1] at side L_m.
///
/// Each column of width L_m contributes floor(osc / L_m) + 1 boxes, with osc
/// taken from a shared equispaced grid of samples_per_column intervals per
/// column (endpoints shared with the neighbours). Sampling never overestimates
/// an oscillation, so the count is biased low.
template <typename F>
std::uint64_t count_boxes(F&& f, int n_b, int m, const BoxCountOptions& opt = {}) {
    if (n_b < 2) throw Error(ErrorCode::InvalidArgument, "n_b must be >= 2");
    if (opt.samples_per_column < 1) throw Error(ErrorCode::InvalidArgument, "samples_per_column must be >= 1");
    const std::uint64_t columns = column_count(n_b, m);
    const auto per = static_cast<std::uint64_t>(opt.samples_per_column);
    if (columns > opt.budget / per) {
        throw Error(ErrorCode::BudgetExceeded,
                    "box count at m=" + std::to_string(m) + " needs more than " + std::to_string(opt.budget) + " samples");
    }
    const std::uint64_t intervals = columns * per;
    const double inv_l = static_cast<double>(columns);
    const double denom = static_cast<double>(intervals);

    std::uint64_t total = 0;
    double left = f(0.0);
    for (std::uint64_t c = 0; c < columns; ++c) {
        double lo = left, hi = left;
        for (std::uint64_t k = 1; k <= per; ++k) {
            const std::uint64_t idx = c * per + k;
            const double y = f(idx == intervals ? 1.0 : static_cast<double>(idx) / denom);
            lo = std::min(lo, y);
            hi = std::max(hi, y);
            if (k == per) left = y;
        }
        total += static_cast<std::uint64_t>(std::floor((hi - lo) * inv_l)) + 1;
    }
    return total;
}

inline std::uint64_t count_boxes(const FractalParams& p, int m, const BoxCountOptions& opt = {}) {
    return count_boxes(WeierstrassSeries(p, opt.tol), p.n_b(), m, opt);
}

/// Slope of log N(L_m) against log(1 / L_m) for m in [m_min, m_max].
template <typename F>
BoxCountResult estimate_dimension(F&& f, int n_b, int m_min, int m_max, const BoxCountOptions& opt = {}) {
    if (m_min < 1 || m_max <= m_min) throw Error(ErrorCode::InvalidArgument, "need 1 <= m_min < m_max");
    BoxCountResult result;
    std::vector<double> log_inv_eps, log_count;
    for (int m = m_min; m <= m_max; ++m) {
        const std::uint64_t n = count_boxes(f, n_b, m, opt);
        const double eps = 1.0 / static_cast<double>(column_count(n_b, m));
        result.levels.push_back(m);
        result.scales.push_back(eps);
        result.counts.push_back(n);
        log_inv_eps.push_back(-std::log(eps));
        log_count.push_back(std::log(static_cast<double>(n)));
    }
    const LinearFit fit = least_squares(log_inv_eps, log_count);
    result.slope = fit.slope;
    result.intercept = fit.intercept;
    result.r_squared = fit.r_squared;
    return result;
}

inline BoxCountResult estimate_dimension(const FractalParams& p, int m_min, int m_max, const BoxCountOptions& opt = {}) {
    return estimate_dimension(WeierstrassSeries(p, opt.tol), p.n_b(), m_min, m_max, opt);
}

/// Explicit cover of the graph by N_m columns of N~_m squares of side L_m,
/// N~_m = floor(C L_m^(1 - D_W)) + 1.
struct CoverSpec {
    int m;
    double l_m;
    std::uint64_t n_columns;
    std::uint64_t rows_per_column;
    double c_const;
    std::uint64_t product;
};

inline CoverSpec corollary_cover(const FractalParams& p, int m) {
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "cover needs m >= 1");
    CoverSpec cover{};
    cover.m = m;
    cover.n_columns = column_count(p.n_b(), m);
    cover.l_m = 1.0 / static_cast<double>(cover.n_columns);
    cover.c_const = lower_bound_constants(p).cover_c;
    const double rows = std::floor(cover.c_const * std::pow(cover.l_m, 1.0 - box_dimension(p).d_w)) + 1.0;
    if (!(rows < 0x1p63) || rows > static_cast<double>(std::numeric_limits<std::uint64_t>::max() / cover.n_columns)) {
        throw Error(ErrorCode::BudgetExceeded, "cover size overflows at m=" + std::to_string(m));
    }
    cover.rows_per_column = static_cast<std::uint64_t>(rows);
    cover.product = cover.n_columns * cover.rows_per_column;
    return cover;
}

/// r_m = N_m N~_m L_m^(D_W); tends to C as m grows.
inline std::vector<double> cover_power_law(const FractalParams& p, int m_min, int m_max) {
    if (m_min < 1 || m_max < m_min) throw Error(ErrorCode::InvalidArgument, "need 1 <= m_min <= m_max");
    const double d = box_dimension(p).d_w;
    std::vector<double> r;
    for (int m = m_min; m <= m_max; ++m) {
        const CoverSpec c = corollary_cover(p, m);
        r.push_back(static_cast<double>(c.product) * std::pow(c.l_m, d));
    }
    return r;
}

}  // namespace wboxdim
