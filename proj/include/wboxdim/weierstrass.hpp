#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "wboxdim/error.hpp"
#include "wboxdim/params.hpp"

namespace wboxdim {

inline constexpr int kDefaultMaxTerms = 10000;

/// Partial sum over n = 0..k_terms; tail_bound = lambda^(K+1) / (1 - lambda).
struct SeriesTruncation {
    int k_terms;
    double tail_bound;
};

inline SeriesTruncation truncation_for(const FractalParams& p, double tol, int max_terms = kDefaultMaxTerms) {
    if (!(tol > 0.0) || !std::isfinite(tol)) {
        throw Error(ErrorCode::InvalidArgument, "tolerance must be positive and finite");
    }
    const double l = p.lambda();
    double tail = l / (1.0 - l);
    int k = 0;
    while (tail > tol) {
        if (++k > max_terms) {
            throw Error(ErrorCode::ToleranceTooSmall,
                        "tolerance needs more than " + std::to_string(max_terms) + " terms");
        }
        tail *= l;
    }
    return {k, std::pow(l, k + 1) / (1.0 - l)};
}

/// Documented drift of the fractional-part recurrence: phase error n * N_b * 2^-52
/// for term n, turned into a cosine error (times 2 pi), weighted by lambda^n and
/// summed. Not part of the certified tolerance.
inline double phase_error_budget(const FractalParams& p, const SeriesTruncation& t) {
    const double ulp = std::ldexp(1.0, -52);
    double weight = 1.0;
    double total = 0.0;
    for (int n = 0; n <= t.k_terms; ++n) {
        total += weight * n * p.base() * ulp * 2.0 * std::numbers::pi;
        weight *= p.lambda();
    }
    return total;
}

/// Truncated Weierstrass series bound to one parameter set and tolerance.
///
/// The phase N_b^n x is never formed directly: only its fractional part is
/// carried, f_{n+1} = frac(N_b f_n), so the cosine argument stays in [0, 2 pi).
class WeierstrassSeries {
public:
    WeierstrassSeries(const FractalParams& p, double tol) : params_(p), truncation_(truncation_for(p, tol)) {}

    double operator()(double x) const noexcept {
        const double base = params_.base();
        double f = x - std::floor(x);
        double weight = 1.0;
        double sum = 0.0;
        for (int n = 0; n <= truncation_.k_terms; ++n) {
            sum += weight * std::cos(2.0 * std::numbers::pi * f);
            weight *= params_.lambda();
            f *= base;
            f -= std::floor(f);
        }
        return sum;
    }

    const FractalParams& params() const noexcept { return params_; }
    const SeriesTruncation& truncation() const noexcept { return truncation_; }

private:
    FractalParams params_;
    SeriesTruncation truncation_;
};

inline double eval_w(const FractalParams& p, double x, double tol) { return WeierstrassSeries(p, tol)(x); }

struct OscillationEstimate {
    double lo;
    double hi;
    double osc;
    int samples_used;
    bool certified = false;
};

namespace detail {

template <typename F>
OscillationEstimate sample_grid(F&& f, double x1, double x2, int n_samples) {
    const double width = x2 - x1;
    double lo = f(x1);
    double hi = lo;
    for (int i = 1; i < n_samples; ++i) {
        const double x = (i == n_samples - 1) ? x2 : x1 + width * i / (n_samples - 1);
        const double y = f(x);
        lo = std::min(lo, y);
        hi = std::max(hi, y);
    }
    return {lo, hi, hi - lo, n_samples};
}

inline void check_interval(double x1, double x2) {
    if (!(x1 < x2) || !std::isfinite(x1) || !std::isfinite(x2)) {
        throw Error(ErrorCode::InvalidArgument, "oscillation needs finite x1 < x2");
    }
}

}  // namespace detail

/// Min and max of W over n_samples equispaced points, both endpoints included.
/// A lower estimate of the true oscillation.
inline OscillationEstimate oscillation(const FractalParams& p, double x1, double x2, int n_samples, double tol) {
    detail::check_interval(x1, x2);
    if (n_samples < 2) throw Error(ErrorCode::InvalidArgument, "oscillation needs at least 2 samples");
    return detail::sample_grid(WeierstrassSeries(p, tol), x1, x2, n_samples);
}

struct RefinementOptions {
    int initial_intervals = 32;
    int max_intervals = 1 << 15;
    double relative_target = 0.01;
};

/// Oscillation with grid refinement: the grid is halved until the increment
/// bound eta_W * (delta (N_b - 1))^(2 - D_W) between neighbouring samples
/// drops below relative_target * osc, or max_intervals is reached.
/// Refined grids contain the coarser ones, so the estimate never decreases.
inline OscillationEstimate oscillation_certified(const FractalParams& p, double x1, double x2, double tol,
                                                 const RefinementOptions& opt = {}) {
    detail::check_interval(x1, x2);
    if (opt.initial_intervals < 1 || opt.max_intervals < opt.initial_intervals) {
        throw Error(ErrorCode::InvalidArgument, "invalid refinement options");
    }
    const WeierstrassSeries w(p, tol);
    const double exponent = 2.0 - box_dimension(p).d_w;
    const double eta = eta_w(p);
    const double width = x2 - x1;

    int intervals = opt.initial_intervals;
    OscillationEstimate est = detail::sample_grid(w, x1, x2, intervals + 1);
    for (;;) {
        const double delta = width / intervals;
        const double bound = eta * std::pow(delta * (p.base() - 1.0), exponent);
        if (bound <= opt.relative_target * est.osc) {
            est.certified = true;
            return est;
        }
        if (intervals * 2 > opt.max_intervals) return est;
        // only the new midpoints need evaluating
        for (int i = 0; i < intervals; ++i) {
            const double y = w(x1 + width * (2 * i + 1) / (2.0 * intervals));
            est.lo = std::min(est.lo, y);
            est.hi = std::max(est.hi, y);
        }
        intervals *= 2;
        est.osc = est.hi - est.lo;
        est.samples_used = intervals + 1;
    }
}

}  // namespace wboxdim
