#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "wboxdim/error.hpp"

namespace wboxdim {

/// Validated pair (lambda, N_b) defining W(x) = sum lambda^n cos(2 pi N_b^n x).
///
/// Construction enforces 0 < lambda < 1, N_b >= 3 and lambda * N_b > 1.
/// N_b = 2 is rejected: the fixed points i/(N_b - 1) and sin(pi/(N_b - 1))
/// degenerate there and every bound constant becomes vacuous.
class FractalParams {
public:
    static FractalParams make(double lambda, int n_b) {
        if (!(lambda > 0.0 && lambda < 1.0)) {
            throw Error(ErrorCode::OutOfRange, "lambda must lie in (0,1), got " + std::to_string(lambda));
        }
        if (n_b < 3) {
            throw Error(ErrorCode::BaseTooSmall, "n_b must be >= 3, got " + std::to_string(n_b));
        }
        if (!(lambda * n_b > 1.0)) {
            throw Error(ErrorCode::ContractivityViolation,
                        "lambda * n_b must exceed 1, got " + std::to_string(lambda * n_b));
        }
        return FractalParams(lambda, n_b);
    }

    double lambda() const noexcept { return lambda_; }
    int n_b() const noexcept { return n_b_; }
    double base() const noexcept { return static_cast<double>(n_b_); }
    bool even() const noexcept { return n_b_ % 2 == 0; }

    friend bool operator==(const FractalParams&, const FractalParams&) = default;

private:
    FractalParams(double lambda, int n_b) : lambda_(lambda), n_b_(n_b) {}

    double lambda_;
    int n_b_;
};

inline FractalParams new_params(double lambda, int n_b) { return FractalParams::make(lambda, n_b); }

struct DimensionValue {
    double d_w;
};

/// D_W = 2 + ln(lambda) / ln(N_b); always in (1, 2) for valid params.
inline DimensionValue box_dimension(const FractalParams& p) {
    return {2.0 + std::log(p.lambda()) / std::log(p.base())};
}

/// Inverse identity lambda = N_b^(D_W - 2).
inline double lambda_from_dimension(DimensionValue d, int n_b) {
    return std::pow(static_cast<double>(n_b), d.d_w - 2.0);
}

namespace detail {

/// sin(pi * num / den) with exact zeros at integer multiples of pi.
inline double sin_pi_ratio(long long num, long long den) {
    const long long period = 2 * den;
    long long r = num % period;
    if (r < 0) r += period;
    if (r == 0 || r == den) return 0.0;
    return std::sin(std::numbers::pi * static_cast<double>(r) / static_cast<double>(den));
}

/// base^exp, or nullopt once the result exceeds limit.
inline std::optional<std::uint64_t> checked_pow(std::uint64_t base, int exp,
                                                std::uint64_t limit = std::numeric_limits<std::uint64_t>::max()) {
    std::uint64_t r = 1;
    for (int k = 0; k < exp; ++k) {
        if (base != 0 && r > limit / base) return std::nullopt;
        r *= base;
    }
    if (r > limit) return std::nullopt;
    return r;
}

}  // namespace detail

/// The j in {0, ..., N_b - 1} for which sin(pi (2j+1)/(N_b - 1)) vanishes:
/// N_b/2 - 1 when N_b is even, none otherwise.
inline std::optional<int> degenerate_j(const FractalParams& p) {
    if (!p.even()) return std::nullopt;
    return p.n_b() / 2 - 1;
}

inline double eta_w(const FractalParams& p) {
    const double l = p.lambda();
    const double n = p.base();
    const double first = (2.0 * n - 1.0) * l * (n * n - 1.0) /
                         ((n - 1.0) * (n - 1.0) * (1.0 - l) * (l * n * n - 1.0));
    const double second = 2.0 * n / ((l * n * n - 1.0) * (l * n * n * n - 1.0));
    return 2.0 * std::numbers::pi * std::numbers::pi * (first + second);
}

/// Minimum over j of |sin(pi (2j+1)/(N_b - 1))|, j in {0, ..., N_b - 1}.
/// With skip_degenerate the vanishing term of the even case is left out.
inline double min_abs_sine(const FractalParams& p, bool skip_degenerate) {
    const int n = p.n_b();
    const auto degenerate = degenerate_j(p);
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        if (skip_degenerate && degenerate && *degenerate == j) continue;
        best = std::min(best, std::abs(detail::sin_pi_ratio(2 * j + 1, n - 1)));
    }
    return best;
}

/// Constants of the two-sided increment bounds. Values are reported with
/// their sign; nothing here assumes the lower constants are positive.
struct BoundConstants {
    double lower_odd;                ///< bracket with min over all j
    double lower_even_first;         ///< same bracket, degenerate j excluded
    double lower_even_first_all_j;   ///< even-case bracket with the min taken over all j
    double lower_even_second;        ///< 4 (1 - N_b^-2) / (N_b^2 (N_b^2 - 1))
    double eta_w;
    double cover_c;                  ///< max(effective_lower_raw, eta_w)
    double effective_lower_raw;      ///< branch constant selected by the parity of N_b
    bool even_branch;

    double effective_lower() const noexcept { return std::max(effective_lower_raw, 0.0); }
    bool lower_positive() const noexcept { return effective_lower_raw > 0.0; }
};

inline BoundConstants lower_bound_constants(const FractalParams& p) {
    const double l = p.lambda();
    const double n = p.base();
    const double prefactor = 2.0 / (1.0 - l) * detail::sin_pi_ratio(1, p.n_b() - 1);
    const double series = 2.0 * std::numbers::pi / (n * (n - 1.0)) / (l * n - 1.0);

    BoundConstants c{};
    c.even_branch = p.even();
    c.lower_even_first_all_j = prefactor * min_abs_sine(p, false) - series;
    c.lower_odd = c.lower_even_first_all_j;
    c.lower_even_first = prefactor * min_abs_sine(p, true) - series;
    c.lower_even_second = 4.0 / (n * n) * (1.0 - 1.0 / (n * n)) / (n * n - 1.0);
    c.eta_w = eta_w(p);
    c.effective_lower_raw = c.even_branch ? std::max(c.lower_even_first_all_j, c.lower_even_second) : c.lower_odd;
    c.cover_c = std::max(c.effective_lower_raw, c.eta_w);
    return c;
}

}  // namespace wboxdim
