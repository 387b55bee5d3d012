#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wboxdim/error.hpp"
#include "wboxdim/params.hpp"

namespace wboxdim {

struct Point2 {
    double x;
    double y;

    friend bool operator==(const Point2&, const Point2&) = default;
};

inline constexpr std::uint64_t kDefaultCellBudget = 10'000'000;

/// Address (M_1, ..., M_m) of a level-m cell. T_M = T_{M_1} o ... o T_{M_m},
/// so M_1 is applied last. Read as a base-N_b numeral with M_1 most
/// significant, a word is the index of its cell counted from x = 0.
class Word {
public:
    Word() = default;
    explicit Word(std::vector<int> digits) : digits_(std::move(digits)) {}

    static Word from_cell(std::uint64_t cell, int length, int n_b) {
        std::vector<int> digits(static_cast<std::size_t>(length));
        for (int k = length - 1; k >= 0; --k) {
            digits[static_cast<std::size_t>(k)] = static_cast<int>(cell % static_cast<std::uint64_t>(n_b));
            cell /= static_cast<std::uint64_t>(n_b);
        }
        return Word(std::move(digits));
    }

    std::uint64_t cell_index(int n_b) const {
        std::uint64_t cell = 0;
        for (int d : digits_) cell = cell * static_cast<std::uint64_t>(n_b) + static_cast<std::uint64_t>(d);
        return cell;
    }

    int length() const noexcept { return static_cast<int>(digits_.size()); }
    bool empty() const noexcept { return digits_.empty(); }
    std::span<const int> digits() const noexcept { return digits_; }
    int operator[](std::size_t k) const { return digits_[k]; }

    void validate(int n_b) const {
        for (int d : digits_) {
            if (d < 0 || d >= n_b) {
                throw Error(ErrorCode::DigitOutOfRange,
                            "digit " + std::to_string(d) + " outside [0," + std::to_string(n_b - 1) + "]");
            }
        }
    }

    /// Digits 0-9a-z for N_b <= 36, dot-separated decimals beyond.
    std::string to_string(int n_b) const {
        std::string out;
        for (std::size_t k = 0; k < digits_.size(); ++k) {
            const int d = digits_[k];
            if (n_b <= 36) {
                out += static_cast<char>(d < 10 ? '0' + d : 'a' + (d - 10));
            } else {
                if (k) out += '.';
                out += std::to_string(d);
            }
        }
        return out;
    }

    friend auto operator<=>(const Word&, const Word&) = default;

private:
    std::vector<int> digits_;
};

inline Point2 apply_t(const FractalParams& p, int i, Point2 pt) {
    if (i < 0 || i >= p.n_b()) {
        throw Error(ErrorCode::DigitOutOfRange, "map index " + std::to_string(i) + " out of range");
    }
    const double x = (pt.x + i) / p.base();
    return {x, p.lambda() * pt.y + std::cos(2.0 * std::numbers::pi * x)};
}

/// P_j = (j/(N_b-1), cos(2 pi j/(N_b-1)) / (1 - lambda)), the fixed point of T_j.
inline Point2 fixed_point(const FractalParams& p, int j) {
    if (j < 0 || j >= p.n_b()) throw Error(ErrorCode::IndexOutOfRange, "fixed point index out of range");
    const int den = p.n_b() - 1;
    const double c = std::cos(2.0 * std::numbers::pi * (j == den ? 1.0 : static_cast<double>(j) / den));
    return {j == den ? 1.0 : static_cast<double>(j) / den, c / (1.0 - p.lambda())};
}

inline std::vector<Point2> fixed_points(const FractalParams& p) {
    std::vector<Point2> out;
    out.reserve(static_cast<std::size_t>(p.n_b()));
    for (int j = 0; j < p.n_b(); ++j) out.push_back(fixed_point(p, j));
    return out;
}

inline Point2 apply_word(const FractalParams& p, const Word& w, Point2 pt) {
    w.validate(p.n_b());
    const auto digits = w.digits();
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) pt = apply_t(p, *it, pt);
    return pt;
}

/// Abscissae xi_1..xi_m visited while T_M is applied to P_j, innermost map
/// first: xi_s = x_j / N_b^s + sum_{t=1..s} M_{m-s+t} / N_b^t. Closed form,
/// no iteration of the maps.
inline std::vector<double> orbit_abscissae(const FractalParams& p, const Word& w, int j) {
    w.validate(p.n_b());
    if (j < 0 || j >= p.n_b()) throw Error(ErrorCode::IndexOutOfRange, "vertex index out of range");
    const int m = w.length();
    const double xj = fixed_point(p, j).x;
    std::vector<double> xi(static_cast<std::size_t>(m));
    for (int s = 1; s <= m; ++s) {
        double sum = xj / std::pow(p.base(), s);
        for (int t = s; t >= 1; --t) sum += w[static_cast<std::size_t>(m - s + t - 1)] / std::pow(p.base(), t);
        xi[static_cast<std::size_t>(s - 1)] = sum;
    }
    return xi;
}

/// x(T_M(P_j)) = x_j / N_b^m + sum_{k=1..m} M_k / N_b^k.
inline double closed_form_x(const FractalParams& p, const Word& w, int j) {
    w.validate(p.n_b());
    if (j < 0 || j >= p.n_b()) throw Error(ErrorCode::IndexOutOfRange, "vertex index out of range");
    const int m = w.length();
    double x = fixed_point(p, j).x / std::pow(p.base(), m);
    for (int k = m; k >= 1; --k) x += w[static_cast<std::size_t>(k - 1)] / std::pow(p.base(), k);
    return x;
}

/// y(T_M(P_j)) = lambda^m y_j + sum_{s=1..m} lambda^(m-s) cos(2 pi xi_s).
inline double closed_form_y(const FractalParams& p, const Word& w, int j) {
    const auto xi = orbit_abscissae(p, w, j);
    const int m = w.length();
    double y = std::pow(p.lambda(), m) * fixed_point(p, j).y;
    for (int s = 1; s <= m; ++s) {
        y += std::pow(p.lambda(), m - s) * std::cos(2.0 * std::numbers::pi * xi[static_cast<std::size_t>(s - 1)]);
    }
    return y;
}

/// Number of level-m cells N_b^m, refused above budget.
inline std::uint64_t cell_count(const FractalParams& p, int m, std::uint64_t budget = kDefaultCellBudget) {
    if (m < 0) throw Error(ErrorCode::InvalidArgument, "level must be non-negative");
    const auto cells = detail::checked_pow(static_cast<std::uint64_t>(p.n_b()), m, budget);
    if (!cells) {
        throw Error(ErrorCode::BudgetExceeded,
                    "N_b^m exceeds budget " + std::to_string(budget) + " at m=" + std::to_string(m));
    }
    return *cells;
}

/// Width 1 / ((N_b - 1) N_b^m) of one within-cell step.
inline double cell_step(const FractalParams& p, int m) {
    return 1.0 / ((p.base() - 1.0) * std::pow(p.base(), m));
}

/// Provenance of a vertex: T_M(P_j) with M the word of `cell` at the set's
/// level. Fixed points P_i are flagged and carry the empty word.
struct VertexLabel {
    std::uint64_t cell;
    int j;
    bool fixed_point;
};

struct VertexSet {
    int level = 0;
    int n_b = 0;
    std::vector<Point2> points;
    std::vector<VertexLabel> labels;

    std::size_t size() const noexcept { return points.size(); }

    std::vector<std::pair<std::size_t, std::size_t>> edges() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t i = 1; i < points.size(); ++i) out.emplace_back(i - 1, i);
        return out;
    }

    Word word(std::size_t index) const {
        const auto& label = labels.at(index);
        return label.fixed_point ? Word{} : Word::from_cell(label.cell, level, n_b);
    }
};

/// N_b^m (N_b - 1) + 1: the size produced by merging the N_b - 1 junctions
/// introduced at each level.
inline std::uint64_t constructed_vertex_count(const FractalParams& p, int m) {
    return cell_count(p, m, std::numeric_limits<std::uint64_t>::max()) * static_cast<std::uint64_t>(p.n_b() - 1) + 1;
}

/// 2 N_b^m + N_b - 2, the short closed-form count.
/// Agrees with constructed_vertex_count only for N_b = 3.
inline std::uint64_t formula_vertex_count(const FractalParams& p, int m) {
    return 2 * cell_count(p, m, std::numeric_limits<std::uint64_t>::max()) + static_cast<std::uint64_t>(p.n_b()) - 2;
}

namespace detail {

inline bool same_vertex(Point2 a, Point2 b, double x_tol) {
    return std::abs(a.x - b.x) <= x_tol && std::abs(a.y - b.y) <= 1e-9;
}

}  // namespace detail

/// V_m = union of T_i(V_{m-1}), built level by level from the fixed points.
/// Points are sorted by abscissa and junction duplicates are merged,
/// keeping the representative from the left cell.
inline VertexSet build_v_m(const FractalParams& p, int m, std::uint64_t budget = kDefaultCellBudget) {
    cell_count(p, m, budget);
    const int n_b = p.n_b();

    VertexSet v;
    v.n_b = n_b;
    v.points = fixed_points(p);
    for (int j = 0; j < n_b; ++j) v.labels.push_back({0, j, true});

    std::uint64_t cells_prev = 1;
    for (int level = 1; level <= m; ++level) {
        const double x_tol = 1e-12 * std::pow(p.base(), -level);
        VertexSet next;
        next.level = level;
        next.n_b = n_b;
        next.points.reserve(v.points.size() * static_cast<std::size_t>(n_b));
        next.labels.reserve(v.points.size() * static_cast<std::size_t>(n_b));
        for (int i = 0; i < n_b; ++i) {
            for (std::size_t k = 0; k < v.points.size(); ++k) {
                const Point2 image = apply_t(p, i, v.points[k]);
                const VertexLabel& src = v.labels[k];
                if (!next.points.empty() && detail::same_vertex(next.points.back(), image, x_tol)) continue;
                next.points.push_back(image);
                next.labels.push_back({static_cast<std::uint64_t>(i) * cells_prev + src.cell, src.j,
                                       src.fixed_point && src.j == i});
            }
        }
        cells_prev *= static_cast<std::uint64_t>(n_b);
        v = std::move(next);
    }
    v.level = m;
    // each T_i maps [0,1] into [i/N_b, (i+1)/N_b] monotonically, so the
    // concatenation is already ordered
    if (!std::is_sorted(v.points.begin(), v.points.end(), [](Point2 a, Point2 b) { return a.x < b.x; })) {
        throw Error(ErrorCode::InvalidArgument, "vertex construction lost abscissa order");
    }
    return v;
}

/// T_M(P_j) ~ T_M(P_{j+1}) inside the cell with index `cell`.
struct CellPair {
    std::uint64_t cell;
    int j;
};

/// T_{M}(P_{N_b-1}) ~ T_{M'}(P_0) where M' is the cell to the right of M.
/// The two points coincide, so the pair has zero width.
struct JunctionPair {
    std::uint64_t left_cell;
    std::uint64_t right_cell;
};

struct Adjacency {
    int level = 0;
    int n_b = 0;
    std::vector<CellPair> within_cell;
    std::vector<JunctionPair> junctions;

    /// Edges of the merged polygonal path, |V_m| - 1.
    std::size_t pair_count() const noexcept { return within_cell.size(); }
};

/// Adjacent vertex pairs of level m, in left-to-right order.
inline Adjacency adjacency_pairs(const FractalParams& p, int m, std::uint64_t budget = kDefaultCellBudget) {
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "adjacency needs m >= 1");
    const std::uint64_t cells = cell_count(p, m, budget);
    Adjacency adj;
    adj.level = m;
    adj.n_b = p.n_b();
    adj.within_cell.reserve(cells * static_cast<std::uint64_t>(p.n_b() - 1));
    for (std::uint64_t c = 0; c < cells; ++c) {
        for (int j = 0; j + 1 < p.n_b(); ++j) adj.within_cell.push_back({c, j});
        if (c + 1 < cells) adj.junctions.push_back({c, c + 1});
    }
    return adj;
}

/// The N_b-gon T_M(P_0), ..., T_M(P_{N_b-1}); the last vertex closes back to the first.
struct Polygon {
    Word cell_word;
    std::vector<Point2> vertices;

    std::vector<std::pair<std::size_t, std::size_t>> edges() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t i = 0; i < vertices.size(); ++i) out.emplace_back(i, (i + 1) % vertices.size());
        return out;
    }
};

inline std::vector<Polygon> polygons(const FractalParams& p, int m, std::uint64_t budget = kDefaultCellBudget) {
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "polygons need m >= 1");
    const std::uint64_t cells = cell_count(p, m, budget);
    const auto base = fixed_points(p);
    std::vector<Polygon> out;
    out.reserve(cells);
    for (std::uint64_t c = 0; c < cells; ++c) {
        Polygon poly{Word::from_cell(c, m, p.n_b()), {}};
        poly.vertices.reserve(base.size());
        for (const Point2& q : base) poly.vertices.push_back(apply_word(p, poly.cell_word, q));
        out.push_back(std::move(poly));
    }
    return out;
}

}  // namespace wboxdim
