#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "wboxdim/bounds.hpp"
#include "wboxdim/box_counting.hpp"
#include "wboxdim/params.hpp"
#include "wboxdim/prefractal.hpp"
#include "wboxdim/weierstrass.hpp"

namespace wboxdim {

inline constexpr const char* kToolName = "wboxdim";
inline constexpr const char* kToolVersion = "0.1.0";

using ojson = nlohmann::ordered_json;

/// Everything a command needs; echoed into every emitted file.
struct RunConfig {
    std::string command;
    double lambda = 0.5;
    int n_b = 3;
    int m = 1;
    int m_min = 3;
    int m_max = 8;
    double tolerance = 1e-12;
    std::uint64_t budget = 10'000'000;
    std::uint64_t seed = 0;
    std::string out;
    std::string format;
    bool polygons = false;
    bool verbose = false;
    double x1 = 0.0;
    double x2 = 1.0;
};

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw Error(ErrorCode::InvalidArgument, "not a number: '" + s + "'");
    }
    return v;
}

/// ISO-8601 UTC stamp from SOURCE_DATE_EPOCH, or the Unix epoch when unset,
/// so that repeated runs stay byte-identical.
inline std::string envelope_timestamp() {
    std::time_t t = 0;
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
        char* end = nullptr;
        const long long v = std::strtoll(env, &end, 10);
        if (end && *end == '\0' && v >= 0) t = static_cast<std::time_t>(v);
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::array<char, 32> buf{};
    std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf.data();
}

inline ojson config_json(const RunConfig& c) {
    ojson j;
    j["command"] = c.command;
    j["lambda"] = c.lambda;
    j["n_b"] = c.n_b;
    j["m"] = c.m;
    j["m_min"] = c.m_min;
    j["m_max"] = c.m_max;
    j["tolerance"] = c.tolerance;
    j["budget"] = c.budget;
    j["seed"] = c.seed;
    j["out"] = c.out;
    j["format"] = c.format;
    j["polygons"] = c.polygons;
    j["x1"] = c.x1;
    j["x2"] = c.x2;
    return j;
}

inline ojson envelope(const RunConfig& c, ojson payload) {
    ojson j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["timestamp"] = envelope_timestamp();
    j["config"] = config_json(c);
    j["payload"] = std::move(payload);
    return j;
}

/// Envelope as '#' comment lines ahead of a CSV header.
inline void write_csv_preamble(std::ostream& os, const RunConfig& c) {
    os << "# " << kToolName << ' ' << kToolVersion << '\n';
    os << "# timestamp " << envelope_timestamp() << '\n';
    os << "# config " << config_json(c).dump() << '\n';
}

// ---------------------------------------------------------------------------
// params

inline ojson params_json(const FractalParams& p) {
    const BoundConstants c = lower_bound_constants(p);
    ojson j;
    j["lambda"] = p.lambda();
    j["n_b"] = p.n_b();
    j["d_w"] = box_dimension(p).d_w;
    j["eta_w"] = c.eta_w;
    j["lower_odd"] = c.lower_odd;
    j["lower_even_first"] = c.lower_even_first;
    j["lower_even_first_all_j"] = c.lower_even_first_all_j;
    j["lower_even_second"] = c.lower_even_second;
    j["branch"] = c.even_branch ? "even" : "odd";
    j["effective_lower_raw"] = c.effective_lower_raw;
    j["effective_lower"] = c.effective_lower();
    j["cover_c"] = c.cover_c;
    if (auto d = degenerate_j(p)) j["degenerate_j"] = *d; else j["degenerate_j"] = nullptr;
    return j;
}

inline std::string sign_tag(double v) { return v > 0 ? "positive" : (v < 0 ? "negative" : "zero"); }

inline void write_params_text(std::ostream& os, const FractalParams& p) {
    const BoundConstants c = lower_bound_constants(p);
    os << "lambda=" << format_double(p.lambda()) << '\n'
       << "n_b=" << p.n_b() << '\n'
       << "d_w=" << format_double(box_dimension(p).d_w) << '\n'
       << "eta_w=" << format_double(c.eta_w) << '\n'
       << "lower_odd=" << format_double(c.lower_odd) << " (" << sign_tag(c.lower_odd) << ")\n"
       << "lower_even_first=" << format_double(c.lower_even_first) << " (" << sign_tag(c.lower_even_first) << ")\n"
       << "lower_even_first_all_j=" << format_double(c.lower_even_first_all_j) << " ("
       << sign_tag(c.lower_even_first_all_j) << ")\n"
       << "lower_even_second=" << format_double(c.lower_even_second) << " (" << sign_tag(c.lower_even_second) << ")\n"
       << "branch=" << (c.even_branch ? "even" : "odd") << '\n'
       << "effective_lower=" << format_double(c.effective_lower_raw) << " (" << sign_tag(c.effective_lower_raw)
       << ")\n"
       << "cover_c=" << format_double(c.cover_c) << '\n'
       << "degenerate_j=";
    if (auto d = degenerate_j(p)) os << *d; else os << "none";
    os << '\n';
}

// ---------------------------------------------------------------------------
// vertices

struct VertexRow {
    std::size_t index;
    double x;
    double y;
    std::string word;
    int j;
};

inline std::vector<VertexRow> vertex_rows(const VertexSet& v) {
    std::vector<VertexRow> rows;
    rows.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        rows.push_back({i, v.points[i].x, v.points[i].y, v.word(i).to_string(v.n_b), v.labels[i].j});
    }
    return rows;
}

inline void write_vertices_csv(std::ostream& os, const VertexSet& v, const FractalParams& p, const RunConfig& c) {
    write_csv_preamble(os, c);
    os << "# vertex_count constructed=" << v.size() << " formula=" << formula_vertex_count(p, v.level) << '\n';
    os << "index,x,y,word,j\n";
    for (const auto& r : vertex_rows(v)) {
        os << r.index << ',' << format_double(r.x) << ',' << format_double(r.y) << ',' << r.word << ',' << r.j << '\n';
    }
}

inline ojson vertices_json(const VertexSet& v, const FractalParams& p) {
    ojson j;
    j["level"] = v.level;
    j["vertex_count"] = v.size();
    j["formula_vertex_count"] = formula_vertex_count(p, v.level);
    ojson rows = ojson::array();
    for (const auto& r : vertex_rows(v)) {
        rows.push_back(ojson{{"index", r.index}, {"x", r.x}, {"y", r.y}, {"word", r.word}, {"j", r.j}});
    }
    j["vertices"] = std::move(rows);
    return j;
}

/// Reads back the rows of a vertices CSV; comment lines are skipped.
inline std::vector<VertexRow> read_vertices_csv(std::istream& is) {
    std::vector<VertexRow> rows;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty() || line.front() == '#') continue;
        if (!header) {
            if (line != "index,x,y,word,j") throw Error(ErrorCode::InvalidArgument, "unexpected header: " + line);
            header = true;
            continue;
        }
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, ',')) cols.push_back(col);
        if (!line.empty() && line.back() == ',') cols.emplace_back();
        if (cols.size() != 5) throw Error(ErrorCode::InvalidArgument, "malformed row: " + line);
        rows.push_back({std::stoull(cols[0]), parse_double(cols[1]), parse_double(cols[2]), cols[3], std::stoi(cols[4])});
    }
    return rows;
}

// ---------------------------------------------------------------------------
// polygons

inline void write_polygons_csv(std::ostream& os, const std::vector<Polygon>& polys, int n_b, const RunConfig& c) {
    write_csv_preamble(os, c);
    os << "polygon,word,vertex,x,y\n";
    for (std::size_t k = 0; k < polys.size(); ++k) {
        const std::string word = polys[k].cell_word.to_string(n_b);
        for (std::size_t v = 0; v < polys[k].vertices.size(); ++v) {
            os << k << ',' << word << ',' << v << ',' << format_double(polys[k].vertices[v].x) << ','
               << format_double(polys[k].vertices[v].y) << '\n';
        }
    }
}

// ---------------------------------------------------------------------------
// verify-bounds

inline ojson bounds_report_json(const BoundsReport& r, int n_b) {
    ojson j;
    j["m"] = r.m;
    j["pairs_checked"] = r.pairs_checked;
    j["exhaustive"] = r.exhaustive;
    j["violations_lower"] = r.violations_lower;
    j["violations_upper"] = r.violations_upper;
    j["skipped_nonpositive_lower"] = r.skipped_nonpositive_lower;
    if (r.min_ratio_lower) j["min_ratio_lower"] = *r.min_ratio_lower; else j["min_ratio_lower"] = nullptr;
    j["max_ratio_upper"] = r.max_ratio_upper;
    ojson worst = ojson::array();
    for (const auto& w : r.worst) {
        ojson e;
        e["word"] = w.word.to_string(n_b);
        e["j"] = w.j;
        e["l_m"] = w.l_m;
        e["h"] = w.h;
        e["lower"] = w.lower;
        e["upper"] = w.upper;
        e["lower_raw"] = w.lower_raw;
        worst.push_back(std::move(e));
    }
    j["worst"] = std::move(worst);
    return j;
}

// ---------------------------------------------------------------------------
// boxdim

inline void write_boxdim_csv(std::ostream& os, const BoxCountResult& r, const RunConfig& c) {
    write_csv_preamble(os, c);
    os << "m,epsilon,count\n";
    for (std::size_t i = 0; i < r.counts.size(); ++i) {
        os << r.levels[i] << ',' << format_double(r.scales[i]) << ',' << r.counts[i] << '\n';
    }
}

inline std::string boxdim_summary(const BoxCountResult& r, double target) {
    return "slope=" + format_double(r.slope) + " target=" + format_double(target) +
           " delta=" + format_double(r.slope - target) + " r2=" + format_double(r.r_squared);
}

// ---------------------------------------------------------------------------
// SVG

struct SvgOptions {
    int width = 1200;
    int height = 800;
    int margin = 40;
    int limit_level = 10;                    ///< level drawn in cyan as the limit graph
    std::uint64_t limit_max_points = 200'000; ///< lower the limit level until it fits
};

namespace detail {

inline std::string fixed3(double v) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.3f", v);
    return buf.data();
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
        }
    }
    return out;
}

inline const char* level_colour(int level) {
    static constexpr std::array<const char*, 11> palette{"green", "red", "orange", "purple", "blue", "brown",
                                                         "magenta", "olive", "navy", "teal", "gray"};
    return palette[static_cast<std::size_t>(level) % palette.size()];
}

}  // namespace detail

/// Graphs of levels 0..m (green, red, orange, ...), a cyan high-level proxy of
/// the limit graph underneath, and optionally the level-m polygons.
inline std::string render_svg(const FractalParams& p, int m, bool with_polygons, const RunConfig& c,
                              const SvgOptions& opt = {}) {
    const double y_max = 1.0 / (1.0 - p.lambda());
    const double plot_w = opt.width - 2.0 * opt.margin;
    const double plot_h = opt.height - 2.0 * opt.margin;
    auto sx = [&](double x) { return detail::fixed3(opt.margin + x * plot_w); };
    auto sy = [&](double y) { return detail::fixed3(opt.margin + (y_max - y) / (2.0 * y_max) * plot_h); };
    auto polyline = [&](const VertexSet& v, const char* colour, const std::string& cls, double stroke) {
        std::string s = "<polyline class=\"" + cls + "\" fill=\"none\" stroke=\"" + colour + "\" stroke-width=\"" +
                        detail::fixed3(stroke) + "\" points=\"";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ' ';
            s += sx(v.points[i].x) + ',' + sy(v.points[i].y);
        }
        return s + "\"/>\n";
    };

    int limit = opt.limit_level;
    while (limit > 0 && constructed_vertex_count(p, limit) > opt.limit_max_points) --limit;

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(opt.width) +
           "\" height=\"" + std::to_string(opt.height) + "\" viewBox=\"0 0 " + std::to_string(opt.width) + ' ' +
           std::to_string(opt.height) + "\">\n";
    svg += "<desc>" + detail::xml_escape(envelope(c, ojson::object()).dump()) + "</desc>\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<line class=\"axis\" x1=\"" + sx(0) + "\" y1=\"" + sy(0) + "\" x2=\"" + sx(1) + "\" y2=\"" + sy(0) +
           "\" stroke=\"#bbbbbb\" stroke-width=\"1.000\"/>\n";
    svg += polyline(build_v_m(p, limit), "cyan", "limit", 1.0);
    for (int level = 0; level <= m; ++level) {
        svg += polyline(build_v_m(p, level), detail::level_colour(level), "level level-" + std::to_string(level), 1.5);
    }
    if (with_polygons && m >= 1) {
        for (const auto& poly : polygons(p, m)) {
            std::string d = "M";
            for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
                d += (i ? " L" : " ") + sx(poly.vertices[i].x) + ',' + sy(poly.vertices[i].y);
            }
            svg += "<path class=\"polygon\" data-word=\"" + poly.cell_word.to_string(p.n_b()) + "\" d=\"" + d +
                   " Z\" fill=\"black\" fill-opacity=\"0.08\" stroke=\"black\" stroke-width=\"0.750\"/>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace wboxdim
