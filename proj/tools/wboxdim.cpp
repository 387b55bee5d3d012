// wboxdim: prefractal construction, increment-bound checks and box-counting
// for the Weierstrass graph W(x) = sum lambda^n cos(2 pi N_b^n x).
//
// Exit codes: 0 success, 1 verification failure, 2 invalid input,
// 3 budget exceeded.

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "wboxdim/wboxdim.hpp"

namespace {

using namespace wboxdim;

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitBudget = 3;
constexpr int kPlotMaxLevel = 12;

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) throw Error(ErrorCode::InvalidArgument, "cannot open output file " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
    bool to_stdout() const { return !file_.is_open(); }

private:
    std::ofstream file_;
};

void require_format(const RunConfig& c, std::initializer_list<const char*> allowed) {
    for (const char* f : allowed) {
        if (c.format == f) return;
    }
    throw Error(ErrorCode::InvalidArgument, "format '" + c.format + "' not supported by " + c.command);
}

int cmd_params(const RunConfig& c, const FractalParams& p) {
    require_format(c, {"text", "json"});
    Output out(c.out);
    if (c.format == "json") {
        out.stream() << envelope(c, params_json(p)).dump(2) << '\n';
    } else {
        write_params_text(out.stream(), p);
    }
    return kExitOk;
}

int cmd_vertices(const RunConfig& c, const FractalParams& p) {
    require_format(c, {"csv", "json"});
    if (c.m < 0) throw Error(ErrorCode::InvalidArgument, "vertices needs m >= 0");
    const VertexSet v = build_v_m(p, c.m, c.budget);
    Output out(c.out);
    if (c.format == "json") {
        out.stream() << envelope(c, vertices_json(v, p)).dump(2) << '\n';
    } else {
        write_vertices_csv(out.stream(), v, p, c);
    }
    if (c.verbose) {
        std::cerr << "vertex_count constructed=" << v.size() << " formula=" << formula_vertex_count(p, c.m) << '\n';
    }
    return kExitOk;
}

int cmd_polygons(const RunConfig& c, const FractalParams& p) {
    require_format(c, {"csv", "svg"});
    if (c.m < 1) throw Error(ErrorCode::InvalidArgument, "polygons needs m >= 1");
    Output out(c.out);
    if (c.format == "svg") {
        if (c.m > kPlotMaxLevel) throw Error(ErrorCode::BudgetExceeded, "plot level above " + std::to_string(kPlotMaxLevel));
        cell_count(p, c.m, c.budget);
        out.stream() << render_svg(p, c.m, true, c);
    } else {
        write_polygons_csv(out.stream(), polygons(p, c.m, c.budget), p.n_b(), c);
    }
    return kExitOk;
}

int cmd_verify_bounds(const RunConfig& c, const FractalParams& p) {
    require_format(c, {"json"});
    if (c.m < 1) throw Error(ErrorCode::InvalidArgument, "verify-bounds needs m >= 1");
    const BoundsReport report = verify_theorem(p, c.m, c.budget, c.seed);
    Output out(c.out);
    out.stream() << envelope(c, bounds_report_json(report, p.n_b())).dump(2) << '\n';
    return report.passed() ? kExitOk : kExitVerification;
}

int cmd_boxdim(const RunConfig& c, const FractalParams& p) {
    require_format(c, {"csv", "json"});
    if (c.m_min < 1 || c.m_max <= c.m_min) {
        throw Error(ErrorCode::InvalidArgument, "boxdim needs 1 <= m-min < m-max (at least two levels)");
    }
    BoxCountOptions opt;
    opt.tol = c.tolerance;
    opt.budget = c.budget * static_cast<std::uint64_t>(opt.samples_per_column);
    const BoxCountResult r = estimate_dimension(p, c.m_min, c.m_max, opt);
    const double target = box_dimension(p).d_w;
    {
        Output out(c.out);
        if (c.format == "json") {
            ojson rows = ojson::array();
            for (std::size_t i = 0; i < r.counts.size(); ++i) {
                rows.push_back(ojson{{"m", r.levels[i]}, {"epsilon", r.scales[i]}, {"count", r.counts[i]}});
            }
            ojson payload;
            payload["levels"] = std::move(rows);
            payload["slope"] = r.slope;
            payload["intercept"] = r.intercept;
            payload["r2"] = r.r_squared;
            payload["target"] = target;
            out.stream() << envelope(c, std::move(payload)).dump(2) << '\n';
        } else {
            write_boxdim_csv(out.stream(), r, c);
        }
    }
    std::cout << boxdim_summary(r, target) << '\n';
    return kExitOk;
}

int cmd_plot(const RunConfig& c, const FractalParams& p) {
    require_format(c, {"svg"});
    if (c.m < 0) throw Error(ErrorCode::InvalidArgument, "plot needs m >= 0");
    if (c.m > kPlotMaxLevel) throw Error(ErrorCode::BudgetExceeded, "plot level above " + std::to_string(kPlotMaxLevel));
    cell_count(p, c.m, c.budget);
    Output out(c.out);
    out.stream() << render_svg(p, c.m, c.polygons, c);
    return kExitOk;
}

int cmd_oscillation(const RunConfig& c, const FractalParams& p) {
    require_format(c, {"csv", "json"});
    const OscillationEstimate e = oscillation_certified(p, c.x1, c.x2, c.tolerance);
    Output out(c.out);
    if (c.format == "json") {
        ojson payload;
        payload["x1"] = c.x1;
        payload["x2"] = c.x2;
        payload["lo"] = e.lo;
        payload["hi"] = e.hi;
        payload["osc"] = e.osc;
        payload["samples_used"] = e.samples_used;
        payload["certified"] = e.certified;
        out.stream() << envelope(c, std::move(payload)).dump(2) << '\n';
    } else {
        write_csv_preamble(out.stream(), c);
        out.stream() << "x1,x2,lo,hi,osc,samples_used,certified\n"
                     << format_double(c.x1) << ',' << format_double(c.x2) << ',' << format_double(e.lo) << ','
                     << format_double(e.hi) << ',' << format_double(e.osc) << ',' << e.samples_used << ','
                     << (e.certified ? "true" : "false") << '\n';
    }
    if (c.verbose) {
        const SeriesTruncation t = truncation_for(p, c.tolerance);
        std::cerr << "terms=" << t.k_terms + 1 << " tail_bound=" << format_double(t.tail_bound)
                  << " phase_error_budget=" << format_double(phase_error_budget(p, t)) << '\n';
    }
    return kExitOk;
}

const std::map<std::string, std::pair<std::string, std::function<int(const RunConfig&, const FractalParams&)>>>&
commands() {
    static const std::map<std::string, std::pair<std::string, std::function<int(const RunConfig&, const FractalParams&)>>>
        table{
            {"params", {"text", cmd_params}},
            {"vertices", {"csv", cmd_vertices}},
            {"polygons", {"csv", cmd_polygons}},
            {"verify-bounds", {"json", cmd_verify_bounds}},
            {"boxdim", {"csv", cmd_boxdim}},
            {"plot", {"svg", cmd_plot}},
            {"oscillation", {"csv", cmd_oscillation}},
        };
    return table;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"Prefractal graphs, increment bounds and box-counting dimension of the Weierstrass function"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.set_config("--config", "", "flat key=value file; command-line flags take precedence");

    std::vector<std::string> names;
    for (const auto& [name, _] : commands()) names.push_back(name);
    app.add_option("command", cfg.command, "params | vertices | polygons | verify-bounds | boxdim | plot | oscillation")
        ->required()
        ->check(CLI::IsMember(names));
    app.add_option("--lambda", cfg.lambda, "contraction ratio in (0,1)")->capture_default_str();
    app.add_option("--nb,--n_b", cfg.n_b, "integer base N_b >= 3")->capture_default_str();
    app.add_option("--m", cfg.m, "prefractal level")->capture_default_str();
    app.add_option("--m-min,--m_min", cfg.m_min, "first level of the box-count regression")->capture_default_str();
    app.add_option("--m-max,--m_max", cfg.m_max, "last level of the box-count regression")->capture_default_str();
    app.add_option("--tol,--tolerance", cfg.tolerance, "series truncation tolerance")->capture_default_str();
    app.add_option("--budget", cfg.budget, "work budget (cells, sampled pairs)")->capture_default_str();
    app.add_option("--seed", cfg.seed, "seed for sampled verification")->capture_default_str();
    app.add_option("--out,--output", cfg.out, "output file (default stdout)");
    app.add_option("--format", cfg.format, "csv | json | svg | text")->check(CLI::IsMember({"csv", "json", "svg", "text"}));
    app.add_option("--x1", cfg.x1, "left end for oscillation")->capture_default_str();
    app.add_option("--x2", cfg.x2, "right end for oscillation")->capture_default_str();
    app.add_flag("--polygons", cfg.polygons, "overlay level-m polygons on plots");
    app.add_flag("--verbose", cfg.verbose, "extra diagnostics on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    const auto& [default_format, run] = commands().at(cfg.command);
    if (cfg.format.empty()) cfg.format = default_format;

    try {
        const FractalParams p = new_params(cfg.lambda, cfg.n_b);
        return run(cfg, p);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::BudgetExceeded ? kExitBudget : kExitInvalid;
    }
}
