#include "gaugedyn/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <sstream>

#include "gaugedyn/covering.hpp"
#include "gaugedyn/dynamics.hpp"
#include "gaugedyn/errors.hpp"
#include "gaugedyn/io.hpp"
#include "gaugedyn/linearizer.hpp"
#include "gaugedyn/logtransform.hpp"
#include "gaugedyn/mittag.hpp"
#include "gaugedyn/parallel.hpp"
#include "gaugedyn/verify.hpp"

namespace gaugedyn::cli {
namespace {

constexpr std::size_t kDefaultRes = 512;

void require(bool ok, const std::string& what) {
    if (!ok) throw PreconditionError(what);
}

bool ends_with(const std::string& s, const std::string& tail) {
    return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

std::string output_format(const RunConfig& c) {
    if (!c.format.empty()) return c.format;
    return ends_with(c.out, ".pgm") ? "pgm" : "csv";
}

Rect default_bbox(const RunConfig& c) {
    const bool exp = c.family == Family::Exp;
    switch (c.command) {
        case Command::Tract: return exp ? Rect{0.0, 4.0, -kPi, kPi} : Rect{-2.0, 8.0, -kPi, 3 * kPi};
        case Command::Measure: return exp ? Rect{3.5, 4.0, -0.25, 0.25} : Rect{6.0, 6.5, -0.25, 0.25};
        default: return exp ? Rect{-2.0, 8.0, -8.0, 8.0} : Rect{0.0, 16.0, -8.0, 8.0};
    }
}

FamilyMember make_family(const RunConfig& c) {
    return c.family == Family::Exp ? make_exponential(c.lambda) : make_mittag_leffler(c.rho);
}

void emit(const RunConfig& c, const std::string& bytes, std::ostream& out) {
    if (c.out.empty()) {
        out << bytes;
    } else {
        write_atomic(c.out, bytes);
    }
}

double measure_min_scale(const RunConfig& c) { return std::ldexp(c.top_scale, -static_cast<int>(c.scales - 1)); }

void cmd_phi(const RunConfig& c, std::ostream& out) {
    const GaugeSpec g = make_gauge(c.lambda, 1.0);
    CsvTable t({"x", "phi"});
    for (double x : c.xs) t.add_row({x, phi(g, x)});
    emit(c, t.text(), out);
}

void cmd_gauge(const RunConfig& c, std::ostream& out) {
    const GaugeSpec g = make_gauge(c.lambda, c.gamma);
    CsvTable t({"t", "h", "log_h"});
    for (double x : c.ts) t.add_row({x, gauge_h(g, x), x > 0.0 ? log_gauge_h(g, std::log(x)) : -INFINITY});
    emit(c, t.text(), out);
}

void cmd_escape(const RunConfig& c, std::ostream& out) {
    const std::size_t n = c.res.value_or(kDefaultRes);
    const BoolGrid g = escape_scan(make_family(c), c.bbox.value_or(default_bbox(c)), n, n, c.iters, c.bailout, c.threads);
    if (output_format(c) == "pgm") {
        emit(c, encode_pgm(g), out);
        return;
    }
    CsvTable t({"z_re", "z_im", "escaping"});
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i) {
            const cplx z = g.center(i, j);
            t.add_row_text({format_number(z.real()), format_number(z.imag()), g.at(i, j) ? "1" : "0"});
        }
    emit(c, t.text(), out);
}

void cmd_tract(const RunConfig& c, std::ostream& out) {
    const std::size_t n = c.res.value_or(kDefaultRes);
    const TractGrid g = tract_scan(make_family(c), c.bbox.value_or(default_bbox(c)), n, n, c.threads);
    emit(c, output_format(c) == "pgm" ? tract_grid_pgm(g) : tract_grid_csv(g), out);
}

void cmd_ml(const RunConfig& c, std::ostream& out) {
    const MLParams p = make_ml_params(c.rho);
    CsvTable t({"z_re", "z_im", "log_abs_f", "arg_f", "log_abs_af"});
    for (cplx z : c.zs) {
        const cplx w = ml_log(p, z);
        t.add_row({z.real(), z.imag(), w.real(), std::remainder(w.imag(), kTwoPi), w.real() + p.log_a});
    }
    emit(c, t.text(), out);
}

void cmd_measure(const RunConfig& c, std::ostream& out) {
    const Rect box = c.bbox.value_or(default_bbox(c));
    const double s_min = measure_min_scale(c);
    std::size_t nx, ny;
    if (c.res) {
        nx = ny = *c.res;
    } else {
        nx = static_cast<std::size_t>(std::ceil(2.0 * box.width() / s_min));
        ny = static_cast<std::size_t>(std::ceil(2.0 * box.height() / s_min));
    }
    require(2.0 * std::max(box.width() / static_cast<double>(nx), box.height() / static_cast<double>(ny)) <= s_min,
            "measure needs grid cells at most half the smallest scale; raise --res or lower --scales");
    const BoolGrid mask = escape_scan(make_family(c), box, nx, ny, c.iters, c.bailout, c.threads);
    std::vector<double> scales;
    for (std::size_t k = 0; k < c.scales; ++k) scales.push_back(std::ldexp(c.top_scale, -static_cast<int>(k)));
    const GaugeSpec g = make_gauge(c.lambda, c.gamma);
    // the trend needs two non-zero sums; an empty mask still yields the table
    std::vector<CoverReport> reports;
    std::string trend;
    try {
        const ScalingSeries s = scaling_series([&](double) { return mask; }, g, scales, c.threads);
        reports = s.reports;
        trend = format_number(s.trend);
    } catch (const InsufficientDataError&) {
        for (double s : scales) {
            CoverReport r = mesh_cover(mask, s, c.threads).report;
            r.gauged_sum = gauged_sum(r, g);
            reports.push_back(r);
        }
        trend = "undefined";
    }
    emit(c, cover_reports_csv(reports), out);
    if (!c.out.empty()) out << "trend " << trend << '\n';
}

void cmd_thresholds(const RunConfig& c, std::ostream& out) {
    const ExpParams p = solve_fixed_points(c.lambda);
    const GammaThresholds g = gamma_thresholds(c.rho, c.c3, c.M, c.N0, p, c.eps);
    CsvTable t({"lambda", "beta", "rho", "c3", "M", "N0", "eps", "gamma_lower", "gamma_upper"});
    t.add_row({c.lambda, p.beta, c.rho, c.c3, c.M, static_cast<double>(c.N0), c.eps, g.lower, g.upper});
    emit(c, t.text(), out);
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
    const auto lines = run_suite(c.suite, c.threads);
    print_checks(out, lines);
    return all_pass(lines) ? kExitOk : kExitDomain;
}

}  // namespace

void validate(const RunConfig& c) {
    require(c.threads >= 1, "--threads must be at least 1");
    const bool uses_lambda = c.command == Command::Phi || c.command == Command::Gauge ||
                             c.command == Command::Thresholds || c.command == Command::Measure ||
                             ((c.command == Command::Escape || c.command == Command::Tract) && c.family == Family::Exp);
    if (uses_lambda) require(c.lambda > 0.0 && c.lambda < std::exp(-1.0), "--lambda must lie in (0, 1/e)");
    const bool uses_rho = c.command == Command::Ml || c.command == Command::Thresholds ||
                          ((c.command == Command::Escape || c.command == Command::Tract || c.command == Command::Measure) &&
                           c.family == Family::Ml);
    if (uses_rho) {
        require(std::isfinite(c.rho), "--rho must be finite");
        if (c.command != Command::Thresholds) require(c.rho > 0.5, "--rho must exceed 1/2");
    }
    switch (c.command) {
        case Command::Phi: require(!c.xs.empty(), "phi needs --xs"); break;
        case Command::Gauge:
            require(!c.ts.empty(), "gauge needs --ts");
            require(c.gamma >= 0.0, "--gamma must be non-negative");
            break;
        case Command::Ml: require(!c.zs.empty(), "ml needs at least one --z"); break;
        case Command::Escape:
        case Command::Tract:
        case Command::Measure: {
            if (c.bbox) require(c.bbox->valid(), "--bbox needs x0 < x1 and y0 < y1");
            if (c.res) require(*c.res >= (c.command == Command::Tract ? 16u : 1u), "--res is below the minimum grid size");
            require(c.iters >= 1, "--iters must be at least 1");
            require(c.bailout > 1.0, "--bailout must exceed 1");
            const std::string f = output_format(c);
            require(f == "csv" || f == "pgm", "--format must be csv or pgm");
            if (c.command == Command::Measure) {
                require(f == "csv", "measure writes CSV only");
                require(c.gamma >= 0.0, "--gamma must be non-negative");
                require(c.scales >= 4 && c.scales <= 40, "--scales must lie in [4, 40]");
                require(c.top_scale > 0.0, "--top-scale must be positive");
                require(std::sqrt(2.0) * c.top_scale <= 1.0 / solve_fixed_points(c.lambda).beta,
                        "--top-scale times sqrt 2 must not exceed 1/beta (the gauge domain)");
            } else if (f == "pgm") {
                require(!c.out.empty(), "PGM output needs --out");
            }
            break;
        }
        case Command::Thresholds:
            require(c.rho > 0.0, "--rho must be positive");
            require(c.c3 > 0.0, "--c3 must be positive");
            require(c.M > 0.0, "--M must be positive");
            require(c.N0 >= 1, "--N0 must be at least 1");
            require(c.eps > -1.0, "--eps must exceed -1");
            break;
        case Command::Verify: break;
    }
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        validate(c);
        switch (c.command) {
            case Command::Phi: cmd_phi(c, out); break;
            case Command::Gauge: cmd_gauge(c, out); break;
            case Command::Escape: cmd_escape(c, out); break;
            case Command::Tract: cmd_tract(c, out); break;
            case Command::Ml: cmd_ml(c, out); break;
            case Command::Measure: cmd_measure(c, out); break;
            case Command::Thresholds: cmd_thresholds(c, out); break;
            case Command::Verify: return cmd_verify(c, out);
        }
        return kExitOk;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }
}

namespace {

cplx parse_point(const std::string& s) {
    const auto comma = s.find(',');
    std::istringstream in(comma == std::string::npos ? s : s.substr(0, comma) + " " + s.substr(comma + 1));
    double re = 0.0, im = 0.0;
    in >> re;
    if (comma != std::string::npos) in >> im;
    if (!in || !(in >> std::ws).eof()) throw PreconditionError("--z expects re,im but got '" + s + "'");
    return {re, im};
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    c.threads = default_thread_count();

    CLI::App app{"Gauged Hausdorff measure experiments for entire transcendental dynamics"};
    app.require_subcommand(1);
    app.fallthrough();  // --threads may follow the subcommand
    app.add_option("--threads", c.threads, "worker threads (default: GAUGEDYN_THREADS or hardware)");

    const std::map<std::string, Family> families{{"exp", Family::Exp}, {"ml", Family::Ml}};
    std::vector<double> bbox;
    std::size_t res = 0;
    std::vector<std::string> zs;

    auto* phi_cmd = app.add_subcommand("phi", "table of Phi_lambda(x)");
    phi_cmd->add_option("--lambda", c.lambda, "E_lambda parameter in (0, 1/e)");
    phi_cmd->add_option("--xs", c.xs, "comma-separated x >= beta")->delimiter(',')->required();
    phi_cmd->add_option("--out", c.out);

    auto* gauge_cmd = app.add_subcommand("gauge", "table of h(t) = t^2 Phi(1/t)^gamma");
    gauge_cmd->add_option("--lambda", c.lambda);
    gauge_cmd->add_option("--gamma", c.gamma);
    gauge_cmd->add_option("--ts", c.ts, "comma-separated t in [0, 1/beta]")->delimiter(',')->required();
    gauge_cmd->add_option("--out", c.out);

    auto add_grid = [&](CLI::App* sub, bool iterates) {
        sub->add_option("--family", c.family, "exp or ml")->transform(CLI::CheckedTransformer(families, CLI::ignore_case));
        sub->add_option("--lambda", c.lambda);
        sub->add_option("--rho", c.rho);
        sub->add_option("--bbox", bbox, "x0,x1,y0,y1")->delimiter(',')->expected(4);
        sub->add_option("--res", res, "grid cells per side");
        sub->add_option("--out", c.out);
        sub->add_option("--format", c.format, "csv or pgm (default from the --out extension)");
        if (iterates) {
            sub->add_option("--iters", c.iters);
            sub->add_option("--bailout", c.bailout);
        }
    };
    auto* escape_cmd = app.add_subcommand("escape", "escaping-set mask on a z-plane grid");
    add_grid(escape_cmd, true);
    auto* tract_cmd = app.add_subcommand("tract", "logarithmic tract mask on a log-plane grid");
    add_grid(tract_cmd, false);

    auto* ml_cmd = app.add_subcommand("ml", "log of the Mittag-Leffler function at points");
    ml_cmd->add_option("--rho", c.rho);
    ml_cmd->add_option("--z", zs, "point re,im (repeatable)")->required();
    ml_cmd->add_option("--out", c.out);

    auto* measure_cmd = app.add_subcommand("measure", "mesh-box gauged sums of the escaping set");
    add_grid(measure_cmd, true);
    measure_cmd->add_option("--gamma", c.gamma);
    measure_cmd->add_option("--scales", c.scales, "number of dyadic scales");
    measure_cmd->add_option("--top-scale", c.top_scale, "largest mesh side");

    auto* thr_cmd = app.add_subcommand("thresholds", "gamma thresholds of the measure dichotomy");
    thr_cmd->add_option("--lambda", c.lambda);
    thr_cmd->add_option("--rho", c.rho);
    thr_cmd->add_option("--c3", c.c3);
    thr_cmd->add_option("--M", c.M);
    thr_cmd->add_option("--N0", c.N0);
    thr_cmd->add_option("--eps", c.eps);
    thr_cmd->add_option("--out", c.out);

    auto* verify_cmd = app.add_subcommand("verify", "module invariant suites");
    verify_cmd->add_option("suite", c.suite, "all, linearizer, mittag, logtransform, covering or distortion")
        ->check(CLI::IsMember({"all", "linearizer", "mittag", "logtransform", "covering", "distortion"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, r;
        const int code = app.exit(e, o, r);
        out << o.str();
        err << r.str();
        return code == 0 ? kExitOk : kExitDomain;
    }

    const std::pair<CLI::App*, Command> table[] = {
        {phi_cmd, Command::Phi},         {gauge_cmd, Command::Gauge}, {escape_cmd, Command::Escape},
        {tract_cmd, Command::Tract},     {ml_cmd, Command::Ml},       {measure_cmd, Command::Measure},
        {thr_cmd, Command::Thresholds},  {verify_cmd, Command::Verify}};
    for (const auto& [sub, cmd] : table)
        if (sub->parsed()) c.command = cmd;

    for (auto* sub : {escape_cmd, tract_cmd, measure_cmd}) {
        if (!sub->parsed()) continue;
        if (sub->count("--bbox")) c.bbox = Rect{bbox[0], bbox[1], bbox[2], bbox[3]};
        if (sub->count("--res")) c.res = res;
    }
    try {
        for (const auto& s : zs) c.zs.push_back(parse_point(s));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    return run(c, out, err);
}

}  // namespace gaugedyn::cli
