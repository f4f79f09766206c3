#include "gaugedyn/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "gaugedyn/errors.hpp"
#include "gaugedyn/io.hpp"
#include "gaugedyn/parallel.hpp"

namespace gaugedyn {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace

Square Mesh::cell(long i, long j) const {
    const double s = cell_side;
    return Square{origin + cplx((static_cast<double>(i) + 0.5) * s, (static_cast<double>(j) + 0.5) * s), s, 0.0};
}

MeshCover mesh_cover(const BoolGrid& mask, double cell_side, unsigned threads) {
    return mesh_cover(mask, cell_side, cplx(mask.bbox().x0, mask.bbox().y0), threads);
}

MeshCover mesh_cover(const BoolGrid& mask, double cell_side, cplx origin, unsigned threads) {
    if (mask.nx() == 0 || mask.ny() == 0) throw PreconditionError("mesh_cover needs a non-empty grid");
    if (!(cell_side >= 2.0 * std::max(mask.dx(), mask.dy())))
        throw PreconditionError("mesh cell side must be at least twice the grid spacing");
    const Rect& b = mask.bbox();
    MeshCover out;
    Mesh& m = out.mesh;
    m.cell_side = cell_side;
    m.origin = origin;
    m.i0 = static_cast<long>(std::floor((b.x0 - origin.real()) / cell_side));
    m.i1 = static_cast<long>(std::ceil((b.x1 - origin.real()) / cell_side));
    m.j0 = static_cast<long>(std::floor((b.y0 - origin.imag()) / cell_side));
    m.j1 = static_cast<long>(std::ceil((b.y1 - origin.imag()) / cell_side));
    m.i1 = std::max(m.i1, m.i0 + 1);
    m.j1 = std::max(m.j1, m.j0 + 1);
    const auto width = static_cast<std::size_t>(m.i1 - m.i0);
    const auto height = static_cast<std::size_t>(m.j1 - m.j0);

    auto mesh_index = [&](double v, double o, long lo, long hi) {
        const long k = static_cast<long>(std::floor((v - o) / cell_side));
        return std::clamp(k, lo, hi - 1);
    };
    std::vector<long> col_of(mask.nx());
    for (std::size_t i = 0; i < mask.nx(); ++i)
        col_of[i] = mesh_index(mask.center(i, 0).real(), origin.real(), m.i0, m.i1) - m.i0;
    std::vector<std::vector<std::size_t>> rows_of(height);
    for (std::size_t j = 0; j < mask.ny(); ++j)
        rows_of[static_cast<std::size_t>(mesh_index(mask.center(0, j).imag(), origin.imag(), m.j0, m.j1) - m.j0)]
            .push_back(j);

    std::vector<std::vector<std::uint8_t>> hit(height, std::vector<std::uint8_t>(width, 0));
    parallel_rows(height, threads, [&](std::size_t r) {
        for (std::size_t j : rows_of[r])
            for (std::size_t i = 0; i < mask.nx(); ++i)
                if (mask.at(i, j)) hit[r][static_cast<std::size_t>(col_of[i])] = 1;
    });
    for (std::size_t r = 0; r < height; ++r)
        for (std::size_t c = 0; c < width; ++c)
            if (hit[r][c]) out.cells.emplace_back(m.i0 + static_cast<long>(c), m.j0 + static_cast<long>(r));
    out.report.scale = cell_side;
    out.report.count = out.cells.size();
    return out;
}

double gauged_sum(const CoverReport& report, const GaugeSpec& spec) {
    if (report.count == 0) return 0.0;
    return static_cast<double>(report.count) * gauge_h(spec, std::sqrt(2.0) * report.scale);
}

ScalingSeries scaling_series(const std::function<BoolGrid(double)>& mask_at_scale, const GaugeSpec& spec,
                             const std::vector<double>& scales, unsigned threads) {
    if (scales.size() < 4) throw PreconditionError("scaling_series needs at least 4 scales");
    for (std::size_t i = 1; i < scales.size(); ++i)
        if (!(scales[i] > 0.0 && scales[i] * 2.0 <= scales[i - 1]))
            throw PreconditionError("scales must decrease by a factor of at least 2");
    ScalingSeries out;
    std::vector<double> x, y;
    for (double s : scales) {
        const BoolGrid mask = mask_at_scale(s);
        CoverReport rep = mesh_cover(mask, s, threads).report;
        rep.gauged_sum = gauged_sum(rep, spec);
        out.reports.push_back(rep);
        if (rep.gauged_sum > 0.0) {
            x.push_back(-std::log(s));
            y.push_back(std::log(rep.gauged_sum));
        }
    }
    if (x.size() < 2) throw InsufficientDataError("fewer than two scales with a non-zero gauged sum");
    out.trend = slope(x, y);
    return out;
}

std::string cover_reports_csv(const std::vector<CoverReport>& reports) {
    CsvTable t({"scale", "count", "gauged_sum"});
    for (const auto& r : reports) t.add_row({r.scale, static_cast<double>(r.count), r.gauged_sum});
    return t.text();
}

RSequence R_sequence(const ExpParams& params, double R0, std::size_t n) {
    if (!(R0 >= 3.0 * params.beta / params.lambda * (1.0 - 1e-12)))
        throw PreconditionError("R0 must be at least 3 beta / lambda");
    RSequence out;
    out.log_R.push_back(std::log(R0));
    out.k.push_back(0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        const double log_prev = out.log_R.back();
        const double target = params.lambda * std::exp(log_prev);  // log of e^{lambda R_{n-1}}
        if (!std::isfinite(target)) {
            out.truncated = true;
            break;
        }
        double k = std::max(0.0, std::ceil((target - log_prev) / kLn2));
        if (k < 0x1p52) {  // beyond this k is not resolved and the ceil stands
            while (k > 0.0 && log_prev + (k - 1.0) * kLn2 >= target) k -= 1.0;
            while (log_prev + k * kLn2 < target) k += 1.0;
        }
        out.k.push_back(k);
        out.log_R.push_back(log_prev + k * kLn2);
    }
    return out;
}

rSequence r_sequence(double rho, double M, double c, double K, double r0, std::size_t n) {
    if (!(rho > 0.0 && M > 0.0 && c > 0.0 && K > 0.0 && r0 > 0.0))
        throw PreconditionError("r_sequence needs positive parameters");
    rSequence out;
    out.log_r.push_back(std::log(r0));
    for (std::size_t i = 1; i <= n; ++i) {
        const double r = std::exp(out.log_r.back());
        if (!(r > 0.0)) {
            out.truncated = true;
            break;
        }
        const double next = -std::log(rho * M) - rho * c * K / (M * r);
        if (!std::isfinite(next)) {
            out.truncated = true;
            break;
        }
        out.log_r.push_back(next);
    }
    return out;
}

double next_side_log(double rho, double c, double K, double s) { return -std::log(rho) - rho * c * K / s; }

std::pair<std::size_t, std::size_t> interlacing_check(double rho, double M, double c, double K, const rSequence& r,
                                                      double s0, std::size_t steps) {
    std::size_t violations = 0, engaged = 0;
    const double logM = std::log(M);
    double log_s = std::log(s0);
    for (std::size_t k = 0; k < steps; ++k) {
        const double s = std::exp(log_s);
        if (!(s > 0.0)) break;
        const double log_next = next_side_log(rho, c, K, s);
        if (!std::isfinite(log_next)) break;
        for (std::size_t n = 0; n + 2 < r.log_r.size(); ++n) {
            const double v = log_s - logM;
            if (r.log_r[n + 1] <= v && v <= r.log_r[n]) {
                ++engaged;
                if (log_next - logM < r.log_r[n + 2]) ++violations;
            }
        }
        log_s = log_next;
    }
    return {violations, engaged};
}

McMullenProduct mcmullen_product(const GaugeSpec& spec, const std::vector<double>& d_seq,
                                 const std::vector<double>& delta_seq) {
    if (d_seq.size() != delta_seq.size()) throw PreconditionError("d_seq and delta_seq differ in length");
    McMullenProduct out;
    double log_prod = 0.0;
    for (std::size_t n = 0; n < d_seq.size(); ++n) {
        if (!(delta_seq[n] > 0.0 && delta_seq[n] <= 1.0)) throw PreconditionError("Delta_n must lie in (0, 1]");
        if (!(d_seq[n] > 0.0)) throw DomainError("d_n must be positive");
        if (n > 0 && !(d_seq[n] < d_seq[n - 1])) throw PreconditionError("d_seq must decrease");
        log_prod += std::log(delta_seq[n]);
        const double lp = spec.gamma * std::log(phi_log(spec, -std::log(d_seq[n]))) + log_prod;
        out.log_P.push_back(lp);
        out.P.push_back(std::exp(lp));
    }
    return out;
}

McMullenProduct mcmullen_product_orbit(const GaugeSpec& spec, double x0, const std::vector<double>& delta_seq) {
    McMullenProduct out;
    double log_prod = 0.0;
    for (std::size_t n = 0; n < delta_seq.size(); ++n) {
        if (!(delta_seq[n] > 0.0 && delta_seq[n] <= 1.0)) throw PreconditionError("Delta_n must lie in (0, 1]");
        log_prod += std::log(delta_seq[n]);
        const double lp = spec.gamma * std::log(phi_iterated(spec, x0, static_cast<unsigned>(n))) + log_prod;
        out.log_P.push_back(lp);
        out.P.push_back(std::exp(lp));
    }
    return out;
}

double NestElement::diam() const {
    return std::visit([](const auto& s) { return s.diam(); }, shape);
}

Rect NestElement::bounding_box() const {
    return std::visit([](const auto& s) { return s.bounding_box(); }, shape);
}

bool NestElement::contains(cplx z) const {
    return std::visit([z](const auto& s) { return s.contains(z); }, shape);
}

namespace {

std::vector<cplx> boundary_samples(const NestElement& e, std::size_t per_edge) {
    std::vector<cplx> verts;
    if (const auto* sq = std::get_if<Square>(&e.shape)) {
        const auto c = sq->corners();
        verts.assign(c.begin(), c.end());
    } else {
        verts = std::get<Polygon>(e.shape).vertices;
    }
    cplx centroid{0.0, 0.0};
    for (cplx v : verts) centroid += v;
    centroid /= static_cast<double>(verts.size());
    std::vector<cplx> out;
    for (std::size_t k = 0; k < verts.size(); ++k) {
        const cplx a = verts[k], b = verts[(k + 1) % verts.size()];
        for (std::size_t t = 0; t < per_edge; ++t) {
            const cplx p = a + (b - a) * (static_cast<double>(t) / static_cast<double>(per_edge));
            out.push_back(p + (centroid - p) * 1e-9);  // strictly inside the child
        }
    }
    return out;
}

bool element_in(const NestElement& parent, const NestElement& child) {
    for (cplx p : boundary_samples(child, 16))
        if (!parent.contains(p)) return false;
    return true;
}

[[noreturn]] void bad_line(std::size_t line, const std::string& why) {
    throw IoError("nesting family line " + std::to_string(line) + ": " + why);
}

}  // namespace

NestingFamily parse_nesting_family(const std::string& text) {
    NestingFamily fam;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    auto put = [](std::vector<double>& v, std::size_t n, double x) {
        if (v.size() <= n) v.resize(n + 1, std::numeric_limits<double>::quiet_NaN());
        v[n] = x;
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head == "d" || head == "delta") {
            std::size_t n;
            double v;
            if (!(ls >> n >> v)) bad_line(lineno, "expected '<level> <value>'");
            put(head == "d" ? fam.d_seq : fam.delta_seq, n, v);
            continue;
        }
        std::size_t level;
        try {
            std::size_t pos = 0;
            level = std::stoul(head, &pos);
            if (pos != head.size()) bad_line(lineno, "bad level");
        } catch (const std::logic_error&) {
            bad_line(lineno, "bad level '" + head + "'");
        }
        NestElement e;
        std::string kind;
        if (!(ls >> e.id >> e.parent_id >> kind)) bad_line(lineno, "expected '<id> <parent> <shape>'");
        if (e.parent_id == "-") e.parent_id.clear();
        if (kind == "square") {
            double cx, cy, side, angle;
            if (!(ls >> cx >> cy >> side >> angle)) bad_line(lineno, "square needs cx cy side angle");
            if (!(side > 0.0)) bad_line(lineno, "square side must be positive");
            e.shape = Square{cplx(cx, cy), side, angle};
        } else if (kind == "polygon") {
            Polygon p;
            double x, y;
            while (ls >> x >> y) p.vertices.emplace_back(x, y);
            if (!ls.eof() || p.vertices.size() < 3) bad_line(lineno, "polygon needs at least 3 vertex pairs");
            e.shape = std::move(p);
        } else {
            bad_line(lineno, "unknown shape '" + kind + "'");
        }
        std::string extra;
        if (kind == "square" && (ls >> extra)) bad_line(lineno, "trailing fields");
        if (fam.levels.size() <= level) fam.levels.resize(level + 1);
        fam.levels[level].push_back(std::move(e));
    }
    for (double v : fam.d_seq)
        if (std::isnan(v)) throw IoError("nesting family: gap in d entries");
    for (double v : fam.delta_seq)
        if (std::isnan(v)) throw IoError("nesting family: gap in delta entries");
    return fam;
}

std::string format_nesting_family(const NestingFamily& family) {
    std::string out;
    for (std::size_t n = 0; n < family.d_seq.size(); ++n)
        out += "d " + std::to_string(n) + " " + format_number(family.d_seq[n]) + "\n";
    for (std::size_t n = 0; n < family.delta_seq.size(); ++n)
        out += "delta " + std::to_string(n) + " " + format_number(family.delta_seq[n]) + "\n";
    for (std::size_t n = 0; n < family.levels.size(); ++n) {
        for (const auto& e : family.levels[n]) {
            out += std::to_string(n) + " " + e.id + " " + (e.parent_id.empty() ? "-" : e.parent_id);
            if (const auto* sq = std::get_if<Square>(&e.shape)) {
                out += " square " + format_number(sq->center.real()) + " " + format_number(sq->center.imag()) + " " +
                       format_number(sq->side) + " " + format_number(sq->angle);
            } else {
                out += " polygon";
                for (cplx v : std::get<Polygon>(e.shape).vertices)
                    out += " " + format_number(v.real()) + " " + format_number(v.imag());
            }
            out += "\n";
        }
    }
    return out;
}

NestingReport nesting_validate(const NestingFamily& family, std::size_t resolution, double slack) {
    NestingReport rep;
    auto fail = [&](int cond, std::size_t level, const std::string& id, std::string msg) {
        rep.valid = false;
        rep.condition = cond;
        rep.level = level;
        rep.element = id;
        rep.message = std::move(msg);
        return rep;
    };
    const auto& L = family.levels;
    for (std::size_t n = 0; n < L.size(); ++n) {
        for (const auto& e : L[n]) {
            if (n == 0) {
                if (!e.parent_id.empty()) return fail(1, n, e.id, "level-0 element has a parent");
                continue;
            }
            const auto it = std::find_if(L[n - 1].begin(), L[n - 1].end(),
                                         [&](const NestElement& p) { return p.id == e.parent_id; });
            if (it == L[n - 1].end()) return fail(1, n, e.id, "parent '" + e.parent_id + "' not found");
            if (!element_in(*it, e)) return fail(1, n, e.id, "not contained in parent '" + e.parent_id + "'");
        }
    }
    for (std::size_t n = 0; n < family.d_seq.size(); ++n) {
        if (!(family.d_seq[n] > 0.0)) return fail(2, n, "", "d_n must be positive");
        if (n > 0 && !(family.d_seq[n] < family.d_seq[n - 1])) return fail(2, n, "", "d_seq must decrease");
    }
    for (std::size_t n = 0; n < L.size() && n < family.d_seq.size(); ++n)
        for (const auto& e : L[n])
            if (e.diam() > family.d_seq[n] * (1.0 + 1e-12))
                return fail(2, n, e.id, "diameter " + format_number(e.diam()) + " exceeds d_n");
    for (std::size_t n = 0; n + 1 < L.size(); ++n) {
        double min_dens = 1.0;
        for (const auto& b : L[n]) {
            std::vector<const NestElement*> kids;
            for (const auto& c : L[n + 1])
                if (c.parent_id == b.id) kids.push_back(&c);
            const Rect box = b.bounding_box();
            std::size_t inside = 0, hit = 0;
            for (std::size_t j = 0; j < resolution; ++j) {
                for (std::size_t i = 0; i < resolution; ++i) {
                    const cplx z(box.x0 + (static_cast<double>(i) + 0.5) * box.width() / static_cast<double>(resolution),
                                 box.y0 + (static_cast<double>(j) + 0.5) * box.height() / static_cast<double>(resolution));
                    if (!b.contains(z)) continue;
                    ++inside;
                    for (const auto* c : kids)
                        if (c->contains(z)) {
                            ++hit;
                            break;
                        }
                }
            }
            if (inside == 0) return fail(3, n, b.id, "element covers no sample point");
            const double dens = static_cast<double>(hit) / static_cast<double>(inside);
            min_dens = std::min(min_dens, dens);
            if (n >= family.delta_seq.size()) return fail(3, n, b.id, "no Delta_n for this level");
            if (!(family.delta_seq[n] > 0.0)) return fail(3, n, b.id, "Delta_n must be positive");
            if (dens < family.delta_seq[n] - slack)
                return fail(3, n, b.id, "density " + format_number(dens) + " below Delta_n");
        }
        rep.min_density.push_back(min_dens);
    }
    return rep;
}

NestingProbe exp_nesting_probe(double lambda, std::size_t resolution, std::size_t max_level1) {
    if (resolution < 16) throw PreconditionError("probe resolution must be at least 16");
    const ExpParams p = solve_fixed_points(lambda);
    const double log_lam = p.log_lambda;
    NestingProbe out;
    out.R0 = 3.0 * p.beta / lambda;
    const RSequence rs = R_sequence(p, out.R0, 2);
    if (rs.log_R.size() < 3) throw ConvergenceError("R sequence truncated before R_2");
    out.R1 = std::exp(rs.log_R[1]);
    out.log_R2 = rs.log_R[2];
    // |G'| <= 1/Re(zeta - log lambda) < 1/side on every square of Q_R, so a pullback has diam < sqrt 2.
    out.margin = 2.0 * std::sqrt(2.0);
    if (!(out.R0 > out.margin)) throw PreconditionError("R0 too small for the pullback margin");

    const Square q0{cplx(1.5 * out.R0, 0.0), out.R0, 0.0};
    const Square q0_star{q0.center, out.R0 - out.margin, 0.0};
    using Key = std::tuple<long, long, long>;  // (k, j, branch)
    auto square_of = [&](long k, long j, double R) {
        const double side = std::ldexp(R, static_cast<int>(k));
        return Square{cplx(1.5 * side, static_cast<double>(j) * side), side, 0.0};
    };
    std::map<Key, bool> contained;
    auto pulled_inside = [&](const Key& key) {
        if (auto it = contained.find(key); it != contained.end()) return it->second;
        const Square qh = square_of(std::get<0>(key), std::get<1>(key), out.R1);
        const auto c = qh.corners();
        bool ok = true;
        for (std::size_t e = 0; e < 4 && ok; ++e)
            for (int t = 0; t < 32 && ok; ++t) {
                const cplx z = c[e] + (c[(e + 1) % 4] - c[e]) * (t / 32.0);
                const cplx w = std::log(z - log_lam) + cplx(0.0, kTwoPi * static_cast<double>(std::get<2>(key)));
                ok = q0.contains_closed(w);
            }
        contained.emplace(key, ok);
        return ok;
    };

    std::size_t a1 = 0, u_star = 0;
    const std::size_t N = resolution;
    for (std::size_t j = 0; j < N; ++j) {
        for (std::size_t i = 0; i < N; ++i) {
            const cplx x(q0.center.real() + ((static_cast<double>(i) + 0.5) / static_cast<double>(N) - 0.5) * q0.side,
                         q0.center.imag() + ((static_cast<double>(j) + 0.5) / static_cast<double>(N) - 0.5) * q0.side);
            const cplx zeta = log_lam + std::exp(x);
            if (!(zeta.real() > out.R1)) continue;
            if (q0_star.contains(x)) ++u_star;
            const long k = static_cast<long>(std::floor(std::log2(zeta.real() / out.R1)));
            const double side = std::ldexp(out.R1, static_cast<int>(k));
            const long jj = std::lround(zeta.imag() / side);
            const long m = std::lround((x.imag() - std::arg(zeta - log_lam)) / kTwoPi);
            if (pulled_inside({k, jj, m})) ++a1;
        }
    }
    ProbeLevel lv0;
    lv0.elements = 1;
    lv0.min_measured = static_cast<double>(a1) / static_cast<double>(N * N);
    lv0.min_reported = static_cast<double>(u_star) / static_cast<double>(N * N);
    lv0.min_ratio = lv0.min_reported > 0.0 ? lv0.min_measured / lv0.min_reported : 0.0;
    out.levels.push_back(lv0);

    std::vector<Key> keys;
    for (const auto& [key, ok] : contained)
        if (ok) keys.push_back(key);
    std::vector<Key> picked;
    if (keys.size() <= max_level1) {
        picked = keys;
    } else {
        for (std::size_t t = 0; t < max_level1; ++t) picked.push_back(keys[t * keys.size() / max_level1]);
    }
    ProbeLevel lv1;
    lv1.elements = picked.size();
    lv1.min_measured = lv1.min_reported = lv1.min_ratio = std::numeric_limits<double>::infinity();
    const double log_target = std::log(std::exp(out.log_R2) - log_lam);
    const std::size_t M = std::max<std::size_t>(16, N / 4);
    for (const Key& key : picked) {
        const Square qh = square_of(std::get<0>(key), std::get<1>(key), out.R1);
        const Square qh_star{qh.center, qh.side - out.margin, 0.0};
        double w_all = 0.0, w_hit = 0.0;
        std::size_t star_hit = 0;
        for (std::size_t j = 0; j < M; ++j) {
            for (std::size_t i = 0; i < M; ++i) {
                const cplx z(qh.center.real() + ((static_cast<double>(i) + 0.5) / static_cast<double>(M) - 0.5) * qh.side,
                             qh.center.imag() + ((static_cast<double>(j) + 0.5) / static_cast<double>(M) - 0.5) * qh.side);
                const double cs = std::cos(z.imag());
                const bool in_u = cs > 0.0 && z.real() + std::log(cs) > log_target;
                const double w = 1.0 / std::norm(z - log_lam);
                w_all += w;
                if (in_u) w_hit += w;
                if (in_u && qh_star.contains(z)) ++star_hit;
            }
        }
        const double x0 = qh.center.real() - qh.side / 2 - log_lam, x1 = x0 + qh.side;
        const double y0 = qh.center.imag() - qh.side / 2, y1 = y0 + qh.side;
        const double near_y = std::clamp(0.0, y0, y1);
        const double far_y = std::max(std::abs(y0), std::abs(y1));
        const double Lphi = std::hypot(x1, far_y) / std::hypot(x0, near_y);
        const double measured = w_hit / w_all;
        const double reported = static_cast<double>(star_hit) / static_cast<double>(M * M) / (Lphi * Lphi);
        lv1.min_measured = std::min(lv1.min_measured, measured);
        lv1.min_reported = std::min(lv1.min_reported, reported);
        lv1.min_ratio = std::min(lv1.min_ratio, reported > 0.0 ? measured / reported : 0.0);
    }
    if (picked.empty()) lv1.min_measured = lv1.min_reported = lv1.min_ratio = 0.0;
    out.levels.push_back(lv1);
    return out;
}

std::size_t max_overlap(const std::vector<Square>& squares) {
    std::vector<double> xs;
    xs.reserve(2 * squares.size());
    for (const auto& s : squares) {
        xs.push_back(s.center.real() - s.side / 2);
        xs.push_back(s.center.real() + s.side / 2);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::size_t best = 0;
    std::vector<std::pair<double, int>> events;
    for (std::size_t a = 0; a + 1 < xs.size(); ++a) {
        const double xm = 0.5 * (xs[a] + xs[a + 1]);
        events.clear();
        for (const auto& s : squares) {
            if (std::abs(xm - s.center.real()) < s.side / 2) {
                events.emplace_back(s.center.imag() - s.side / 2, +1);
                events.emplace_back(s.center.imag() + s.side / 2, -1);
            }
        }
        // open intervals: at a shared coordinate the closing end goes first
        std::sort(events.begin(), events.end());
        long cur = 0;
        for (const auto& ev : events) {
            cur += ev.second;
            best = std::max(best, static_cast<std::size_t>(std::max(cur, 0L)));
        }
    }
    return best;
}

BesicovitchResult besicovitch_cover(const std::vector<std::pair<cplx, double>>& requests) {
    for (const auto& r : requests)
        if (!(r.second > 0.0)) throw PreconditionError("Besicovitch requests need positive sides");
    std::vector<std::size_t> order(requests.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return requests[a].second > requests[b].second; });
    BesicovitchResult out;
    std::vector<Square> kept;
    for (std::size_t idx : order) {
        const cplx c = requests[idx].first;
        const bool covered =
            std::any_of(kept.begin(), kept.end(), [c](const Square& s) { return s.contains(c); });
        if (covered) continue;
        kept.push_back(Square{c, requests[idx].second, 0.0});
        out.chosen.push_back(idx);
    }
    out.max_overlap = max_overlap(kept);
    return out;
}

GammaThresholds gamma_thresholds(double rho, double c3, double M, std::size_t N0, const ExpParams& params,
                                 double eps) {
    if (!(rho > 0.0 && c3 > 0.0 && M > 0.0) || N0 < 1 || !(eps >= 0.0))
        throw PreconditionError("gamma_thresholds needs rho, c3, M > 0, N0 >= 1 and eps >= 0");
    const double lb = std::log(params.beta);
    GammaThresholds g;
    g.lower = (std::log(rho) - std::log(c3)) / lb;
    g.upper = (std::log(2.0 * rho) - (2.0 * std::log(M) + std::log(static_cast<double>(N0))) - std::log1p(eps)) / lb;
    return g;
}

}  // namespace gaugedyn
