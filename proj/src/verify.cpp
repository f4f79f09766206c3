#include "gaugedyn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <utility>

#include <quadmath.h>

#include "gaugedyn/covering.hpp"
#include "gaugedyn/distortion.hpp"
#include "gaugedyn/dynamics.hpp"
#include "gaugedyn/errors.hpp"
#include "gaugedyn/linearizer.hpp"
#include "gaugedyn/logtransform.hpp"
#include "gaugedyn/mittag.hpp"

namespace gaugedyn {
namespace {

using Verdict = std::pair<bool, std::string>;

std::string g6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

class Suite {
public:
    Suite(std::string name, std::vector<CheckLine>& out) : name_(std::move(name)), out_(out) {}

    void check(const std::string& what, const std::function<Verdict()>& body) {
        CheckLine line{name_, what, false, {}};
        try {
            auto [ok, detail] = body();
            line.pass = ok;
            line.detail = std::move(detail);
        } catch (const std::exception& e) {
            line.detail = std::string("threw: ") + e.what();
        }
        out_.push_back(std::move(line));
    }

private:
    std::string name_;
    std::vector<CheckLine>& out_;
};

cplx koebe(cplx z) { return z / ((1.0 - z) * (1.0 - z)); }

// |f_rho(x) / (rho e^{x^rho}) - 1| for real x > 0 with every step in quad precision, so the
// deviation stays resolved where it falls below double epsilon.
double quad_sector_deviation(double rho, double x) {
    const __float128 lx = logq(x), r = rho, top = powq(x, r);
    __float128 sum = 0;
    for (int n = 0; n < 100000; ++n) {
        const __float128 term = expq(n * lx - lgammaq(n / r + 1) - top);  // scaled by e^{-x^rho}
        sum += term;
        if (n / r > top + 10 && term < 1e-40Q * sum) break;
    }
    return static_cast<double>(fabsq(sum / r - 1));
}

void linearizer_suite(std::vector<CheckLine>& out) {
    Suite s("linearizer", out);
    const std::vector<double> lambdas{0.05, 0.1, 0.2, 0.3};

    s.check("fixed points", [&] {
        double worst = 0.0;
        for (double l : lambdas) {
            const ExpParams p = solve_fixed_points(l);
            worst = std::max({worst, std::abs(std::log(l) + p.q - std::log(p.q)),
                              std::abs(std::log(l) + p.beta - std::log(p.beta))});
        }
        return Verdict{worst <= 1e-13, "max |log lambda + x - log x| = " + g6(worst) + " (<= 1e-13)"};
    });
    s.check("Koenigs quadratic coefficient", [] {
        const ExpParams p = solve_fixed_points(0.1);
        const double err = std::abs(koenigs_series(p, kDefaultSeriesOrder).coeffs[2] - 0.5 / (p.beta - 1.0));
        return Verdict{err <= 1e-10, "|a2 - 1/(2(beta-1))| = " + g6(err) + " (<= 1e-10)"};
    });
    s.check("series coefficient residual", [&] {
        double worst = 0.0;
        for (double l : lambdas)
            worst = std::max(worst, series_residual(koenigs_series(solve_fixed_points(l), kDefaultSeriesOrder)));
        return Verdict{worst <= 1e-10, "max coefficient mismatch = " + g6(worst) + " (<= 1e-10)"};
    });
    s.check("functional-equation residual", [&] {
        double worst = 0.0;
        for (double l : lambdas) {
            const GaugeSpec g = make_gauge(l, 1.0);
            const double b = g.params().beta;
            for (double x : {b + 0.5, 10.0, 1e3, 1e6}) {
                const double want = b * phi(g, x);
                worst = std::max(worst, std::abs(phi_log(g, std::log(l) + x) - want) / std::max(1.0, want));
            }
        }
        return Verdict{worst <= 1e-8, "max relative residual = " + g6(worst) + " (<= 1e-8)"};
    });
    s.check("Phi vanishes at the repelling fixed point", [] {
        const GaugeSpec g = make_gauge(0.1, 1.0);
        const double v = phi(g, g.params().beta);
        return Verdict{v == 0.0, "Phi(beta) = " + g6(v)};
    });
    s.check("Phi strictly increasing", [] {
        const GaugeSpec g = make_gauge(0.2, 1.0);
        double prev = -1.0;
        std::size_t bad = 0;
        for (double x = g.params().beta; x < 1e12; x *= 1.1) {
            const double v = phi(g, x);
            bad += !(v > prev);
            prev = v;
        }
        return Verdict{bad == 0, std::to_string(bad) + " non-increasing steps on a geometric grid"};
    });
    s.check("gauge equivalence", [] {
        std::vector<double> grid;
        for (int i = 0; i <= 120; ++i) grid.push_back(std::pow(10.0, -8.0 + 6.0 * i / 120.0));
        const GaugeSpec a = make_gauge(0.1, 1.0);
        const GaugeSpec b = make_gauge(0.2, std::log(a.params().beta) / std::log(solve_fixed_points(0.2).beta));
        const auto r = gauge_equivalence_ratio(a, b, grid);
        const double spread = r.max_ratio / r.min_ratio;
        return Verdict{r.min_ratio > 0.0 && spread <= 10.0, "ratio spread = " + g6(spread) + " (<= 10)"};
    });
}

void mittag_suite(std::vector<CheckLine>& out) {
    Suite s("mittag", out);
    s.check("series against exp", [] {
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            const cplx z = std::polar(10.0 * (k % 10 + 1) / 10.0, 0.7 * k);
            worst = std::max(worst, std::abs(ml_series(1.0, z) - std::exp(z)) / std::abs(std::exp(z)));
        }
        return Verdict{worst <= 1e-10, "max relative error = " + g6(worst) + " (<= 1e-10)"};
    });
    s.check("series against cosh sqrt", [] {
        double worst = 0.0;
        for (int k = 0; k < 50; ++k) {
            const double x = 20.0 * k / 49.0;
            const double c = std::cosh(std::sqrt(x));
            worst = std::max(worst, std::abs(ml_series(0.5, x).real() - c) / c);
        }
        return Verdict{worst <= 1e-10, "max relative error = " + g6(worst) + " (<= 1e-10)"};
    });
    s.check("sector asymptotics", [] {
        double prev = 1e300, worst = 0.0;
        bool decreasing = true;
        for (int k = 0; k <= 30; ++k) {
            const double x = 2.5 + 1.5 * k / 30.0;
            const double dev = quad_sector_deviation(3.0, x);
            decreasing = decreasing && dev < prev;
            worst = std::max(worst, dev);
            prev = dev;
        }
        return Verdict{worst <= 0.05 && decreasing,
                       "max |f/(3 e^{z^3}) - 1| on [2.5, 4] = " + g6(worst) + (decreasing ? ", decreasing" : ", not decreasing")};
    });
    s.check("series seam", [] {
        double worst = 0.0;
        for (double rho : {1.0, 2.0, 3.0}) worst = std::max(worst, make_ml_params(rho).seam_error);
        return Verdict{worst <= 0.05, "max seam error = " + g6(worst) + " (<= 0.05)"};
    });
    s.check("scaled map bounded on the cutoff circle", [] {
        const MLParams p = make_ml_params(2.0);
        double worst = -1e300;
        for (int k = 0; k < 720; ++k) worst = std::max(worst, ml_eval(p, std::polar(p.R, kTwoPi * k / 720.0)).real());
        return Verdict{worst <= std::log(0.5) + 1e-9, "max log|a f| on |z| = R: " + g6(worst) + " (<= log 1/2)"};
    });
    s.check("band packing density", [] {
        double margin = 1e300;
        std::string detail;
        for (double rho : {1.0, 2.0, 5.0}) {
            const SectorSpec spec{rho};
            const double K = packing_min_side(rho);
            const Square B{cplx(K / 2, 0.3), K, 0.0};
            const auto sq = sector_square_packing(spec, B);
            double area = 0.0;
            for (const auto& q : sq) area += q.area();
            const double dens = area / B.area();
            margin = std::min(margin, dens - ((1 - 1 / (2 * rho)) - kPackingSlack));
            detail += (detail.empty() ? "" : ", ") + ("rho " + g6(rho) + ": " + g6(dens));
        }
        return Verdict{margin >= 0.0, "densities " + detail};
    });
    s.check("order recovery", [] {
        const std::vector<double> r{5, 10, 20, 40};
        const double e = order_estimate(make_exponential(0.1), r).slope;
        const double m2 = order_estimate(make_mittag_leffler(2.0), r).slope;
        const double m3 = order_estimate(make_mittag_leffler(3.0), r).slope;
        const bool ok = std::abs(e - 1) <= 0.02 && std::abs(m2 - 2) <= 0.1 && std::abs(m3 - 3) <= 0.1;
        return Verdict{ok, "slopes exp " + g6(e) + ", rho 2 " + g6(m2) + ", rho 3 " + g6(m3)};
    });
}

void logtransform_suite(std::vector<CheckLine>& out, unsigned threads) {
    Suite s("logtransform", out);
    s.check("inverse branch", [] {
        const ExpParams p = solve_fixed_points(0.1);
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            const cplx zeta(1.0 + k, -50.0 + k);
            worst = std::max(worst, std::abs(exp_tract_F(p, exp_tract_G(p, zeta)) - zeta) / std::abs(zeta));
        }
        return Verdict{worst <= 1e-13, "max |F(G(zeta)) - zeta| / |zeta| = " + g6(worst)};
    });
    s.check("expansion bound", [] {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> re(1.0, 100.0), im(-100.0, 100.0);
        std::vector<cplx> ze(1000), zm(100);
        for (auto& z : ze) z = cplx(re(rng), im(rng));
        for (auto& z : zm) z = cplx(re(rng), im(rng));
        const double e = expansion_bound_check(make_exponential(0.1), ze);
        const double m = expansion_bound_check(make_mittag_leffler(2.0), zm);
        return Verdict{e <= 1.0 && m <= 1.0, "max |G'| Re zeta / 4pi: exp " + g6(e) + ", rho 2 " + g6(m) + " (<= 1)"};
    });
    s.check("band vacancy", [&] {
        std::size_t bad = 0, inside = 0;
        for (double rho : {1.0, 2.0}) {
            const FamilyMember f = make_mittag_leffler(rho);
            const SectorSpec spec{rho};
            const TractGrid t = tract_scan(f, Rect{-2.0, 8.0, -kPi, 3 * kPi}, 512, 512, threads);
            for (std::size_t j = 0; j < 512; ++j)
                for (std::size_t i = 0; i < 512; ++i)
                    if (t.in_tract.at(i, j)) {
                        ++inside;
                        bad += sector_contains(spec, t.in_tract.center(i, j));
                    }
        }
        return Verdict{bad == 0 && inside > 0,
                       std::to_string(bad) + " tract cells in the bands out of " + std::to_string(inside)};
    });
    s.check("tract density", [&] {
        const FamilyMember g = make_mittag_leffler(2.0);
        const double S = 4 * kPi;
        const Rect box{S / 2 - 0.5, 3 * S / 2 + 0.5, -S / 2 - 0.5, S / 2 + 0.5};
        const Square Q{cplx(S, 0.0), S, 0.0};
        const double d1 = u_r_density(tract_scan(g, box, 128, 128, threads), 10.0, Q);
        const double d4 = u_r_density(tract_scan(g, box, 512, 512, threads), 10.0, Q);
        const bool ok = d1 >= 0.125 - 0.05 && d4 >= 0.125 - 0.05 && std::abs(d1 - d4) <= 0.02;
        return Verdict{ok, "density " + g6(d1) + " at 128^2, " + g6(d4) + " at 512^2 (>= 1/8 - 0.05)"};
    });
    s.check("tract width integral", [] {
        const FamilyMember f = make_exponential(0.1);
        std::vector<double> gap;
        double refine = 0.0;
        for (double r : {200.0, 400.0, 800.0}) {
            const auto a = ab_integral_check(f, 0.3, 0.5, 50.0, r);
            const auto b = ab_integral_check(f, 0.3, 0.5, 50.0, r, 2048);
            refine = std::max(refine, std::abs(b.lhs / a.lhs - 1.0));
            gap.push_back(a.lhs - a.rhs);
        }
        const double spread = *std::max_element(gap.begin(), gap.end()) - *std::min_element(gap.begin(), gap.end());
        return Verdict{spread <= 1.0 && refine <= 0.01,
                       "gap spread " + g6(spread) + " (<= 1), refinement change " + g6(refine) + " (<= 0.01)"};
    });
}

void covering_suite(std::vector<CheckLine>& out, unsigned threads) {
    Suite s("covering", out);
    s.check("McMullen dichotomy", [] {
        const double lambda = 0.1, rho = 2.0, c3 = 0.01;
        const GaugeSpec base = make_gauge(lambda, 1.0);
        const double gstar = (std::log(rho) - std::log(c3)) / std::log(base.params().beta);
        const std::vector<double> delta(20, c3 / rho);
        bool ok = true;
        for (double f : {1.2, 0.8}) {
            const auto P = mcmullen_product_orbit(make_gauge(base.series, f * gstar), 2.0 * base.params().beta, delta);
            for (std::size_t n = 3; n < P.log_P.size(); ++n)
                ok = ok && (f > 1.0 ? P.log_P[n] > P.log_P[n - 1] : P.log_P[n] < P.log_P[n - 1]);
        }
        return Verdict{ok, "gamma* = " + g6(gstar) + "; increasing at 1.2 gamma*, decreasing at 0.8 gamma*"};
    });
    s.check("Besicovitch overlap", [] {
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> pos(0.0, 100.0), side(0.1, 10.0);
        std::size_t worst = 0, uncovered = 0;
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<std::pair<cplx, double>> req;
            for (int k = 0; k < 1000; ++k) req.emplace_back(cplx(pos(rng), pos(rng)), side(rng));
            const auto res = besicovitch_cover(req);
            std::vector<Square> kept;
            for (auto i : res.chosen) kept.push_back(Square{req[i].first, req[i].second, 0.0});
            for (const auto& r : req)
                uncovered += std::none_of(kept.begin(), kept.end(), [&](const Square& q) { return q.contains_closed(r.first); });
            worst = std::max(worst, res.max_overlap);
        }
        return Verdict{uncovered == 0 && worst <= kN0Impl,
                       "max overlap " + std::to_string(worst) + " (<= 16), uncovered centers " + std::to_string(uncovered)};
    });
    s.check("mesh cover thread independence", [&] {
        const FamilyMember f = make_exponential(0.1);
        const BoolGrid m = escape_scan(f, Rect{3.0, 5.0, -1.0, 1.0}, 128, 128, 100, kDefaultBailout, threads);
        const auto a = mesh_cover(m, 1.0 / 32, 1), b = mesh_cover(m, 1.0 / 32, std::max(2u, threads));
        return Verdict{a.cells == b.cells && a.report.count == b.report.count,
                       std::to_string(a.report.count) + " cells at side 1/32"};
    });
    s.check("R sequence growth", [] {
        const ExpParams p = solve_fixed_points(0.1);
        const auto R = R_sequence(p, 3 * p.beta / p.lambda, 6);
        bool ok = true;
        for (std::size_t n = 1; n < R.log_R.size(); ++n)
            ok = ok && R.log_R[n] >= p.lambda * std::exp(R.log_R[n - 1]) && R.log_R[n] - std::log(2.0) < p.lambda * std::exp(R.log_R[n - 1]) + 1e-9 * R.log_R[n];
        return Verdict{ok, std::to_string(R.log_R.size()) + " terms, log R_last = " + g6(R.log_R.back())};
    });
    s.check("nested construction densities", [] {
        const auto probe = exp_nesting_probe(0.3);
        double ratio = 1e300;
        for (const auto& lv : probe.levels) ratio = std::min(ratio, lv.min_ratio);
        return Verdict{ratio >= 0.9, "min measured/reported density = " + g6(ratio) + " (>= 0.9)"};
    });
    s.check("gamma thresholds", [] {
        const ExpParams p = solve_fixed_points(0.1);
        const auto g = gamma_thresholds(2.0, 0.01, 2.0, kN0Impl, p);
        const double want = (std::log(2.0) - std::log(0.01)) / std::log(p.beta);
        const bool ok = std::abs(g.lower - want) <= 1e-12 * want && g.upper < g.lower;
        return Verdict{ok, "lower " + g6(g.lower) + ", upper " + g6(g.upper)};
    });
}

void distortion_suite(std::vector<CheckLine>& out) {
    Suite s("distortion", out);
    s.check("Koebe sandwich", [] {
        double worst = 0.0;
        const Mobius m{1.0, 0.0, -0.4, 1.0};
        for (const auto& [f, z0, r] : {std::tuple<HoloMap, cplx, double>{koebe, 0.0, 1.0},
                                       {[](cplx z) { return std::exp(z); }, cplx(0.3, 0.2), 1.0},
                                       {m.as_map(), 0.0, 2.5}}) {
            const auto rep = koebe_sandwich(f, z0, r);
            worst = std::max({worst, rep.worst_hi, rep.worst_lo});
        }
        return Verdict{worst <= 1.01, "worst ratio to the bound = " + g6(worst) + " (<= 1.01)"};
    });
    s.check("first distortion lemma", [] {
        const double K = 3.0;
        const Mobius m{1.0, 0.0, -1.0 / K, 1.0};
        const auto rep = lemma_first_check(m.as_map(), 0.0, 1.0, K, 1600);
        const auto e = lemma_first_check([](cplx z) { return std::exp(z); }, cplx(0.5, 0.5), 0.01, 300.0);
        return Verdict{rep.holds() && e.holds(), "L " + g6(rep.L_measured) + " <= " + g6(rep.L_bound) + ", D " +
                                                     g6(rep.D_lower) + " <= " + g6(rep.D_bound)};
    });
    s.check("square image frames", [] {
        const HoloMap ex = [](cplx z) { return std::exp(z); };
        const Square Q{cplx(1.0, 0.0), 0.05, 0.0};
        const auto fr = square_image_frames(ex, Q, std::pow(101.0 / 99.0, 6), 0.1);
        return Verdict{fr.contained && fr.contains, "inner side " + g6(fr.inner.side) + ", outer side " + g6(fr.outer.side)};
    });
    s.check("density transfer", [] {
        const Rect box{0.0, 1.0, 0.0, 1.0};
        BoolGrid left(box, 200, 200);
        for (std::size_t j = 0; j < 200; ++j)
            for (std::size_t i = 0; i < 100; ++i) left.set(i, j, true);
        const auto t = density_transfer_check([](cplx z) { return std::exp(z); }, left, Square{cplx(0.5, 0.5), 1.0, 0.0});
        return Verdict{t.lhs <= t.rhs * 1.05, "dens " + g6(t.lhs) + " <= L^2 dens(image) " + g6(t.rhs)};
    });
    s.check("inverse and composition", [] {
        const Mobius f{cplx(1.0, 0.2), 0.3, cplx(0.4, -0.1), 1.0};
        const Mobius g{2.0, cplx(0.0, 1.0), cplx(0.2, 0.2), cplx(1.0, 0.5)};
        const cplx z0(0.1, 0.1);
        const double r = 0.4;
        const auto [c1, r1] = f.image_disk(z0, r);
        const auto U = disk_samples(z0, r, 10, 40), V = disk_samples(c1, r1, 10, 40);
        const auto ef = estimate_distortion(f.as_map(), U, 1e-7 * r);
        const auto einv = estimate_distortion(f.inverse().as_map(), V, 1e-7 * r1);
        const auto egf = estimate_distortion(compose(g, f).as_map(), U, 1e-7 * r);
        const double bound = f.distortion_on_disk(z0, r) * g.distortion_on_disk(c1, r1);
        const double sym = std::abs(einv.D_lower / ef.D_lower - 1.0);
        return Verdict{sym < 0.05 && egf.D_lower <= bound * (1 + 1e-6),
                       "|D(f^-1)/D(f) - 1| = " + g6(sym) + ", D(g o f) " + g6(egf.D_lower) + " <= " + g6(bound)};
    });
    s.check("quartic example", [] {
        const auto q = quartic_example();
        bool grows = q.D_lower.size() >= 2;
        for (std::size_t k = 1; k < q.D_lower.size(); ++k) grows = grows && q.D_lower[k] > q.D_lower[k - 1];
        const bool ok = std::abs(q.L_measured / q.L_closed - 1.0) < 1e-2 && grows;
        return Verdict{ok, "L " + g6(q.L_measured) + " vs closed form " + g6(q.L_closed) + ", D growing as the gap closes"};
    });
    s.check("normalized maps near the identity", [] {
        const double w = epsdelta_witness(koebe, 0.02);
        return Verdict{w < 0.1, "sup |f(z)/z - 1| on |z| < 0.02 = " + g6(w) + " (< 0.1)"};
    });
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"linearizer", "mittag", "logtransform", "covering", "distortion"};
    return names;
}

std::vector<CheckLine> run_suite(std::string_view suite, unsigned threads) {
    std::vector<CheckLine> out;
    const bool all = suite == "all";
    bool known = all;
    auto want = [&](std::string_view name) {
        const bool hit = all || suite == name;
        known = known || hit;
        return hit;
    };
    if (want("linearizer")) linearizer_suite(out);
    if (want("mittag")) mittag_suite(out);
    if (want("logtransform")) logtransform_suite(out, threads);
    if (want("covering")) covering_suite(out, threads);
    if (want("distortion")) distortion_suite(out);
    if (!known) throw PreconditionError("unknown suite '" + std::string(suite) + "'");
    return out;
}

void print_checks(std::ostream& out, const std::vector<CheckLine>& lines) {
    for (const auto& l : lines) out << (l.pass ? "PASS " : "FAIL ") << l.suite << ": " << l.name << ": " << l.detail << '\n';
}

bool all_pass(const std::vector<CheckLine>& lines) noexcept {
    return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.pass; });
}

}  // namespace gaugedyn
