// Acceptance gate: one PASS/FAIL line per criterion, each with its measured values and
// wall time. Exit status 0 iff every criterion passes within its time budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <quadmath.h>
#include <unistd.h>

#include "gaugedyn/cli.hpp"
#include "gaugedyn/covering.hpp"
#include "gaugedyn/distortion.hpp"
#include "gaugedyn/dynamics.hpp"
#include "gaugedyn/io.hpp"
#include "gaugedyn/linearizer.hpp"
#include "gaugedyn/logtransform.hpp"
#include "gaugedyn/mittag.hpp"

using namespace gaugedyn;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string g6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < budget_s;
    const bool ok = o.pass && in_time;
    failures += !ok;
    std::printf("%s %2d %s: %s [%.2f s of %.0f s%s]\n", ok ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(), secs,
                budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
}

// beta by bisection on lambda e^x - x, independent of the library root finder
double bisect_beta(double lambda) {
    long double lo = 1.0L, hi = 60.0L;
    for (int i = 0; i < 300; ++i) {
        const long double mid = 0.5L * (lo + hi);
        if (lambda * std::exp(mid) - mid > 0) hi = mid; else lo = mid;
    }
    return static_cast<double>(0.5L * (lo + hi));
}

// f_rho(x) e^{-x^rho} for real x > 0, summed with every step in quad precision
__float128 ml_scaled_quad(double rho, double x) {
    const __float128 lx = logq(x), r = rho, top = powq(x, r);
    __float128 sum = 0;
    for (int n = 0; n < 100000; ++n) {
        const __float128 term = expq(n * lx - lgammaq(n / r + 1) - top);
        sum += term;
        if (n / r > top + 10 && term < 1e-40Q * sum) break;
    }
    return sum;
}

// Multiplicity of open squares at every midpoint pair of the corner coordinates.
std::size_t brute_overlap(const std::vector<Square>& sq) {
    std::set<double> xs, ys;
    for (const auto& s : sq) {
        xs.insert(s.center.real() - s.side / 2);
        xs.insert(s.center.real() + s.side / 2);
        ys.insert(s.center.imag() - s.side / 2);
        ys.insert(s.center.imag() + s.side / 2);
    }
    std::vector<double> mx, my;
    for (auto a = xs.begin(), b = std::next(a); b != xs.end(); ++a, ++b) mx.push_back(0.5 * (*a + *b));
    for (auto a = ys.begin(), b = std::next(a); b != ys.end(); ++a, ++b) my.push_back(0.5 * (*a + *b));
    std::size_t best = 0;
    for (double x : mx) {
        std::vector<const Square*> col;
        for (const auto& s : sq)
            if (std::abs(x - s.center.real()) < s.side / 2) col.push_back(&s);
        for (double y : my) {
            std::size_t c = 0;
            for (const auto* s : col) c += std::abs(y - s->center.imag()) < s->side / 2;
            best = std::max(best, c);
        }
    }
    return best;
}

cplx koebe(cplx z) { return z / ((1.0 - z) * (1.0 - z)); }

std::string run_cli_bytes(const std::vector<std::string>& args, const std::string& path) {
    std::vector<const char*> argv{"gaugedyn"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    if (code != 0) throw std::runtime_error("cli exit " + std::to_string(code) + ": " + err.str());
    return read_file(path);
}

}  // namespace

int main() {
    criterion(1, "linearizer functional equation", 1.0, [] {
        double worst = 0.0;
        for (double l : {0.05, 0.1, 0.2, 0.3}) {
            const GaugeSpec g = make_gauge(l, 1.0);
            const double b = g.params().beta;
            for (double x : {b + 0.5, 10.0, 1e3, 1e6}) {
                const double rhs = b * phi(g, x);
                worst = std::max(worst, std::abs(phi_log(g, std::log(l) + x) - rhs) / rhs);
            }
        }
        return Outcome{worst <= 1e-8, "max relative residual " + g6(worst) + " (<= 1e-8)"};
    });

    criterion(2, "Koenigs coefficient", 1.0, [] {
        const double beta = bisect_beta(0.1);
        const double a2 = koenigs_series(solve_fixed_points(0.1), kDefaultSeriesOrder).coeffs[2];
        const double err = std::abs(a2 - 1.0 / (2.0 * (beta - 1.0)));
        return Outcome{err <= 1e-10, "a2 = " + g6(a2) + ", |a2 - 1/(2(beta-1))| = " + g6(err) + " (<= 1e-10)"};
    });

    criterion(3, "Mittag-Leffler closed forms", 1.0, [] {
        double e1 = 0.0, e2 = 0.0;
        for (int k = 0; k < 100; ++k) {
            const cplx z = std::polar(10.0 * ((k * 37) % 100 + 1) / 100.0, kTwoPi * k / 100.0);
            e1 = std::max(e1, std::abs(ml_series(1.0, z) - std::exp(z)) / std::abs(std::exp(z)));
        }
        for (int k = 0; k < 50; ++k) {
            const double x = 20.0 * k / 49.0;
            e2 = std::max(e2, std::abs(ml_series(0.5, x) - std::cosh(std::sqrt(x))) / std::cosh(std::sqrt(x)));
        }
        return Outcome{e1 <= 1e-10 && e2 <= 1e-10, "vs e^z " + g6(e1) + ", vs cosh sqrt z " + g6(e2) + " (<= 1e-10)"};
    });

    criterion(4, "sector asymptotics", 5.0, [] {
        double worst_dev = 0.0, worst_lib = 0.0, prev = INFINITY;
        bool decreasing = true;
        for (int k = 0; k <= 30; ++k) {
            const double x = 2.5 + 1.5 * k / 30.0;
            const __float128 s = ml_scaled_quad(3.0, x);  // f_3(x) e^{-x^3}
            const double dev = static_cast<double>(fabsq(s / 3 - 1));
            decreasing = decreasing && dev < prev;
            prev = dev;
            worst_dev = std::max(worst_dev, dev);
            const double lib = ml_series_log(3.0, x).real() - x * x * x;
            worst_lib = std::max(worst_lib, std::abs(lib - static_cast<double>(logq(s))));
            worst_dev = std::max(worst_dev, std::abs(std::expm1(lib - std::log(3.0))));
        }
        const bool ok = worst_dev <= 0.05 && decreasing && worst_lib <= 1e-12;
        return Outcome{ok, "max |f/(3e^{z^3}) - 1| " + g6(worst_dev) + (decreasing ? ", decreasing" : ", NOT decreasing") +
                               ", ml_series vs quad oracle (log) " + g6(worst_lib)};
    });

    criterion(5, "expansion bound", 10.0, [] {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> re(1.0, 100.0), im(-100.0, 100.0);
        std::vector<cplx> ze(1000), zm(100);
        for (auto& z : ze) z = cplx(re(rng), im(rng));
        for (auto& z : zm) z = cplx(re(rng), im(rng));
        const FamilyMember e = make_exponential(0.1);
        const double ve = expansion_bound_check(e, ze);
        double oracle = 0.0;  // |(F^{-1})'| = 1 / |zeta - log lambda|
        for (cplx z : ze) oracle = std::max(oracle, z.real() / std::abs(z - std::log(0.1)) / (4 * kPi));
        const double vm = expansion_bound_check(make_mittag_leffler(2.0), zm);
        const bool ok = ve <= 1.0 && vm <= 1.0 && std::abs(ve - oracle) <= 1e-12;
        return Outcome{ok, "exp " + g6(ve) + " (closed form " + g6(oracle) + "), rho 2 " + g6(vm) + " (<= 1)"};
    });

    criterion(6, "order recovery", 5.0, [] {
        const std::vector<double> r{5, 10, 20, 40};
        const double e = order_estimate(make_exponential(0.1), r).slope;
        const double m2 = order_estimate(make_mittag_leffler(2.0), r).slope;
        const double m3 = order_estimate(make_mittag_leffler(3.0), r).slope;
        const bool ok = std::abs(e - 1) <= 0.02 && std::abs(m2 - 2) <= 0.1 && std::abs(m3 - 3) <= 0.1;
        return Outcome{ok, "slopes exp " + g6(e) + ", rho 2 " + g6(m2) + ", rho 3 " + g6(m3)};
    });

    criterion(7, "sector vacancy and packing", 30.0, [] {
        std::size_t in_band = 0, tract = 0;
        for (double rho : {1.0, 2.0}) {
            const TractGrid t = tract_scan(make_mittag_leffler(rho), Rect{-2.0, 8.0, -kPi, 3 * kPi}, 512, 512, 4);
            for (std::size_t j = 0; j < 512; ++j)
                for (std::size_t i = 0; i < 512; ++i)
                    if (t.in_tract.at(i, j)) {
                        ++tract;
                        in_band += sector_contains(SectorSpec{rho}, t.in_tract.center(i, j));
                    }
        }
        bool pack_ok = true;
        std::string dens;
        for (double rho : {1.0, 2.0, 5.0}) {
            const double K = packing_min_side(rho);
            const Square B{cplx(1.0 + K / 2, -0.7), K, 0.0};
            const auto sq = sector_square_packing(SectorSpec{rho}, B);
            double area = 0.0;
            for (std::size_t i = 0; i < sq.size(); ++i) {
                pack_ok = pack_ok && B.contains_square(sq[i], 1e-9);
                const double h = sq[i].side / 2 - 1e-9;
                pack_ok = pack_ok && sector_contains(SectorSpec{rho}, sq[i].center + cplx(0, h)) &&
                          sector_contains(SectorSpec{rho}, sq[i].center - cplx(0, h));
                area += sq[i].area();
            }
            const double d = area / B.area();
            pack_ok = pack_ok && d >= (1 - 1 / (2 * rho)) - 0.05;
            dens += " " + g6(d);
        }
        return Outcome{in_band == 0 && tract > 0 && pack_ok,
                       std::to_string(in_band) + " of " + std::to_string(tract) + " tract cells in S_rho; densities" + dens};
    });

    criterion(8, "tract density", 60.0, [] {
        const FamilyMember g = make_mittag_leffler(2.0);
        const double S = 4 * kPi;
        const Rect box{S / 2 - 0.5, 3 * S / 2 + 0.5, -S / 2 - 0.5, S / 2 + 0.5};
        const Square Q{cplx(S, 0.0), S, 0.0};
        const double d1 = u_r_density(tract_scan(g, box, 128, 128, 4), 10.0, Q);
        const double d4 = u_r_density(tract_scan(g, box, 512, 512, 4), 10.0, Q);
        const bool ok = d1 >= 0.125 - 0.05 && d4 >= 0.125 - 0.05 && std::abs(d1 - d4) <= 0.02;
        return Outcome{ok, "density " + g6(d1) + " -> " + g6(d4) + " under 4x refinement (>= 0.075, change <= 0.02)"};
    });

    criterion(9, "McMullen dichotomy", 1.0, [] {
        const double lambda = 0.1, rho = 2.0, c3 = 0.01;
        const GaugeSpec base = make_gauge(lambda, 1.0);
        const double beta = base.params().beta;
        const double gstar = (std::log(rho) - std::log(c3)) / std::log(beta);
        const std::vector<double> delta(20, c3 / rho);
        bool up = true, down = true;
        for (double f : {1.2, 0.8}) {
            const GaugeSpec g = make_gauge(base.series, f * gstar);
            const auto P = mcmullen_product_orbit(g, 2.0 * beta, delta);
            // oracle: log P_n = gamma log Phi(2 beta) + (n - 1) gamma log beta + n log(c3 / rho)
            for (std::size_t n = 1; n <= P.log_P.size(); ++n) {
                const double closed = g.gamma * std::log(phi(g, 2.0 * beta)) +
                                      static_cast<double>(n - 1) * g.gamma * std::log(beta) +
                                      static_cast<double>(n) * std::log(c3 / rho);
                if (std::abs(P.log_P[n - 1] - closed) > 1e-9 * std::abs(closed)) (f > 1 ? up : down) = false;
            }
            for (std::size_t n = 3; n < P.log_P.size(); ++n) {
                if (f > 1.0 && !(P.log_P[n] > P.log_P[n - 1])) up = false;
                if (f < 1.0 && !(P.log_P[n] < P.log_P[n - 1])) down = false;
            }
        }
        return Outcome{up && down, "gamma* " + g6(gstar) + (up ? "; increasing" : "; NOT increasing") +
                                       " at 1.2 gamma*" + (down ? ", decreasing" : ", NOT decreasing") + " at 0.8 gamma*"};
    });

    criterion(10, "Besicovitch overlap", 30.0, [] {
        std::mt19937_64 rng(314);
        std::uniform_real_distribution<double> pos(0.0, 100.0), side(0.1, 10.0);
        std::size_t worst = 0, uncovered = 0, disagreements = 0;
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<std::pair<cplx, double>> req;
            for (int k = 0; k < 1000; ++k) req.emplace_back(cplx(pos(rng), pos(rng)), side(rng));
            const auto res = besicovitch_cover(req);
            std::vector<Square> kept;
            for (auto i : res.chosen) kept.push_back(Square{req[i].first, req[i].second, 0.0});
            for (const auto& r : req)
                uncovered += std::none_of(kept.begin(), kept.end(), [&](const Square& q) { return q.contains_closed(r.first); });
            const std::size_t exact = brute_overlap(kept);
            disagreements += exact != res.max_overlap;
            worst = std::max(worst, exact);
        }
        return Outcome{uncovered == 0 && worst <= 16 && disagreements == 0,
                       "worst exact overlap " + std::to_string(worst) + " (<= 16), uncovered " + std::to_string(uncovered) +
                           ", sweep/brute disagreements " + std::to_string(disagreements)};
    });

    criterion(11, "Koebe and distortion suite", 10.0, [] {
        std::vector<std::string> failed;
        auto need = [&](bool ok, const char* what) {
            if (!ok) failed.emplace_back(what);
        };
        const HoloMap ex = [](cplx z) { return std::exp(z); };
        const Mobius pole3{1.0, 0.0, -1.0 / 3.0, 1.0};

        for (const auto& [f, z0, r] : {std::tuple<HoloMap, cplx, double>{koebe, 0.0, 1.0}, {ex, cplx(0.3, 0.2), 1.0},
                                       {Mobius{1.0, 0.0, -0.4, 1.0}.as_map(), 0.0, 2.5}}) {
            const auto s = koebe_sandwich(f, z0, r);
            need(s.worst_hi <= 1.01 && s.worst_lo <= 1.01, "sandwich");
        }
        // (K+1)/(K-1) bounds; the Mobius map with its pole at K r attains L = ((K+1)/(K-1))^2
        const auto lf = lemma_first_check(pole3.as_map(), 0.0, 1.0, 3.0, 1600);
        need(lf.holds() && std::abs(lf.L_measured - 4.0) < 4e-3, "lemma bounds (Mobius)");
        need(lemma_first_check(ex, cplx(0.5, 0.5), 0.01, 300.0).holds(), "lemma bounds (exp)");

        const Square Q{cplx(1.0, 0.0), 0.05, 0.0};
        const auto fr = square_image_frames(ex, Q, std::pow(101.0 / 99.0, 6), 0.1);
        need(fr.contained && fr.contains, "frames (exp)");
        const auto fm = square_image_frames(Mobius{1.0, 0.0, -1.0, 1.0}.as_map(), Square{0.0, 0.1, 0.0},
                                            std::pow(11.0 / 9.0, 6), 0.2);
        need(fm.contained && fm.contains, "frames (Mobius)");

        BoolGrid left(Rect{0, 1, 0, 1}, 200, 200);
        for (std::size_t j = 0; j < 200; ++j)
            for (std::size_t i = 0; i < 100; ++i) left.set(i, j, true);
        const auto dt = density_transfer_check(ex, left, Square{cplx(0.5, 0.5), 1.0, 0.0});
        need(dt.lhs <= dt.rhs * 1.05, "density transfer");

        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        auto random_mobius = [&](cplx c, double r) {
            for (;;) {
                Mobius m{cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};
                if (std::abs(m.a * m.d - m.b * m.c) < 0.2) continue;
                if (std::abs(m.c * c + m.d) > 1.5 * std::abs(m.c) * r && std::abs(m.c * c + m.d) > 0.1) return m;
            }
        };
        double worst_sym = 0.0, worst_sub = 0.0;
        for (int trial = 0; trial < 8; ++trial) {
            const cplx z0(0.2, -0.1);
            const double r = 0.5;
            const Mobius f = random_mobius(z0, r);
            const auto [c1, r1] = f.image_disk(z0, r);
            const Mobius g = random_mobius(c1, r1);
            const double Df = f.distortion_on_disk(z0, r), Dg = g.distortion_on_disk(c1, r1);
            const auto ef = estimate_distortion(f.as_map(), disk_samples(z0, r, 10, 40), 1e-7 * r);
            const auto ei = estimate_distortion(f.inverse().as_map(), disk_samples(c1, r1, 10, 40), 1e-7 * r1);
            const auto egf = estimate_distortion(compose(g, f).as_map(), disk_samples(z0, r, 10, 40), 1e-7 * r);
            worst_sym = std::max(worst_sym, std::abs(ei.D_lower / ef.D_lower - 1.0));
            worst_sub = std::max(worst_sub, egf.D_lower / (Df * Dg));
            need(ef.D_lower <= Df * (1 + 1e-6), "D lower bound below the closed form");
        }
        need(worst_sym < 0.05, "D(f) = D(f^-1)");
        need(worst_sub <= 1.0 + 1e-6, "submultiplicativity");

        std::string detail = "D(f^-1)/D(f) - 1 max " + g6(worst_sym) + ", D(g o f)/(D(g)D(f)) max " + g6(worst_sub);
        for (const auto& f : failed) detail += "; failed: " + f;
        return Outcome{failed.empty(), detail};
    });

    criterion(12, "gauge equivalence", 1.0, [] {
        std::vector<double> grid;
        for (int i = 0; i <= 120; ++i) grid.push_back(std::pow(10.0, -8.0 + 6.0 * i / 120.0));
        const double b1 = bisect_beta(0.1), b2 = bisect_beta(0.2);
        const GaugeSpec h1 = make_gauge(0.1, 1.0);
        const GaugeSpec h2 = make_gauge(0.2, std::log(b1) / std::log(b2));  // beta1^gamma1 = beta2^gamma2
        const auto r = gauge_equivalence_ratio(h1, h2, grid);
        const double spread = r.max_ratio / r.min_ratio;
        return Outcome{r.min_ratio > 0 && spread <= 10.0, "ratio in [" + g6(r.min_ratio) + ", " + g6(r.max_ratio) +
                                                              "], spread " + g6(spread) + " (<= 10)"};
    });

    criterion(13, "tract width gap", 10.0, [] {
        const FamilyMember f = make_exponential(0.1);
        std::vector<double> gap;
        double refine = 0.0;
        for (double r : {200.0, 400.0, 800.0}) {
            const auto a = ab_integral_check(f, 0.3, 0.5, 50.0, r);
            const auto b = ab_integral_check(f, 0.3, 0.5, 50.0, r, 4096, 1025);
            refine = std::max(refine, std::abs(b.lhs / a.lhs - 1.0));
            gap.push_back(a.lhs - a.rhs);
        }
        const double spread = *std::max_element(gap.begin(), gap.end()) - *std::min_element(gap.begin(), gap.end());
        return Outcome{spread <= 1.0 && refine <= 0.01, "gaps " + g6(gap[0]) + " " + g6(gap[1]) + " " + g6(gap[2]) +
                                                            ", spread " + g6(spread) + " (<= 1), refinement " + g6(refine)};
    });

    criterion(14, "determinism across thread counts", 60.0, [] {
        namespace fs = std::filesystem;
        const fs::path dir = fs::temp_directory_path() / ("gaugedyn_accept_" + std::to_string(::getpid()));
        fs::create_directories(dir);
        bool same = true;
        std::string detail;
        const std::vector<std::pair<std::string, std::vector<std::string>>> runs{
            {"escape.pgm", {"escape", "--family", "exp", "--lambda", "0.1", "--bbox", "-2,8,-8,8", "--res", "512"}},
            {"tract.pgm", {"tract", "--family", "ml", "--rho", "2", "--res", "512"}},
            {"tract.csv", {"tract", "--family", "exp", "--lambda", "0.1", "--res", "128"}}};
        for (const auto& [name, base] : runs) {
            std::vector<std::string> bytes;
            for (const char* t : {"1", "4", "8"}) {
                const std::string path = (dir / (t + name)).string();
                auto args = base;
                args.insert(args.end(), {"--threads", t, "--out", path});
                bytes.push_back(run_cli_bytes(args, path));
            }
            const bool s = bytes[0] == bytes[1] && bytes[0] == bytes[2] && !bytes[0].empty();
            same = same && s;
            detail += (detail.empty() ? "" : ", ") + name + (s ? " identical" : " DIFFERS");
        }
        fs::remove_all(dir);
        return Outcome{same, detail + " at 1, 4, 8 threads"};
    });

    std::printf("%d of 14 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
