#include "gaugedyn/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gaugedyn/errors.hpp"
#include "gaugedyn/parallel.hpp"

namespace gaugedyn {

namespace {

void check_koebe_args(double r, double d0, double s) {
    if (!(r > 0.0) || !(d0 > 0.0)) throw PreconditionError("Koebe bounds need r > 0 and d0 > 0");
    if (!(s >= 0.0)) throw PreconditionError("Koebe bounds need s >= 0");
    if (!(s < r)) throw DomainError("Koebe bounds need s < r");
}

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_cross(cplx p1, cplx p2, cplx q1, cplx q2) {
    const double d1 = cross(p2 - p1, q1 - p1), d2 = cross(p2 - p1, q2 - p1);
    const double d3 = cross(q2 - q1, p1 - q1), d4 = cross(q2 - q1, p2 - q1);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

}  // namespace

Bounds koebe_derivative_bounds(double r, double d0, double s) {
    check_koebe_args(r, d0, s);
    return {r * r * d0 * (r - s) / std::pow(r + s, 3), r * r * d0 * (r + s) / std::pow(r - s, 3)};
}

Bounds koebe_value_bounds(double r, double d0, double s) {
    check_koebe_args(r, d0, s);
    return {r * r * d0 * s / ((r + s) * (r + s)), r * r * d0 * s / ((r - s) * (r - s))};
}

cplx fd_derivative(const HoloMap& f, cplx z, double h) { return (f(z + h) - f(z - h)) / (2.0 * h); }

bool boundary_image_is_simple(const HoloMap& f, const std::vector<cplx>& curve) {
    const std::size_t n = curve.size();
    if (n < 3) throw PreconditionError("boundary curve needs at least 3 points");
    std::vector<cplx> w(n);
    for (std::size_t k = 0; k < n; ++k) w[k] = f(curve[k]);
    for (std::size_t i = 0; i < n; ++i) {
        if (w[i] == w[(i + 1) % n]) continue;
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // adjacent through the wrap
            if (segments_cross(w[i], w[(i + 1) % n], w[j], w[(j + 1) % n])) return false;
        }
    }
    return true;
}

DistortionEstimate estimate_distortion(const HoloMap& f, const std::vector<cplx>& samples, double h,
                                       unsigned threads, double injectivity_tol) {
    const std::size_t n = samples.size();
    if (n < 2) throw PreconditionError("estimate_distortion needs at least 2 samples");
    if (!(h > 0.0)) throw PreconditionError("difference step must be positive");
    std::vector<cplx> w(n);
    std::vector<double> df(n);
    parallel_rows(n, threads, [&](std::size_t k) {
        w[k] = f(samples[k]);
        df[k] = std::abs(fd_derivative(f, samples[k], h));
    });
    DistortionEstimate est;
    est.min_df = *std::min_element(df.begin(), df.end());
    est.max_df = *std::max_element(df.begin(), df.end());
    if (!(est.min_df > 0.0) || !std::isfinite(est.max_df)) throw IllConditionedError("f' vanishes or overflows on the samples");
    est.L = est.max_df / est.min_df;

    std::vector<double> row_min(n, std::numeric_limits<double>::infinity()), row_max(n, 0.0);
    parallel_rows(n, threads, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dz = std::abs(samples[i] - samples[j]);
            if (dz == 0.0) continue;
            const double q = std::abs(w[i] - w[j]) / dz;
            row_min[i] = std::min(row_min[i], q);
            row_max[i] = std::max(row_max[i], q);
        }
    });
    est.min_quotient = *std::min_element(row_min.begin(), row_min.end());
    est.max_quotient = *std::max_element(row_max.begin(), row_max.end());
    if (!(est.min_quotient > injectivity_tol * est.min_df))
        throw IllConditionedError("difference quotient collapses on the samples: not injective");
    est.D_lower = std::max(1.0, est.max_quotient / est.min_quotient);
    return est;
}

DistortionEstimate estimate_distortion(const HoloMap& f, const Square& region, std::size_t n_samples,
                                       unsigned threads, double injectivity_tol) {
    const auto m = std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(n_samples)))));
    const cplx rot = std::polar(1.0, region.angle);
    std::vector<cplx> pts;
    pts.reserve(m * m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < m; ++i) {
            const double u = -0.5 + static_cast<double>(i) / static_cast<double>(m - 1);
            const double v = -0.5 + static_cast<double>(j) / static_cast<double>(m - 1);
            pts.push_back(region.center + rot * cplx(u, v) * region.side);
        }
    std::vector<cplx> boundary;
    const auto c = region.corners();
    const std::size_t per_edge = std::max<std::size_t>(16, 4 * m);
    for (std::size_t e = 0; e < 4; ++e)
        for (std::size_t t = 0; t < per_edge; ++t)
            boundary.push_back(c[e] + (c[(e + 1) % 4] - c[e]) * (static_cast<double>(t) / static_cast<double>(per_edge)));
    if (!boundary_image_is_simple(f, boundary)) throw IllConditionedError("image of the square boundary crosses itself: not injective");
    return estimate_distortion(f, pts, 1e-6 * region.side, threads, injectivity_tol);
}

std::vector<cplx> disk_samples(cplx z0, double r, std::size_t rings, std::size_t per_ring) {
    std::vector<cplx> pts{z0};
    for (std::size_t k = 1; k <= rings; ++k)
        for (std::size_t j = 0; j < per_ring; ++j)
            pts.push_back(z0 + std::polar(r * static_cast<double>(k) / static_cast<double>(rings),
                                          kTwoPi * (static_cast<double>(j) + 0.5 * static_cast<double>(k % 2)) /
                                              static_cast<double>(per_ring)));
    return pts;
}

LemmaFirstReport lemma_first_check(const HoloMap& f, cplx z0, double r, double K, std::size_t n_samples) {
    if (!(K > 1.0)) throw PreconditionError("lemma_first_check needs K > 1");
    if (!(r > 0.0)) throw PreconditionError("lemma_first_check needs r > 0");
    const auto rings = std::max<std::size_t>(2, static_cast<std::size_t>(std::sqrt(static_cast<double>(n_samples) / 4.0)));
    const auto per_ring = std::max<std::size_t>(8, n_samples / rings);
    const auto est = estimate_distortion(f, disk_samples(z0, r, rings, per_ring), 1e-6 * r);
    const double q = (K + 1.0) / (K - 1.0);
    return {est.L, std::pow(q, 4), est.D_lower, std::pow(q, 6)};
}

SandwichReport koebe_sandwich(const HoloMap& f, cplx z0, double r, std::size_t rings, std::size_t per_ring,
                              double max_s_fraction) {
    const double h = 1e-6 * r;
    const double d0 = std::abs(fd_derivative(f, z0, h));
    SandwichReport rep;
    for (cplx z : disk_samples(z0, max_s_fraction * r, rings, per_ring)) {
        const double s = std::abs(z - z0);
        const Bounds b = koebe_derivative_bounds(r, d0, s);
        const double df = std::abs(fd_derivative(f, z, h));
        rep.worst_hi = std::max(rep.worst_hi, df / b.hi);
        rep.worst_lo = std::max(rep.worst_lo, b.lo / df);
    }
    return rep;
}

SquareFrames square_image_frames(const HoloMap& f, const Square& Q, double d, double eps, std::size_t n_boundary) {
    if (!(d >= 1.0)) throw PreconditionError("distortion d must be >= 1");
    if (!(eps > 0.0 && eps < 1.0 / std::sqrt(2.0))) throw PreconditionError("eps must lie in (0, 1/sqrt 2)");
    if (n_boundary < 4) throw PreconditionError("n_boundary must be at least 4");
    const cplx w0 = f(Q.center);
    const cplx fp = fd_derivative(f, Q.center, 1e-6 * Q.side);
    const double base = std::abs(fp) * Q.side;
    const double angle = Q.angle + std::arg(fp);
    SquareFrames fr;
    fr.inner = Square{w0, base * (1.0 - std::sqrt(2.0) * eps) / d, angle};
    fr.outer = Square{w0, base * d * (1.0 + std::sqrt(2.0) * eps), angle};
    fr.contained = fr.contains = true;
    const auto c = Q.corners();
    const std::size_t per_edge = (n_boundary + 3) / 4;
    for (std::size_t e = 0; e < 4; ++e) {
        for (std::size_t t = 0; t < per_edge; ++t) {
            const cplx w = f(c[e] + (c[(e + 1) % 4] - c[e]) * (static_cast<double>(t) / static_cast<double>(per_edge)));
            if (fr.inner.contains(w)) fr.contained = false;
            if (!fr.outer.contains_closed(w)) fr.contains = false;
        }
    }
    return fr;
}

DensityTransfer density_transfer_check(const HoloMap& f, const BoolGrid& A, const Square& U, unsigned threads) {
    const double h = 1e-6 * U.side;
    struct Row {
        std::size_t cu = 0, ca = 0;
        double wu = 0.0, wa = 0.0;
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    };
    std::vector<Row> rows(A.ny());
    parallel_rows(A.ny(), threads, [&](std::size_t j) {
        Row& r = rows[j];
        for (std::size_t i = 0; i < A.nx(); ++i) {
            const cplx z = A.center(i, j);
            if (!U.contains(z)) continue;
            const double df = std::abs(fd_derivative(f, z, h));
            const double w = df * df;
            ++r.cu;
            r.wu += w;
            r.lo = std::min(r.lo, df);
            r.hi = std::max(r.hi, df);
            if (A.at(i, j)) {
                ++r.ca;
                r.wa += w;
            }
        }
    });
    Row t;
    for (const Row& r : rows) {
        t.cu += r.cu;
        t.ca += r.ca;
        t.wu += r.wu;
        t.wa += r.wa;
        t.lo = std::min(t.lo, r.lo);
        t.hi = std::max(t.hi, r.hi);
    }
    if (t.cu == 0) throw PreconditionError("region U holds no grid cells");
    if (!(t.lo > 0.0)) throw IllConditionedError("f' vanishes on U");
    DensityTransfer out;
    out.L = t.hi / t.lo;
    out.lhs = static_cast<double>(t.ca) / static_cast<double>(t.cu);
    out.rhs = out.L * out.L * t.wa / t.wu;
    return out;
}

cplx Mobius::derivative(cplx z) const {
    const cplx den = c * z + d;
    return (a * d - b * c) / (den * den);
}

HoloMap Mobius::as_map() const {
    const Mobius m = *this;
    return [m](cplx z) { return m(z); };
}

double Mobius::distortion_on_disk(cplx z0, double r) const {
    const double m = std::abs(c * z0 + d), cr = std::abs(c) * r;
    if (!(m > cr)) throw DomainError("Mobius pole meets the closed disk");
    const double q = (m + cr) / (m - cr);
    return q * q;
}

std::pair<cplx, double> Mobius::image_disk(cplx z0, double r) const {
    if (!(std::abs(c * z0 + d) > std::abs(c) * r)) throw DomainError("Mobius pole meets the closed disk");
    const cplx p1 = (*this)(z0 + r), p2 = (*this)(z0 + r * std::polar(1.0, kTwoPi / 3)),
               p3 = (*this)(z0 + r * std::polar(1.0, 2 * kTwoPi / 3));
    // circumcenter of p1, p2, p3
    const cplx b = p2 - p1, cc = p3 - p1;
    const double den = 2.0 * cross(b, cc);
    const cplx center = p1 + cplx(cc.imag() * std::norm(b) - b.imag() * std::norm(cc),
                                  b.real() * std::norm(cc) - cc.real() * std::norm(b)) / den;
    return {center, std::abs(p1 - center)};
}

Mobius compose(const Mobius& g, const Mobius& f) {
    return Mobius{g.a * f.a + g.b * f.c, g.a * f.b + g.b * f.d, g.c * f.a + g.d * f.c, g.c * f.b + g.d * f.d};
}

double epsdelta_witness(const HoloMap& f, double delta, std::size_t rings, std::size_t per_ring) {
    if (!(delta > 0.0)) throw PreconditionError("delta must be positive");
    double worst = 0.0;
    for (std::size_t k = 1; k <= rings; ++k)
        for (std::size_t j = 0; j < per_ring; ++j) {
            const cplx z = std::polar(delta * (1.0 - 1e-9) * static_cast<double>(k) / static_cast<double>(rings),
                                      kTwoPi * static_cast<double>(j) / static_cast<double>(per_ring));
            worst = std::max(worst, std::abs(f(z) / z - 1.0));
        }
    return worst;
}

QuarticExample quartic_example(std::size_t n_samples) {
    const HoloMap f = [](cplx z) { return z * z * z * z; };
    QuarticExample ex;
    ex.L_closed = std::pow(2.0 * std::sqrt(7.0 / 3.0), 3);

    std::vector<cplx> boundary;
    const std::size_t nb = std::max<std::size_t>(400, n_samples);
    for (std::size_t k = 0; k < nb; ++k) {
        const double t = kTwoPi * static_cast<double>(k) / static_cast<double>(nb);
        boundary.emplace_back(1.0 + 0.5 * std::cos(t), std::sin(t));
    }
    ex.full_domain_injective = boundary_image_is_simple(f, boundary);

    const auto m = std::max<std::size_t>(8, static_cast<std::size_t>(std::sqrt(static_cast<double>(n_samples) * 2.0)));
    std::vector<cplx> sector;
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < m / 2; ++i) {
            const cplx z(0.5 + (static_cast<double>(i) + 0.5) / static_cast<double>(m / 2),
                         -1.0 + 2.0 * (static_cast<double>(j) + 0.5) / static_cast<double>(m));
            // kept clear of 1 +- i so that only the probe pairs below approach the collision
            const double x = z.real() - 1.0, y = z.imag();
            if (4.0 * x * x + y * y < 0.7 && std::abs(y) < 0.9 * z.real()) sector.push_back(z);
        }
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    auto note = [&](cplx z) {
        const double df = std::abs(fd_derivative(f, z, 1e-7));
        lo = std::min(lo, df);
        hi = std::max(hi, df);
    };
    for (cplx z : sector) note(z);
    for (cplx z : boundary) note(z);
    ex.L_measured = hi / lo;

    for (double gap : {1e-1, 1e-2, 1e-3}) {
        std::vector<cplx> pts = sector;
        pts.emplace_back(1.0, 1.0 - gap);
        pts.emplace_back(1.0, -(1.0 - gap));
        ex.gap.push_back(gap);
        ex.D_lower.push_back(estimate_distortion(f, pts, 1e-7, 1, 0.0).D_lower);
    }
    return ex;
}

}  // namespace gaugedyn
