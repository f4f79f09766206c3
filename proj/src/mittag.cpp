#include "gaugedyn/mittag.hpp"

extern "C" {
#include <quadmath.h>
}

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gaugedyn/errors.hpp"

namespace gaugedyn {

using f128 = __float128;

namespace detail {

struct MLTable {
    double rho = 1.0;
    double mu = 0.0;                 // exponential term kept for |arg z| <= mu
    std::vector<double> ratio_d;     // Gamma((n-1)/rho + 1) / Gamma(n/rho + 1), index n >= 1
    std::vector<f128> ratio_q;
    std::vector<double> asym;        // 1 / Gamma(1 - k/rho), index k >= 1
};

}  // namespace detail

namespace {

using detail::MLTable;

constexpr std::size_t kAsymTerms = 60;
constexpr double kDoubleCancel = 12.0;  // nats tolerated with double accumulation
constexpr double kQuadCancel = 60.0;    // nats tolerated with quad accumulation

struct QC {
    f128 re = 0;
    f128 im = 0;
};

inline QC qmul(QC a, QC b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
inline f128 qabs(QC a) { return hypotq(a.re, a.im); }
// Within a factor sqrt(2) of |a|; used for stopping and cancellation bookkeeping.
inline f128 qnorm1(QC a) { return fabsq(a.re) + fabsq(a.im); }

double lgamma_pos(double x) {
    int sign = 0;
    return ::lgamma_r(x, &sign);
}

void check_rho(double rho) {
    if (!(rho > 0.5) || !std::isfinite(rho)) throw DomainError("rho must exceed 1/2; got " + std::to_string(rho));
}

// ln(1 + u) without cancellation for small u.
cplx log1p_c(cplx u) {
    if (std::abs(u) < 0.5) {
        return {0.5 * std::log1p(2.0 * u.real() + std::norm(u)), std::atan2(u.imag(), 1.0 + u.real())};
    }
    return std::log(1.0 + u);
}

cplx logaddexp_c(cplx a, cplx b) {
    if (std::isinf(a.real()) && a.real() < 0) return b;
    if (std::isinf(b.real()) && b.real() < 0) return a;
    if (b.real() > a.real()) std::swap(a, b);
    if (!std::isfinite(a.real())) return {a.real(), std::isfinite(a.imag()) ? a.imag() : 0.0};
    return a + log1p_c(std::exp(b - a));
}

double reduce_angle(double t) { return std::remainder(t, kTwoPi); }

double sector_mu(double rho) { return 0.75 * kPi / rho; }

std::shared_ptr<const MLTable> build_table(double rho, std::size_t n_terms) {
    auto t = std::make_shared<MLTable>();
    t->rho = rho;
    t->mu = sector_mu(rho);
    t->ratio_d.assign(n_terms + 1, 0.0);
    t->ratio_q.assign(n_terms + 1, 0);
    const f128 rq = static_cast<f128>(rho);
    f128 prev = 0;  // lgamma(1) = 0
    for (std::size_t n = 1; n <= n_terms; ++n) {
        const f128 cur = lgammaq(static_cast<f128>(n) / rq + 1);
        t->ratio_q[n] = expq(prev - cur);
        t->ratio_d[n] = static_cast<double>(t->ratio_q[n]);
        prev = cur;
    }
    t->asym.assign(kAsymTerms + 1, 0.0);
    for (std::size_t k = 1; k <= kAsymTerms; ++k) t->asym[k] = rgamma(1.0 - static_cast<double>(k) / rho);
    return t;
}

struct SeriesOut {
    cplx log_value;
    double cancel = 0.0;  // log(sum |t_n|) - log|sum t_n|
};

// Quad-precision summation with term ratios supplied by `ratio(n)`.
template <class Ratio>
SeriesOut sum_quad(cplx z, double tol, std::size_t max_terms, Ratio&& ratio) {
    const QC zq{static_cast<f128>(z.real()), static_cast<f128>(z.imag())};
    QC sum{1, 0};
    QC term{1, 0};
    f128 abs_sum = 1;
    f128 prev_abs = 1;
    const f128 tq = static_cast<f128>(tol);
    int small = 0;
    for (std::size_t n = 1;; ++n) {
        if (n > max_terms) throw ConvergenceError("Mittag-Leffler series exceeded " + std::to_string(max_terms) + " terms");
        const f128 r = ratio(n);
        term = qmul(term, QC{zq.re * r, zq.im * r});
        sum.re += term.re;
        sum.im += term.im;
        const f128 a = qnorm1(term);
        abs_sum += a;
        if (a < tq * qnorm1(sum) && a <= prev_abs) {
            if (++small >= 5) break;
        } else {
            small = 0;
        }
        prev_abs = a;
    }
    const f128 m = qabs(sum);
    SeriesOut out;
    out.log_value = {static_cast<double>(logq(m)), static_cast<double>(atan2q(sum.im, sum.re))};
    out.cancel = static_cast<double>(logq(abs_sum) - logq(m));
    return out;
}

SeriesOut sum_double(const MLTable& t, cplx z, double tol) {
    cplx sum{1.0, 0.0};
    cplx term{1.0, 0.0};
    double abs_sum = 1.0;
    double prev_abs = 1.0;
    int small = 0;
    const std::size_t cap = t.ratio_d.size() - 1;
    for (std::size_t n = 1;; ++n) {
        if (n > cap) throw ConvergenceError("Mittag-Leffler series exceeded the coefficient table");
        term *= z * t.ratio_d[n];
        sum += term;
        const double a = std::abs(term);
        abs_sum += a;
        if (a < tol * std::abs(sum) && a <= prev_abs) {
            if (++small >= 5) break;
        } else {
            small = 0;
        }
        prev_abs = a;
    }
    return {std::log(sum), std::log(abs_sum) - std::log(std::abs(sum))};
}

// Sector asymptotics in terms of w = log z (Im w taken mod 2 pi):
// rho e^{z^rho} - sum_k z^{-k} / Gamma(1 - k/rho) for |arg z| <= mu, the algebraic part alone beyond.
cplx asym_log(const MLTable& t, cplx w) {
    const double rho = t.rho;
    const double theta = reduce_angle(w.imag());
    cplx lexp{-std::numeric_limits<double>::infinity(), 0.0};
    // Exponential branches (z e^{2 pi i m})^rho with |theta + 2 pi m| <= mu; only m = 0 when rho >= 1.
    for (int m = -1; m <= 1; ++m) {
        const double phi = theta + kTwoPi * m;
        if (!(std::abs(phi) <= t.mu || (rho == 1.0 && m == 0))) continue;
        const double lm = rho * w.real();
        const double c = std::cos(rho * phi);
        const double s = std::sin(rho * phi);
        const double re = c == 0.0 ? 0.0 : std::copysign(std::exp(lm + std::log(std::abs(c))), c);
        const double im = s == 0.0 ? 0.0 : std::copysign(std::exp(lm + std::log(std::abs(s))), s);
        lexp = logaddexp_c(lexp, cplx(std::log(rho) + re, std::isfinite(im) ? im : 0.0));
    }
    if (rho == 1.0) return lexp;

    // g = -zeta h(zeta), zeta = 1/z, h = sum_k c_k zeta^{k-1}; truncated near the smallest term.
    const cplx zeta = std::exp(cplx(-w.real(), -theta));
    const double x = std::exp(rho * w.real());
    const std::size_t k_opt = std::clamp<std::size_t>(static_cast<std::size_t>(std::min(rho * x, 1e6)), 1, kAsymTerms);
    cplx h{0.0, 0.0};
    cplx p{1.0, 0.0};
    for (std::size_t k = 1; k <= k_opt; ++k) {
        const cplx term = t.asym[k] * p;
        h += term;
        if (term != 0.0 && std::abs(term) < 1e-18 * std::abs(h)) break;
        p *= zeta;
    }
    const cplx lg = std::abs(h) == 0.0 ? cplx(-std::numeric_limits<double>::infinity(), 0.0)
                                       : cplx(-w.real(), -theta) + std::log(-h);
    return logaddexp_c(lexp, lg);
}

cplx log_core(const MLTable& t, double x_max, cplx z) {
    if (z == cplx(0.0, 0.0)) return {0.0, 0.0};
    if (t.rho == 1.0) return z;
    const double x = std::exp(t.rho * std::log(std::abs(z)));
    if (x <= x_max) {
        // Predicted cancellation: log sum|t_n| ~ x against the size of the dominant part.
        const double theta = std::arg(z);
        const double dominant = std::abs(theta) <= t.mu ? x * std::cos(t.rho * theta) : (t.rho < 1.0 ? x * std::cos(t.rho * (kTwoPi - std::abs(theta))) : -1e300);
        const double predicted = x - std::max(dominant, -std::log(std::abs(z)) - 2.0);
        if (predicted <= kDoubleCancel) {
            const SeriesOut d = sum_double(t, z, 1e-17);
            if (d.cancel <= kDoubleCancel) return d.log_value;
        }
        if (predicted <= kQuadCancel) {
            const SeriesOut q = sum_quad(z, 1e-18, t.ratio_q.size() - 1, [&](std::size_t n) { return t.ratio_q[n]; });
            if (q.cancel <= kQuadCancel) return q.log_value;
        }
    }
    return asym_log(t, std::log(z));
}

// Optimally truncated sector asymptotics are accurate to ~e^{-|z|^rho} beyond this point,
// which keeps series term counts small.
double x_max_for(double rho) {
    (void)rho;
    return 45.0;
}

double default_delta(double rho) { return kPi / (4.0 * rho); }

double calibrate_with(const MLTable& t, double x_max, double R, std::size_t n_samples, double delta) {
    const double rho = t.rho;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double th = -kPi + kTwoPi * static_cast<double>(k) / static_cast<double>(n_samples);
        worst = std::max(worst, log_core(t, x_max, std::polar(R, th)).real());
    }
    worst = std::max(worst, log_core(t, x_max, cplx(R, 0.0)).real());
    const double edge = kPi / (2.0 * rho) + delta;
    const std::size_t n_r = std::max<std::size_t>(8, n_samples / 16);
    for (std::size_t i = 0; i < n_r; ++i) {
        const double r = R * std::pow(10.0, static_cast<double>(i) / static_cast<double>(n_r - 1));
        for (std::size_t k = 0; k < n_samples; ++k) {
            const double th = -kPi + kTwoPi * static_cast<double>(k) / static_cast<double>(n_samples);
            if (std::abs(th) <= edge) continue;
            worst = std::max(worst, log_core(t, x_max, std::polar(r, th)).real());
        }
    }
    return std::log(0.5) - worst;
}

// max |f - rho e^{z^rho}| |z| on |z|^rho = 20 within the widened sector, in quad.
double estimate_c0(const MLTable& t, double delta) {
    const double rho = t.rho;
    if (rho == 1.0) return 0.0;
    const double r = std::pow(20.0, 1.0 / rho);
    const double edge = std::min(kPi, kPi / (2.0 * rho) + delta);
    double best = 0.0;
    const int n = 64;
    for (int k = 0; k <= n; ++k) {
        const double th = -edge + 2.0 * edge * k / n;
        const cplx z = std::polar(r, th);
        const QC zq{static_cast<f128>(z.real()), static_cast<f128>(z.imag())};
        QC sum{1, 0};
        QC term{1, 0};
        int small = 0;
        for (std::size_t m = 1; m < t.ratio_q.size(); ++m) {
            const f128 rr = t.ratio_q[m];
            term = qmul(term, QC{zq.re * rr, zq.im * rr});
            sum.re += term.re;
            sum.im += term.im;
            if (qabs(term) < 1e-32Q * qabs(sum)) {
                if (++small >= 5) break;
            } else {
                small = 0;
            }
        }
        const f128 lr = static_cast<f128>(rho) * logq(static_cast<f128>(r));
        const f128 mag = expq(lr);
        const f128 ang = static_cast<f128>(rho) * static_cast<f128>(th);
        const f128 er = expq(mag * cosq(ang));
        const QC dom{static_cast<f128>(rho) * er * cosq(mag * sinq(ang)), static_cast<f128>(rho) * er * sinq(mag * sinq(ang))};
        const QC diff{sum.re - dom.re, sum.im - dom.im};
        best = std::max(best, static_cast<double>(qabs(diff)) * r);
    }
    return best;
}

double seam_check(const MLTable& t, double x_max) {
    if (t.rho == 1.0) return 0.0;
    const double r = std::pow(x_max, 1.0 / t.rho);
    double worst = 0.0;
    const int n = 32;
    for (int k = 0; k < n; ++k) {
        const double th = -kPi + kTwoPi * (k + 0.5) / n;
        const cplx z = std::polar(r, th);
        const SeriesOut q = sum_quad(z, 1e-30, t.ratio_q.size() - 1, [&](std::size_t m) { return t.ratio_q[m]; });
        if (q.cancel > kQuadCancel) continue;
        const cplx a = asym_log(t, std::log(z));
        worst = std::max(worst, std::abs(q.log_value.real() - a.real()) / std::max(1.0, std::abs(q.log_value.real())));
    }
    return worst;
}

}  // namespace

double gamma_fn(double x) {
    if (!(x > 0.0)) throw DomainError("gamma_fn needs x > 0; got " + std::to_string(x));
    return std::tgamma(x);
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma needs x > 0; got " + std::to_string(x));
    return lgamma_pos(x);
}

double rgamma(double x) {
    if (x > 0.0) return x < 170.0 ? 1.0 / std::tgamma(x) : std::exp(-lgamma_pos(x));
    const double n = std::round(x);
    if (x == n) return 0.0;
    // 1/Gamma(x) = Gamma(1 - x) sin(pi x) / pi, with sin(pi x) reduced about the nearest integer.
    const double s = std::sin(kPi * (x - n)) * (std::fmod(std::abs(n), 2.0) == 1.0 ? -1.0 : 1.0);
    const double y = 1.0 - x;
    const double g = y < 170.0 ? std::tgamma(y) : std::exp(lgamma_pos(y));
    return g * s / kPi;
}

cplx ml_series_log(double rho, cplx z, double tol, std::size_t max_terms) {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("ml_series needs rho > 0");
    if (!(tol > 0.0)) throw DomainError("ml_series needs tol > 0");
    const f128 rq = static_cast<f128>(rho);
    f128 prev = 0;
    const SeriesOut out = sum_quad(z, tol, max_terms, [&](std::size_t n) {
        const f128 cur = lgammaq(static_cast<f128>(n) / rq + 1);
        const f128 r = expq(prev - cur);
        prev = cur;
        return r;
    });
    return out.log_value;
}

cplx ml_series(double rho, cplx z, double tol, std::size_t max_terms) {
    return std::exp(ml_series_log(rho, z, tol, max_terms));
}

cplx ml_sector(double rho, cplx z, double R, double delta) {
    check_rho(rho);
    if (delta < 0.0) delta = default_delta(rho);
    if (std::abs(std::arg(z)) > kPi / (2.0 * rho) + delta) {
        throw DomainError("ml_sector needs |arg z| <= pi/(2 rho) + delta");
    }
    if (std::abs(z) < R) throw DomainError("ml_sector needs |z| >= R = " + std::to_string(R));
    return std::log(rho) + std::pow(z, rho);
}

MLParams make_ml_params(double rho, const MLOptions& options) {
    check_rho(rho);
    MLParams p;
    p.rho = rho;
    p.delta = options.delta < 0.0 ? default_delta(rho) : options.delta;
    const double delta_cap = std::max(kPi / (2.0 * rho), (1.0 - 1.0 / (2.0 * rho)) * kPi);
    if (!(p.delta > 0.0 && p.delta <= delta_cap)) {
        throw PreconditionError("delta must lie in (0, max(pi/(2 rho), (1 - 1/(2 rho)) pi)]");
    }
    p.x_max = x_max_for(rho);
    p.r_switch = std::pow(p.x_max, 1.0 / rho);
    const std::size_t n_terms = static_cast<std::size_t>(std::ceil(rho * (8.0 * p.x_max + 60.0))) + 200;
    auto table = build_table(rho, n_terms);
    p.C0 = estimate_c0(*table, p.delta);
    p.R = std::max(4.0 * p.C0 / std::sin(p.delta), 2.0);
    p.seam_error = seam_check(*table, p.x_max);
    if (p.seam_error > 0.05) {
        throw ConvergenceError("series and sector branches disagree at the seam by " + std::to_string(p.seam_error));
    }
    p.log_a = calibrate_with(*table, p.x_max, p.R, options.calib_samples, p.delta);
    p.a = std::exp(p.log_a);
    p.table = std::move(table);
    return p;
}

cplx ml_log(const MLParams& params, cplx z) { return log_core(*params.table, params.x_max, z); }

cplx ml_log_at_log(const MLParams& params, cplx w) {
    const MLTable& t = *params.table;
    if (t.rho * w.real() <= std::log(params.x_max)) return log_core(t, params.x_max, std::exp(w));
    return asym_log(t, w);
}

cplx ml_eval(const MLParams& params, cplx z) { return params.log_a + ml_log(params, z); }

cplx ml_eval_at_log(const MLParams& params, cplx w) { return params.log_a + ml_log_at_log(params, w); }

double calibrate_scaling_log(double rho, double R, std::size_t n_samples, double delta) {
    check_rho(rho);
    if (!(R > 0.0)) throw PreconditionError("calibration radius must be positive");
    if (n_samples < 8) throw PreconditionError("calibration needs at least 8 samples");
    if (delta < 0.0) delta = default_delta(rho);
    const double x_max = x_max_for(rho);
    const auto table = build_table(rho, static_cast<std::size_t>(std::ceil(rho * (8.0 * x_max + 60.0))) + 200);
    return calibrate_with(*table, x_max, R, n_samples, delta);
}

double calibrate_scaling(double rho, double R, std::size_t n_samples, double delta) {
    return std::exp(calibrate_scaling_log(rho, R, n_samples, delta));
}

double SectorSpec::band_low() const noexcept { return kPi / (2.0 * rho); }
double SectorSpec::band_height() const noexcept { return kTwoPi - kPi / rho; }

bool sector_contains(const SectorSpec& spec, cplx z) {
    double y = std::fmod(z.imag(), kTwoPi);
    if (y < 0.0) y += kTwoPi;
    return y >= spec.band_low() && y <= kTwoPi - spec.band_low();
}

namespace {

// x-interval of the horizontal line Im z = y inside the closed square B.
bool chord(const Square& B, double y, double& lo, double& hi) {
    const double h = 0.5 * B.side;
    const double c = std::cos(B.angle);
    const double s = std::sin(B.angle);
    const double dy = y - B.center.imag();
    // local u = c dx + s dy, v = -s dx + c dy with dx = x - Re center
    lo = -std::numeric_limits<double>::infinity();
    hi = std::numeric_limits<double>::infinity();
    auto clip = [&](double p, double q) {
        if (std::abs(p) < 1e-15) return std::abs(q) <= h;
        double a = (-h - q) / p;
        double b = (h - q) / p;
        if (a > b) std::swap(a, b);
        lo = std::max(lo, a);
        hi = std::min(hi, b);
        return true;
    };
    if (!clip(c, s * dy) || !clip(-s, c * dy)) return false;
    lo += B.center.real();
    hi += B.center.real();
    return lo <= hi;
}

}  // namespace

double packing_min_side(double rho, double angle) {
    (void)rho;
    // Each band loses at most one column and B at most one band; rotation also trims the band ends.
    const double tilt = std::abs(std::sin(2.0 * angle));
    return 100.0 * kPi * (1.0 + tilt);
}

std::vector<Square> sector_square_packing_unchecked(const SectorSpec& spec, const Square& B) {
    if (!(spec.rho > 0.5)) throw DomainError("rho must exceed 1/2");
    const double s = spec.band_height();
    const Rect box = B.bounding_box();
    const double y_first = spec.band_low();
    const long k0 = static_cast<long>(std::floor((box.y0 - y_first) / kTwoPi)) - 1;
    const long k1 = static_cast<long>(std::ceil((box.y1 - y_first) / kTwoPi)) + 1;
    const double eps = 1e-12 * std::max(1.0, B.side);
    std::vector<Square> out;
    for (long k = k0; k <= k1; ++k) {
        const double ylo = y_first + kTwoPi * static_cast<double>(k);
        const double yhi = ylo + s;
        double a0, b0, a1, b1;
        if (!chord(B, ylo + eps, a0, b0) || !chord(B, yhi - eps, a1, b1)) continue;
        const double xa = std::max(a0, a1) + eps;
        const double xb = std::min(b0, b1) - eps;
        if (xb - xa < s) continue;
        const auto n = static_cast<std::size_t>(std::floor((xb - xa) / s));
        for (std::size_t i = 0; i < n; ++i) {
            out.push_back(Square{{xa + (static_cast<double>(i) + 0.5) * s, ylo + 0.5 * s}, s, 0.0});
        }
    }
    return out;
}

std::vector<Square> sector_square_packing(const SectorSpec& spec, const Square& B) {
    const double kmin = packing_min_side(spec.rho, B.angle);
    if (B.side < kmin) {
        throw PreconditionError("packing needs box side K >= K_min = " + std::to_string(kmin));
    }
    return sector_square_packing_unchecked(spec, B);
}

}  // namespace gaugedyn
