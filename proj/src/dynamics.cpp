#include "gaugedyn/dynamics.hpp"

#include <cmath>
#include <limits>

#include "gaugedyn/errors.hpp"
#include "gaugedyn/parallel.hpp"

namespace gaugedyn {

namespace {

constexpr double kLogOverflow = 709.0;
constexpr double kAttractorBall = 1e-6;

}  // namespace

FamilyMember make_exponential(const ExpParams& params) {
    FamilyMember f;
    f.kind = FamilyMember::Kind::Exponential;
    f.params = params;
    f.id = "exp(lambda=" + std::to_string(params.lambda) + ")";
    f.attractor = {params.q, 0.0};
    return f;
}

FamilyMember make_exponential(double lambda) { return make_exponential(solve_fixed_points(lambda)); }

FamilyMember make_mittag_leffler(MLParams params) {
    FamilyMember f;
    f.kind = FamilyMember::Kind::ScaledMittagLeffler;
    f.id = "ml(rho=" + std::to_string(params.rho) + ")";
    // f(D) lies in D and f' is tiny there, so iterating from 0 contracts onto the fixed point.
    cplx z{0.0, 0.0};
    for (int i = 0; i < 200; ++i) {
        const cplx next = std::exp(ml_eval(params, z));
        if (std::abs(next - z) <= 1e-300 + 1e-16 * std::abs(next)) {
            z = next;
            break;
        }
        z = next;
    }
    f.attractor = z;
    f.params = std::move(params);
    return f;
}

FamilyMember make_mittag_leffler(double rho, const MLOptions& options) {
    return make_mittag_leffler(make_ml_params(rho, options));
}

cplx log_eval(const FamilyMember& f, cplx z) {
    if (f.kind == FamilyMember::Kind::Exponential) return f.exp().log_lambda + z;
    return ml_eval(f.ml(), z);
}

cplx eval(const FamilyMember& f, cplx z) {
    if (f.kind == FamilyMember::Kind::Exponential) return f.exp().lambda * std::exp(z);
    return std::exp(ml_eval(f.ml(), z));
}

cplx log_eval_at_log(const FamilyMember& f, cplx w) {
    if (f.kind == FamilyMember::Kind::Exponential) {
        // log(lambda) + e^w with e^w formed through its modulus so a huge Re w gives +-inf, not NaN.
        const double lm = w.real();
        const double c = std::cos(w.imag());
        const double s = std::sin(w.imag());
        const double re = c == 0.0 ? 0.0 : std::copysign(std::exp(lm + std::log(std::abs(c))), c);
        const double im = s == 0.0 ? 0.0 : std::copysign(std::exp(lm + std::log(std::abs(s))), s);
        return {f.exp().log_lambda + re, std::isfinite(im) ? im : 0.0};
    }
    return ml_eval_at_log(f.ml(), w);
}

namespace {

// stop_in_ball ends the orbit at the first point inside the attractor ball, which lies in the
// immediate basin, so no later escape is possible.
Orbit iterate_impl(const FamilyMember& f, cplx z0, std::size_t n_max, double bailout, bool stop_in_ball) {
    if (n_max < 1) throw PreconditionError("iterate needs n_max >= 1");
    if (!(bailout > 0.0)) throw PreconditionError("iterate needs bailout > 0");
    Orbit o;
    o.points.reserve(std::min<std::size_t>(n_max + 1, 4096));
    o.points.push_back(z0);
    if (!std::isfinite(z0.real()) || !std::isfinite(z0.imag())) {
        o.escaped = true;
        o.escape_index = 0;
        return o;
    }
    cplx z = z0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        if (std::abs(z) > bailout) {
            o.escaped = true;
            o.escape_index = o.points.size() - 1;
            return o;
        }
        if (n == n_max) break;
        const cplx lz = log_eval(f, z);
        if (!(lz.real() <= kLogOverflow) || !std::isfinite(lz.imag())) {
            o.escaped = true;
            o.escape_index = o.points.size();
            return o;
        }
        z = f.kind == FamilyMember::Kind::Exponential ? eval(f, z) : std::exp(lz);
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            o.escaped = true;
            o.escape_index = o.points.size();
            return o;
        }
        o.points.push_back(z);
        if (stop_in_ball && std::abs(z - f.attractor) <= kAttractorBall) break;
    }
    return o;
}

}  // namespace

Orbit iterate(const FamilyMember& f, cplx z0, std::size_t n_max, double bailout) {
    return iterate_impl(f, z0, n_max, bailout, false);
}

const char* to_string(Classification c) noexcept {
    switch (c) {
        case Classification::Escaping: return "escaping";
        case Classification::Bounded: return "bounded";
        default: return "undecided";
    }
}

Classification classify(const FamilyMember& f, cplx z0, std::size_t n_max, double bailout) {
    const Orbit o = iterate_impl(f, z0, n_max, bailout, true);
    if (o.escaped) {
        const auto& p = o.points;
        const std::size_t steps = std::min<std::size_t>(3, p.size() - 1);
        bool growing = true;
        for (std::size_t k = p.size() - steps; k < p.size(); ++k) {
            if (!(std::abs(p[k]) > std::abs(p[k - 1]))) growing = false;
        }
        return growing ? Classification::Escaping : Classification::Undecided;
    }
    return std::abs(o.points.back() - f.attractor) <= kAttractorBall ? Classification::Bounded
                                                                       : Classification::Undecided;
}

BoolGrid escape_scan(const FamilyMember& f, const Rect& bbox, std::size_t nx, std::size_t ny, std::size_t n_max,
                     double bailout, unsigned threads) {
    if (nx == 0 || ny == 0) throw PreconditionError("escape_scan needs a non-empty grid");
    if (!bbox.valid()) throw PreconditionError("escape_scan needs x0 < x1 and y0 < y1");
    BoolGrid g(bbox, nx, ny);
    parallel_rows(ny, threads, [&](std::size_t j) {
        for (std::size_t i = 0; i < nx; ++i)
            g.set(i, j, classify(f, g.center(i, j), n_max, bailout) == Classification::Escaping);
    });
    return g;
}

double max_modulus(const FamilyMember& f, double r, std::size_t n_samples) {
    if (!(r > 0.0)) throw PreconditionError("max_modulus needs r > 0");
    if (n_samples < 64) throw PreconditionError("max_modulus needs at least 64 samples");
    double best = -std::numeric_limits<double>::infinity();
    const double lr = std::log(r);
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double th = kTwoPi * static_cast<double>(k) / static_cast<double>(n_samples);
        best = std::max(best, log_eval_at_log(f, {lr, th}).real());
    }
    return best;
}

OrderEstimate order_estimate(const FamilyMember& f, std::span<const double> r_values, std::size_t n_samples) {
    if (r_values.size() < 4) throw PreconditionError("order_estimate needs at least 4 radii");
    for (std::size_t i = 0; i < r_values.size(); ++i) {
        if (!(r_values[i] > 1.0)) throw PreconditionError("order_estimate radii must exceed 1");
        if (i && !(r_values[i] > r_values[i - 1])) throw PreconditionError("order_estimate radii must increase");
    }
    const double log_f0 = log_eval(f, {0.0, 0.0}).real();
    OrderEstimate out;
    std::vector<double> xs;
    for (double r : r_values) {
        const double l = max_modulus(f, r, n_samples) - log_f0;
        const double ll = std::log(l);
        if (!std::isfinite(ll)) continue;
        out.r_values.push_back(r);
        out.loglogM.push_back(ll);
        xs.push_back(std::log(r));
    }
    if (xs.size() < 4) throw InsufficientDataError("fewer than 4 finite log log M samples");
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += out.loglogM[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * out.loglogM[i];
    }
    out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.intercept = (sy - out.slope * sx) / n;
    return out;
}

}  // namespace gaugedyn
