#include "gaugedyn/linearizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gaugedyn/errors.hpp"

namespace gaugedyn {

namespace {

// Sign of lambda e^x - x for x > 0, evaluated without overflow.
double fixed_point_residual_log(double log_lambda, double x) { return log_lambda + x - std::log(x); }

double bisect(double log_lambda, double lo, double hi) {
    double flo = fixed_point_residual_log(log_lambda, lo);
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = fixed_point_residual_log(log_lambda, mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Newton on log(lambda) + x - log x; a step is kept only if it reduces |lambda e^x - x|.
double polish(double lambda, double log_lambda, double x) {
    for (int it = 0; it < 3; ++it) {
        const double g = fixed_point_residual_log(log_lambda, x);
        const double dg = 1.0 - 1.0 / x;
        if (dg == 0.0) break;
        const double nx = x - g / dg;
        if (!(nx > 0.0)) break;
        if (std::abs(lambda * std::exp(nx) - nx) < std::abs(lambda * std::exp(x) - x)) {
            x = nx;
        } else {
            break;
        }
    }
    return x;
}

// Truncated product of two series of length n.
std::vector<double> mul_trunc(const std::vector<double>& a, const std::vector<double>& b, std::size_t n) {
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n && i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; i + j < n && j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

// Coefficients of w(v) with L(w(v)) - beta = v through order m, by fixed-point iteration
// w <- v - sum_{k>=2} a_k w^k (each pass fixes one more coefficient).
std::vector<double> revert(const std::vector<double>& a, std::size_t m) {
    const std::size_t n = m + 1;
    std::vector<double> w(n, 0.0);
    w[1] = 1.0;
    for (std::size_t pass = 0; pass < m; ++pass) {
        std::vector<double> next(n, 0.0);
        next[1] = 1.0;
        std::vector<double> power = w;
        for (std::size_t k = 2; k < a.size() && k <= m; ++k) {
            power = mul_trunc(power, w, n);
            for (std::size_t i = 0; i < n; ++i) next[i] -= a[k] * power[i];
        }
        w = std::move(next);
    }
    return w;
}

double pullback(const GaugeSpec& spec, double y, std::size_t n) {
    const LinearizerSeries& s = *spec.series;
    const double beta = s.params.beta;
    const double log_lambda = s.params.log_lambda;
    while (std::abs(y - beta) > spec.pullback_tol) {
        if (n >= kPullbackCap) {
            throw ConvergenceError("Phi pullback did not reach pullback_tol of beta within " +
                                   std::to_string(kPullbackCap) + " steps");
        }
        y = std::log(y) - log_lambda;
        ++n;
    }
    const double v = y - beta;
    if (v == 0.0) return 0.0;
    double w = 0.0;
    for (std::size_t k = s.reverted.size(); k-- > 1;) w = (w + s.reverted[k]) * v;
    const double dl = s.derivative(w);
    if (dl != 0.0) w -= (s.eval(w) - y) / dl;
    return w * std::exp(static_cast<double>(n) * std::log(beta));
}

}  // namespace

ExpParams solve_fixed_points(double lambda) {
    if (!(lambda > 0.0 && lambda < std::exp(-1.0))) {
        throw DomainError("lambda must lie in (0, 1/e); got " + std::to_string(lambda));
    }
    ExpParams p;
    p.lambda = lambda;
    p.log_lambda = std::log(lambda);
    p.q = polish(lambda, p.log_lambda, bisect(p.log_lambda, std::numeric_limits<double>::min(), 1.0));
    p.beta = polish(lambda, p.log_lambda, bisect(p.log_lambda, 1.0, 100.0 / lambda));
    return p;
}

double LinearizerSeries::eval(double w) const noexcept {
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * w + coeffs[k];
    return acc;
}

double LinearizerSeries::derivative(double w) const noexcept {
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 1;) acc = acc * w + static_cast<double>(k) * coeffs[k];
    return acc;
}

LinearizerSeries koenigs_series(const ExpParams& params, std::size_t order) {
    if (order < 2) throw PreconditionError("koenigs_series needs order N >= 2");
    const double beta = params.beta;
    if (!(beta > 1.0)) throw DomainError("beta must exceed 1");
    // beta^2 - beta is the smallest recurrence denominator.
    const double denom_min = beta * beta - beta;
    if (!(denom_min > 1e-12)) {
        throw IllConditionedError("beta - 1 too small for the Koenigs recurrence (beta^2 - beta = " +
                                  std::to_string(denom_min) + ")");
    }

    LinearizerSeries s;
    s.params = params;
    s.coeffs.assign(order + 1, 0.0);
    std::vector<double> e(order + 1, 0.0);  // exp(L(z) - beta) coefficients
    s.coeffs[0] = beta;
    s.coeffs[1] = 1.0;
    e[0] = 1.0;
    e[1] = 1.0;
    double beta_k = beta;
    for (std::size_t k = 2; k <= order; ++k) {
        beta_k *= beta;
        double sk = 0.0;
        for (std::size_t j = 1; j < k; ++j) sk += static_cast<double>(j) * s.coeffs[j] * e[k - j];
        sk /= static_cast<double>(k);
        const double denom = beta_k - beta;
        if (!std::isfinite(denom) || denom == 0.0) {
            throw IllConditionedError("beta^k - beta not representable at k = " + std::to_string(k));
        }
        s.coeffs[k] = beta * sk / denom;
        e[k] = s.coeffs[k] + sk;
    }

    const double eps = 1e-16 * beta;
    double radius = std::numeric_limits<double>::infinity();
    for (std::size_t k = std::max<std::size_t>(2, order - 2); k <= order; ++k) {
        const double ak = std::abs(s.coeffs[k]);
        if (ak > 0.0) radius = std::min(radius, std::pow(eps / ak, 1.0 / static_cast<double>(k)));
    }
    s.radius = radius;
    s.reverted = revert(s.coeffs, std::min<std::size_t>(10, order));
    return s;
}

double series_residual(const LinearizerSeries& series) {
    const std::size_t n = series.coeffs.size();
    // u = L(z) - beta; exp(u) = sum_m u^m / m! (u has no constant term, so m <= N suffices).
    std::vector<double> u(series.coeffs);
    u[0] = 0.0;
    std::vector<double> ex(n, 0.0);
    std::vector<double> power(n, 0.0);
    power[0] = 1.0;
    double fact = 1.0;
    for (std::size_t m = 0; m < n; ++m) {
        if (m > 0) {
            power = mul_trunc(power, u, n);
            fact *= static_cast<double>(m);
        }
        for (std::size_t i = 0; i < n; ++i) ex[i] += power[i] / fact;
    }
    const double beta = series.params.beta;
    double worst = 0.0;
    double beta_k = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double lhs = beta * ex[k];  // lambda e^beta = beta
        const double rhs = series.coeffs[k] * beta_k;
        worst = std::max(worst, std::abs(lhs - rhs));
        beta_k *= beta;
    }
    return worst;
}

GaugeSpec make_gauge(std::shared_ptr<const LinearizerSeries> series, double gamma) {
    if (!series) throw PreconditionError("gauge needs a linearizer series");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be finite and >= 0");
    GaugeSpec g;
    g.pullback_tol = 1e-3 * (series->params.beta - 1.0);
    g.series = std::move(series);
    g.gamma = gamma;
    return g;
}

GaugeSpec make_gauge(double lambda, double gamma, std::size_t order) {
    auto series = std::make_shared<const LinearizerSeries>(koenigs_series(solve_fixed_points(lambda), order));
    return make_gauge(std::move(series), gamma);
}

double phi(const GaugeSpec& spec, double x) {
    const double beta = spec.params().beta;
    if (!(x >= beta)) throw DomainError("Phi needs x >= beta = " + std::to_string(beta));
    if (!std::isfinite(x)) throw DomainError("Phi needs finite x");
    return pullback(spec, x, 0);
}

double phi_log(const GaugeSpec& spec, double log_x) {
    const double beta = spec.params().beta;
    if (!(log_x >= std::log(beta))) throw DomainError("Phi needs x >= beta = " + std::to_string(beta));
    if (!std::isfinite(log_x)) throw DomainError("Phi needs finite log x");
    const double y = std::max(beta, log_x - spec.params().log_lambda);
    return pullback(spec, y, 1);
}

double phi_iterated(const GaugeSpec& spec, double x, unsigned k) {
    const double beta = spec.params().beta;
    if (!(x >= beta)) throw DomainError("Phi needs x >= beta = " + std::to_string(beta));
    return pullback(spec, x, k);
}

double gauge_h(const GaugeSpec& spec, double t) {
    const double beta = spec.params().beta;
    if (t == 0.0) return 0.0;
    double x = 1.0 / t;
    // 1/(1/beta) can round just below beta.
    if (x < beta && x >= beta * (1.0 - 4.0 * std::numeric_limits<double>::epsilon())) x = beta;
    if (!(t > 0.0) || !(x >= beta)) {
        throw DomainError("gauge h needs 0 <= t <= 1/beta = " + std::to_string(1.0 / beta));
    }
    if (spec.gamma == 0.0) return t * t;
    return t * t * std::pow(phi(spec, x), spec.gamma);
}

double log_gauge_h(const GaugeSpec& spec, double log_t) {
    const double log_beta = std::log(spec.params().beta);
    if (log_t > -log_beta) {
        if (log_t <= -log_beta * (1.0 - 4.0 * std::numeric_limits<double>::epsilon())) {
            log_t = -log_beta;
        } else {
            throw DomainError("gauge h needs t <= 1/beta");
        }
    }
    if (spec.gamma == 0.0) return 2.0 * log_t;
    const double p = phi_log(spec, -log_t);
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    return 2.0 * log_t + spec.gamma * std::log(p);
}

double gauge_increasing_limit(const GaugeSpec& spec) {
    const double beta = spec.params().beta;
    if (spec.gamma == 0.0) return 1.0 / beta;
    // d log h / d log t = 2 - gamma * (d log Phi / d log x), x = 1/t; scanned from large x down.
    const double lo = std::log(beta) + 1e-6;
    const double hi = 700.0;
    const int n = 4000;
    const double du = 1e-5;
    double last_good = std::exp(-hi);
    for (int i = n; i >= 0; --i) {
        const double u = lo + (hi - lo) * static_cast<double>(i) / n;
        const double um = std::max(lo, u - du);
        const double up = u + du;
        const double el = (std::log(phi_log(spec, up)) - std::log(phi_log(spec, um))) / (up - um);
        if (!(2.0 - spec.gamma * el > 0.0)) break;
        last_good = std::exp(-u);
    }
    return last_good;
}

RatioRange gauge_equivalence_ratio(const GaugeSpec& spec1, const GaugeSpec& spec2,
                                   std::span<const double> t_grid) {
    const double e1 = spec1.gamma * std::log(spec1.params().beta);
    const double e2 = spec2.gamma * std::log(spec2.params().beta);
    // |beta1^g1 / beta2^g2 - 1| to first order.
    if (std::abs(std::expm1(e1 - e2)) > 1e-10) {
        throw PreconditionError("gauge equivalence needs beta1^gamma1 = beta2^gamma2 within 1e-10 relative");
    }
    if (t_grid.empty()) throw PreconditionError("gauge equivalence needs a non-empty t grid");
    RatioRange out{std::numeric_limits<double>::infinity(), 0.0};
    for (double t : t_grid) {
        if (!(t > 0.0)) throw PreconditionError("t grid points must be positive");
        const double l1 = log_gauge_h(spec1, std::log(t));
        const double l2 = log_gauge_h(spec2, std::log(t));
        if (!std::isfinite(l1) || !std::isfinite(l2)) {
            throw PreconditionError("gauge vanishes at t = " + std::to_string(t) + "; ratio undefined");
        }
        const double r = std::exp(l1 - l2);
        out.min_ratio = std::min(out.min_ratio, r);
        out.max_ratio = std::max(out.max_ratio, r);
    }
    return out;
}

}  // namespace gaugedyn
