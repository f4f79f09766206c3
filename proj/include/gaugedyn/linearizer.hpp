#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace gaugedyn {

/// Parameter of E_lambda(z) = lambda * exp(z) together with its two real fixed
/// points: q (attracting, 0 < q < 1) and beta (repelling, beta > 1).
struct ExpParams {
    double lambda = 0.0;
    double log_lambda = 0.0;
    double q = 0.0;
    double beta = 0.0;
};

/// Solves lambda * e^x = x on (0, 1) and (1, inf) for lambda in (0, 1/e).
/// Throws DomainError outside that interval (at 1/e both roots merge at x = 1).
[[nodiscard]] ExpParams solve_fixed_points(double lambda);

/// Truncated Koenigs linearizer L(z) = sum a_k z^k with L(0) = beta, L'(0) = 1 and
/// E_lambda(L(z)) = L(beta z), plus the reverted series of L near 0 used for local
/// inversion.
struct LinearizerSeries {
    ExpParams params;
    std::vector<double> coeffs;   // a_0 .. a_N
    std::vector<double> reverted; // b_0 = 0, b_1 = 1, ..., b_M: L^{-1}(beta + v) = sum b_k v^k
    double radius = 0.0;          // |a_N| radius^N stays below 1e-16 * beta

    [[nodiscard]] std::size_t order() const noexcept { return coeffs.size() - 1; }
    [[nodiscard]] double eval(double w) const noexcept;
    [[nodiscard]] double derivative(double w) const noexcept;
};

/// Matches powers of z in lambda * exp(L(z)) = L(beta z) up to order N >= 2.
/// Throws IllConditionedError when beta - 1 is too small for the recurrence denominators.
[[nodiscard]] LinearizerSeries koenigs_series(const ExpParams& params, std::size_t order);

/// Coefficients of lambda * exp(L(z)) computed by direct power-series composition of the
/// truncated polynomial, compared term by term to L(beta z). Returns the largest
/// absolute coefficient mismatch.
[[nodiscard]] double series_residual(const LinearizerSeries& series);

/// Gauge h_{lambda,gamma}(t) = t^2 Phi_lambda(1/t)^gamma and the data needed to
/// evaluate Phi_lambda = (L_lambda restricted to R)^{-1} on [beta, inf).
struct GaugeSpec {
    std::shared_ptr<const LinearizerSeries> series;
    double gamma = 0.0;
    double pullback_tol = 0.0;  // local inversion once |y - beta| <= pullback_tol

    [[nodiscard]] const ExpParams& params() const noexcept { return series->params; }
};

inline constexpr std::size_t kDefaultSeriesOrder = 24;
inline constexpr std::size_t kPullbackCap = 1000000;

/// Builds a gauge with the default series order and pullback_tol = 1e-3 (beta - 1).
[[nodiscard]] GaugeSpec make_gauge(double lambda, double gamma, std::size_t order = kDefaultSeriesOrder);
[[nodiscard]] GaugeSpec make_gauge(std::shared_ptr<const LinearizerSeries> series, double gamma);

/// Phi_lambda(x) for x >= beta, by pulling x back through log(y / lambda) and inverting
/// the series near beta: Phi(x) = beta^n Phi(E^{-n}(x)).
[[nodiscard]] double phi(const GaugeSpec& spec, double x);
/// Phi_lambda(exp(log_x)); valid for any log_x >= log(beta), including x far beyond
/// double range.
[[nodiscard]] double phi_log(const GaugeSpec& spec, double log_x);
/// Phi_lambda(E_lambda^k(x)) without forming the iterate.
[[nodiscard]] double phi_iterated(const GaugeSpec& spec, double x, unsigned k);

/// h(t) = t^2 Phi(1/t)^gamma on 0 <= t <= 1/beta (h(0) = 0).
[[nodiscard]] double gauge_h(const GaugeSpec& spec, double t);
/// log h(exp(log_t)) for log_t <= -log(beta); -inf where h vanishes.
[[nodiscard]] double log_gauge_h(const GaugeSpec& spec, double log_t);

/// Largest sampled t* such that h is strictly increasing on (0, t*]. For gamma > 0 the
/// gauge returns to 0 at t = 1/beta, so its increasing range ends before that.
[[nodiscard]] double gauge_increasing_limit(const GaugeSpec& spec);

struct RatioRange {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
};

/// Extremes of h1(t) / h2(t) over `t_grid` for gauges with beta1^gamma1 = beta2^gamma2.
/// Throws PreconditionError if the exponents do not match to 1e-10 relative or a grid
/// point leaves either domain.
[[nodiscard]] RatioRange gauge_equivalence_ratio(const GaugeSpec& spec1, const GaugeSpec& spec2,
                                                 std::span<const double> t_grid);

}  // namespace gaugedyn
