#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "gaugedyn/geometry.hpp"

namespace gaugedyn {

/// Gamma(x) for x > 0 (overflows to inf past ~171.6). Throws DomainError for x <= 0.
[[nodiscard]] double gamma_fn(double x);
/// log Gamma(x) for x > 0, usable where Gamma itself overflows.
[[nodiscard]] double log_gamma(double x);
/// 1 / Gamma(x) on the whole real line; exactly 0 at non-positive integers.
[[nodiscard]] double rgamma(double x);

/// f_rho(z) = sum z^n / Gamma(n/rho + 1), summed in quadruple precision until five
/// consecutive decreasing terms fall below tol * |partial sum|.
/// Throws DomainError for rho <= 0 or tol <= 0, ConvergenceError past `max_terms`.
[[nodiscard]] cplx ml_series(double rho, cplx z, double tol = 1e-20, std::size_t max_terms = 10000);
/// log f_rho(z) from the same summation; finite where f_rho(z) itself overflows a double.
[[nodiscard]] cplx ml_series_log(double rho, cplx z, double tol = 1e-20, std::size_t max_terms = 10000);

/// Dominant term of the sector representation in log form: log(rho) + z^rho (principal branch).
/// Checked form: |arg z| <= pi/(2 rho) + delta and |z| >= R, else DomainError.
[[nodiscard]] cplx ml_sector(double rho, cplx z, double R = 0.0, double delta = -1.0);

namespace detail {
struct MLTable;
}

/// Scaled Mittag-Leffler member f_{a,rho} = a f_rho. `a` underflows for moderate rho and R,
/// so the scaling is carried as log_a (a itself may be 0).
struct MLParams {
    double rho = 0.0;
    double a = 0.0;
    double log_a = 0.0;
    double R = 0.0;          // large cutoff radius, R > C0 / sin(delta)
    double delta = 0.0;      // sector widening
    double C0 = 0.0;         // sampled max of |f_rho(z) - rho e^{z^rho}| |z| on a moderate ring
    double r_switch = 0.0;   // series used for |z| <= r_switch, asymptotics beyond
    double x_max = 0.0;      // r_switch^rho
    double seam_error = 0.0; // max |series - asymptotic| / max(1, |log f|) in log space at r_switch
    std::shared_ptr<const detail::MLTable> table;
};

struct MLOptions {
    double delta = -1.0;            // default pi / (4 rho)
    std::size_t calib_samples = 720;
};

/// Builds parameters: delta, C0 and R, series seam, and the calibrated scaling.
/// Throws DomainError for rho <= 1/2, PreconditionError for an invalid delta.
[[nodiscard]] MLParams make_ml_params(double rho, const MLOptions& options = {});

/// w(z) = log f_rho(z) (unscaled). Series with double or quad accumulation depending on
/// cancellation, or the sector asymptotics beyond the seam.
[[nodiscard]] cplx ml_log(const MLParams& params, cplx z);
/// log f_rho(exp(w)), with z^rho formed as exp(rho w) so e^w never materializes.
[[nodiscard]] cplx ml_log_at_log(const MLParams& params, cplx w);
/// log(a f_rho(z)).
[[nodiscard]] cplx ml_eval(const MLParams& params, cplx z);
/// log(a f_rho(exp(w))).
[[nodiscard]] cplx ml_eval_at_log(const MLParams& params, cplx w);

/// log a with a = 0.5 / max sampled |f_rho| over |z| = R and over the part of
/// R <= |z| <= 10 R outside |arg z| <= pi/(2 rho) + delta.
[[nodiscard]] double calibrate_scaling_log(double rho, double R, std::size_t n_samples, double delta = -1.0);
/// exp(calibrate_scaling_log(...)); 0 when a underflows.
[[nodiscard]] double calibrate_scaling(double rho, double R, std::size_t n_samples, double delta = -1.0);

/// Band family S_rho = {Im z in [pi/(2 rho), 2 pi - pi/(2 rho)] mod 2 pi}.
struct SectorSpec {
    double rho = 1.0;

    [[nodiscard]] double band_low() const noexcept;    // pi / (2 rho)
    [[nodiscard]] double band_height() const noexcept; // 2 pi - pi / rho
};

[[nodiscard]] bool sector_contains(const SectorSpec& spec, cplx z);

inline constexpr double kPackingSlack = 0.05;

/// Smallest box side for which the packing below is guaranteed to reach
/// (1 - 1/(2 rho)) - kPackingSlack, for a box rotated by `angle`.
[[nodiscard]] double packing_min_side(double rho, double angle = 0.0);

/// Disjoint axis-aligned squares of side 2 pi (1 - 1/(2 rho)) inside S_rho and B, one row
/// per band, left-aligned on each band's feasible interval.
/// Throws PreconditionError if B.side < packing_min_side(rho, B.angle).
[[nodiscard]] std::vector<Square> sector_square_packing(const SectorSpec& spec, const Square& B);

/// Same placement without the size precondition.
[[nodiscard]] std::vector<Square> sector_square_packing_unchecked(const SectorSpec& spec, const Square& B);

}  // namespace gaugedyn
