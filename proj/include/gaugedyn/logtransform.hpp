#pragma once

#include <span>
#include <string>
#include <vector>

#include "gaugedyn/dynamics.hpp"
#include "gaugedyn/grid.hpp"

namespace gaugedyn {

/// F(w) = log(lambda) + e^w, the logarithmic transform of E_lambda on its tract
/// {Re e^w > log(1/lambda)}. Throws DomainError outside the tract.
[[nodiscard]] cplx exp_tract_F(const ExpParams& params, cplx w);
/// Inverse branch G(zeta) = log(zeta - log lambda) and its derivative 1/(zeta - log lambda).
[[nodiscard]] cplx exp_tract_G(const ExpParams& params, cplx zeta);
[[nodiscard]] cplx exp_tract_G_prime(const ExpParams& params, cplx zeta);

/// Log-plane sample grid: in_tract(cell) <=> ReF(cell) > 0 with ReF = log|f(e^w)|.
struct TractGrid {
    BoolGrid in_tract;
    std::vector<double> ReF;  // index j * nx + i, same layout as in_tract
    std::size_t failures = 0; // cells whose evaluation failed (stored as not in tract, ReF = -inf)

    [[nodiscard]] double re_f(std::size_t i, std::size_t j) const noexcept { return ReF[j * in_tract.nx() + i]; }
    /// Cells with ReF > R (a subset of the tract mask for R >= 0).
    [[nodiscard]] BoolGrid level_mask(double R) const;
};

/// Evaluates log|f(exp(center))| per cell in log space, parallel over rows.
/// Throws PreconditionError for resolutions below 16 x 16.
[[nodiscard]] TractGrid tract_scan(const FamilyMember& f, const Rect& bbox, std::size_t nx, std::size_t ny,
                                   unsigned threads = 1);

/// F = log f(exp(w)), with its imaginary part continued from the value at w so that
/// nearby evaluations differ by less than pi.
[[nodiscard]] cplx log_transform(const FamilyMember& f, cplx w);
/// F'(w) by central differences with step h (imaginary jumps of 2 pi removed).
[[nodiscard]] cplx log_transform_derivative(const FamilyMember& f, cplx w, double h = 1e-6);

/// Solves F(w) = zeta (mod 2 pi i) by Newton from an initial point in the tract.
/// Throws ConvergenceError when Newton stalls.
[[nodiscard]] cplx log_transform_inverse(const FamilyMember& f, cplx zeta, cplx w_start);

/// max over samples of |(F^{-1})'(zeta)| Re zeta / (4 pi). Closed form for E_lambda;
/// Newton inversion plus finite differences for the Mittag-Leffler family.
/// Throws PreconditionError for Re zeta <= 0.
[[nodiscard]] double expansion_bound_check(const FamilyMember& f, std::span<const cplx> samples);

/// 2 pi times the fraction of n_theta angles with log|f(r e^{it})| >= r^beta_exp.
[[nodiscard]] double angular_measure_psi(const FamilyMember& f, double beta_exp, double r, std::size_t n_theta);

struct GapCheck {
    double lhs = 0.0;           // pi * integral_{r0}^{kappa r} dt / (t psi(t))
    double rhs = 0.0;           // log log M(r, f)
    std::size_t dropped = 0;    // quadrature nodes with psi = 0
};

/// Trapezoid quadrature on equally spaced log t nodes.
/// Throws PreconditionError unless 0 < kappa < 1, 0 < beta_exp < 1/2 and r >= r0 / kappa.
[[nodiscard]] GapCheck ab_integral_check(const FamilyMember& f, double beta_exp, double kappa, double r0, double r,
                                         std::size_t n_theta = 1024, std::size_t n_nodes = 257);

/// dens({in_tract and ReF > R}, Qstar) by cell counting.
/// Throws PreconditionError unless Qstar lies in the grid bbox with >= 64 cells across.
[[nodiscard]] double u_r_density(const TractGrid& grid, double R, const Square& Qstar);

/// P5 image of the tract mask (255 = in tract).
[[nodiscard]] std::string tract_grid_pgm(const TractGrid& grid);
/// CSV rows (w_re, w_im, in_tract, ReF) in row-major order from the bottom row.
[[nodiscard]] std::string tract_grid_csv(const TractGrid& grid);

}  // namespace gaugedyn
