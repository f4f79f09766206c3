#pragma once

#include <functional>
#include <vector>

#include "gaugedyn/geometry.hpp"
#include "gaugedyn/grid.hpp"

namespace gaugedyn {

using HoloMap = std::function<cplx(cplx)>;

struct Bounds {
    double lo = 0.0;
    double hi = 0.0;
};

/// |f'(z)| / |f'(z0)| sandwich for f univalent on D(z0, r), at s = |z - z0| < r, scaled by d0 = |f'(z0)|.
[[nodiscard]] Bounds koebe_derivative_bounds(double r, double d0, double s);
/// |f(z) - f(z0)| sandwich under the same hypotheses.
[[nodiscard]] Bounds koebe_value_bounds(double r, double d0, double s);

/// L = sup|f'| / inf|f'| over the samples; D_lower = max over sample pairs of the ratio of the largest to
/// the smallest difference quotient, so D_lower <= D(f).
struct DistortionEstimate {
    double L = 1.0;
    double D_lower = 1.0;
    double min_df = 0.0, max_df = 0.0;
    double min_quotient = 0.0, max_quotient = 0.0;
};

/// Central difference (f(z + h) - f(z - h)) / 2h.
[[nodiscard]] cplx fd_derivative(const HoloMap& f, cplx z, double h);

/// True iff the closed polygon through f(curve[k]) has no crossing between non-adjacent edges.
/// A holomorphic map that is injective on the boundary of a Jordan domain is univalent inside.
[[nodiscard]] bool boundary_image_is_simple(const HoloMap& f, const std::vector<cplx>& curve);

/// Samples the closed square on an m-by-m lattice, m = max(2, round(sqrt n_samples)), boundary included.
/// Throws IllConditionedError when the image of the boundary crosses itself, or when two samples have a
/// difference quotient below injectivity_tol * min|f'|.
[[nodiscard]] DistortionEstimate estimate_distortion(const HoloMap& f, const Square& region, std::size_t n_samples,
                                                     unsigned threads = 1, double injectivity_tol = 1e-3);
/// Same over arbitrary sample points; `h` is the difference step.
[[nodiscard]] DistortionEstimate estimate_distortion(const HoloMap& f, const std::vector<cplx>& samples, double h,
                                                     unsigned threads = 1, double injectivity_tol = 1e-3);

/// Polar lattice of the closed disk D(z0, r): the center plus `rings` circles of `per_ring` points.
[[nodiscard]] std::vector<cplx> disk_samples(cplx z0, double r, std::size_t rings, std::size_t per_ring);

struct LemmaFirstReport {
    double L_measured = 0.0, L_bound = 0.0;
    double D_lower = 0.0, D_bound = 0.0;
    [[nodiscard]] bool holds() const noexcept { return L_measured <= L_bound && D_lower <= D_bound; }
};

/// f univalent on D(z0, K r); measures on D(z0, r) against ((K+1)/(K-1))^4 and ^6.
[[nodiscard]] LemmaFirstReport lemma_first_check(const HoloMap& f, cplx z0, double r, double K,
                                                 std::size_t n_samples = 400);

/// Worst ratio |f'(z)| / bound over samples of D(z0, r) (hi side) and bound / |f'(z)| (lo side);
/// both stay <= 1 (+ difference error) for univalent f.
struct SandwichReport {
    double worst_hi = 0.0;
    double worst_lo = 0.0;
};
[[nodiscard]] SandwichReport koebe_sandwich(const HoloMap& f, cplx z0, double r, std::size_t rings = 24,
                                            std::size_t per_ring = 48, double max_s_fraction = 0.95);

struct SquareFrames {
    Square inner, outer;
    bool contained = false;  // inner lies in f(Q)
    bool contains = false;   // f(Q) lies in outer
};

/// inner = Q(f(z0), |f'(z0)| r (1 - sqrt2 eps) / d, theta + arg f'(z0)); outer uses d (1 + sqrt2 eps).
/// Both memberships are decided from n_boundary images of the boundary of Q.
[[nodiscard]] SquareFrames square_image_frames(const HoloMap& f, const Square& Q, double d, double eps,
                                               std::size_t n_boundary = 1000);

struct DensityTransfer {
    double lhs = 0.0;  // dens(A, U)
    double rhs = 0.0;  // L^2 dens(f(A), f(U)), image areas from |f'|^2 weighted cells
    double L = 1.0;
};

/// Cells of the mask grid whose centers lie in U form U; the set cells among them form A.
[[nodiscard]] DensityTransfer density_transfer_check(const HoloMap& f, const BoolGrid& A, const Square& U,
                                                     unsigned threads = 1);

/// z -> (a z + b) / (c z + d) with ad - bc != 0.
struct Mobius {
    cplx a{1.0, 0.0}, b{0.0, 0.0}, c{0.0, 0.0}, d{1.0, 0.0};

    [[nodiscard]] cplx operator()(cplx z) const { return (a * z + b) / (c * z + d); }
    [[nodiscard]] cplx derivative(cplx z) const;
    [[nodiscard]] Mobius inverse() const { return Mobius{d, -b, -c, a}; }
    [[nodiscard]] HoloMap as_map() const;
    /// L on the closed disk D(z0, r); equals D there since the image is a disk.
    /// Throws DomainError if the pole meets the closed disk.
    [[nodiscard]] double distortion_on_disk(cplx z0, double r) const;
    /// Image of the closed disk D(z0, r) as (center, radius); the pole must lie outside.
    [[nodiscard]] std::pair<cplx, double> image_disk(cplx z0, double r) const;
};

/// g o f.
[[nodiscard]] Mobius compose(const Mobius& g, const Mobius& f);

/// Largest |f(z)/z - 1| over samples of 0 < |z| < delta for a normalized univalent f (f(0) = 0, f'(0) = 1).
[[nodiscard]] double epsdelta_witness(const HoloMap& f, double delta, std::size_t rings = 16,
                                      std::size_t per_ring = 64);

/// z^4 on U = {4(x-1)^2 + y^2 < 1}.
struct QuarticExample {
    double L_measured = 0.0;
    double L_closed = 0.0;       // (sup|z| / inf|z|)^3 = (2 sqrt(7/3))^3
    bool full_domain_injective = true;  // false: samples of U collide under z^4
    std::vector<double> gap;           // distance of the sample pairs to 1 +- i
    std::vector<double> D_lower;       // inside U and |arg z| < pi/4, plus the pair 1 +- i(1 - gap)
};

[[nodiscard]] QuarticExample quartic_example(std::size_t n_samples = 2500);

}  // namespace gaugedyn
