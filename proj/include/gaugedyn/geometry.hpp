#pragma once

#include <array>
#include <complex>
#include <vector>

namespace gaugedyn {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Axis-aligned rectangle [x0, x1] x [y0, y1] in the complex plane.
struct Rect {
    double x0 = 0.0;
    double x1 = 0.0;
    double y0 = 0.0;
    double y1 = 0.0;

    [[nodiscard]] double width() const noexcept { return x1 - x0; }
    [[nodiscard]] double height() const noexcept { return y1 - y0; }
    [[nodiscard]] double area() const noexcept { return width() * height(); }
    [[nodiscard]] bool contains(cplx z) const noexcept {
        return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1;
    }
    [[nodiscard]] bool valid() const noexcept { return x1 > x0 && y1 > y0; }
};

/// Square Q(center, side, angle) = center + e^{i angle} Q(0, side, 0), where
/// Q(0, side, 0) = {max(|Re z|, |Im z|) < side/2}.
struct Square {
    cplx center{0.0, 0.0};
    double side = 1.0;
    double angle = 0.0;

    [[nodiscard]] double diam() const noexcept;
    [[nodiscard]] double area() const noexcept { return side * side; }

    /// Coordinates of z in the square's own frame (center at 0, axis-aligned).
    [[nodiscard]] cplx to_local(cplx z) const noexcept;

    /// Open-square membership.
    [[nodiscard]] bool contains(cplx z) const noexcept;
    /// Closed-square membership with absolute slack `tol` in the local frame.
    [[nodiscard]] bool contains_closed(cplx z, double tol = 0.0) const noexcept;

    /// Corners in counter-clockwise order starting at the local (-,-) corner.
    [[nodiscard]] std::array<cplx, 4> corners() const noexcept;
    [[nodiscard]] Rect bounding_box() const noexcept;

    /// Closed containment of another square (corner test; both are convex).
    [[nodiscard]] bool contains_square(const Square& other, double tol = 0.0) const noexcept;
};

/// Simple polygon given by its vertices (no self-intersections assumed).
struct Polygon {
    std::vector<cplx> vertices;

    [[nodiscard]] bool contains(cplx z) const noexcept;
    [[nodiscard]] double area() const noexcept;
    [[nodiscard]] double diam() const noexcept;
    [[nodiscard]] Rect bounding_box() const noexcept;
};

/// Interiors of two axis-aligned squares are disjoint.
[[nodiscard]] bool disjoint_axis_aligned(const Square& a, const Square& b, double tol = 0.0) noexcept;

}  // namespace gaugedyn
