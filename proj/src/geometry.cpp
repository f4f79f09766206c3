#include "gaugedyn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gaugedyn {

double Square::diam() const noexcept { return std::sqrt(2.0) * side; }

cplx Square::to_local(cplx z) const noexcept {
    return (z - center) * std::polar(1.0, -angle);
}

bool Square::contains(cplx z) const noexcept {
    const cplx u = to_local(z);
    return std::max(std::abs(u.real()), std::abs(u.imag())) < 0.5 * side;
}

bool Square::contains_closed(cplx z, double tol) const noexcept {
    const cplx u = to_local(z);
    return std::max(std::abs(u.real()), std::abs(u.imag())) <= 0.5 * side + tol;
}

std::array<cplx, 4> Square::corners() const noexcept {
    const double h = 0.5 * side;
    const cplx rot = std::polar(1.0, angle);
    return {center + rot * cplx(-h, -h), center + rot * cplx(h, -h), center + rot * cplx(h, h),
            center + rot * cplx(-h, h)};
}

Rect Square::bounding_box() const noexcept {
    Rect r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const cplx c : corners()) {
        r.x0 = std::min(r.x0, c.real());
        r.x1 = std::max(r.x1, c.real());
        r.y0 = std::min(r.y0, c.imag());
        r.y1 = std::max(r.y1, c.imag());
    }
    return r;
}

bool Square::contains_square(const Square& other, double tol) const noexcept {
    const auto cs = other.corners();
    return std::all_of(cs.begin(), cs.end(), [&](cplx c) { return contains_closed(c, tol); });
}

bool Polygon::contains(cplx z) const noexcept {
    bool inside = false;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const cplx a = vertices[i];
        const cplx b = vertices[j];
        if ((a.imag() > z.imag()) != (b.imag() > z.imag())) {
            const double x = a.real() + (z.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
            if (z.real() < x) inside = !inside;
        }
    }
    return inside;
}

double Polygon::area() const noexcept {
    double s = 0.0;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        s += vertices[j].real() * vertices[i].imag() - vertices[i].real() * vertices[j].imag();
    }
    return 0.5 * std::abs(s);
}

double Polygon::diam() const noexcept {
    double d = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        for (std::size_t j = i + 1; j < vertices.size(); ++j) {
            d = std::max(d, std::abs(vertices[i] - vertices[j]));
        }
    }
    return d;
}

Rect Polygon::bounding_box() const noexcept {
    Rect r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const cplx c : vertices) {
        r.x0 = std::min(r.x0, c.real());
        r.x1 = std::max(r.x1, c.real());
        r.y0 = std::min(r.y0, c.imag());
        r.y1 = std::max(r.y1, c.imag());
    }
    return r;
}

bool disjoint_axis_aligned(const Square& a, const Square& b, double tol) noexcept {
    const double reach = 0.5 * (a.side + b.side) - tol;
    const cplx d = a.center - b.center;
    return std::abs(d.real()) >= reach || std::abs(d.imag()) >= reach;
}

}  // namespace gaugedyn
