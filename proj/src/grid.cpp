#include "gaugedyn/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gaugedyn/errors.hpp"

namespace gaugedyn {

BoolGrid::BoolGrid(Rect bbox, std::size_t nx, std::size_t ny, bool fill)
    : bbox_(bbox), nx_(nx), ny_(ny), cells_(nx * ny, fill ? 1 : 0) {
    if (!bbox.valid() || nx == 0 || ny == 0) {
        throw PreconditionError("BoolGrid: bbox must have positive extent and nx, ny >= 1");
    }
}

cplx BoolGrid::center(std::size_t i, std::size_t j) const noexcept {
    return {bbox_.x0 + (static_cast<double>(i) + 0.5) * dx(), bbox_.y0 + (static_cast<double>(j) + 0.5) * dy()};
}

Rect BoolGrid::cell_rect(std::size_t i, std::size_t j) const noexcept {
    const double x = bbox_.x0 + static_cast<double>(i) * dx();
    const double y = bbox_.y0 + static_cast<double>(j) * dy();
    return {x, x + dx(), y, y + dy()};
}

std::size_t BoolGrid::count() const noexcept {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

bool BoolGrid::same_shape(const BoolGrid& o) const noexcept {
    return nx_ == o.nx_ && ny_ == o.ny_ && bbox_.x0 == o.bbox_.x0 && bbox_.x1 == o.bbox_.x1 &&
           bbox_.y0 == o.bbox_.y0 && bbox_.y1 == o.bbox_.y1;
}

namespace {

// Index window of cells whose centers can fall inside `r`.
struct Window {
    std::size_t i0, i1, j0, j1;
};

Window window_for(const BoolGrid& g, const Rect& r) {
    auto clampi = [](double v, std::size_t n) {
        if (v < 0.0) return std::size_t{0};
        if (v > static_cast<double>(n)) return n;
        return static_cast<std::size_t>(v);
    };
    const Rect& b = g.bbox();
    return {clampi(std::floor((r.x0 - b.x0) / g.dx()), g.nx()), clampi(std::ceil((r.x1 - b.x0) / g.dx()) + 1, g.nx()),
            clampi(std::floor((r.y0 - b.y0) / g.dy()), g.ny()), clampi(std::ceil((r.y1 - b.y0) / g.dy()) + 1, g.ny())};
}

}  // namespace

std::size_t cells_in(const BoolGrid& grid, const Square& region) {
    const Window w = window_for(grid, region.bounding_box());
    std::size_t n = 0;
    for (std::size_t j = w.j0; j < w.j1; ++j) {
        for (std::size_t i = w.i0; i < w.i1; ++i) {
            if (region.contains(grid.center(i, j))) ++n;
        }
    }
    return n;
}

double density(const BoolGrid& mask, const Square& region) {
    const Window w = window_for(mask, region.bounding_box());
    std::size_t total = 0;
    std::size_t hit = 0;
    for (std::size_t j = w.j0; j < w.j1; ++j) {
        for (std::size_t i = w.i0; i < w.i1; ++i) {
            if (!region.contains(mask.center(i, j))) continue;
            ++total;
            if (mask.at(i, j)) ++hit;
        }
    }
    if (total == 0) throw PreconditionError("density: region contains no grid cells");
    return static_cast<double>(hit) / static_cast<double>(total);
}

double density(const BoolGrid& mask, const BoolGrid& region) {
    if (!mask.same_shape(region)) throw PreconditionError("density: masks must share one grid");
    std::size_t total = 0;
    std::size_t hit = 0;
    for (std::size_t k = 0; k < mask.size(); ++k) {
        if (region.raw()[k] == 0) continue;
        ++total;
        if (mask.raw()[k] != 0) ++hit;
    }
    if (total == 0) throw PreconditionError("density: region mask is empty");
    return static_cast<double>(hit) / static_cast<double>(total);
}

}  // namespace gaugedyn
