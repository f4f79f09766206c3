#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gaugedyn/geometry.hpp"

namespace gaugedyn {

/// Boolean mask over a uniform nx-by-ny cell grid covering `bbox`.
/// Cell (i, j) has column i along Re and row j along Im; row 0 is the bottom.
class BoolGrid {
public:
    BoolGrid() = default;
    BoolGrid(Rect bbox, std::size_t nx, std::size_t ny, bool fill = false);

    [[nodiscard]] const Rect& bbox() const noexcept { return bbox_; }
    [[nodiscard]] std::size_t nx() const noexcept { return nx_; }
    [[nodiscard]] std::size_t ny() const noexcept { return ny_; }
    [[nodiscard]] std::size_t size() const noexcept { return cells_.size(); }
    [[nodiscard]] double dx() const noexcept { return bbox_.width() / static_cast<double>(nx_); }
    [[nodiscard]] double dy() const noexcept { return bbox_.height() / static_cast<double>(ny_); }

    [[nodiscard]] cplx center(std::size_t i, std::size_t j) const noexcept;
    [[nodiscard]] Rect cell_rect(std::size_t i, std::size_t j) const noexcept;

    [[nodiscard]] bool at(std::size_t i, std::size_t j) const noexcept { return cells_[j * nx_ + i] != 0; }
    void set(std::size_t i, std::size_t j, bool v) noexcept { cells_[j * nx_ + i] = v ? 1 : 0; }

    [[nodiscard]] std::size_t count() const noexcept;
    [[nodiscard]] const std::vector<std::uint8_t>& raw() const noexcept { return cells_; }
    [[nodiscard]] bool same_shape(const BoolGrid& other) const noexcept;

private:
    Rect bbox_{};
    std::size_t nx_ = 0;
    std::size_t ny_ = 0;
    std::vector<std::uint8_t> cells_;
};

/// dens(A, Q) as a cell-count ratio over the cells whose centers lie in Q.
[[nodiscard]] double density(const BoolGrid& mask, const Square& region);
/// dens(A, U) for two masks on the same grid.
[[nodiscard]] double density(const BoolGrid& mask, const BoolGrid& region);

/// Number of grid cells whose centers lie in `region`.
[[nodiscard]] std::size_t cells_in(const BoolGrid& grid, const Square& region);

}  // namespace gaugedyn
