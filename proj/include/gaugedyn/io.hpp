#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gaugedyn/grid.hpp"

namespace gaugedyn {

/// Shortest decimal string that parses back to exactly `v` ("inf", "-inf", "nan" otherwise).
[[nodiscard]] std::string format_number(double v);

/// In-memory CSV document: one header row, LF line endings, shortest round-trip numbers.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(const std::vector<double>& values);
    /// Cells already formatted by the caller (e.g. booleans as 0/1).
    void add_row_text(const std::vector<std::string>& cells);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t columns() const noexcept { return columns_; }
    [[nodiscard]] const std::string& text() const noexcept { return text_; }

private:
    std::size_t columns_ = 0;
    std::size_t rows_ = 0;
    std::string text_;
};

/// Writes `bytes` to `path` through a sibling temporary file and rename, so readers
/// never observe a partial file. Throws IoError.
void write_atomic(const std::string& path, std::string_view bytes);

/// P5 8-bit encoding of a mask: 255 = set, 0 = clear; the first image row is the top
/// of the bbox (largest Im).
[[nodiscard]] std::string encode_pgm(const BoolGrid& grid);

struct PgmImage {
    std::size_t width = 0;
    std::size_t height = 0;
    unsigned maxval = 0;
    std::vector<std::uint8_t> pixels;  // row-major, top row first
};

/// Parses a binary P5 image with maxval <= 255. Throws IoError on malformed input.
[[nodiscard]] PgmImage decode_pgm(std::string_view bytes);

[[nodiscard]] std::string read_file(const std::string& path);

}  // namespace gaugedyn
