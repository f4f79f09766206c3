#include "gaugedyn/io.hpp"

#include <unistd.h>

#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gaugedyn/errors.hpp"

namespace gaugedyn {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) {
    if (header.empty()) throw PreconditionError("CSV header must have at least one column");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) text_ += ',';
        text_ += header[i];
    }
    text_ += '\n';
}

void CsvTable::add_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_number(v));
    add_row_text(cells);
}

void CsvTable::add_row_text(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw PreconditionError("CSV row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
    ++rows_;
}

void write_atomic(const std::string& path, std::string_view bytes) {
    namespace fs = std::filesystem;
    static std::atomic<unsigned> counter{0};
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open temporary file for " + path);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write failed for " + path);
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ignore;
        fs::remove(tmp, ignore);
        throw IoError("cannot rename temporary file onto " + path + ": " + ec.message());
    }
}

std::string encode_pgm(const BoolGrid& grid) {
    std::string out = "P5\n" + std::to_string(grid.nx()) + " " + std::to_string(grid.ny()) + "\n255\n";
    out.reserve(out.size() + grid.size());
    for (std::size_t r = grid.ny(); r-- > 0;) {
        for (std::size_t i = 0; i < grid.nx(); ++i) out.push_back(grid.at(i, r) ? '\xff' : '\0');
    }
    return out;
}

PgmImage decode_pgm(std::string_view bytes) {
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < bytes.size()) {
            const char c = bytes[pos];
            if (c == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (c == ' ' || c == '\n' || c == '\r' || c == '\t') {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto read_uint = [&]() -> std::size_t {
        skip_ws();
        std::size_t v = 0;
        auto res = std::from_chars(bytes.data() + pos, bytes.data() + bytes.size(), v);
        if (res.ec != std::errc{}) throw IoError("malformed PGM header");
        pos = static_cast<std::size_t>(res.ptr - bytes.data());
        return v;
    };
    if (bytes.size() < 2 || bytes.substr(0, 2) != "P5") throw IoError("not a P5 PGM");
    pos = 2;
    PgmImage img;
    img.width = read_uint();
    img.height = read_uint();
    img.maxval = static_cast<unsigned>(read_uint());
    if (img.maxval == 0 || img.maxval > 255) throw IoError("PGM maxval must be in [1, 255]");
    if (pos >= bytes.size()) throw IoError("truncated PGM");
    ++pos;  // single whitespace byte before the raster
    const std::size_t n = img.width * img.height;
    if (bytes.size() - pos != n) throw IoError("PGM raster size mismatch");
    img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end());
    return img;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace gaugedyn
