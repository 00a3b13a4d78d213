#pragma once

#include <cstdint>
#include <vector>

namespace duonav {

struct CellIdx {
    int x = 0;
    int y = 0;
    bool operator==(const CellIdx& o) const { return x == o.x && y == o.y; }
    bool operator<(const CellIdx& o) const {
        return y != o.y ? y < o.y : x < o.x;
    }
};

template <typename T>
struct Grid2D {
    int w = 0;
    int h = 0;
    std::vector<T> cells;

    Grid2D() = default;
    Grid2D(int width, int height, T fill = T{})
        : w(width), h(height), cells(static_cast<size_t>(width) * height, fill) {}

    bool in_bounds(int x, int y) const { return x >= 0 && x < w && y >= 0 && y < h; }
    bool in_bounds(const CellIdx& c) const { return in_bounds(c.x, c.y); }

    T& at(int x, int y) { return cells[static_cast<size_t>(y) * w + x]; }
    const T& at(int x, int y) const { return cells[static_cast<size_t>(y) * w + x]; }
    T& at(const CellIdx& c) { return at(c.x, c.y); }
    const T& at(const CellIdx& c) const { return at(c.x, c.y); }

    size_t size() const { return cells.size(); }
};

}  // namespace duonav
