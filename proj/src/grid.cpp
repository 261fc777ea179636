#include "socfield/grid.hpp"

namespace socfield {

namespace {

// Euclidean modulo: result in [0, m) for any a.
inline int mod_floor(int a, int m) {
    int r = a % m;
    return r < 0 ? r + m : r;
}

} // namespace

std::optional<SuIndex> wrap(const GridGeometry& g, int x, int y) {
    if (g.boundary == BoundaryMode::Periodic) {
        return SuIndex{mod_floor(x, g.width), mod_floor(y, g.height)};
    }
    if (x < 0 || x >= g.width || y < 0 || y >= g.height) return std::nullopt;
    return SuIndex{x, y};
}

SuIndex minimal_displacement(const GridGeometry& g, SuIndex center, SuIndex target) {
    int dx = target.x - center.x;
    int dy = target.y - center.y;
    if (g.boundary == BoundaryMode::Periodic) {
        // reduce into (-extent/2, extent/2], positive image on the midpoint tie
        dx = mod_floor(dx, g.width);
        if (2 * dx > g.width) dx -= g.width;
        dy = mod_floor(dy, g.height);
        if (2 * dy > g.height) dy -= g.height;
    }
    return SuIndex{dx, dy};
}

FootprintCells footprint_cells(const GridGeometry& g, SuIndex center, Footprint f) {
    FootprintCells out;
    out.cells.reserve(static_cast<std::size_t>(f.cells()));
    for (int oy = -f.half_h(); oy <= f.half_h(); ++oy) {
        for (int ox = -f.half_w(); ox <= f.half_w(); ++ox) {
            auto cell = wrap(g, center.x + ox, center.y + oy);
            if (cell) {
                out.cells.push_back(*cell);
            } else {
                out.clipped = true;
            }
        }
    }
    return out;
}

std::int64_t OccupancyGrid::occupied_count() const {
    std::int64_t n = 0;
    for (auto id : cells_) n += (id != kNoPedestrian);
    return n;
}

double local_density(const OccupancyGrid& occ, SuIndex center, int radius) {
    const GridGeometry& g = occ.geometry();
    std::int64_t occupied = 0;
    std::int64_t window = 0;
    for (int oy = -radius; oy <= radius; ++oy) {
        for (int ox = -radius; ox <= radius; ++ox) {
            auto cell = wrap(g, center.x + ox, center.y + oy);
            if (!cell) continue;
            ++window;
            occupied += !occ.empty_at(*cell);
        }
    }
    if (window == 0) return 0.0;
    return static_cast<double>(occupied) / static_cast<double>(window);
}

} // namespace socfield
