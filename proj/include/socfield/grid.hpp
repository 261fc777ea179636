#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "socfield/errors.hpp"

namespace socfield {

enum class BoundaryMode { Periodic, Closed };

/// Index of one space unit (su), the minimal discrete cell of the lattice.
struct SuIndex {
    int x = 0;
    int y = 0;

    friend bool operator==(SuIndex a, SuIndex b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(SuIndex a, SuIndex b) { return !(a == b); }
    friend bool operator<(SuIndex a, SuIndex b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    }
};

/// Rectangular lattice of space units.
struct GridGeometry {
    int width = 1;
    int height = 1;
    BoundaryMode boundary = BoundaryMode::Periodic;

    GridGeometry() = default;
    GridGeometry(int w, int h, BoundaryMode b = BoundaryMode::Periodic)
        : width(w), height(h), boundary(b) {
        if (w < 1) throw ConfigError("width", "must be >= 1");
        if (h < 1) throw ConfigError("height", "must be >= 1");
    }

    std::int64_t cells() const noexcept {
        return static_cast<std::int64_t>(width) * height;
    }
    std::size_t flat(SuIndex p) const noexcept {
        return static_cast<std::size_t>(p.y) * width + p.x;
    }
    friend bool operator==(const GridGeometry& a, const GridGeometry& b) {
        return a.width == b.width && a.height == b.height && a.boundary == b.boundary;
    }
};

/// Odd-by-odd extent of a pedestrian body or a field's discrete support.
struct Footprint {
    int width = 1;
    int height = 1;

    Footprint() = default;
    Footprint(int w, int h) : width(w), height(h) {
        if (w < 1 || w % 2 == 0) throw ConfigError("footprint.width", "must be odd and positive");
        if (h < 1 || h % 2 == 0) throw ConfigError("footprint.height", "must be odd and positive");
    }

    int half_w() const noexcept { return (width - 1) / 2; }
    int half_h() const noexcept { return (height - 1) / 2; }
    int cells() const noexcept { return width * height; }
    friend bool operator==(Footprint a, Footprint b) {
        return a.width == b.width && a.height == b.height;
    }
    friend bool operator!=(Footprint a, Footprint b) { return !(a == b); }
};

/// Normalizes a raw coordinate pair into the lattice. Under Periodic the result is
/// always engaged; under Closed an out-of-range pair yields nullopt (a value, not
/// an error).
std::optional<SuIndex> wrap(const GridGeometry& g, int x, int y);

inline std::optional<SuIndex> wrap(const GridGeometry& g, SuIndex p) {
    return wrap(g, p.x, p.y);
}

/// Componentwise minimal-image displacement target - center. Under Periodic each
/// component is reduced into (-extent/2, extent/2]; under Closed it is the raw
/// difference.
SuIndex minimal_displacement(const GridGeometry& g, SuIndex center, SuIndex target);

struct FootprintCells {
    std::vector<SuIndex> cells;
    bool clipped = false; // Closed boundary only: footprint crossed the edge
};

/// All cells of footprint `f` centered at `center`, wrapped per boundary mode.
FootprintCells footprint_cells(const GridGeometry& g, SuIndex center, Footprint f);

constexpr std::int32_t kNoPedestrian = -1;

/// Per-su occupant map. Each cell holds one pedestrian id or kNoPedestrian.
class OccupancyGrid {
public:
    OccupancyGrid() = default;
    explicit OccupancyGrid(const GridGeometry& g)
        : geom_(g), cells_(static_cast<std::size_t>(g.cells()), kNoPedestrian) {}

    const GridGeometry& geometry() const noexcept { return geom_; }

    std::int32_t at(SuIndex p) const { return cells_[geom_.flat(p)]; }
    void set(SuIndex p, std::int32_t id) { cells_[geom_.flat(p)] = id; }
    bool empty_at(SuIndex p) const { return at(p) == kNoPedestrian; }

    std::int64_t occupied_count() const;

    const std::vector<std::int32_t>& raw() const noexcept { return cells_; }
    friend bool operator==(const OccupancyGrid& a, const OccupancyGrid& b) {
        return a.geom_ == b.geom_ && a.cells_ == b.cells_;
    }

private:
    GridGeometry geom_;
    std::vector<std::int32_t> cells_;
};

/// Fraction of occupied cells within Chebyshev `radius` of `center`. The window
/// wraps under Periodic and is clipped under Closed (the denominator shrinks with
/// the clip).
double local_density(const OccupancyGrid& occ, SuIndex center, int radius);

} // namespace socfield
