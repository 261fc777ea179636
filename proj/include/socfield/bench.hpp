#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "socfield/scenario.hpp"

namespace socfield {

/// Memory budget of the atomics-free field update for a given strength fan-out:
/// per-su bytes for the recurrent caches (SF * 8 sects * 4-byte scalars), the
/// per-su total over the four dynamic/static cache families under the
/// equal-geometry assumption, and the whole-grid total.
struct MemoryPlan {
    int sf = 0;
    std::int64_t m_recur_bytes = 0; // per su, recurrent repulsive caches
    std::int64_t m_total_bytes = 0; // per su: attractive + repulsive + 2 * recurrent
    std::int64_t grid_bytes = 0;    // m_total * grid cells
    double gib = 0.0;               // grid_bytes / 2^30

    /// gib rounded to one decimal for display.
    double gib_display() const;
};

MemoryPlan memory_plan(int sf, const GridGeometry& grid);

/// One benchmark configuration with wall-time statistics over its repeats.
struct BenchRow {
    GridGeometry grid;
    double density = 0.0;
    Directions directions = Directions::Eight;
    Footprint field_geometry{7, 7};
    Footprint pedestrian_geometry{1, 1};
    int walk_period_max = 1;
    std::int64_t population = 0;
    int sf = 0; // recurrent-field strength fan-out of this configuration
    long ticks = 0;
    int repeats = 0;
    double mean_ms = 0.0;
    double min_ms = 0.0;
    double max_ms = 0.0;
    std::string status = "ok"; // "ok" or "error: ..."

    double mean_tick_ms() const { return ticks > 0 ? mean_ms / static_cast<double>(ticks) : 0.0; }
};

struct BenchReport {
    std::vector<BenchRow> rows;
};

/// Cross-product sweep specification. Empty axes fall back to the base scenario's
/// value. Field ratios scale the field geometry to (7*ratio)^2; a pedestrian
/// geometry sweep scales fields to (7*width) x (7*height) alongside, matching the
/// joint-geometry benchmark convention. The two axes are mutually exclusive.
struct SweepSpec {
    ScenarioConfig base;
    std::vector<std::pair<int, int>> grids;
    std::vector<double> densities;
    std::vector<Directions> directions;
    std::vector<int> field_ratios;
    std::vector<int> walk_period_maxes;
    std::vector<Footprint> pedestrian_geometries;
    long ticks = -1;   // -1: take from base
    int repeats = -1;  // -1: take from base
    int workers = 0;
    RunMode mode = RunMode::Parallel;
    bool warmup = true; // one discarded run per configuration before timing
};

/// Runs every combination `repeats` times and collects wall-time rows.
/// Per-combination failures are recorded in the row status; the sweep continues.
BenchReport run_bench(const SweepSpec& spec);

/// Delimited text, header first, one row per configuration.
void write_bench_report(const BenchReport& report, std::ostream& out);

} // namespace socfield
