#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "socfield/engine.hpp"

namespace socfield {

enum class Directions { Uni, Bi, Four, Eight };

int direction_count(Directions d);
/// Goal sects of a direction pattern: Uni {0}, Bi {0,4}, Four {0,2,4,6}, Eight all.
std::vector<int> direction_sects(Directions d);
const char* directions_name(Directions d);

/// One scenario: grid, population recipe, field parameters, and run controls.
/// Parsed from a line-oriented `key = value` document with `#` comments.
struct ScenarioConfig {
    int format_version = 1;
    GridGeometry grid{100, 100, BoundaryMode::Periodic};
    double density = 0.5; // macroscopic occupancy fraction, (0,1]
    Directions directions = Directions::Eight;
    Footprint field_geometry{7, 7};
    Footprint pedestrian_geometry{1, 1};
    int walk_period_min = 1;
    int walk_period_max = 1;
    int chunk_k = 8;
    long ticks = 100;
    int repeats = 3;
    std::uint64_t seed = 42;
    double field_gain = 1.0;
    double field_decay = -0.5;
    double weight_static = 1.0;
    double weight_dir_attractive = 1.0;
    double weight_dir_repulsive = 1.0;
    double weight_recurrent = 1.0;
    double goal_bias = 1.0;
    Regulation regulation = Regulation::Identity;
    int density_radius = 3;
    long rebuild_interval = 50;

    EngineConfig engine_config() const;
    std::array<FieldSpec, kDynKinds> field_templates() const;
};

/// Parses and validates a scenario document. Unknown keys are rejected; all
/// constraint violations name the offending field.
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig parse_scenario_file(const std::string& path);

/// Canonical serialization; parse(serialize(cfg)) reproduces cfg exactly.
std::string serialize_scenario(const ScenarioConfig& cfg);

/// Constraint checks shared by parse and programmatic construction.
void validate_scenario(const ScenarioConfig& cfg);

/// Number of pedestrians a scenario seeds: floor(density * cells / footprint cells).
std::int64_t planned_population(const ScenarioConfig& cfg);

/// Field geometry scaled per the benchmark convention: (7*ratio) x (7*ratio),
/// odd ratios only.
Footprint scale_fields(const ScenarioConfig& cfg, int ratio);

/// Seeds the initial state: uniformly sampled non-overlapping centers (rejection
/// sampling with a bounded attempt budget, falling back to a footprint-aligned
/// sublattice for packings rejection sampling cannot reach), round-robin goal
/// sects, uniform walk periods, per-kind dynamic fields cloned from the config,
/// and freshly rasterized images.
SimState seed_population(const ScenarioConfig& cfg);

/// Writes one row per tick as delimited text with a header; durations in
/// microseconds. Returns the row count.
std::size_t write_metrics(const std::vector<TickMetrics>& metrics, std::ostream& out);
std::size_t write_metrics_file(const std::vector<TickMetrics>& metrics, const std::string& path);

/// Reads back a metrics file (round-trip of write_metrics).
std::vector<TickMetrics> read_metrics(std::istream& in);

} // namespace socfield
