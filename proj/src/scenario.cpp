#include "socfield/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace socfield {

int direction_count(Directions d) {
    switch (d) {
        case Directions::Uni: return 1;
        case Directions::Bi: return 2;
        case Directions::Four: return 4;
        case Directions::Eight: return 8;
    }
    return 0;
}

std::vector<int> direction_sects(Directions d) {
    switch (d) {
        case Directions::Uni: return {0};
        case Directions::Bi: return {0, 4};
        case Directions::Four: return {0, 2, 4, 6};
        case Directions::Eight: return {0, 1, 2, 3, 4, 5, 6, 7};
    }
    return {};
}

const char* directions_name(Directions d) {
    switch (d) {
        case Directions::Uni: return "uni";
        case Directions::Bi: return "bi";
        case Directions::Four: return "four";
        case Directions::Eight: return "eight";
    }
    return "?";
}

EngineConfig ScenarioConfig::engine_config() const {
    EngineConfig ec;
    ec.chunk_k = chunk_k;
    ec.weight_static = weight_static;
    ec.weight_dir_attractive = weight_dir_attractive;
    ec.weight_dir_repulsive = weight_dir_repulsive;
    ec.weight_recurrent = weight_recurrent;
    ec.goal_bias = goal_bias;
    ec.regulation = regulation;
    ec.density_radius = density_radius;
    ec.rebuild_interval = rebuild_interval;
    return ec;
}

std::array<FieldSpec, kDynKinds> ScenarioConfig::field_templates() const {
    return {
        FieldSpec(FieldKind::DirAttractive, field_geometry, field_gain, field_decay, 0),
        FieldSpec(FieldKind::DirRepulsive, field_geometry, field_gain, field_decay, 0),
        FieldSpec(FieldKind::RecurrentRepulsive, field_geometry, field_gain, field_decay, 0),
    };
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

long parse_long(const std::string& v, int line) {
    try {
        std::size_t used = 0;
        const long x = std::stol(v, &used);
        if (used != v.size()) throw ParseError("trailing characters in integer '" + v + "'", line);
        return x;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("expected an integer, got '" + v + "'", line);
    }
}

std::uint64_t parse_u64(const std::string& v, int line) {
    try {
        std::size_t used = 0;
        const unsigned long long x = std::stoull(v, &used);
        if (used != v.size()) throw ParseError("trailing characters in integer '" + v + "'", line);
        return x;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("expected an unsigned integer, got '" + v + "'", line);
    }
}

double parse_double(const std::string& v, int line) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw ParseError("trailing characters in number '" + v + "'", line);
        return x;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("expected a number, got '" + v + "'", line);
    }
}

std::pair<int, int> parse_dims(const std::string& v, int line) {
    const auto pos = v.find('x');
    if (pos == std::string::npos)
        throw ParseError("expected WIDTHxHEIGHT, got '" + v + "'", line);
    const long w = parse_long(trim(v.substr(0, pos)), line);
    const long h = parse_long(trim(v.substr(pos + 1)), line);
    return {static_cast<int>(w), static_cast<int>(h)};
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void validate_scenario(const ScenarioConfig& cfg) {
    if (cfg.format_version != 1) throw ConfigError("version", "unsupported format version");
    if (cfg.grid.width < 1 || cfg.grid.height < 1) throw ConfigError("grid", "must be at least 1x1");
    if (!(cfg.density > 0.0) || cfg.density > 1.0)
        throw ConfigError("density", "must be in (0, 1]");
    const auto odd = [](const Footprint& f) { return f.width % 2 == 1 && f.height % 2 == 1; };
    if (!odd(cfg.field_geometry) || cfg.field_geometry.width < 1)
        throw ConfigError("field_geometry", "must be odd x odd");
    if (!odd(cfg.pedestrian_geometry) || cfg.pedestrian_geometry.width < 1)
        throw ConfigError("pedestrian_geometry", "must be odd x odd");
    if (cfg.pedestrian_geometry.width > cfg.grid.width ||
        cfg.pedestrian_geometry.height > cfg.grid.height)
        throw ConfigError("pedestrian_geometry", "must fit inside the grid");
    if (cfg.walk_period_min < 1) throw ConfigError("walk_period", "minimum must be >= 1");
    if (cfg.walk_period_max < cfg.walk_period_min)
        throw ConfigError("walk_period", "maximum must be >= minimum");
    if (!valid_chunk_width(cfg.chunk_k)) throw ConfigError("chunk_k", "must be 2, 4, 8, or 16");
    if (cfg.ticks < 0) throw ConfigError("ticks", "must be >= 0");
    if (cfg.repeats < 1) throw ConfigError("repeats", "must be >= 1");
    if (!(cfg.field_gain >= 0.0) || !std::isfinite(cfg.field_gain))
        throw ConfigError("field_gain", "must be finite and >= 0");
    if (!std::isfinite(cfg.field_decay)) throw ConfigError("field_decay", "must be finite");
    for (const auto& [name, v] :
         {std::pair<const char*, double>{"weight_static", cfg.weight_static},
          {"weight_dir_attractive", cfg.weight_dir_attractive},
          {"weight_dir_repulsive", cfg.weight_dir_repulsive},
          {"weight_recurrent", cfg.weight_recurrent},
          {"goal_bias", cfg.goal_bias}}) {
        if (!std::isfinite(v)) throw ConfigError(name, "must be finite");
    }
    if (cfg.density_radius < 0) throw ConfigError("density_radius", "must be >= 0");
    if (cfg.rebuild_interval < 0) throw ConfigError("rebuild_interval", "must be >= 0");
    // at least one pedestrian per direction group
    if (cfg.density * static_cast<double>(cfg.grid.cells()) <
        static_cast<double>(direction_count(cfg.directions)))
        throw ConfigError("density", "density * grid cells must cover every direction group");
}

ScenarioConfig parse_scenario(const std::string& text) {
    ScenarioConfig cfg;
    std::map<std::string, int> seen;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line);
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) throw ParseError("missing key", line);
        if (value.empty()) throw ParseError("missing value for '" + key + "'", line);
        if (auto [it, inserted] = seen.try_emplace(key, line); !inserted)
            throw ParseError("duplicate key '" + key + "' (first on line " +
                                 std::to_string(it->second) + ")",
                             line);

        if (key == "version") {
            cfg.format_version = static_cast<int>(parse_long(value, line));
        } else if (key == "grid") {
            const auto [w, h] = parse_dims(value, line);
            if (w < 1 || h < 1) throw ConfigError("grid", "must be at least 1x1");
            cfg.grid.width = w;
            cfg.grid.height = h;
        } else if (key == "boundary") {
            if (value == "periodic") cfg.grid.boundary = BoundaryMode::Periodic;
            else if (value == "closed") cfg.grid.boundary = BoundaryMode::Closed;
            else throw ConfigError("boundary", "must be 'periodic' or 'closed'");
        } else if (key == "density") {
            cfg.density = parse_double(value, line);
        } else if (key == "directions") {
            if (value == "uni") cfg.directions = Directions::Uni;
            else if (value == "bi") cfg.directions = Directions::Bi;
            else if (value == "four") cfg.directions = Directions::Four;
            else if (value == "eight") cfg.directions = Directions::Eight;
            else throw ConfigError("directions", "must be uni, bi, four, or eight");
        } else if (key == "field_geometry") {
            const auto [w, h] = parse_dims(value, line);
            cfg.field_geometry.width = w;
            cfg.field_geometry.height = h;
        } else if (key == "pedestrian_geometry") {
            const auto [w, h] = parse_dims(value, line);
            cfg.pedestrian_geometry.width = w;
            cfg.pedestrian_geometry.height = h;
        } else if (key == "walk_period") {
            const auto dots = value.find("..");
            if (dots == std::string::npos) {
                cfg.walk_period_min = cfg.walk_period_max =
                    static_cast<int>(parse_long(value, line));
            } else {
                cfg.walk_period_min = static_cast<int>(parse_long(trim(value.substr(0, dots)), line));
                cfg.walk_period_max =
                    static_cast<int>(parse_long(trim(value.substr(dots + 2)), line));
            }
        } else if (key == "chunk_k") {
            cfg.chunk_k = static_cast<int>(parse_long(value, line));
        } else if (key == "ticks") {
            cfg.ticks = parse_long(value, line);
        } else if (key == "repeats") {
            cfg.repeats = static_cast<int>(parse_long(value, line));
        } else if (key == "seed") {
            cfg.seed = parse_u64(value, line);
        } else if (key == "field_gain") {
            cfg.field_gain = parse_double(value, line);
        } else if (key == "field_decay") {
            cfg.field_decay = parse_double(value, line);
        } else if (key == "weight_static") {
            cfg.weight_static = parse_double(value, line);
        } else if (key == "weight_dir_attractive") {
            cfg.weight_dir_attractive = parse_double(value, line);
        } else if (key == "weight_dir_repulsive") {
            cfg.weight_dir_repulsive = parse_double(value, line);
        } else if (key == "weight_recurrent") {
            cfg.weight_recurrent = parse_double(value, line);
        } else if (key == "goal_bias") {
            cfg.goal_bias = parse_double(value, line);
        } else if (key == "regulation") {
            if (value == "identity") cfg.regulation = Regulation::Identity;
            else if (value == "linear") cfg.regulation = Regulation::Linear;
            else throw ConfigError("regulation", "must be 'identity' or 'linear'");
        } else if (key == "density_radius") {
            cfg.density_radius = static_cast<int>(parse_long(value, line));
        } else if (key == "rebuild_interval") {
            cfg.rebuild_interval = parse_long(value, line);
        } else {
            throw ParseError("unknown key '" + key + "'", line);
        }
    }
    validate_scenario(cfg);
    return cfg;
}

ScenarioConfig parse_scenario_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
    std::ostringstream out;
    out << "version = " << cfg.format_version << "\n";
    out << "grid = " << cfg.grid.width << "x" << cfg.grid.height << "\n";
    out << "boundary = " << (cfg.grid.boundary == BoundaryMode::Periodic ? "periodic" : "closed")
        << "\n";
    out << "density = " << format_double(cfg.density) << "\n";
    out << "directions = " << directions_name(cfg.directions) << "\n";
    out << "field_geometry = " << cfg.field_geometry.width << "x" << cfg.field_geometry.height
        << "\n";
    out << "pedestrian_geometry = " << cfg.pedestrian_geometry.width << "x"
        << cfg.pedestrian_geometry.height << "\n";
    out << "walk_period = " << cfg.walk_period_min << ".." << cfg.walk_period_max << "\n";
    out << "chunk_k = " << cfg.chunk_k << "\n";
    out << "ticks = " << cfg.ticks << "\n";
    out << "repeats = " << cfg.repeats << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "field_gain = " << format_double(cfg.field_gain) << "\n";
    out << "field_decay = " << format_double(cfg.field_decay) << "\n";
    out << "weight_static = " << format_double(cfg.weight_static) << "\n";
    out << "weight_dir_attractive = " << format_double(cfg.weight_dir_attractive) << "\n";
    out << "weight_dir_repulsive = " << format_double(cfg.weight_dir_repulsive) << "\n";
    out << "weight_recurrent = " << format_double(cfg.weight_recurrent) << "\n";
    out << "goal_bias = " << format_double(cfg.goal_bias) << "\n";
    out << "regulation = " << (cfg.regulation == Regulation::Identity ? "identity" : "linear")
        << "\n";
    out << "density_radius = " << cfg.density_radius << "\n";
    out << "rebuild_interval = " << cfg.rebuild_interval << "\n";
    return out.str();
}

std::int64_t planned_population(const ScenarioConfig& cfg) {
    return static_cast<std::int64_t>(std::floor(
        cfg.density * static_cast<double>(cfg.grid.cells()) /
        static_cast<double>(cfg.pedestrian_geometry.cells())));
}

Footprint scale_fields(const ScenarioConfig&, int ratio) {
    if (ratio < 1 || ratio % 2 == 0) throw ConfigError("ratio", "must be odd and >= 1");
    return Footprint{7 * ratio, 7 * ratio};
}

namespace {

// Centers placeable without leaving a Closed grid (any center under Periodic).
bool center_feasible(const GridGeometry& g, SuIndex c, const Footprint& f) {
    if (g.boundary == BoundaryMode::Periodic) return true;
    return c.x >= f.half_w() && c.x + f.half_w() < g.width && c.y >= f.half_h() &&
           c.y + f.half_h() < g.height;
}

bool area_free(const OccupancyGrid& occ, SuIndex c, const Footprint& f) {
    const auto cells = footprint_cells(occ.geometry(), c, f);
    if (cells.clipped) return false;
    for (const SuIndex p : cells.cells) {
        if (!occ.empty_at(p)) return false;
    }
    return true;
}

void occupy(OccupancyGrid& occ, SuIndex c, const Footprint& f, std::int32_t id) {
    for (const SuIndex p : footprint_cells(occ.geometry(), c, f).cells) occ.set(p, id);
}

std::vector<SuIndex> place_centers(const ScenarioConfig& cfg, std::int64_t count,
                                   std::mt19937_64& rng) {
    const GridGeometry& g = cfg.grid;
    const Footprint fp = cfg.pedestrian_geometry;
    std::vector<SuIndex> centers;
    centers.reserve(static_cast<std::size_t>(count));
    OccupancyGrid occ(g);
    std::uniform_int_distribution<int> dx(0, g.width - 1);
    std::uniform_int_distribution<int> dy(0, g.height - 1);

    std::int64_t budget = 64 * count;
    bool exhausted = false;
    while (static_cast<std::int64_t>(centers.size()) < count && !exhausted) {
        for (;;) {
            if (budget-- <= 0) {
                exhausted = true;
                break;
            }
            const SuIndex c{dx(rng), dy(rng)};
            if (!center_feasible(g, c, fp)) continue;
            if (!area_free(occ, c, fp)) continue;
            occupy(occ, c, fp, static_cast<std::int32_t>(centers.size()));
            centers.push_back(c);
            break;
        }
    }
    if (!exhausted) return centers;

    // Rejection sampling jams well below full packing for footprints larger than
    // one su. Restart on the footprint-aligned sublattice, where any feasible
    // population fits, and sample slots without replacement.
    std::vector<SuIndex> slots;
    for (int y = fp.half_h(); y + fp.half_h() < g.height; y += fp.height) {
        for (int x = fp.half_w(); x + fp.half_w() < g.width; x += fp.width) {
            slots.push_back(SuIndex{x, y});
        }
    }
    if (static_cast<std::int64_t>(slots.size()) < count) {
        throw SeedingError("cannot place " + std::to_string(count) + " pedestrians of " +
                           std::to_string(fp.width) + "x" + std::to_string(fp.height) +
                           " on a " + std::to_string(g.width) + "x" + std::to_string(g.height) +
                           " grid: density too high for the footprint");
    }
    std::shuffle(slots.begin(), slots.end(), rng);
    slots.resize(static_cast<std::size_t>(count));
    return slots;
}

} // namespace

SimState seed_population(const ScenarioConfig& cfg) {
    validate_scenario(cfg);
    const std::int64_t count = planned_population(cfg);

    SimState s;
    s.occupancy = OccupancyGrid(cfg.grid);
    s.static_image = StrengthImage(cfg.grid);
    s.rng_seed = cfg.seed;
    s.tick = 0;

    std::mt19937_64 rng(cfg.seed);
    const auto centers = place_centers(cfg, count, rng);

    const auto sects = direction_sects(cfg.directions);
    const auto templates = cfg.field_templates();
    std::uniform_int_distribution<int> period(cfg.walk_period_min, cfg.walk_period_max);

    s.pedestrians.reserve(centers.size());
    for (std::size_t i = 0; i < centers.size(); ++i) {
        Pedestrian p;
        p.id = static_cast<std::int32_t>(i);
        p.center = centers[i];
        p.footprint = cfg.pedestrian_geometry;
        p.walk_period = cfg.walk_period_min == cfg.walk_period_max ? cfg.walk_period_min
                                                                   : period(rng);
        p.walk_phase = static_cast<int>(i) % p.walk_period;
        p.goal_sect = sects[i % sects.size()];
        p.dyn_fields = templates;
        for (auto& f : p.dyn_fields) {
            if (is_directional(f.kind)) f.orientation = p.goal_sect;
        }
        occupy(s.occupancy, p.center, p.footprint, p.id);
        s.pedestrians.push_back(std::move(p));
    }

    s.dyn_images = rasterize_dynamic(s.pedestrians, cfg.grid);
    return s;
}

std::size_t write_metrics(const std::vector<TickMetrics>& metrics, std::ostream& out) {
    out << "# socfield-metrics 1\n";
    out << "tick,k1_us,k2_us,k3_us,k4_us,k5_us,moved,wall_us\n";
    for (const auto& m : metrics) {
        out << m.tick;
        for (const auto us : m.phase_us) out << ',' << us;
        out << ',' << m.moved << ',' << m.wall_us << '\n';
    }
    if (!out) throw std::runtime_error("metrics destination I/O failure");
    return metrics.size();
}

std::size_t write_metrics_file(const std::vector<TickMetrics>& metrics, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open metrics destination '" + path + "'");
    const std::size_t n = write_metrics(metrics, f);
    f.flush();
    if (!f) throw std::runtime_error("metrics destination I/O failure: '" + path + "'");
    return n;
}

std::vector<TickMetrics> read_metrics(std::istream& in) {
    std::vector<TickMetrics> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("tick,", 0) == 0) continue;
        TickMetrics m;
        long long k1, k2, k3, k4, k5;
        if (std::sscanf(line.c_str(),
                        "%ld,%lld,%lld,%lld,%lld,%lld,%" SCNd64 ",%" SCNd64, &m.tick, &k1, &k2,
                        &k3, &k4, &k5, &m.moved, &m.wall_us) != 8) {
            throw ParseError("malformed metrics row: '" + line + "'");
        }
        m.phase_us = {k1, k2, k3, k4, k5};
        out.push_back(m);
    }
    return out;
}

} // namespace socfield
