#include "socfield/bench.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

namespace socfield {

double MemoryPlan::gib_display() const {
    return std::round(gib * 10.0) / 10.0;
}

MemoryPlan memory_plan(int sf, const GridGeometry& grid) {
    if (sf < 0) throw ConfigError("sf", "must be >= 0");
    MemoryPlan plan;
    plan.sf = sf;
    plan.m_recur_bytes = static_cast<std::int64_t>(sf) * kSects * 4;
    // equal field geometries: m_attra = m_repul = m_recur
    plan.m_total_bytes = plan.m_recur_bytes + plan.m_recur_bytes + 2 * plan.m_recur_bytes;
    plan.grid_bytes = plan.m_total_bytes * grid.cells();
    plan.gib = static_cast<double>(plan.grid_bytes) / static_cast<double>(1ll << 30);
    return plan;
}

namespace {

ScenarioConfig combo_config(const SweepSpec& spec, std::size_t gi, std::size_t di, std::size_t ri,
                            std::size_t fi, std::size_t wi, std::size_t pi) {
    ScenarioConfig cfg = spec.base;
    if (!spec.grids.empty()) {
        cfg.grid.width = spec.grids[gi].first;
        cfg.grid.height = spec.grids[gi].second;
    }
    if (!spec.densities.empty()) cfg.density = spec.densities[di];
    if (!spec.directions.empty()) cfg.directions = spec.directions[ri];
    if (!spec.field_ratios.empty()) cfg.field_geometry = scale_fields(cfg, spec.field_ratios[fi]);
    if (!spec.walk_period_maxes.empty()) {
        cfg.walk_period_min = 1;
        cfg.walk_period_max = spec.walk_period_maxes[wi];
    }
    if (!spec.pedestrian_geometries.empty()) {
        const Footprint p = spec.pedestrian_geometries[pi];
        cfg.pedestrian_geometry = p;
        cfg.field_geometry = Footprint{7 * p.width, 7 * p.height};
    }
    if (spec.ticks >= 0) cfg.ticks = spec.ticks;
    if (spec.repeats >= 1) cfg.repeats = spec.repeats;
    return cfg;
}

double timed_run_ms(const ScenarioConfig& cfg, const SweepSpec& spec) {
    SimState s = seed_population(cfg);
    EngineConfig ec = cfg.engine_config();
    ec.workers = spec.workers;
    Engine engine(cfg.grid, ec, cfg.field_templates());
    const auto t0 = std::chrono::steady_clock::now();
    engine.run(s, cfg.ticks, spec.mode);
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

} // namespace

BenchReport run_bench(const SweepSpec& spec) {
    if (!spec.field_ratios.empty() && !spec.pedestrian_geometries.empty())
        throw ConfigError("sweep", "field ratios and pedestrian geometries cannot be swept together");

    const auto axis = [](std::size_t n) { return n == 0 ? std::size_t{1} : n; };
    BenchReport report;
    for (std::size_t gi = 0; gi < axis(spec.grids.size()); ++gi)
    for (std::size_t di = 0; di < axis(spec.densities.size()); ++di)
    for (std::size_t ri = 0; ri < axis(spec.directions.size()); ++ri)
    for (std::size_t fi = 0; fi < axis(spec.field_ratios.size()); ++fi)
    for (std::size_t wi = 0; wi < axis(spec.walk_period_maxes.size()); ++wi)
    for (std::size_t pi = 0; pi < axis(spec.pedestrian_geometries.size()); ++pi) {
        BenchRow row;
        try {
            const ScenarioConfig cfg = combo_config(spec, gi, di, ri, fi, wi, pi);
            row.grid = cfg.grid;
            row.density = cfg.density;
            row.directions = cfg.directions;
            row.field_geometry = cfg.field_geometry;
            row.pedestrian_geometry = cfg.pedestrian_geometry;
            row.walk_period_max = cfg.walk_period_max;
            row.ticks = cfg.ticks;
            row.repeats = cfg.repeats;
            row.population = planned_population(cfg);
            row.sf = fanout(build_write_plan(
                FieldSpec(FieldKind::RecurrentRepulsive, cfg.field_geometry, cfg.field_gain,
                          cfg.field_decay)));

            if (spec.warmup) timed_run_ms(cfg, spec);
            double sum = 0.0;
            row.min_ms = std::numeric_limits<double>::infinity();
            row.max_ms = 0.0;
            for (int r = 0; r < cfg.repeats; ++r) {
                const double ms = timed_run_ms(cfg, spec);
                sum += ms;
                row.min_ms = std::min(row.min_ms, ms);
                row.max_ms = std::max(row.max_ms, ms);
            }
            row.mean_ms = sum / cfg.repeats;
        } catch (const std::exception& e) {
            row.status = std::string("error: ") + e.what();
            row.mean_ms = row.min_ms = row.max_ms = 0.0;
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

void write_bench_report(const BenchReport& report, std::ostream& out) {
    out << "grid,density,directions,field_geometry,pedestrian_geometry,walk_period_max,"
           "population,sf,ticks,repeats,mean_ms,min_ms,max_ms,status\n";
    for (const auto& r : report.rows) {
        out << r.grid.width << 'x' << r.grid.height << ',' << r.density << ','
            << directions_name(r.directions) << ',' << r.field_geometry.width << 'x'
            << r.field_geometry.height << ',' << r.pedestrian_geometry.width << 'x'
            << r.pedestrian_geometry.height << ',' << r.walk_period_max << ',' << r.population
            << ',' << r.sf << ',' << r.ticks << ',' << r.repeats << ',' << r.mean_ms << ','
            << r.min_ms << ',' << r.max_ms << ',' << r.status << '\n';
    }
}

} // namespace socfield
