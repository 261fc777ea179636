// Acceptance suite: every criterion prints exactly one [PASS]/[FAIL] line.
// Exit status is the number of failed criteria. `--only N` runs one criterion.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "socfield/bench.hpp"
#include "socfield/cli.hpp"

using namespace socfield;

namespace {

using Clock = std::chrono::steady_clock;

struct CriterionResult {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += why;
    }
};

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t state_digest(const SimState& s) {
    std::uint64_t h = 14695981039346656037ull;
    h = fnv1a(s.occupancy.raw().data(), s.occupancy.raw().size() * sizeof(std::int32_t), h);
    for (const auto& img : s.dyn_images) {
        h = fnv1a(img.raw().data(), img.raw().size() * sizeof(float), h);
    }
    for (const auto& p : s.pedestrians) {
        h = fnv1a(&p.center, sizeof p.center, h);
    }
    return h;
}

ScenarioConfig desk_config(int grid, double density, Directions dirs, Footprint ped,
                           std::uint64_t seed) {
    ScenarioConfig cfg;
    cfg.grid = GridGeometry(grid, grid, BoundaryMode::Periodic);
    cfg.density = density;
    cfg.directions = dirs;
    cfg.pedestrian_geometry = ped;
    cfg.walk_period_min = 1;
    cfg.walk_period_max = 3;
    cfg.seed = seed;
    cfg.rebuild_interval = 50;
    return cfg;
}

const std::vector<ScenarioConfig>& criterion3_scenarios() {
    static const std::vector<ScenarioConfig> configs = [] {
        std::vector<ScenarioConfig> out;
        std::uint64_t seed = 1000;
        for (const double density : {0.1, 0.5, 0.9}) {
            for (const Directions dirs :
                 {Directions::Uni, Directions::Bi, Directions::Four, Directions::Eight}) {
                for (const int ped : {1, 3}) {
                    out.push_back(desk_config(64, density, dirs, Footprint{ped, ped}, seed++));
                }
            }
        }
        return out;
    }();
    return configs;
}

std::string config_label(const ScenarioConfig& cfg) {
    std::ostringstream os;
    os << cfg.grid.width << "x" << cfg.grid.height << " d=" << cfg.density << " "
       << directions_name(cfg.directions) << " ped=" << cfg.pedestrian_geometry.width << "x"
       << cfg.pedestrian_geometry.height;
    return os.str();
}

// ---------------------------------------------------------------------------
// criterion 1: memory-plan reproduction
CriterionResult criterion1() {
    CriterionResult r;
    const GridGeometry grid(1000, 1000);
    const struct {
        int sf;
        std::int64_t m_recur;
        double gib;
    } expect[] = {
        {6, 192, 0.7},      {61, 1952, 7.3},    {164, 5248, 19.6},
        {328, 10496, 39.1}, {535, 17120, 63.8}, {808, 25856, 96.3},
    };
    const auto t0 = Clock::now();
    for (const auto& e : expect) {
        const MemoryPlan plan = memory_plan(e.sf, grid);
        if (plan.m_recur_bytes != e.m_recur) {
            r.fail("SF " + std::to_string(e.sf) + ": m_recur " +
                   std::to_string(plan.m_recur_bytes) + " != " + std::to_string(e.m_recur));
        }
        if (std::abs(plan.gib_display() - e.gib) > 0.05) {
            r.fail("SF " + std::to_string(e.sf) + ": M " + std::to_string(plan.gib_display()) +
                   " GiB != " + std::to_string(e.gib));
        }
    }
    const double ms = ms_since(t0);
    if (ms >= 1.0) r.fail("took " + std::to_string(ms) + " ms (budget 1 ms)");
    if (r.pass) r.detail = "6 fan-outs exact in " + std::to_string(ms) + " ms";
    return r;
}

// ---------------------------------------------------------------------------
// criterion 2: Eq.-equivalence of one-step and multi-step sums
CriterionResult criterion2() {
    CriterionResult r;
    std::mt19937_64 rng(20240001);
    std::uniform_int_distribution<std::size_t> len(0, 5000);
    std::uniform_real_distribution<double> real_term(-100.0, 100.0);
    std::uniform_int_distribution<std::int32_t> int_term(-(1 << 24) + 1, (1 << 24) - 1);

    int checked = 0;
    for (int trial = 0; trial < 10000 && r.pass; ++trial) {
        const bool integer_stream = trial % 2 == 1;
        std::vector<double> stream(len(rng));
        for (auto& x : stream) {
            x = integer_stream ? static_cast<double>(int_term(rng)) : real_term(rng);
        }
        const double one = one_step_sum(std::span<const double>(stream));
        double abs_sum = 0.0;
        for (const double x : stream) abs_sum += std::abs(x);
        for (const int k : {2, 4, 8, 16}) {
            const double multi = multi_step_sum(std::span<const double>(stream), k);
            ++checked;
            if (integer_stream) {
                if (multi != one) {
                    r.fail("integer stream n=" + std::to_string(stream.size()) +
                           " K=" + std::to_string(k) + " not exact");
                    break;
                }
            } else if (std::abs(multi - one) > 1e-6 * (1.0 + abs_sum)) {
                r.fail("stream n=" + std::to_string(stream.size()) + " K=" + std::to_string(k) +
                       " off by " + std::to_string(std::abs(multi - one)));
                break;
            }
        }
    }
    if (r.pass) r.detail = std::to_string(checked) + " sum pairs within 1e-6, integers exact";
    return r;
}

// ---------------------------------------------------------------------------
// criterion 3: sequential vs parallel bit-identical
CriterionResult criterion3() {
    CriterionResult r;
    const long ticks = 100;
    int runs = 0;
    for (const auto& cfg : criterion3_scenarios()) {
        // reference trajectory
        SimState seq_state = seed_population(cfg);
        EngineConfig seq_cfg = cfg.engine_config();
        seq_cfg.workers = 1;
        Engine seq_engine(cfg.grid, seq_cfg, cfg.field_templates());
        std::vector<std::uint64_t> digests;
        digests.reserve(ticks);
        for (long t = 0; t < ticks; ++t) {
            seq_engine.tick(seq_state, RunMode::Sequential);
            digests.push_back(state_digest(seq_state));
        }

        for (const int workers : {1, 2, 4, 8}) {
            SimState par_state = seed_population(cfg);
            EngineConfig par_cfg = cfg.engine_config();
            par_cfg.workers = workers;
            Engine par_engine(cfg.grid, par_cfg, cfg.field_templates());
            ++runs;
            for (long t = 0; t < ticks; ++t) {
                par_engine.tick(par_state, RunMode::Parallel);
                if (state_digest(par_state) != digests[static_cast<std::size_t>(t)]) {
                    r.fail(config_label(cfg) + " workers=" + std::to_string(workers) +
                           " diverged at tick " + std::to_string(t));
                    return r;
                }
            }
            std::string diag;
            if (!states_identical(seq_state, par_state, &diag)) {
                r.fail(config_label(cfg) + " workers=" + std::to_string(workers) +
                       " final state: " + diag);
                return r;
            }
        }
    }
    r.detail = std::to_string(criterion3_scenarios().size()) +
               " scenarios x workers {1,2,4,8}, " + std::to_string(ticks) +
               " ticks each bit-identical (" + std::to_string(runs) + " parallel runs)";
    return r;
}

// ---------------------------------------------------------------------------
// criterion 4: per-tick invariants over the criterion-3 scenarios
CriterionResult criterion4() {
    CriterionResult r;
    const long ticks = 100;
    for (const auto& cfg : criterion3_scenarios()) {
        SimState s = seed_population(cfg);
        EngineConfig ec = cfg.engine_config();
        ec.workers = 1;
        Engine engine(cfg.grid, ec, cfg.field_templates());
        const std::size_t population = s.pedestrians.size();

        std::vector<SuIndex> prev_centers(population);
        for (std::size_t i = 0; i < population; ++i) prev_centers[i] = s.pedestrians[i].center;

        bool enrollment_ok = true;
        const auto inspector = [&](int phase, const Engine& e, const SimState&) {
            if (phase != 2 || !enrollment_ok) return;
            for (int y = 0; y < cfg.grid.height && enrollment_ok; ++y) {
                for (int x = 0; x < cfg.grid.width; ++x) {
                    if (e.enrollment().count({x, y}) > 8) {
                        enrollment_ok = false;
                        break;
                    }
                }
            }
        };

        for (long t = 0; t < ticks; ++t) {
            const long gate_tick = s.tick;
            engine.tick(s, RunMode::Sequential, inspector);
            try {
                engine.verify_state(s); // overlap-freedom + occupancy consistency
            } catch (const IntegrityError& e) {
                r.fail(config_label(cfg) + " tick " + std::to_string(t) + ": " + e.what());
                return r;
            }
            if (!enrollment_ok) {
                r.fail(config_label(cfg) + " tick " + std::to_string(t) +
                       ": more than 8 registrants at one su");
                return r;
            }
            if (s.pedestrians.size() != population) {
                r.fail(config_label(cfg) + " tick " + std::to_string(t) + ": population changed");
                return r;
            }
            for (std::size_t i = 0; i < population; ++i) {
                const auto& p = s.pedestrians[i];
                const SuIndex d = minimal_displacement(cfg.grid, prev_centers[i], p.center);
                const int chebyshev = std::max(std::abs(d.x), std::abs(d.y));
                if (chebyshev > 1) {
                    r.fail(config_label(cfg) + " tick " + std::to_string(t) + ": pedestrian " +
                           std::to_string(p.id) + " moved " + std::to_string(chebyshev));
                    return r;
                }
                const bool gate_open = gate_tick % p.walk_period == p.walk_phase;
                if (!gate_open && chebyshev != 0) {
                    r.fail(config_label(cfg) + " tick " + std::to_string(t) + ": pedestrian " +
                           std::to_string(p.id) + " moved through a closed walk gate");
                    return r;
                }
                prev_centers[i] = p.center;
            }
        }
    }
    r.detail = std::to_string(criterion3_scenarios().size()) + " scenarios x " +
               std::to_string(ticks) +
               " ticks: overlap-freedom, conservation, enrollment bound, speed bound, walk gate "
               "all clean";
    return r;
}

// ---------------------------------------------------------------------------
// criterion 5: write-plan fan-out and contributor sets vs brute force
CriterionResult criterion5() {
    CriterionResult r;
    int plans = 0;
    for (int w = 1; w <= 11 && r.pass; w += 2) {
        for (int h = 1; h <= 11 && r.pass; h += 2) {
            for (const FieldKind kind :
                 {FieldKind::OmniAttractive, FieldKind::OmniRepulsive, FieldKind::DirAttractive,
                  FieldKind::DirRepulsive, FieldKind::RecurrentRepulsive}) {
                const int orientations = is_directional(kind) ? kSects : 1;
                for (int orient = 0; orient < orientations && r.pass; ++orient) {
                    const FieldSpec f(kind, Footprint{w, h}, 1.0, -0.5, orient);
                    const WritePlan plan = build_write_plan(f);
                    ++plans;
                    const std::string label = std::string(field_kind_name(kind)) + " " +
                                              std::to_string(w) + "x" + std::to_string(h);
                    if (fanout(plan) != fanout_brute_force(f)) {
                        r.fail(label + ": plan SF " + std::to_string(fanout(plan)) + " != brute " +
                               std::to_string(fanout_brute_force(f)));
                        break;
                    }
                    // completeness: every strength-carrying center offset appears in
                    // exactly one list slot
                    std::size_t expected_total = 0;
                    const int rw = f.geometry.half_w();
                    const int rh = f.geometry.half_h();
                    for (int cy = -rh; cy <= rh && r.pass; ++cy) {
                        for (int cx = -rw; cx <= rw; ++cx) {
                            const Vec2 s = strength_at_offset(f, Offset{-cx, -cy});
                            if (s.x == 0.0 && s.y == 0.0) continue;
                            ++expected_total;
                            const auto& list = plan.entries(sect_index(s));
                            int hits = 0;
                            for (const auto& e : list) {
                                if (e.center_offset == Offset{cx, cy}) ++hits;
                            }
                            if (hits != 1) {
                                r.fail(label + ": contributor (" + std::to_string(cx) + "," +
                                       std::to_string(cy) + ") appears " + std::to_string(hits) +
                                       " times");
                                break;
                            }
                        }
                    }
                    // injectivity: slots strictly ordered, totals match
                    std::size_t total = 0;
                    for (int sct = 0; sct < kSects && r.pass; ++sct) {
                        const auto& list = plan.entries(sct);
                        total += list.size();
                        for (std::size_t i = 1; i < list.size(); ++i) {
                            if (!(list[i - 1].center_offset < list[i].center_offset)) {
                                r.fail(label + ": slot order not strictly increasing");
                                break;
                            }
                        }
                    }
                    if (r.pass && total != expected_total) {
                        r.fail(label + ": " + std::to_string(total) + " entries, expected " +
                               std::to_string(expected_total));
                    }
                }
                if (!r.pass) break;
            }
        }
    }
    if (r.pass) {
        r.detail = std::to_string(plans) +
                   " plans (5 kinds, odd geometries to 11x11) match the brute-force oracle";
    }
    return r;
}

// ---------------------------------------------------------------------------
// criterion 6: incremental image fidelity after 500 ticks
CriterionResult criterion6() {
    CriterionResult r;
    ScenarioConfig cfg = desk_config(64, 0.5, Directions::Eight, Footprint{1, 1}, 77);
    cfg.rebuild_interval = 0; // never rebuild: measure raw incremental drift
    SimState s = seed_population(cfg);
    EngineConfig ec = cfg.engine_config();
    ec.workers = 1;
    Engine engine(cfg.grid, ec, cfg.field_templates());
    engine.run(s, 500, RunMode::Sequential);

    const auto scratch = engine.rebuild_images(s);
    float worst = 0.0f;
    for (int k = 0; k < kDynKinds; ++k) {
        worst = std::max(worst, StrengthImage::max_abs_difference(s.dyn_images[k], scratch[k]));
    }
    if (worst > 1e-4f) {
        r.fail("drift " + std::to_string(worst) + " exceeds 1e-4 after 500 ticks");
    } else {
        std::ostringstream os;
        os << "max drift " << worst << " after 500 ticks without rebuilds";
        r.detail = os.str();
    }
    return r;
}

// ---------------------------------------------------------------------------
// criterion 7: desk-scale timing trends
CriterionResult criterion7() {
    CriterionResult r;

    SweepSpec spec;
    spec.base = desk_config(128, 0.5, Directions::Eight, Footprint{1, 1}, 501);
    spec.base.rebuild_interval = 0;
    spec.ticks = 40;
    spec.repeats = 3;
    spec.workers = 1;
    spec.mode = RunMode::Sequential;
    spec.warmup = true;

    // (a) mean tick time monotone non-decreasing in the field-geometry ratio
    SweepSpec ratio_spec = spec;
    ratio_spec.field_ratios = {1, 3, 5};
    const BenchReport ratios = run_bench(ratio_spec);
    std::ostringstream ratio_times;
    for (std::size_t i = 0; i < ratios.rows.size(); ++i) {
        const auto& row = ratios.rows[i];
        if (row.status != "ok") {
            r.fail("ratio sweep: " + row.status);
            return r;
        }
        ratio_times << (i ? ", " : "") << "SF " << row.sf << ": " << row.mean_tick_ms() << " ms";
        if (i > 0 && row.mean_tick_ms() < ratios.rows[i - 1].mean_tick_ms()) {
            r.fail("tick time not monotone in ratio: " + ratio_times.str());
        }
    }

    // (b) tick time varies by < 25% across maximal walk periods
    SweepSpec period_spec = spec;
    period_spec.walk_period_maxes = {1, 3, 5, 7, 9, 11};
    const BenchReport periods = run_bench(period_spec);
    double lo = 1e300, hi = 0.0;
    for (const auto& row : periods.rows) {
        if (row.status != "ok") {
            r.fail("period sweep: " + row.status);
            return r;
        }
        lo = std::min(lo, row.mean_tick_ms());
        hi = std::max(hi, row.mean_tick_ms());
    }
    const double variation = (hi - lo) / lo;
    if (variation >= 0.25) {
        std::ostringstream os;
        os << "walk-period variation " << variation * 100.0 << "% exceeds 25%";
        r.fail(os.str());
    }
    if (r.pass) {
        std::ostringstream os;
        os << "ratio sweep (" << ratio_times.str() << ") monotone; period variation "
           << variation * 100.0 << "%";
        r.detail = os.str();
    }
    return r;
}

// ---------------------------------------------------------------------------
// criterion 8: joint-geometry seeding arithmetic
CriterionResult criterion8() {
    CriterionResult r;
    const struct {
        int ped;
        std::int64_t population;
    } expect[] = {{1, 500000}, {3, 55555}, {5, 20000}, {7, 10204}, {9, 6172}, {11, 4132}};
    for (const auto& e : expect) {
        ScenarioConfig cfg;
        cfg.grid = GridGeometry(1000, 1000, BoundaryMode::Periodic);
        cfg.density = 0.5;
        cfg.pedestrian_geometry = Footprint{e.ped, e.ped};
        const std::int64_t got = planned_population(cfg);
        if (got != e.population) {
            r.fail("ped " + std::to_string(e.ped) + "x" + std::to_string(e.ped) + ": " +
                   std::to_string(got) + " != " + std::to_string(e.population));
        }
    }
    if (r.pass) r.detail = "6 pedestrian geometries reproduce the expected populations";
    return r;
}

struct Criterion {
    int number;
    const char* name;
    CriterionResult (*fn)();
};

constexpr Criterion kCriteria[] = {
    {1, "memory-plan reproduction", criterion1},
    {2, "one-step/multi-step sum equivalence", criterion2},
    {3, "sequential/parallel oracle equivalence", criterion3},
    {4, "per-tick invariant suite", criterion4},
    {5, "fan-out brute-force oracle", criterion5},
    {6, "incremental image fidelity", criterion6},
    {7, "timing trend checks", criterion7},
    {8, "joint-geometry seeding arithmetic", criterion8},
};

} // namespace

int main(int argc, char** argv) {
    std::optional<int> only;
    for (int i = 1; i < argc; ++i) {
        if (std::string(argv[i]) == "--only" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        }
    }

    int failures = 0;
    for (const auto& c : kCriteria) {
        if (only && *only != c.number) continue;
        const auto t0 = Clock::now();
        CriterionResult result;
        try {
            result = c.fn();
        } catch (const std::exception& e) {
            result.pass = false;
            result.detail = std::string("exception: ") + e.what();
        }
        const double sec = ms_since(t0) / 1000.0;
        std::cout << (result.pass ? "[PASS]" : "[FAIL]") << " criterion " << c.number << " "
                  << c.name << " - " << result.detail << " [" << sec << " s]" << std::endl;
        failures += result.pass ? 0 : 1;
    }
    return failures;
}
