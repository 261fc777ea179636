#include "socfield/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace socfield::cli {

namespace {

ScenarioConfig load_scenario(const std::string& path, const std::optional<long>& ticks,
                             const std::optional<std::uint64_t>& seed,
                             const std::optional<int>& chunk_k) {
    ScenarioConfig cfg = parse_scenario_file(path);
    if (ticks) cfg.ticks = *ticks;
    if (seed) cfg.seed = *seed;
    if (chunk_k) cfg.chunk_k = *chunk_k;
    validate_scenario(cfg);
    return cfg;
}

int map_exception(std::ostream& err) {
    try {
        throw;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitParseError;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitSeedingError;
    } catch (const SeedingError& e) {
        err << "error: " << e.what() << "\n";
        return kExitSeedingError;
    } catch (const IntegrityError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIntegrityError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitIoError;
    }
}

} // namespace

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
    try {
        const ScenarioConfig cfg =
            load_scenario(args.scenario_path, args.ticks, args.seed, args.chunk_k);
        SimState s = seed_population(cfg);
        EngineConfig ec = cfg.engine_config();
        ec.workers = args.workers;
        Engine engine(cfg.grid, ec, cfg.field_templates());

        const auto t0 = std::chrono::steady_clock::now();
        const auto metrics = engine.run(s, cfg.ticks, args.mode);
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();

        if (!args.out_path.empty()) write_metrics_file(metrics, args.out_path);

        std::int64_t moved = 0;
        for (const auto& m : metrics) moved += m.moved;
        out << "ran " << cfg.ticks << " ticks on " << cfg.grid.width << "x" << cfg.grid.height
            << " with " << s.pedestrians.size() << " pedestrians ("
            << (args.mode == RunMode::Sequential ? "sequential" : "parallel") << ", K="
            << cfg.chunk_k << ")\n";
        out << "final tick " << s.tick << ", moves " << moved << ", wall " << ms << " ms";
        if (!args.out_path.empty()) out << ", metrics -> " << args.out_path;
        out << "\n";
        return kExitOk;
    } catch (...) {
        return map_exception(err);
    }
}

int cmd_validate(const ValidateArgs& args, std::ostream& out, std::ostream& err) {
    try {
        ScenarioConfig cfg = load_scenario(args.scenario_path, args.ticks, args.seed, args.chunk_k);
        const long ticks = cfg.ticks;

        SimState seq_state = seed_population(cfg);
        SimState par_state = seq_state;

        EngineConfig seq_cfg = cfg.engine_config();
        seq_cfg.workers = 1;
        EngineConfig par_cfg = cfg.engine_config();
        par_cfg.workers = args.workers;
        par_cfg.fault_invert_vote_tiebreak = args.inject_tiebreak_fault;

        Engine seq_engine(cfg.grid, seq_cfg, cfg.field_templates());
        Engine par_engine(cfg.grid, par_cfg, cfg.field_templates());
        seq_engine.verify_state(seq_state);

        // phase snapshots taken from the sequential engine, compared inside the
        // parallel engine's tick
        std::array<std::vector<std::int32_t>, 6> seq_winners;
        std::array<std::vector<std::int32_t>, 6> seq_from, seq_to;
        std::string divergence;
        int divergence_phase = 0;

        for (long t = 0; t < ticks; ++t) {
            seq_engine.tick(seq_state, RunMode::Sequential,
                            [&](int phase, const Engine& e, const SimState&) {
                                seq_winners[phase] = e.vote_winners();
                                seq_from[phase] = e.movement_log().moved_from;
                                seq_to[phase] = e.movement_log().moved_to;
                            });
            par_engine.tick(par_state, RunMode::Parallel,
                            [&](int phase, const Engine& e, const SimState&) {
                                if (!divergence.empty()) return;
                                if (e.vote_winners() != seq_winners[phase]) {
                                    divergence = "vote winners differ";
                                    divergence_phase = phase;
                                } else if (e.movement_log().moved_from != seq_from[phase] ||
                                           e.movement_log().moved_to != seq_to[phase]) {
                                    divergence = "movement log differs";
                                    divergence_phase = phase;
                                }
                            });
            std::string diag;
            if (divergence.empty() && !states_identical(seq_state, par_state, &diag)) {
                divergence = diag;
                divergence_phase = 5;
            }
            if (!divergence.empty()) {
                err << "divergence at tick " << t << " phase k-" << divergence_phase << ": "
                    << divergence << "\n";
                return kExitDivergence;
            }
        }
        out << "sequential and parallel runs identical over " << ticks << " ticks ("
            << par_cfg.workers << " workers)\n";
        return kExitOk;
    } catch (...) {
        return map_exception(err);
    }
}

int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err) {
    try {
        SweepSpec sweep = args.sweep;
        if (!args.scenario_path.empty()) {
            sweep.base = parse_scenario_file(args.scenario_path);
        }
        if (args.seed) sweep.base.seed = *args.seed;
        if (args.chunk_k) sweep.base.chunk_k = *args.chunk_k;
        const BenchReport report = run_bench(sweep);
        write_bench_report(report, out);
        if (!args.out_path.empty()) {
            std::ofstream f(args.out_path);
            if (!f) throw std::runtime_error("cannot open bench destination '" + args.out_path + "'");
            write_bench_report(report, f);
        }
        return kExitOk;
    } catch (...) {
        return map_exception(err);
    }
}

int cmd_fanout(const FanoutArgs& args, std::ostream& out, std::ostream& err) {
    try {
        const auto kind = field_kind_from_name(args.kind);
        if (!kind) throw ConfigError("kind", "unknown field kind '" + args.kind + "'");
        const FieldSpec spec(*kind, Footprint{args.width, args.height}, args.gain, args.decay,
                             args.orientation);
        const WritePlan plan = build_write_plan(spec);

        out << "geometry: " << args.width << "x" << args.height << "\n";
        out << "kind: " << field_kind_name(*kind) << "\n";
        out << "gain: " << args.gain << "  decay: " << args.decay << "\n";
        if (is_directional(*kind)) out << "orientation: sect " << args.orientation << "\n";
        out << "strength fan-out (write plan): " << fanout(plan) << "\n";
        out << "strength fan-out (brute force): " << fanout_brute_force(spec) << "\n";
        out << "contributors per sect:";
        for (int s = 0; s < kSects; ++s) out << " " << plan.entries(s).size();
        out << "\n";
        return kExitOk;
    } catch (...) {
        return map_exception(err);
    }
}

int cmd_plan_memory(const PlanMemoryArgs& args, std::ostream& out, std::ostream& err) {
    try {
        int sf = 0;
        if (args.sf) {
            sf = *args.sf;
        } else if (args.geometry_width && args.geometry_height) {
            const auto kind = field_kind_from_name(args.kind);
            if (!kind) throw ConfigError("kind", "unknown field kind '" + args.kind + "'");
            sf = fanout(build_write_plan(FieldSpec(
                *kind, Footprint{*args.geometry_width, *args.geometry_height}, args.gain,
                args.decay)));
        } else {
            throw ConfigError("sf", "provide --sf or --geometry");
        }
        const GridGeometry grid(args.grid_width, args.grid_height);
        const MemoryPlan plan = memory_plan(sf, grid);
        char gib[32];
        std::snprintf(gib, sizeof gib, "%.1f", plan.gib_display());
        out << "strength fan-out: " << plan.sf << "\n";
        out << "m_recur: " << plan.m_recur_bytes << " bytes per su\n";
        out << "m_total: " << plan.m_total_bytes << " bytes per su\n";
        out << "grid " << grid.width << "x" << grid.height << ": " << plan.grid_bytes
            << " bytes (" << gib << " GiB)\n";
        return kExitOk;
    } catch (...) {
        return map_exception(err);
    }
}

} // namespace socfield::cli
