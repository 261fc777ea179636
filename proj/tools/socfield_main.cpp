#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "socfield/cli.hpp"

namespace {

using namespace socfield;

RunMode parse_mode(const std::string& mode) {
    if (mode == "seq") return RunMode::Sequential;
    if (mode == "par") return RunMode::Parallel;
    throw CLI::ValidationError("--mode", "must be 'seq' or 'par'");
}

std::vector<Directions> parse_direction_list(const std::vector<std::string>& names) {
    std::vector<Directions> out;
    for (const auto& n : names) {
        if (n == "uni") out.push_back(Directions::Uni);
        else if (n == "bi") out.push_back(Directions::Bi);
        else if (n == "four") out.push_back(Directions::Four);
        else if (n == "eight") out.push_back(Directions::Eight);
        else throw CLI::ValidationError("--directions", "unknown pattern '" + n + "'");
    }
    return out;
}

std::pair<int, int> parse_dims_arg(const std::string& v, const std::string& flag) {
    const auto pos = v.find('x');
    if (pos == std::string::npos) throw CLI::ValidationError(flag, "expected WIDTHxHEIGHT");
    try {
        return {std::stoi(v.substr(0, pos)), std::stoi(v.substr(pos + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError(flag, "expected WIDTHxHEIGHT");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"socfield: discrete social-field pedestrian simulation engine"};
    app.require_subcommand(1);

    // --- run ---
    cli::RunArgs run_args;
    std::string run_mode = "par";
    auto* run = app.add_subcommand("run", "run a scenario and write per-tick metrics");
    run->add_option("--scenario", run_args.scenario_path, "scenario file")->required();
    run->add_option("--out", run_args.out_path, "metrics output path (empty to skip)");
    run->add_option("--ticks", run_args.ticks, "override the scenario's tick count");
    run->add_option("--seed", run_args.seed, "override the scenario's seed");
    run->add_option("--chunk-k", run_args.chunk_k, "multi-step chunk width (2|4|8|16)");
    run->add_option("--workers", run_args.workers, "parallel worker count (0 = hardware)");
    run->add_option("--mode", run_mode, "seq|par")->check(CLI::IsMember({"seq", "par"}));

    // --- validate ---
    cli::ValidateArgs val_args;
    auto* validate =
        app.add_subcommand("validate", "compare sequential and parallel runs bit for bit");
    validate->add_option("--scenario", val_args.scenario_path, "scenario file")->required();
    validate->add_option("--ticks", val_args.ticks, "ticks to compare");
    validate->add_option("--seed", val_args.seed, "override the scenario's seed");
    validate->add_option("--chunk-k", val_args.chunk_k, "multi-step chunk width (2|4|8|16)");
    validate->add_option("--workers", val_args.workers, "parallel worker count (0 = hardware)");
    validate
        ->add_flag("--inject-tiebreak-fault", val_args.inject_tiebreak_fault,
                   "test hook: invert the parallel engine's vote tie-break")
        ->group(""); // hidden

    // --- bench ---
    cli::BenchArgs bench_args;
    std::vector<std::string> bench_grids, bench_dirs, bench_peds;
    std::vector<double> bench_densities;
    std::vector<int> bench_ratios, bench_periods;
    long bench_ticks = -1;
    int bench_repeats = -1;
    std::optional<std::uint64_t> bench_seed;
    std::optional<int> bench_chunk_k;
    std::string bench_mode = "par";
    auto* bench = app.add_subcommand("bench", "run a benchmark sweep");
    bench->add_option("--scenario", bench_args.scenario_path, "base scenario file");
    bench->add_option("--out", bench_args.out_path, "also write the report to this path");
    bench->add_option("--grids", bench_grids, "grid list, e.g. 64x64 128x128");
    bench->add_option("--densities", bench_densities, "density list");
    bench->add_option("--directions", bench_dirs, "direction patterns: uni bi four eight");
    bench->add_option("--ratios", bench_ratios, "field geometry ratios (odd); fields = 7*ratio");
    bench->add_option("--periods", bench_periods, "max walk periods (min stays 1)");
    bench->add_option("--ped-geometries", bench_peds,
                      "pedestrian geometries, e.g. 1x1 3x3 (fields scale to 7*w x 7*h)");
    bench->add_option("--ticks", bench_ticks, "ticks per run");
    bench->add_option("--repeats", bench_repeats, "timed repeats per configuration");
    bench->add_option("--seed", bench_seed, "override the base scenario's seed");
    bench->add_option("--chunk-k", bench_chunk_k, "multi-step chunk width (2|4|8|16)");
    bench->add_option("--workers", bench_args.sweep.workers, "parallel worker count");
    bench->add_option("--mode", bench_mode, "seq|par")->check(CLI::IsMember({"seq", "par"}));
    bench->add_flag("--no-warmup", "skip the discarded warm-up run");

    // --- fanout ---
    cli::FanoutArgs fan_args;
    std::string fan_geometry = "7x7";
    auto* fan = app.add_subcommand("fanout", "write-plan fan-out report for a field");
    fan->add_option("--geometry", fan_geometry, "field geometry WxH (odd)");
    fan->add_option("--kind", fan_args.kind,
                    "omni-attractive|omni-repulsive|dir-attractive|dir-repulsive|recurrent-repulsive");
    fan->add_option("--gain", fan_args.gain, "strength gain k");
    fan->add_option("--decay", fan_args.decay, "strength decay alpha");
    fan->add_option("--orientation", fan_args.orientation, "facing sect for directional kinds");

    // --- plan-memory ---
    cli::PlanMemoryArgs mem_args;
    std::string mem_grid = "1000x1000";
    std::string mem_geometry;
    auto* mem = app.add_subcommand("plan-memory", "memory plan for a strength fan-out");
    mem->add_option("--sf", mem_args.sf, "strength fan-out");
    mem->add_option("--geometry", mem_geometry, "derive the fan-out from a field geometry WxH");
    mem->add_option("--kind", mem_args.kind, "field kind for --geometry");
    mem->add_option("--gain", mem_args.gain, "strength gain for --geometry");
    mem->add_option("--decay", mem_args.decay, "strength decay for --geometry");
    mem->add_option("--grid", mem_grid, "grid WxH");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            run_args.mode = parse_mode(run_mode);
            return cli::cmd_run(run_args, std::cout, std::cerr);
        }
        if (validate->parsed()) {
            return cli::cmd_validate(val_args, std::cout, std::cerr);
        }
        if (bench->parsed()) {
            auto& sweep = bench_args.sweep;
            bench_args.seed = bench_seed;
            bench_args.chunk_k = bench_chunk_k;
            for (const auto& g : bench_grids) sweep.grids.push_back(parse_dims_arg(g, "--grids"));
            sweep.densities = bench_densities;
            sweep.directions = parse_direction_list(bench_dirs);
            sweep.field_ratios = bench_ratios;
            sweep.walk_period_maxes = bench_periods;
            for (const auto& p : bench_peds) {
                const auto [w, h] = parse_dims_arg(p, "--ped-geometries");
                sweep.pedestrian_geometries.push_back(Footprint{w, h});
            }
            sweep.ticks = bench_ticks;
            sweep.repeats = bench_repeats;
            sweep.mode = parse_mode(bench_mode);
            sweep.warmup = bench->count("--no-warmup") == 0;
            return cli::cmd_bench(bench_args, std::cout, std::cerr);
        }
        if (fan->parsed()) {
            const auto [w, h] = parse_dims_arg(fan_geometry, "--geometry");
            fan_args.width = w;
            fan_args.height = h;
            return cli::cmd_fanout(fan_args, std::cout, std::cerr);
        }
        if (mem->parsed()) {
            const auto [gw, gh] = parse_dims_arg(mem_grid, "--grid");
            mem_args.grid_width = gw;
            mem_args.grid_height = gh;
            if (!mem_geometry.empty()) {
                const auto [w, h] = parse_dims_arg(mem_geometry, "--geometry");
                mem_args.geometry_width = w;
                mem_args.geometry_height = h;
            }
            return cli::cmd_plan_memory(mem_args, std::cout, std::cerr);
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    }
    return cli::kExitOk;
}
