#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "socfield/bench.hpp"

namespace socfield::cli {

// Exit codes shared by the subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParseError = 1;
inline constexpr int kExitSeedingError = 2; // also configuration constraint violations
inline constexpr int kExitIntegrityError = 3;
inline constexpr int kExitDivergence = 4;
inline constexpr int kExitIoError = 5;

struct RunArgs {
    std::string scenario_path;
    std::string out_path = "metrics.csv";
    std::optional<long> ticks;
    std::optional<std::uint64_t> seed;
    std::optional<int> chunk_k;
    int workers = 0;
    RunMode mode = RunMode::Parallel;
};

/// Runs a scenario, writes per-tick metrics, prints a summary line.
int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err);

struct ValidateArgs {
    std::string scenario_path;
    std::optional<long> ticks; // default: the scenario's tick count
    std::optional<std::uint64_t> seed;
    std::optional<int> chunk_k;
    int workers = 0;
    bool inject_tiebreak_fault = false; // test hook: skew the parallel engine's vote
};

/// Runs the scenario sequentially and in parallel in lockstep, comparing all
/// state after every phase of every tick. Exit 4 on first divergence.
int cmd_validate(const ValidateArgs& args, std::ostream& out, std::ostream& err);

struct BenchArgs {
    std::string scenario_path; // base scenario; empty = built-in defaults
    std::string out_path;      // empty = stdout only
    std::optional<std::uint64_t> seed;
    std::optional<int> chunk_k;
    SweepSpec sweep;           // base is overwritten from scenario_path when given
};

int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err);

struct FanoutArgs {
    int width = 7;
    int height = 7;
    std::string kind = "recurrent-repulsive";
    double gain = 1.0;
    double decay = -0.5;
    int orientation = 0;
};

/// Prints the write-plan report: geometry, parameters, fan-out from the plan and
/// from the brute-force oracle, and per-sect contributor counts.
int cmd_fanout(const FanoutArgs& args, std::ostream& out, std::ostream& err);

struct PlanMemoryArgs {
    std::optional<int> sf;   // explicit fan-out, or
    std::optional<int> geometry_width; // derive the fan-out from a field geometry
    std::optional<int> geometry_height;
    std::string kind = "recurrent-repulsive";
    double gain = 1.0;
    double decay = -0.5;
    int grid_width = 1000;
    int grid_height = 1000;
};

int cmd_plan_memory(const PlanMemoryArgs& args, std::ostream& out, std::ostream& err);

} // namespace socfield::cli
