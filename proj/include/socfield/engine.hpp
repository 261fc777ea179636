#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "socfield/accumulator.hpp"
#include "socfield/fields.hpp"
#include "socfield/grid.hpp"
#include "socfield/thread_pool.hpp"

namespace socfield {

/// Dynamic field kinds a pedestrian carries, in image/plan index order.
enum class DynKind : int { DirAttractive = 0, DirRepulsive = 1, RecurrentRepulsive = 2 };
constexpr int kDynKinds = 3;

FieldKind to_field_kind(DynKind k);

struct Pedestrian {
    std::int32_t id = 0;
    SuIndex center{};
    Footprint footprint{1, 1};
    int walk_period = 1; // T: may move only when tick mod T == walk_phase
    int walk_phase = 0;
    int goal_sect = 0;
    std::array<FieldSpec, kDynKinds> dyn_fields{};

    const FieldSpec& field(DynKind k) const { return dyn_fields[static_cast<int>(k)]; }
    FieldSpec& field(DynKind k) { return dyn_fields[static_cast<int>(k)]; }
};

constexpr int kStill = -1;

struct MoveDecision {
    int direction = kStill; // sect in [0,8), or kStill
    double score = 0.0;
    std::vector<SuIndex> new_cells; // cells the move would newly cover; empty for Still
};

/// Per-su registration container for the occupancy vote. Eight slots per su, one
/// per approach direction; under v_max = 1 at most one pedestrian can approach a
/// cell from each direction, so every slot has a single writer and no atomics are
/// needed.
class EnrollmentTable {
public:
    void reset_geometry(const GridGeometry& g);

    int count(SuIndex su) const;
    struct Entry {
        std::int32_t id;
        double score;
    };
    std::optional<Entry> entry(SuIndex su, int slot) const;

    void clear_range(std::size_t su_begin, std::size_t su_end);
    /// Returns false if the slot was already taken (an integrity violation).
    bool enroll(std::size_t su_flat, int slot, std::int32_t id, double score);

    std::int32_t id_at(std::size_t su_flat, int slot) const {
        return ids_[su_flat * kSects + slot];
    }
    double score_at(std::size_t su_flat, int slot) const {
        return scores_[su_flat * kSects + slot];
    }

private:
    GridGeometry geom_;
    std::vector<std::int32_t> ids_;
    std::vector<double> scores_;
};

/// Movement changes buffered in k-4 and consumed by k-5, recorded per old/new
/// center su. Alongside the ids, per-kind orientation masks let the k-5 gather
/// run branch-light with no pedestrian-table lookups: a cell's mask has the
/// mover's orientation bit set (all bits for non-directional kinds) or is zero.
struct MovementLog {
    std::vector<std::int32_t> moved_from; // id that left this center, or kNoPedestrian
    std::vector<std::int32_t> moved_to;   // id that arrived at this center
    std::array<std::vector<std::uint8_t>, kDynKinds> from_mask;
    std::array<std::vector<std::uint8_t>, kDynKinds> to_mask;

    void reset(std::size_t cells);
    void clear_range(std::size_t begin, std::size_t end);
};

struct SimState {
    OccupancyGrid occupancy;
    StrengthImage static_image;
    std::array<StrengthImage, kDynKinds> dyn_images;
    std::vector<Pedestrian> pedestrians;
    long tick = 0;
    std::uint64_t rng_seed = 0;
};

/// True when the two states match bit for bit (occupancy, every image, pedestrian
/// kinematics, tick). On mismatch `diagnosis` names the first divergent structure
/// and address.
bool states_identical(const SimState& a, const SimState& b, std::string* diagnosis = nullptr);

enum class RunMode { Sequential, Parallel };
enum class Regulation { Identity, Linear };

struct EngineConfig {
    int chunk_k = 8; // K of the multi-step sum, in {2,4,8,16}
    double weight_static = 1.0;
    double weight_dir_attractive = 1.0;
    double weight_dir_repulsive = 1.0;
    double weight_recurrent = 1.0;
    double goal_bias = 1.0;
    Regulation regulation = Regulation::Identity;
    int density_radius = 3;
    long rebuild_interval = 50;      // rebuild dynamic images every N ticks; 0 = never
    double rebuild_tolerance = 1e-4; // max drift tolerated at a rebuild point
    int workers = 0;                 // parallel worker count; 0 = hardware
    bool fault_invert_vote_tiebreak = false; // test hook: break vote ties high-id first
};

struct TickMetrics {
    long tick = 0;
    std::array<std::int64_t, 5> phase_us{}; // k-1 .. k-5
    std::int64_t moved = 0;
    std::int64_t wall_us = 0;
};

/// Descending order of the eight sect scores via a fixed 19-comparator
/// compare-exchange network; ties go to the lower sect index.
std::array<int, 8> sort8_desc(const std::array<double, 8>& scores);

/// Rasterizes every pedestrian's dynamic fields from scratch, one image per kind.
std::array<StrengthImage, kDynKinds> rasterize_dynamic(const std::vector<Pedestrian>& pedestrians,
                                                       const GridGeometry& g);

/// The five-phase tick pipeline. Within a phase every work item writes only
/// addresses it owns (su, (su, sect), or pedestrian); phases are separated by
/// barriers. Sequential and parallel execution are bit-identical for any worker
/// count.
class Engine {
public:
    Engine(const GridGeometry& g, const EngineConfig& cfg,
           const std::array<FieldSpec, kDynKinds>& field_templates);

    const GridGeometry& geometry() const noexcept { return geom_; }
    const EngineConfig& config() const noexcept { return cfg_; }

    /// Called after each phase (1..5) inside a tick, once per-phase writes are
    /// complete. Used by the validator and the invariant test suites.
    using Inspector = std::function<void(int phase, const Engine&, const SimState&)>;

    TickMetrics tick(SimState& s, RunMode mode);
    TickMetrics tick(SimState& s, RunMode mode, const Inspector& inspect);

    std::vector<TickMetrics> run(SimState& s, long ticks, RunMode mode);
    std::vector<TickMetrics> run(SimState& s, long ticks, RunMode mode, const Inspector& inspect);

    /// Movement decision for one pedestrian against the current state (k-2 logic,
    /// without the enrollment side effect).
    MoveDecision decide(const Pedestrian& p, const SimState& s) const;

    /// Full structural check: occupancy/pedestrian consistency, bounds, counts.
    /// Throws IntegrityError with a diagnostic.
    void verify_state(const SimState& s) const;

    /// From-scratch dynamic images for drift checks.
    std::array<StrengthImage, kDynKinds> rebuild_images(const SimState& s) const;

    // Phase internals, exposed for inspection in tests.
    const EnrollmentTable& enrollment() const noexcept { return enrollment_; }
    const MovementLog& movement_log() const noexcept { return movelog_; }
    const std::vector<std::int32_t>& vote_winners() const noexcept { return winners_; }
    int decision_direction(std::size_t ped_index) const { return decisions_[ped_index].direction; }
    const WritePlan& plan(DynKind kind, int orientation) const;
    const std::vector<StepCache>& step_caches() const noexcept { return step_caches_; }

private:
    struct CompactDecision {
        int direction = kStill;
        double score = 0.0;
    };

    // One contributor of a (target su, sect) address: center position relative to
    // the target, the strength magnitude it adds, and the set of field
    // orientations it applies to (all bits set for non-directional kinds).
    struct GatherEntry {
        Offset center_offset;
        double magnitude;
        std::uint8_t orientation_mask;
    };

    void build_gather_tables();
    void run_phase(int phase, SimState& s, RunMode mode, std::size_t items,
                   const std::function<void(int, std::size_t, std::size_t)>& fn);
    ThreadPool& pool();
    CompactDecision decide_core(const Pedestrian& p, const SimState& s) const;

    void k1_init_range(std::size_t begin, std::size_t end);
    void k2_decide_range(SimState& s, std::size_t begin, std::size_t end);
    void k3_vote_range(const SimState& s, std::size_t begin, std::size_t end);
    void k4_move_range(int worker, SimState& s, std::size_t begin, std::size_t end);
    void k5_writeback_range(int worker, SimState& s, std::size_t begin, std::size_t end);

    std::vector<SuIndex> move_new_cells(const Pedestrian& p, int direction) const;
    bool move_cells_empty(const Pedestrian& p, int direction, const OccupancyGrid& occ) const;
    double goal_bias(int sect, int goal_sect) const;
    double regulate(double rho) const;

    void maybe_rebuild(SimState& s);

    GridGeometry geom_;
    EngineConfig cfg_;
    std::array<FieldSpec, kDynKinds> field_templates_;

    // per (kind, orientation) write plans; non-directional kinds hold one plan
    std::array<std::vector<WritePlan>, kDynKinds> plans_;
    // per (kind, sect) merged contributor lists for the k-5 gather
    std::array<std::array<std::vector<GatherEntry>, kSects>, kDynKinds> gather_;

    EnrollmentTable enrollment_;
    std::vector<std::int32_t> winners_;
    MovementLog movelog_;
    std::vector<CompactDecision> decisions_;
    std::vector<StepCache> step_caches_; // one per worker
    std::vector<std::int64_t> moved_per_worker_;

    std::unique_ptr<ThreadPool> pool_;
};

} // namespace socfield
