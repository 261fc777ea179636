#include "socfield/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <map>
#include <sstream>

namespace socfield {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_us(Clock::time_point from) {
    return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - from).count();
}

} // namespace

FieldKind to_field_kind(DynKind k) {
    switch (k) {
        case DynKind::DirAttractive: return FieldKind::DirAttractive;
        case DynKind::DirRepulsive: return FieldKind::DirRepulsive;
        case DynKind::RecurrentRepulsive: return FieldKind::RecurrentRepulsive;
    }
    return FieldKind::RecurrentRepulsive;
}

std::array<int, 8> sort8_desc(const std::array<double, 8>& scores) {
    std::array<int, 8> p{0, 1, 2, 3, 4, 5, 6, 7};
    // keep the better key first: higher score, lower sect on ties
    const auto cex = [&](int a, int b) {
        const int pa = p[a];
        const int pb = p[b];
        const bool swap =
            (scores[pa] < scores[pb]) || (scores[pa] == scores[pb] && pa > pb);
        p[a] = swap ? pb : pa;
        p[b] = swap ? pa : pb;
    };
    // sort lanes 0..3
    cex(0, 1); cex(2, 3); cex(0, 2); cex(1, 3); cex(1, 2);
    // sort lanes 4..7
    cex(4, 5); cex(6, 7); cex(4, 6); cex(5, 7); cex(5, 6);
    // merge
    cex(0, 4); cex(1, 5); cex(1, 4); cex(2, 6); cex(3, 7); cex(3, 6);
    cex(2, 4); cex(3, 5); cex(3, 4);
    return p;
}

void EnrollmentTable::reset_geometry(const GridGeometry& g) {
    geom_ = g;
    const std::size_t n = static_cast<std::size_t>(g.cells()) * kSects;
    ids_.assign(n, kNoPedestrian);
    scores_.assign(n, 0.0);
}

int EnrollmentTable::count(SuIndex su) const {
    const std::size_t base = geom_.flat(su) * kSects;
    int n = 0;
    for (int s = 0; s < kSects; ++s) n += (ids_[base + s] != kNoPedestrian);
    return n;
}

std::optional<EnrollmentTable::Entry> EnrollmentTable::entry(SuIndex su, int slot) const {
    const std::size_t i = geom_.flat(su) * kSects + slot;
    if (ids_[i] == kNoPedestrian) return std::nullopt;
    return Entry{ids_[i], scores_[i]};
}

void EnrollmentTable::clear_range(std::size_t su_begin, std::size_t su_end) {
    std::fill(ids_.begin() + su_begin * kSects, ids_.begin() + su_end * kSects, kNoPedestrian);
    std::fill(scores_.begin() + su_begin * kSects, scores_.begin() + su_end * kSects, 0.0);
}

bool EnrollmentTable::enroll(std::size_t su_flat, int slot, std::int32_t id, double score) {
    const std::size_t i = su_flat * kSects + slot;
    if (ids_[i] != kNoPedestrian) return false;
    ids_[i] = id;
    scores_[i] = score;
    return true;
}

void MovementLog::reset(std::size_t cells) {
    moved_from.assign(cells, kNoPedestrian);
    moved_to.assign(cells, kNoPedestrian);
    for (int k = 0; k < kDynKinds; ++k) {
        from_mask[k].assign(cells, 0);
        to_mask[k].assign(cells, 0);
    }
}

void MovementLog::clear_range(std::size_t begin, std::size_t end) {
    std::fill(moved_from.begin() + begin, moved_from.begin() + end, kNoPedestrian);
    std::fill(moved_to.begin() + begin, moved_to.begin() + end, kNoPedestrian);
    for (int k = 0; k < kDynKinds; ++k) {
        std::fill(from_mask[k].begin() + begin, from_mask[k].begin() + end, 0);
        std::fill(to_mask[k].begin() + begin, to_mask[k].begin() + end, 0);
    }
}

bool states_identical(const SimState& a, const SimState& b, std::string* diagnosis) {
    const auto fail = [&](const std::string& what) {
        if (diagnosis) *diagnosis = what;
        return false;
    };
    if (a.tick != b.tick) return fail("tick counter differs");
    if (a.pedestrians.size() != b.pedestrians.size()) return fail("pedestrian count differs");
    for (std::size_t i = 0; i < a.pedestrians.size(); ++i) {
        const auto& pa = a.pedestrians[i];
        const auto& pb = b.pedestrians[i];
        if (pa.center != pb.center) {
            std::ostringstream os;
            os << "pedestrian " << pa.id << " center (" << pa.center.x << "," << pa.center.y
               << ") vs (" << pb.center.x << "," << pb.center.y << ")";
            return fail(os.str());
        }
    }
    const auto& ca = a.occupancy.raw();
    const auto& cb = b.occupancy.raw();
    if (ca != cb) {
        for (std::size_t i = 0; i < ca.size(); ++i) {
            if (ca[i] != cb[i]) {
                std::ostringstream os;
                os << "occupancy at su (" << i % a.occupancy.geometry().width << ","
                   << i / a.occupancy.geometry().width << "): " << ca[i] << " vs " << cb[i];
                return fail(os.str());
            }
        }
    }
    const auto image_diff = [&](const StrengthImage& ia, const StrengthImage& ib,
                                const char* name) -> bool {
        const auto& ra = ia.raw();
        const auto& rb = ib.raw();
        if (std::memcmp(ra.data(), rb.data(), ra.size() * sizeof(float)) == 0) return true;
        for (std::size_t i = 0; i < ra.size(); ++i) {
            if (std::memcmp(&ra[i], &rb[i], sizeof(float)) != 0) {
                const int w = ia.geometry().width;
                std::ostringstream os;
                os << name << " image at su (" << (i / kSects) % w << "," << (i / kSects) / w
                   << ") sect " << i % kSects << ": " << ra[i] << " vs " << rb[i];
                if (diagnosis) *diagnosis = os.str();
                return false;
            }
        }
        return true;
    };
    if (!image_diff(a.static_image, b.static_image, "static")) return false;
    for (int k = 0; k < kDynKinds; ++k) {
        if (!image_diff(a.dyn_images[k], b.dyn_images[k],
                        field_kind_name(to_field_kind(static_cast<DynKind>(k)))))
            return false;
    }
    return true;
}

std::array<StrengthImage, kDynKinds> rasterize_dynamic(const std::vector<Pedestrian>& pedestrians,
                                                       const GridGeometry& g) {
    std::array<StrengthImage, kDynKinds> images{StrengthImage(g), StrengthImage(g),
                                                StrengthImage(g)};
    for (const auto& p : pedestrians) {
        for (int k = 0; k < kDynKinds; ++k) {
            rasterize_into(images[k], p.dyn_fields[k], p.center);
        }
    }
    return images;
}

Engine::Engine(const GridGeometry& g, const EngineConfig& cfg,
               const std::array<FieldSpec, kDynKinds>& field_templates)
    : geom_(g), cfg_(cfg), field_templates_(field_templates) {
    if (!valid_chunk_width(cfg_.chunk_k)) throw ConfigError("chunk_k", "must be 2, 4, 8, or 16");
    if (cfg_.density_radius < 0) throw ConfigError("density_radius", "must be >= 0");
    if (cfg_.workers <= 0) {
        cfg_.workers = std::max(1u, std::thread::hardware_concurrency());
    }

    for (int k = 0; k < kDynKinds; ++k) {
        FieldSpec spec = field_templates_[k];
        spec.kind = to_field_kind(static_cast<DynKind>(k));
        field_templates_[k] = spec;
        if (is_directional(spec.kind)) {
            for (int orient = 0; orient < kSects; ++orient) {
                spec.orientation = orient;
                plans_[k].push_back(build_write_plan(spec));
            }
        } else {
            plans_[k].push_back(build_write_plan(spec));
        }
    }
    build_gather_tables();

    enrollment_.reset_geometry(geom_);
    winners_.assign(static_cast<std::size_t>(geom_.cells()), kNoPedestrian);
    movelog_.reset(static_cast<std::size_t>(geom_.cells()));
    step_caches_.assign(static_cast<std::size_t>(cfg_.workers), StepCache(cfg_.chunk_k));
    moved_per_worker_.assign(static_cast<std::size_t>(cfg_.workers), 0);
}

void Engine::build_gather_tables() {
    for (int k = 0; k < kDynKinds; ++k) {
        const bool directional = is_directional(to_field_kind(static_cast<DynKind>(k)));
        for (int sect = 0; sect < kSects; ++sect) {
            std::map<Offset, GatherEntry> merged;
            for (std::size_t orient = 0; orient < plans_[k].size(); ++orient) {
                for (const auto& e : plans_[k][orient].entries(sect)) {
                    auto [it, inserted] = merged.try_emplace(
                        e.center_offset,
                        GatherEntry{e.center_offset, e.magnitude,
                                    directional ? static_cast<std::uint8_t>(1u << orient)
                                                : std::uint8_t{0xFF}});
                    if (!inserted) it->second.orientation_mask |= static_cast<std::uint8_t>(1u << orient);
                }
            }
            auto& list = gather_[k][sect];
            list.reserve(merged.size());
            for (const auto& [off, entry] : merged) list.push_back(entry);
        }
    }
}

const WritePlan& Engine::plan(DynKind kind, int orientation) const {
    const auto& plans = plans_[static_cast<int>(kind)];
    return plans.size() == 1 ? plans[0] : plans.at(static_cast<std::size_t>(orientation));
}

ThreadPool& Engine::pool() {
    if (!pool_) pool_ = std::make_unique<ThreadPool>(cfg_.workers);
    return *pool_;
}

void Engine::run_phase(int /*phase*/, SimState& /*s*/, RunMode mode, std::size_t items,
                       const std::function<void(int, std::size_t, std::size_t)>& fn) {
    if (mode == RunMode::Sequential || cfg_.workers == 1) {
        fn(0, 0, items);
    } else {
        pool().parallel_for(items, fn);
    }
}

double Engine::regulate(double rho) const {
    switch (cfg_.regulation) {
        case Regulation::Identity: return 1.0;
        case Regulation::Linear: return std::max(0.1, 1.0 - rho);
    }
    return 1.0;
}

double Engine::goal_bias(int sect, int goal_sect) const {
    // b * max(0, cos(45 deg * circular distance)); zero from 90 degrees outward
    static const double kCos[5] = {1.0, M_SQRT1_2, 0.0, 0.0, 0.0};
    return cfg_.goal_bias * kCos[sect_distance(sect, goal_sect)];
}

bool Engine::move_cells_empty(const Pedestrian& p, int direction,
                              const OccupancyGrid& occ) const {
    const Offset u = sect_step(direction);
    const int rw = p.footprint.half_w();
    const int rh = p.footprint.half_h();
    for (int oy = -rh; oy <= rh; ++oy) {
        for (int ox = -rw; ox <= rw; ++ox) {
            if (std::abs(ox + u.dx) <= rw && std::abs(oy + u.dy) <= rh) continue;
            const auto cell = wrap(geom_, p.center.x + u.dx + ox, p.center.y + u.dy + oy);
            if (!cell || !occ.empty_at(*cell)) return false;
        }
    }
    return true;
}

std::vector<SuIndex> Engine::move_new_cells(const Pedestrian& p, int direction) const {
    std::vector<SuIndex> cells;
    const Offset u = sect_step(direction);
    const int rw = p.footprint.half_w();
    const int rh = p.footprint.half_h();
    for (int oy = -rh; oy <= rh; ++oy) {
        for (int ox = -rw; ox <= rw; ++ox) {
            // offset (ox,oy) is relative to the new center; skip cells the old
            // footprint already covers
            if (std::abs(ox + u.dx) <= rw && std::abs(oy + u.dy) <= rh) continue;
            const auto cell = wrap(geom_, p.center.x + u.dx + ox, p.center.y + u.dy + oy);
            if (!cell) return {}; // clipped at a Closed edge: direction infeasible
            cells.push_back(*cell);
        }
    }
    return cells;
}

Engine::CompactDecision Engine::decide_core(const Pedestrian& p, const SimState& s) const {
    CompactDecision still;
    if (s.tick % p.walk_period != p.walk_phase) return still;

    // identity regulation never reads the density; skip the window scan
    const double g = cfg_.regulation == Regulation::Identity
                         ? 1.0
                         : regulate(local_density(s.occupancy, p.center, cfg_.density_radius));

    // Perceived environment at the pedestrian's center. The pedestrian's own
    // contribution is excluded; at its own center that contribution is identically
    // zero (a field incurs nothing at displacement zero), so no subtraction is
    // needed here. Strength vectors are binned by their own direction, so
    // repulsion shows up in the sect it pushes toward and attraction in the sect
    // it pulls toward; all kinds therefore enter the score with positive weight
    // by default.
    const double w[kDynKinds] = {cfg_.weight_dir_attractive, cfg_.weight_dir_repulsive,
                                 cfg_.weight_recurrent};
    std::array<double, 8> scores;
    for (int sect = 0; sect < kSects; ++sect) {
        double raw = cfg_.weight_static * s.static_image.at(p.center, sect);
        for (int k = 0; k < kDynKinds; ++k) {
            raw += w[k] * s.dyn_images[k].at(p.center, sect);
        }
        scores[sect] = g * raw + goal_bias(sect, p.goal_sect);
    }

    const auto order = sort8_desc(scores);
    for (const int sect : order) {
        // scores are sorted: once the drive is non-positive no direction qualifies
        if (scores[sect] <= 0.0) break;
        if (!move_cells_empty(p, sect, s.occupancy)) continue;
        return {sect, scores[sect]};
    }
    return still;
}

MoveDecision Engine::decide(const Pedestrian& p, const SimState& s) const {
    const CompactDecision core = decide_core(p, s);
    MoveDecision d;
    d.direction = core.direction;
    d.score = core.score;
    if (core.direction != kStill) d.new_cells = move_new_cells(p, core.direction);
    return d;
}

void Engine::k1_init_range(std::size_t begin, std::size_t end) {
    enrollment_.clear_range(begin, end);
    std::fill(winners_.begin() + begin, winners_.begin() + end, kNoPedestrian);
    movelog_.clear_range(begin, end);
}

void Engine::k2_decide_range(SimState& s, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
        const Pedestrian& p = s.pedestrians[i];
        const CompactDecision d = decide_core(p, s);
        decisions_[i] = d;
        if (d.direction == kStill) continue;
        const Offset u = sect_step(d.direction);
        const int rw = p.footprint.half_w();
        const int rh = p.footprint.half_h();
        for (int oy = -rh; oy <= rh; ++oy) {
            for (int ox = -rw; ox <= rw; ++ox) {
                if (std::abs(ox + u.dx) <= rw && std::abs(oy + u.dy) <= rh) continue;
                const SuIndex cell = *wrap(geom_, p.center.x + u.dx + ox, p.center.y + u.dy + oy);
                if (!enrollment_.enroll(geom_.flat(cell), d.direction, p.id, d.score)) {
                    throw IntegrityError("enrollment slot conflict at su (" +
                                             std::to_string(cell.x) + "," +
                                             std::to_string(cell.y) + ")",
                                         s.tick, 2);
                }
            }
        }
    }
}

void Engine::k3_vote_range(const SimState& s, std::size_t begin, std::size_t end) {
    (void)s;
    const bool fault = cfg_.fault_invert_vote_tiebreak;
    for (std::size_t su = begin; su < end; ++su) {
        std::int32_t best_id = kNoPedestrian;
        double best_score = 0.0;
        for (int slot = 0; slot < kSects; ++slot) {
            const std::int32_t id = enrollment_.id_at(su, slot);
            if (id == kNoPedestrian) continue;
            const double score = enrollment_.score_at(su, slot);
            bool better = best_id == kNoPedestrian || score > best_score;
            if (!better && score == best_score) {
                better = fault ? id > best_id : id < best_id;
            }
            if (better) {
                best_id = id;
                best_score = score;
            }
        }
        winners_[su] = best_id;
    }
}

void Engine::k4_move_range(int worker, SimState& s, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
        const CompactDecision d = decisions_[i];
        if (d.direction == kStill) continue;
        Pedestrian& p = s.pedestrians[i];
        const auto cells = move_new_cells(p, d.direction);
        bool won = !cells.empty();
        for (const SuIndex c : cells) won = won && winners_[geom_.flat(c)] == p.id;
        if (!won) continue;

        const Offset u = sect_step(d.direction);
        const SuIndex old_center = p.center;
        const SuIndex new_center = *wrap(geom_, old_center.x + u.dx, old_center.y + u.dy);
        const int rw = p.footprint.half_w();
        const int rh = p.footprint.half_h();
        // release cells the new footprint no longer covers
        for (int oy = -rh; oy <= rh; ++oy) {
            for (int ox = -rw; ox <= rw; ++ox) {
                if (std::abs(ox - u.dx) <= rw && std::abs(oy - u.dy) <= rh) continue;
                s.occupancy.set(*wrap(geom_, old_center.x + ox, old_center.y + oy), kNoPedestrian);
            }
        }
        for (const SuIndex c : cells) s.occupancy.set(c, p.id);
        p.center = new_center;
        const std::size_t from_flat = geom_.flat(old_center);
        const std::size_t to_flat = geom_.flat(new_center);
        movelog_.moved_from[from_flat] = p.id;
        movelog_.moved_to[to_flat] = p.id;
        for (int k = 0; k < kDynKinds; ++k) {
            const FieldSpec& f = p.dyn_fields[k];
            const std::uint8_t mask =
                is_directional(f.kind) ? static_cast<std::uint8_t>(1u << f.orientation)
                                       : std::uint8_t{0xFF};
            movelog_.from_mask[k][from_flat] = mask;
            movelog_.to_mask[k][to_flat] = mask;
        }
        ++moved_per_worker_[static_cast<std::size_t>(worker)];
    }
}

void Engine::k5_writeback_range(int worker, SimState& s, std::size_t begin, std::size_t end) {
    const int width = geom_.width;
    const bool periodic = geom_.boundary == BoundaryMode::Periodic;
    StepCache& cache = step_caches_[static_cast<std::size_t>(worker)];

    for (std::size_t su = begin; su < end; ++su) {
        const int tx = static_cast<int>(su) % width;
        const int ty = static_cast<int>(su) / width;
        for (int kind = 0; kind < kDynKinds; ++kind) {
            StrengthImage& image = s.dyn_images[kind];
            const std::uint8_t* from_mask = movelog_.from_mask[kind].data();
            const std::uint8_t* to_mask = movelog_.to_mask[kind].data();
            for (int sect = 0; sect < kSects; ++sect) {
                const auto& list = gather_[kind][sect];
                if (list.empty()) continue;
                cache.reset();
                std::size_t idx = 0;
                // terms are zero for contributors that did not move; the adds stay
                // unconditional to keep the per-address work flat
                for (const GatherEntry& e : list) {
                    int cx = tx + e.center_offset.dx;
                    int cy = ty + e.center_offset.dy;
                    if (periodic) {
                        while (cx < 0) cx += width;
                        while (cx >= width) cx -= width;
                        while (cy < 0) cy += geom_.height;
                        while (cy >= geom_.height) cy -= geom_.height;
                    } else if (cx < 0 || cx >= width || cy < 0 || cy >= geom_.height) {
                        idx += 2;
                        continue;
                    }
                    static constexpr double kGate[2] = {0.0, 1.0};
                    const std::size_t c = static_cast<std::size_t>(cy) * width + cx;
                    const double left = kGate[(e.orientation_mask & from_mask[c]) != 0];
                    cache.accumulate(idx, -e.magnitude * left);
                    ++idx;
                    const double arrived = kGate[(e.orientation_mask & to_mask[c]) != 0];
                    cache.accumulate(idx, e.magnitude * arrived);
                    ++idx;
                }
                image.at(SuIndex{tx, ty}, sect) += static_cast<float>(cache.total());
            }
        }
    }
}

TickMetrics Engine::tick(SimState& s, RunMode mode) {
    return tick(s, mode, Inspector{});
}

TickMetrics Engine::tick(SimState& s, RunMode mode, const Inspector& inspect) {
    const std::size_t cells = static_cast<std::size_t>(geom_.cells());
    const std::size_t peds = s.pedestrians.size();
    if (decisions_.size() != peds) decisions_.assign(peds, CompactDecision{});

    TickMetrics m;
    m.tick = s.tick;
    const auto tick_start = Clock::now();

    // k-1: clear per-tick temporaries
    auto t = Clock::now();
    for (auto& cache : step_caches_) cache.reset();
    run_phase(1, s, mode, cells, [this](int, std::size_t b, std::size_t e) {
        k1_init_range(b, e);
    });
    m.phase_us[0] = elapsed_us(t);
    if (inspect) inspect(1, *this, s);

    // k-2: movement decisions + registration
    t = Clock::now();
    run_phase(2, s, mode, peds, [this, &s](int, std::size_t b, std::size_t e) {
        k2_decide_range(s, b, e);
    });
    m.phase_us[1] = elapsed_us(t);
    if (inspect) inspect(2, *this, s);

    // k-3: occupancy vote
    t = Clock::now();
    run_phase(3, s, mode, cells, [this, &s](int, std::size_t b, std::size_t e) {
        k3_vote_range(s, b, e);
    });
    m.phase_us[2] = elapsed_us(t);
    if (inspect) inspect(3, *this, s);

    // k-4: perform movement
    t = Clock::now();
    std::fill(moved_per_worker_.begin(), moved_per_worker_.end(), 0);
    run_phase(4, s, mode, peds, [this, &s](int w, std::size_t b, std::size_t e) {
        k4_move_range(w, s, b, e);
    });
    for (const auto n : moved_per_worker_) m.moved += n;
    m.phase_us[3] = elapsed_us(t);
    if (inspect) inspect(4, *this, s);

    // k-5: gather buffered changes into the strength images
    t = Clock::now();
    if (m.moved > 0) {
        run_phase(5, s, mode, cells, [this, &s](int w, std::size_t b, std::size_t e) {
            k5_writeback_range(w, s, b, e);
        });
    }
    m.phase_us[4] = elapsed_us(t);
    if (inspect) inspect(5, *this, s);

    s.tick += 1;
    maybe_rebuild(s);
    m.wall_us = elapsed_us(tick_start);
    return m;
}

void Engine::maybe_rebuild(SimState& s) {
    if (cfg_.rebuild_interval <= 0 || s.tick % cfg_.rebuild_interval != 0) return;
    auto fresh = rebuild_images(s);
    for (int k = 0; k < kDynKinds; ++k) {
        const float drift = StrengthImage::max_abs_difference(s.dyn_images[k], fresh[k]);
        if (drift > cfg_.rebuild_tolerance) {
            throw IntegrityError(std::string(field_kind_name(to_field_kind(static_cast<DynKind>(k)))) +
                                     " image drifted by " + std::to_string(drift),
                                 s.tick, 5);
        }
    }
    s.dyn_images = std::move(fresh);
}

std::vector<TickMetrics> Engine::run(SimState& s, long ticks, RunMode mode) {
    return run(s, ticks, mode, Inspector{});
}

std::vector<TickMetrics> Engine::run(SimState& s, long ticks, RunMode mode,
                                     const Inspector& inspect) {
    verify_state(s);
    std::vector<TickMetrics> metrics;
    metrics.reserve(static_cast<std::size_t>(std::max(0L, ticks)));
    for (long i = 0; i < ticks; ++i) metrics.push_back(tick(s, mode, inspect));
    return metrics;
}

std::array<StrengthImage, kDynKinds> Engine::rebuild_images(const SimState& s) const {
    return rasterize_dynamic(s.pedestrians, geom_);
}

void Engine::verify_state(const SimState& s) const {
    const auto fail = [&](const std::string& what) {
        throw IntegrityError(what, s.tick, 0);
    };
    if (!(s.occupancy.geometry() == geom_)) fail("occupancy geometry mismatch");

    OccupancyGrid expected(geom_);
    for (std::size_t i = 0; i < s.pedestrians.size(); ++i) {
        const Pedestrian& p = s.pedestrians[i];
        if (p.id != static_cast<std::int32_t>(i)) fail("pedestrian ids must equal their index");
        if (!wrap(geom_, p.center) || *wrap(geom_, p.center) != p.center)
            fail("pedestrian " + std::to_string(p.id) + " center not normalized");
        if (p.walk_period < 1 || p.walk_phase < 0 || p.walk_phase >= p.walk_period)
            fail("pedestrian " + std::to_string(p.id) + " walk gate out of range");
        if (p.goal_sect < 0 || p.goal_sect >= kSects)
            fail("pedestrian " + std::to_string(p.id) + " goal sect out of range");
        for (int k = 0; k < kDynKinds; ++k) {
            const FieldSpec& f = p.dyn_fields[k];
            const FieldSpec& t = field_templates_[k];
            if (f.kind != t.kind || f.geometry != t.geometry || f.gain != t.gain ||
                f.decay != t.decay)
                fail("pedestrian " + std::to_string(p.id) +
                     " field spec does not match the engine template");
        }
        const auto cells = footprint_cells(geom_, p.center, p.footprint);
        if (cells.clipped)
            fail("pedestrian " + std::to_string(p.id) + " footprint crosses a closed edge");
        for (const SuIndex c : cells.cells) {
            if (!expected.empty_at(c)) {
                if (expected.at(c) == p.id)
                    fail("pedestrian " + std::to_string(p.id) + " footprint wraps onto itself");
                fail("pedestrians " + std::to_string(expected.at(c)) + " and " +
                     std::to_string(p.id) + " overlap at su (" + std::to_string(c.x) + "," +
                     std::to_string(c.y) + ")");
            }
            expected.set(c, p.id);
        }
    }
    if (!(expected == s.occupancy)) {
        const auto& got = s.occupancy.raw();
        const auto& want = expected.raw();
        for (std::size_t i = 0; i < got.size(); ++i) {
            if (got[i] != want[i]) {
                fail("occupancy at su (" + std::to_string(i % geom_.width) + "," +
                     std::to_string(i / geom_.width) + ") holds " + std::to_string(got[i]) +
                     ", expected " + std::to_string(want[i]));
            }
        }
    }
}

} // namespace socfield
