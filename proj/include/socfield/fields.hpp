#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "socfield/grid.hpp"

namespace socfield {

/// The five field kinds. Omni kinds are static (openings and obstacles); the
/// directional and recurrent kinds are dynamic and ride along with pedestrians.
enum class FieldKind {
    OmniAttractive,
    OmniRepulsive,
    DirAttractive,
    DirRepulsive,
    RecurrentRepulsive,
};

bool is_attractive(FieldKind k);
bool is_directional(FieldKind k);
bool is_static_kind(FieldKind k);
const char* field_kind_name(FieldKind k);
std::optional<FieldKind> field_kind_from_name(const std::string& name);

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
    double norm() const;
    friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
};

/// One field: kind, discrete support extent, strength parameters, and (for
/// directional kinds) the sect the field faces.
struct FieldSpec {
    FieldKind kind = FieldKind::RecurrentRepulsive;
    Footprint geometry{7, 7};
    double gain = 1.0;   // k, >= 0
    double decay = -0.5; // alpha, typically < 0
    int orientation = 0; // sect in [0,8); ignored for non-directional kinds

    FieldSpec() = default;
    FieldSpec(FieldKind kind, Footprint geometry, double gain = 1.0, double decay = -0.5,
              int orientation = 0);
};

/// Center-relative su offset.
struct Offset {
    int dx = 0;
    int dy = 0;
    friend bool operator==(Offset a, Offset b) { return a.dx == b.dx && a.dy == b.dy; }
    friend bool operator<(Offset a, Offset b) {
        return a.dx != b.dx ? a.dx < b.dx : a.dy < b.dy;
    }
};

constexpr int kSects = 8;
constexpr int kNoSect = -1;

/// Octant of a nonzero vector: eight half-open 45-degree wedges centered on the
/// compass directions, sect 0 centered on +x and proceeding counter-clockwise.
/// Returns kNoSect for the zero vector.
int sect_index(Vec2 v);
inline int sect_index(double x, double y) { return sect_index(Vec2{x, y}); }

/// Circular distance between two sects, in [0,4].
int sect_distance(int a, int b);

/// Unit step for a sect, e.g. sect 0 -> (1,0), sect 1 -> (1,1).
Offset sect_step(int sect);

/// Field strength incurred by field `f` centered at `center` on su `target`.
/// Magnitude gain * exp(decay * |d|); direction points away from the center for
/// repulsive kinds and toward it for attractive kinds. Zero at the center, outside
/// the support, and outside a directional field's front cone.
Vec2 strength_at(const FieldSpec& f, SuIndex center, SuIndex target, const GridGeometry& g);

/// Strength evaluated at a center-relative offset, ignoring lattice wrap.
Vec2 strength_at_offset(const FieldSpec& f, Offset o);

/// All center-relative offsets at which `f` incurs nonzero strength, row-major order.
std::vector<Offset> support(const FieldSpec& f);

/// 3-D scalar lattice [height][width][8]: accumulated strength per su per sect,
/// 32-bit elements.
class StrengthImage {
public:
    StrengthImage() = default;
    explicit StrengthImage(const GridGeometry& g)
        : geom_(g), data_(static_cast<std::size_t>(g.cells()) * kSects, 0.0f) {}

    const GridGeometry& geometry() const noexcept { return geom_; }

    float at(SuIndex p, int sect) const { return data_[geom_.flat(p) * kSects + sect]; }
    float& at(SuIndex p, int sect) { return data_[geom_.flat(p) * kSects + sect]; }

    void clear();
    /// Largest |a-b| over all entries; geometries must match.
    static float max_abs_difference(const StrengthImage& a, const StrengthImage& b);

    const std::vector<float>& raw() const noexcept { return data_; }
    friend bool operator==(const StrengthImage& a, const StrengthImage& b) {
        return a.geom_ == b.geom_ && a.data_ == b.data_;
    }

private:
    GridGeometry geom_;
    std::vector<float> data_;
};

/// Precomputed contributor table for one field spec. For a target su t and sect s,
/// entries(s) lists every center position (as an offset from t) whose field writes
/// the (t, s) address, with the strength magnitude it contributes. Slot index is
/// the position in the list; assignment is injective and ordered lexicographically
/// by center offset. The table is target-independent, so one table serves the
/// whole lattice.
class WritePlan {
public:
    struct Entry {
        Offset center_offset; // center position relative to the target su
        double magnitude;     // strength the field incurs at the target
    };

    WritePlan() = default;

    const FieldSpec& spec() const noexcept { return spec_; }
    const std::vector<Entry>& entries(int sect) const { return entries_[sect]; }
    /// Strength fan-out: the longest contributor list over all addresses.
    int fanout() const noexcept { return fanout_; }

    friend WritePlan build_write_plan(const FieldSpec& f);

private:
    FieldSpec spec_;
    std::array<std::vector<Entry>, kSects> entries_;
    int fanout_ = 0;
};

WritePlan build_write_plan(const FieldSpec& f);

inline int fanout(const WritePlan& plan) { return plan.fanout(); }

/// Strength fan-out by direct double enumeration over candidate centers around a
/// fixed target, independent of the WritePlan construction path.
int fanout_brute_force(const FieldSpec& f);

/// A static field anchored at a fixed su.
struct AnchoredField {
    FieldSpec spec;
    SuIndex anchor;
};

/// Composite image of static fields: entry (t, s) accumulates the strength
/// magnitudes of every field whose strength vector at t falls in sect s.
StrengthImage rasterize_static(const std::vector<AnchoredField>& fields, const GridGeometry& g);

/// Adds `f` anchored at `center` into `img` (scatter over the support).
void rasterize_into(StrengthImage& img, const FieldSpec& f, SuIndex center);

} // namespace socfield
