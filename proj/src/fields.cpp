#include "socfield/fields.hpp"

#include <algorithm>
#include <cmath>

namespace socfield {

bool is_attractive(FieldKind k) {
    return k == FieldKind::OmniAttractive || k == FieldKind::DirAttractive;
}

bool is_directional(FieldKind k) {
    return k == FieldKind::DirAttractive || k == FieldKind::DirRepulsive;
}

bool is_static_kind(FieldKind k) {
    return k == FieldKind::OmniAttractive || k == FieldKind::OmniRepulsive;
}

const char* field_kind_name(FieldKind k) {
    switch (k) {
        case FieldKind::OmniAttractive: return "omni-attractive";
        case FieldKind::OmniRepulsive: return "omni-repulsive";
        case FieldKind::DirAttractive: return "dir-attractive";
        case FieldKind::DirRepulsive: return "dir-repulsive";
        case FieldKind::RecurrentRepulsive: return "recurrent-repulsive";
    }
    return "?";
}

std::optional<FieldKind> field_kind_from_name(const std::string& name) {
    for (FieldKind k : {FieldKind::OmniAttractive, FieldKind::OmniRepulsive,
                        FieldKind::DirAttractive, FieldKind::DirRepulsive,
                        FieldKind::RecurrentRepulsive}) {
        if (name == field_kind_name(k)) return k;
    }
    return std::nullopt;
}

double Vec2::norm() const { return std::hypot(x, y); }

FieldSpec::FieldSpec(FieldKind kind_, Footprint geometry_, double gain_, double decay_,
                     int orientation_)
    : kind(kind_), geometry(geometry_), gain(gain_), decay(decay_), orientation(orientation_) {
    if (!(gain >= 0.0) || !std::isfinite(gain)) throw ConfigError("gain", "must be finite and >= 0");
    if (!std::isfinite(decay)) throw ConfigError("decay", "must be finite");
    if (orientation < 0 || orientation >= kSects) throw ConfigError("orientation", "must be in [0,8)");
    // strength must stay finite across the whole support
    const double reach = std::hypot(geometry.half_w(), geometry.half_h());
    if (!std::isfinite(gain * std::exp(decay * reach)))
        throw ConfigError("decay", "strength overflows over the field support");
}

int sect_index(Vec2 v) {
    if (v.x == 0.0 && v.y == 0.0) return kNoSect;
    const double deg = std::atan2(v.y, v.x) * 180.0 / M_PI; // (-180, 180]
    // wedge s covers [45s - 22.5, 45s + 22.5) degrees
    int s = static_cast<int>(std::floor((deg + 22.5) / 45.0));
    return ((s % kSects) + kSects) % kSects;
}

int sect_distance(int a, int b) {
    int d = ((a - b) % kSects + kSects) % kSects;
    return std::min(d, kSects - d);
}

Offset sect_step(int sect) {
    static constexpr Offset steps[kSects] = {
        {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1},
    };
    return steps[sect];
}

Vec2 strength_at_offset(const FieldSpec& f, Offset o) {
    if (o.dx == 0 && o.dy == 0) return {};
    if (std::abs(o.dx) > f.geometry.half_w() || std::abs(o.dy) > f.geometry.half_h()) return {};
    if (is_directional(f.kind)) {
        const int target_sect = sect_index(static_cast<double>(o.dx), static_cast<double>(o.dy));
        if (sect_distance(target_sect, f.orientation) > 1) return {};
    }
    const double r = std::hypot(static_cast<double>(o.dx), static_cast<double>(o.dy));
    const double magnitude = f.gain * std::exp(f.decay * r);
    if (magnitude == 0.0) return {};
    const double sign = is_attractive(f.kind) ? -1.0 : 1.0;
    return Vec2{sign * magnitude * o.dx / r, sign * magnitude * o.dy / r};
}

Vec2 strength_at(const FieldSpec& f, SuIndex center, SuIndex target, const GridGeometry& g) {
    const SuIndex d = minimal_displacement(g, center, target);
    return strength_at_offset(f, Offset{d.x, d.y});
}

std::vector<Offset> support(const FieldSpec& f) {
    std::vector<Offset> out;
    for (int dy = -f.geometry.half_h(); dy <= f.geometry.half_h(); ++dy) {
        for (int dx = -f.geometry.half_w(); dx <= f.geometry.half_w(); ++dx) {
            const Offset o{dx, dy};
            const Vec2 s = strength_at_offset(f, o);
            if (s.x != 0.0 || s.y != 0.0) out.push_back(o);
        }
    }
    return out;
}

WritePlan build_write_plan(const FieldSpec& f) {
    WritePlan plan;
    plan.spec_ = f;
    for (const Offset o : support(f)) {
        const Vec2 s = strength_at_offset(f, o);
        const int sect = sect_index(s);
        // a field whose center sits at target - o writes address (target, sect)
        plan.entries_[sect].push_back({Offset{-o.dx, -o.dy}, s.norm()});
    }
    for (auto& list : plan.entries_) {
        std::sort(list.begin(), list.end(), [](const WritePlan::Entry& a, const WritePlan::Entry& b) {
            return a.center_offset < b.center_offset;
        });
        plan.fanout_ = std::max(plan.fanout_, static_cast<int>(list.size()));
    }
    return plan;
}

int fanout_brute_force(const FieldSpec& f) {
    // Fix the target at the origin and scan every candidate center position in
    // the support's reach, counting hits per sect.
    int counts[kSects] = {};
    const int rw = f.geometry.half_w();
    const int rh = f.geometry.half_h();
    for (int cy = -rh; cy <= rh; ++cy) {
        for (int cx = -rw; cx <= rw; ++cx) {
            const Offset o{-cx, -cy}; // target relative to the candidate center
            const Vec2 s = strength_at_offset(f, o);
            if (s.x == 0.0 && s.y == 0.0) continue;
            ++counts[sect_index(s)];
        }
    }
    return *std::max_element(counts, counts + kSects);
}

void StrengthImage::clear() {
    std::fill(data_.begin(), data_.end(), 0.0f);
}

float StrengthImage::max_abs_difference(const StrengthImage& a, const StrengthImage& b) {
    float worst = 0.0f;
    for (std::size_t i = 0; i < a.data_.size(); ++i) {
        worst = std::max(worst, std::abs(a.data_[i] - b.data_[i]));
    }
    return worst;
}

void rasterize_into(StrengthImage& img, const FieldSpec& f, SuIndex center) {
    const GridGeometry& g = img.geometry();
    for (const Offset o : support(f)) {
        const auto target = wrap(g, center.x + o.dx, center.y + o.dy);
        if (!target) continue; // clipped under Closed boundary
        const Vec2 s = strength_at_offset(f, o);
        img.at(*target, sect_index(s)) += static_cast<float>(s.norm());
    }
}

StrengthImage rasterize_static(const std::vector<AnchoredField>& fields, const GridGeometry& g) {
    StrengthImage img(g);
    for (const auto& [spec, anchor] : fields) {
        rasterize_into(img, spec, anchor);
    }
    return img;
}

} // namespace socfield
