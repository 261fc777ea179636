#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "socfield/bench.hpp"
#include "socfield/scenario.hpp"

namespace py = pybind11;
using namespace socfield;

namespace {

BoundaryMode boundary_from_name(const std::string& name) {
    if (name == "periodic") return BoundaryMode::Periodic;
    if (name == "closed") return BoundaryMode::Closed;
    throw py::value_error("boundary must be 'periodic' or 'closed'");
}

FieldKind kind_from_name(const std::string& name) {
    const auto kind = field_kind_from_name(name);
    if (!kind) throw py::value_error("unknown field kind '" + name + "'");
    return *kind;
}

RunMode mode_from_name(const std::string& name) {
    if (name == "seq") return RunMode::Sequential;
    if (name == "par") return RunMode::Parallel;
    throw py::value_error("mode must be 'seq' or 'par'");
}

py::array_t<std::int32_t> occupancy_array(const SimState& s) {
    const auto& g = s.occupancy.geometry();
    py::array_t<std::int32_t> out({g.height, g.width});
    std::memcpy(out.mutable_data(), s.occupancy.raw().data(),
                s.occupancy.raw().size() * sizeof(std::int32_t));
    return out;
}

py::array_t<float> image_array(const StrengthImage& img) {
    const auto& g = img.geometry();
    py::array_t<float> out({g.height, g.width, kSects});
    std::memcpy(out.mutable_data(), img.raw().data(), img.raw().size() * sizeof(float));
    return out;
}

py::array_t<std::int32_t> centers_array(const SimState& s) {
    py::array_t<std::int32_t> out({static_cast<py::ssize_t>(s.pedestrians.size()),
                                   static_cast<py::ssize_t>(2)});
    auto view = out.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < view.shape(0); ++i) {
        view(i, 0) = s.pedestrians[static_cast<std::size_t>(i)].center.x;
        view(i, 1) = s.pedestrians[static_cast<std::size_t>(i)].center.y;
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Deterministic data-parallel discrete social-field pedestrian simulation engine";

    py::register_exception<ParseError>(m, "ParseError");
    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<SeedingError>(m, "SeedingError");
    py::register_exception<IntegrityError>(m, "IntegrityError");

    py::class_<GridGeometry>(m, "GridGeometry")
        .def(py::init([](int width, int height, const std::string& boundary) {
                 return GridGeometry(width, height, boundary_from_name(boundary));
             }),
             py::arg("width"), py::arg("height"), py::arg("boundary") = "periodic")
        .def_readonly("width", &GridGeometry::width)
        .def_readonly("height", &GridGeometry::height)
        .def_property_readonly("boundary",
                               [](const GridGeometry& g) {
                                   return g.boundary == BoundaryMode::Periodic ? "periodic"
                                                                               : "closed";
                               })
        .def("cells", &GridGeometry::cells)
        .def("__repr__", [](const GridGeometry& g) {
            std::ostringstream os;
            os << "GridGeometry(" << g.width << ", " << g.height << ", '"
               << (g.boundary == BoundaryMode::Periodic ? "periodic" : "closed") << "')";
            return os.str();
        });

    m.def(
        "wrap",
        [](const GridGeometry& g, int x, int y) -> std::optional<std::pair<int, int>> {
            const auto p = wrap(g, x, y);
            if (!p) return std::nullopt;
            return std::make_pair(p->x, p->y);
        },
        py::arg("grid"), py::arg("x"), py::arg("y"),
        "Normalize a raw coordinate pair; None marks out-of-bounds under a closed boundary.");

    m.def(
        "footprint_cells",
        [](const GridGeometry& g, std::pair<int, int> center, std::pair<int, int> footprint) {
            const auto fc = footprint_cells(g, SuIndex{center.first, center.second},
                                            Footprint{footprint.first, footprint.second});
            std::vector<std::pair<int, int>> cells;
            cells.reserve(fc.cells.size());
            for (const auto c : fc.cells) cells.emplace_back(c.x, c.y);
            return std::make_pair(cells, fc.clipped);
        },
        py::arg("grid"), py::arg("center"), py::arg("footprint"),
        "Cells of an odd footprint centered at `center`; returns (cells, clipped).");

    m.def(
        "sect_index",
        [](double x, double y) -> std::optional<int> {
            const int s = sect_index(x, y);
            if (s == kNoSect) return std::nullopt;
            return s;
        },
        py::arg("x"), py::arg("y"),
        "Octant of a nonzero vector, sect 0 centered on +x, counter-clockwise; None for zero.");
    m.def("sect_distance", &sect_distance, py::arg("a"), py::arg("b"));

    py::class_<FieldSpec>(m, "FieldSpec")
        .def(py::init([](const std::string& kind, std::pair<int, int> geometry, double gain,
                         double decay, int orientation) {
                 return FieldSpec(kind_from_name(kind),
                                  Footprint{geometry.first, geometry.second}, gain, decay,
                                  orientation);
             }),
             py::arg("kind"), py::arg("geometry") = std::make_pair(7, 7), py::arg("gain") = 1.0,
             py::arg("decay") = -0.5, py::arg("orientation") = 0)
        .def_property_readonly("kind",
                               [](const FieldSpec& f) { return field_kind_name(f.kind); })
        .def_property_readonly(
            "geometry",
            [](const FieldSpec& f) { return std::make_pair(f.geometry.width, f.geometry.height); })
        .def_readonly("gain", &FieldSpec::gain)
        .def_readonly("decay", &FieldSpec::decay)
        .def_readonly("orientation", &FieldSpec::orientation);

    m.def(
        "strength_at",
        [](const FieldSpec& f, std::pair<int, int> center, std::pair<int, int> target,
           const GridGeometry& g) {
            const Vec2 v = strength_at(f, SuIndex{center.first, center.second},
                                       SuIndex{target.first, target.second}, g);
            return std::make_pair(v.x, v.y);
        },
        py::arg("field"), py::arg("center"), py::arg("target"), py::arg("grid"));

    m.def(
        "support",
        [](const FieldSpec& f) {
            std::vector<std::pair<int, int>> out;
            for (const auto o : support(f)) out.emplace_back(o.dx, o.dy);
            return out;
        },
        py::arg("field"), "Center-relative offsets with nonzero strength.");

    py::class_<WritePlan>(m, "WritePlan")
        .def_property_readonly("fanout", &WritePlan::fanout)
        .def(
            "contributors",
            [](const WritePlan& plan, int sect) {
                std::vector<std::pair<std::pair<int, int>, double>> out;
                for (const auto& e : plan.entries(sect)) {
                    out.emplace_back(std::make_pair(e.center_offset.dx, e.center_offset.dy),
                                     e.magnitude);
                }
                return out;
            },
            py::arg("sect"),
            "Slot-ordered (center offset, magnitude) contributors of a (target, sect) address.");

    m.def("build_write_plan", &build_write_plan, py::arg("field"));
    m.def("fanout_brute_force", &fanout_brute_force, py::arg("field"));

    m.def(
        "one_step_sum",
        [](const std::vector<double>& terms) {
            return one_step_sum(std::span<const double>(terms));
        },
        py::arg("terms"));
    m.def(
        "multi_step_sum",
        [](const std::vector<double>& terms, int k) {
            return multi_step_sum(std::span<const double>(terms), k);
        },
        py::arg("terms"), py::arg("k"),
        "Chunked sum with a K-wide bounded buffer, K in {2, 4, 8, 16}.");
    m.def("chunk_count", &chunk_count, py::arg("n"), py::arg("k"));

    m.def(
        "sort8_desc",
        [](const std::vector<double>& scores) {
            if (scores.size() != 8) throw py::value_error("expected exactly 8 scores");
            std::array<double, 8> a;
            std::copy(scores.begin(), scores.end(), a.begin());
            const auto order = sort8_desc(a);
            return std::vector<int>(order.begin(), order.end());
        },
        py::arg("scores"), "Descending order of 8 scores; ties to the lower index.");

    py::class_<MemoryPlan>(m, "MemoryPlan")
        .def_readonly("sf", &MemoryPlan::sf)
        .def_readonly("m_recur_bytes", &MemoryPlan::m_recur_bytes)
        .def_readonly("m_total_bytes", &MemoryPlan::m_total_bytes)
        .def_readonly("grid_bytes", &MemoryPlan::grid_bytes)
        .def_readonly("gib", &MemoryPlan::gib)
        .def_property_readonly("gib_display", &MemoryPlan::gib_display)
        .def("__repr__", [](const MemoryPlan& p) {
            std::ostringstream os;
            os << "MemoryPlan(sf=" << p.sf << ", m_recur_bytes=" << p.m_recur_bytes
               << ", grid_bytes=" << p.grid_bytes << ")";
            return os.str();
        });
    m.def("memory_plan", &memory_plan, py::arg("sf"), py::arg("grid"));

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("grid", &ScenarioConfig::grid)
        .def_readwrite("density", &ScenarioConfig::density)
        .def_readwrite("ticks", &ScenarioConfig::ticks)
        .def_readwrite("seed", &ScenarioConfig::seed)
        .def_readwrite("chunk_k", &ScenarioConfig::chunk_k)
        .def_readwrite("walk_period_min", &ScenarioConfig::walk_period_min)
        .def_readwrite("walk_period_max", &ScenarioConfig::walk_period_max)
        .def_readwrite("rebuild_interval", &ScenarioConfig::rebuild_interval)
        .def_property(
            "directions",
            [](const ScenarioConfig& c) { return std::string(directions_name(c.directions)); },
            [](ScenarioConfig& c, const std::string& name) {
                if (name == "uni") c.directions = Directions::Uni;
                else if (name == "bi") c.directions = Directions::Bi;
                else if (name == "four") c.directions = Directions::Four;
                else if (name == "eight") c.directions = Directions::Eight;
                else throw py::value_error("directions must be uni, bi, four, or eight");
            })
        .def_property(
            "field_geometry",
            [](const ScenarioConfig& c) {
                return std::make_pair(c.field_geometry.width, c.field_geometry.height);
            },
            [](ScenarioConfig& c, std::pair<int, int> wh) {
                c.field_geometry = Footprint{wh.first, wh.second};
            })
        .def_property(
            "pedestrian_geometry",
            [](const ScenarioConfig& c) {
                return std::make_pair(c.pedestrian_geometry.width, c.pedestrian_geometry.height);
            },
            [](ScenarioConfig& c, std::pair<int, int> wh) {
                c.pedestrian_geometry = Footprint{wh.first, wh.second};
            });

    m.def("parse_scenario", &parse_scenario, py::arg("text"));
    m.def("parse_scenario_file", &parse_scenario_file, py::arg("path"));
    m.def("serialize_scenario", &serialize_scenario, py::arg("config"));
    m.def("validate_scenario", &validate_scenario, py::arg("config"));
    m.def("planned_population", &planned_population, py::arg("config"));
    m.def(
        "scale_fields",
        [](const ScenarioConfig& cfg, int ratio) {
            const Footprint f = scale_fields(cfg, ratio);
            return std::make_pair(f.width, f.height);
        },
        py::arg("config"), py::arg("ratio"));

    py::class_<SimState>(m, "SimState")
        .def_property_readonly("tick", [](const SimState& s) { return s.tick; })
        .def_property_readonly("population",
                               [](const SimState& s) { return s.pedestrians.size(); })
        .def("occupancy", &occupancy_array,
             "Occupant pedestrian id per su as an int32 (height, width) array; -1 is empty.")
        .def(
            "image",
            [](const SimState& s, const std::string& kind) {
                if (kind == "static") return image_array(s.static_image);
                const FieldKind fk = kind_from_name(kind);
                for (int k = 0; k < kDynKinds; ++k) {
                    if (to_field_kind(static_cast<DynKind>(k)) == fk) {
                        return image_array(s.dyn_images[k]);
                    }
                }
                throw py::value_error("no image for field kind '" + kind + "'");
            },
            py::arg("kind"),
            "Strength image as a float32 (height, width, 8) array; kind is a dynamic field "
            "kind name or 'static'.")
        .def("centers", &centers_array, "Pedestrian centers as an int32 (population, 2) array.")
        .def("copy", [](const SimState& s) { return s; });

    m.def("seed_population", &seed_population, py::arg("config"));
    m.def(
        "states_identical",
        [](const SimState& a, const SimState& b) {
            std::string diag;
            const bool same = states_identical(a, b, &diag);
            return std::make_pair(same, diag);
        },
        py::arg("a"), py::arg("b"), "Bitwise comparison; returns (identical, diagnosis).");

    py::class_<TickMetrics>(m, "TickMetrics")
        .def_readonly("tick", &TickMetrics::tick)
        .def_readonly("moved", &TickMetrics::moved)
        .def_readonly("wall_us", &TickMetrics::wall_us)
        .def_property_readonly("phase_us", [](const TickMetrics& m) {
            return std::vector<std::int64_t>(m.phase_us.begin(), m.phase_us.end());
        });

    py::class_<Engine>(m, "Engine")
        .def(py::init([](const ScenarioConfig& cfg, int workers) {
                 EngineConfig ec = cfg.engine_config();
                 ec.workers = workers;
                 return std::make_unique<Engine>(cfg.grid, ec, cfg.field_templates());
             }),
             py::arg("config"), py::arg("workers") = 0,
             "Engine for a scenario; workers = 0 picks the hardware concurrency.")
        .def(
            "tick",
            [](Engine& e, SimState& s, const std::string& mode) {
                return e.tick(s, mode_from_name(mode));
            },
            py::arg("state"), py::arg("mode") = "par")
        .def(
            "run",
            [](Engine& e, SimState& s, long ticks, const std::string& mode) {
                return e.run(s, ticks, mode_from_name(mode));
            },
            py::arg("state"), py::arg("ticks"), py::arg("mode") = "par",
            "Advance `ticks` ticks; returns per-tick metrics.")
        .def("verify_state", &Engine::verify_state, py::arg("state"))
        .def(
            "plan_fanout",
            [](const Engine& e, const std::string& kind, int orientation) {
                const FieldKind fk = kind_from_name(kind);
                for (int k = 0; k < kDynKinds; ++k) {
                    if (to_field_kind(static_cast<DynKind>(k)) == fk) {
                        return e.plan(static_cast<DynKind>(k), orientation).fanout();
                    }
                }
                throw py::value_error("engine holds no plan for kind '" + kind + "'");
            },
            py::arg("kind"), py::arg("orientation") = 0);
}
