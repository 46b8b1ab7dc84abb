#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "meshwave/config.hpp"
#include "meshwave/errors.hpp"
#include "meshwave/post.hpp"
#include "meshwave/rbf.hpp"
#include "meshwave/solver.hpp"
#include "meshwave/source.hpp"
#include "meshwave/study.hpp"

namespace py = pybind11;
using namespace meshwave;

namespace {

py::array_t<double> positions_array(const std::vector<Vec2>& pts) {
    py::array_t<double> out({static_cast<py::ssize_t>(pts.size()), py::ssize_t(2)});
    auto r = out.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < r.shape(0); ++i) {
        r(i, 0) = pts[static_cast<std::size_t>(i)].x;
        r(i, 1) = pts[static_cast<std::size_t>(i)].z;
    }
    return out;
}

py::array_t<double> vector_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::array_t<double> matrix_array(const std::vector<std::vector<double>>& rows) {
    const py::ssize_t nr = static_cast<py::ssize_t>(rows.size());
    const py::ssize_t nc = nr ? static_cast<py::ssize_t>(rows[0].size()) : 0;
    py::array_t<double> out({nr, nc});
    auto r = out.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < nr; ++i)
        for (py::ssize_t j = 0; j < nc; ++j)
            r(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return out;
}

Vec2 as_vec2(const std::pair<double, double>& p) { return {p.first, p.second}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Meshless 2D acoustic wave simulator (scattered-node RBF-FD core)";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<IoError>(m, "IoError", PyExc_IOError);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def_property_readonly("name", [](const ScenarioConfig& c) { return c.name; })
        .def_property_readonly("dt", [](const ScenarioConfig& c) { return c.dt; })
        .def_property_readonly("n_steps", [](const ScenarioConfig& c) { return c.n_steps; })
        .def_property_readonly("seed", [](const ScenarioConfig& c) { return c.seed; })
        .def("__repr__", [](const ScenarioConfig& c) {
            return "<ScenarioConfig '" + c.name + "', " + std::to_string(c.n_steps) + " steps>";
        });

    m.def("parse_config", [](const std::string& text) { return parse_config(text); },
          py::arg("text"), "Parse a scenario from key = value text.");
    m.def("load_config", &load_config, py::arg("path"),
          "Load and validate a scenario file.");
    m.def("serialize_config", &serialize_config, py::arg("config"));

    m.def(
        "generate_nodes",
        [](double x_min, double x_max, double z_min, double z_max, double a, std::uint64_t seed) {
            const NodeSet ns =
                generate_nodes(Rect(x_min, x_max, z_min, z_max), constant_spacing(a), seed);
            std::vector<int> kinds(ns.size());
            for (std::size_t i = 0; i < ns.size(); ++i) kinds[i] = static_cast<int>(ns.kinds[i]);
            return py::make_tuple(positions_array(ns.positions), kinds,
                                  vector_array(ns.spacing));
        },
        py::arg("x_min"), py::arg("x_max"), py::arg("z_min"), py::arg("z_max"), py::arg("a"),
        py::arg("seed") = 0,
        "Scattered node fill at constant target spacing; returns (positions, kinds, spacing).");

    m.def(
        "laplacian_weights",
        [](std::pair<double, double> center, py::array_t<double> support, double sigma) {
            auto s = support.unchecked<2>();
            std::vector<Vec2> pts;
            for (py::ssize_t i = 0; i < s.shape(0); ++i) pts.push_back({s(i, 0), s(i, 1)});
            const auto res = compute_weights(as_vec2(center), pts, GaussianBasis(sigma));
            return vector_array(res.weights);
        },
        py::arg("center"), py::arg("support"), py::arg("sigma"),
        "RBF-FD Laplacian weights for one stencil (support is an (n, 2) array).");

    m.def(
        "ricker",
        [](py::array_t<double> t, double sigma_r, double s0) {
            RickerSource src;
            src.s0 = s0;
            src.sigma_R = sigma_r;
            auto in = t.unchecked<1>();
            py::array_t<double> out(in.shape(0));
            auto o = out.mutable_unchecked<1>();
            for (py::ssize_t i = 0; i < in.shape(0); ++i) o(i) = ricker(src, in(i));
            return out;
        },
        py::arg("t"), py::arg("sigma_r"), py::arg("s0") = 1.0,
        "Ricker wavelet sampled at the given times.");

    m.def(
        "run",
        [](const ScenarioConfig& cfg, bool force) {
            const RunArtifacts art = run(cfg, force);
            py::dict out;
            out["backend"] = art.backend;
            out["positions"] = positions_array(art.nodes.positions);
            out["seismogram_times"] = vector_array(art.seismogram.times);
            out["receiver_x"] = vector_array(art.seismogram.receiver_x);
            out["seismogram"] = matrix_array(art.seismogram.values);
            py::list snaps;
            for (const SnapshotField& s : art.snapshots) {
                py::dict d;
                d["t"] = s.t;
                d["values"] = vector_array(s.values);
                snaps.append(d);
            }
            out["snapshots"] = snaps;
            py::list probes;
            for (const ProbeTrace& p : art.probes) {
                py::dict d;
                d["x"] = p.position.x;
                d["z"] = p.position.z;
                d["values"] = vector_array(p.values);
                probes.append(d);
            }
            out["probes"] = probes;
            out["probe_times"] = vector_array(art.probe_times);
            out["diagnostics"] = art.diagnostics;
            return out;
        },
        py::arg("config"), py::arg("force") = false,
        "Full simulation; returns node positions, seismogram, snapshots and probe traces.");

    m.def(
        "convergence_study",
        [](const ScenarioConfig& cfg, const std::vector<double>& spacings,
           std::pair<double, double> probe, double t_probe, double window) {
            py::list out;
            for (const auto& p :
                 convergence_study(cfg, spacings, as_vec2(probe), t_probe, window)) {
                py::dict d;
                d["spacing"] = p.spacing;
                d["node_count"] = p.node_count;
                d["peak_value"] = p.peak_value;
                out.append(d);
            }
            return out;
        },
        py::arg("config"), py::arg("spacings"), py::arg("probe"), py::arg("t_probe"),
        py::arg("window") = 2e-3,
        "Rerun the scenario over a spacing ladder and report probe peaks.");
}
