#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "dnls/backlund.hpp"
#include "dnls/error.hpp"
#include "dnls/evolve.hpp"
#include "dnls/harness.hpp"
#include "dnls/lax.hpp"
#include "dnls/soliton.hpp"
#include "dnls/spectral.hpp"

namespace py = pybind11;
using dnls::cplx;
using dnls::Grid;
using dnls::GridField;
using dnls::SpectralParam;
using dnls::VectorField;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

Grid grid_for(const CArray& q, double L) {
    if (q.ndim() != 1) throw py::value_error("field must be one-dimensional");
    return Grid(L, static_cast<std::size_t>(q.shape(0)));
}

GridField to_field(const CArray& q, double L) {
    const Grid g = grid_for(q, L);
    return GridField(g, std::vector<cplx>(q.data(), q.data() + q.shape(0)));
}

CArray to_array(const GridField& f) {
    CArray out(static_cast<py::ssize_t>(f.size()));
    std::copy(f.values().begin(), f.values().end(), out.mutable_data());
    return out;
}

VectorField to_vector(const CArray& phi, double L) {
    if (phi.ndim() != 2 || phi.shape(0) != 2) throw py::value_error("vector field must have shape (2, N)");
    const auto n = static_cast<std::size_t>(phi.shape(1));
    const cplx* p = phi.data();
    return VectorField(Grid(L, n), std::vector<cplx>(p, p + n), std::vector<cplx>(p + n, p + 2 * n));
}

CArray to_array(const VectorField& v) {
    const GridField a = v.component(1), b = v.component(2);
    const auto n = static_cast<py::ssize_t>(a.size());
    CArray out({py::ssize_t{2}, n});
    std::copy(a.values().begin(), a.values().end(), out.mutable_data());
    std::copy(b.values().begin(), b.values().end(), out.mutable_data() + n);
    return out;
}

py::object parse_json(const std::string& text) {
    return py::module_::import("json").attr("loads")(text);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "DNLS soliton toolkit: fields are 1-D complex arrays on [-L/2, L/2).";

    static py::exception<dnls::Error> error(m, "DnlsError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const dnls::Error& e) {
            py::object inst = py::handle(error)(py::str(e.what()));
            inst.attr("kind") = py::str(dnls::to_string(e.kind()));
            PyErr_SetObject(error.ptr(), inst.ptr());
        }
    });

    m.def("grid", [](double L, std::size_t N) {
        const auto x = Grid(L, N).coordinates();
        return py::array_t<double>(static_cast<py::ssize_t>(x.size()), x.data());
    }, py::arg("L"), py::arg("N"));

    m.def("soliton", [](cplx z, double t, double L, std::size_t N, double shift, double phase) {
        return to_array(dnls::soliton_family({SpectralParam(z), shift, phase}, t, Grid(L, N)));
    }, py::arg("z"), py::arg("t") = 0.0, py::arg("L") = 80.0, py::arg("N") = 4096, py::arg("shift") = 0.0,
       py::arg("phase") = 0.0);

    m.def("evolve", [](const CArray& q, double L, double dt, double T, int store_every, bool dealias) {
        dnls::EvolverConfig cfg;
        cfg.dt = dt;
        cfg.T = T;
        cfg.store_every = store_every;
        cfg.dealias = dealias;
        std::vector<dnls::Snapshot> snaps;
        {
            const GridField q0 = to_field(q, L);
            py::gil_scoped_release release;
            snaps = dnls::evolve(q0, cfg);
        }
        const auto n = static_cast<py::ssize_t>(q.shape(0)), s = static_cast<py::ssize_t>(snaps.size());
        py::array_t<double> times(s);
        CArray fields({s, n});
        for (py::ssize_t i = 0; i < s; ++i) {
            times.mutable_at(i) = snaps[i].t;
            std::copy(snaps[i].q.values().begin(), snaps[i].q.values().end(), fields.mutable_data() + i * n);
        }
        return py::make_tuple(times, fields);
    }, py::arg("q"), py::arg("L"), py::arg("dt") = 1e-4, py::arg("T") = 1.0, py::arg("store_every") = 1000,
       py::arg("dealias") = true, "IFRK4 evolution; returns (times, snapshots).");

    m.def("conserved", [](const CArray& q, double L) {
        const auto c = dnls::conserved(to_field(q, L));
        return py::dict(py::arg("mass") = c.mass, py::arg("energy") = c.energy, py::arg("momentum") = c.momentum);
    }, py::arg("q"), py::arg("L"));

    m.def("find_eigenvalue", [](const CArray& q, double L, cplx z_guess, double tol, int substeps) {
        dnls::EigenOptions opts;
        opts.tol = tol;
        opts.substeps = substeps;
        const auto r = dnls::find_eigenvalue(to_field(q, L), SpectralParam(z_guess), opts);
        return py::dict(py::arg("z1") = r.z1.z(), py::arg("eigenvector") = to_array(r.eigenvector),
                        py::arg("evans_residual") = r.evans_residual, py::arg("iterations") = r.iterations);
    }, py::arg("q"), py::arg("L"), py::arg("z_guess") = cplx(1.0, 0.5), py::arg("tol") = 1e-12,
       py::arg("substeps") = 4);

    m.def("bt_forward", [](const CArray& q, const CArray& phi, cplx z, double L) {
        const auto out = dnls::bt_forward({to_field(q, L), to_vector(phi, L), SpectralParam(z)});
        return py::make_tuple(to_array(out.q), to_array(out.phi));
    }, py::arg("q"), py::arg("phi"), py::arg("z"), py::arg("L"), "Bäcklund map; returns (q1, phi1).");

    m.def("orbital_distance", [](const CArray& q, cplx z, double t, double L) {
        const auto f = dnls::orbital_distance(to_field(q, L), SpectralParam(z), t);
        return py::make_tuple(f.d, f.a, f.b);
    }, py::arg("q"), py::arg("z"), py::arg("t"), py::arg("L"), "Returns (d, shift, phase).");

    m.def("zero_curvature_residual", [](const CArray& slices, double dt, cplx z, double L) {
        if (slices.ndim() != 2) throw py::value_error("slices must have shape (M, N)");
        const auto n = static_cast<std::size_t>(slices.shape(1));
        const Grid g(L, n);
        std::vector<GridField> series;
        for (py::ssize_t i = 0; i < slices.shape(0); ++i) {
            const cplx* p = slices.data() + i * slices.shape(1);
            series.emplace_back(g, std::vector<cplx>(p, p + n));
        }
        return dnls::zero_curvature_residual(series, dt, SpectralParam(z));
    }, py::arg("slices"), py::arg("dt"), py::arg("z"), py::arg("L"));

    m.def("default_config", &dnls::default_config_text);

    m.def("run_pipeline", [](const std::string& config_text) {
        std::istringstream in(config_text);
        const auto cfg = dnls::parse_config(in);
        std::string json;
        {
            py::gil_scoped_release release;
            json = dnls::to_json(dnls::run_pipeline(cfg));
        }
        return parse_json(json);
    }, py::arg("config_text"), "Runs the stability pipeline on an INI-style config; returns the record as a dict.");
}
