#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nsforge/diagnostics.hpp"
#include "nsforge/experiment.hpp"
#include "nsforge/field_io.hpp"
#include "nsforge/spectral.hpp"

namespace py = pybind11;
using namespace nsforge;

namespace {

std::vector<py::ssize_t> grid_shape(const GridSpec& g, int ncomp) {
    std::vector<py::ssize_t> shape{ncomp};
    for (int d = 0; d < g.dim; ++d) shape.push_back(g.points);
    return shape;
}

py::array_t<double> field_to_numpy(const VectorField& u) {
    const VectorField up = to_physical(u);
    const GridSpec& g = up.grid;
    py::array_t<double> out(grid_shape(g, g.dim));
    double* ptr = out.mutable_data();
    const std::size_t npts = g.cells();
    for (int c = 0; c < g.dim; ++c)
        std::copy(up.phys[c].begin(), up.phys[c].end(), ptr + c * npts);
    return out;
}

VectorField numpy_to_field(const GridSpec& g, const py::array_t<double>& arr) {
    auto buf = arr.request();
    const std::size_t npts = g.cells();
    if (buf.ndim != g.dim + 1 || buf.shape[0] != g.dim)
        throw std::invalid_argument("expected array of shape (dim, N, ...)");
    for (int d = 1; d <= g.dim; ++d)
        if (buf.shape[d] != g.points)
            throw std::invalid_argument("array extent does not match the grid");
    py::array_t<double> contig = py::array_t<double, py::array::c_style | py::array::forcecast>(arr);
    const double* ptr = contig.data();
    VectorField u = VectorField::zeros(g, Rep::physical);
    for (int c = 0; c < g.dim; ++c)
        std::copy(ptr + c * npts, ptr + (c + 1) * npts, u.phys[c].begin());
    return u;
}

TensorField numpy_to_tensor(const GridSpec& g, const py::array_t<double>& arr) {
    auto buf = arr.request();
    if (buf.ndim != g.dim + 2 || buf.shape[0] != g.dim || buf.shape[1] != g.dim)
        throw std::invalid_argument("expected tensor array of shape (dim, dim, N, ...)");
    py::array_t<double> contig = py::array_t<double, py::array::c_style | py::array::forcecast>(arr);
    const double* ptr = contig.data();
    const std::size_t npts = g.cells();
    TensorField t = TensorField::zeros(g, false, Rep::physical);
    for (int k = 0; k < g.dim; ++k)
        for (int l = 0; l < g.dim; ++l) {
            const double* src = ptr + (k * g.dim + l) * npts;
            std::copy(src, src + npts, t.comp_phys(k, l).begin());
        }
    return t;
}

py::dict norms_to_dict(const NormReport& rep, int dim) {
    py::dict d;
    py::dict lp;
    for (const auto& [p, v] : rep.lp_values) lp[py::float_(p)] = v;
    d["lp"] = lp;
    d["weighted_first_moment"] = rep.weighted_first_moment;
    py::list mom;
    for (int k = 0; k < dim; ++k) {
        py::list row;
        for (int j = 0; j < dim; ++j) row.append(rep.first_moments[k][j]);
        mom.append(row);
    }
    d["first_moments"] = mom;
    return d;
}

Calibration calib_or_default(const std::string& path) {
    return path.empty() ? Calibration::defaults() : Calibration::load(path);
}

}  // namespace

PYBIND11_MODULE(_nsforge, m) {
    m.doc() = "spectral force-synthesis laboratory for small-data Navier-Stokes flows";

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init([](int dim, int points, double length, double dealias) {
                 GridSpec g;
                 g.dim = dim;
                 g.points = points;
                 g.length = length;
                 g.dealias_fraction = dealias;
                 g.validate();
                 return g;
             }),
             py::arg("dim"), py::arg("points"), py::arg("length"),
             py::arg("dealias_fraction") = 2.0 / 3.0)
        .def_readonly("dim", &GridSpec::dim)
        .def_readonly("points", &GridSpec::points)
        .def_readonly("length", &GridSpec::length)
        .def_property_readonly("dx", &GridSpec::dx)
        .def_property_readonly("validity_t_max", &GridSpec::validity_t_max);

    m.def(
        "generate_data",
        [](const GridSpec& g, const std::string& kind, double amplitude, double width,
           std::uint64_t seed, int band_modes) {
            DataParams p{amplitude, width, seed, band_modes};
            return field_to_numpy(generate_data(g, kind, p));
        },
        py::arg("grid"), py::arg("kind"), py::arg("amplitude") = 0.02, py::arg("width") = 0.4,
        py::arg("seed") = 0, py::arg("band_modes") = 0);

    m.def(
        "heat_propagate",
        [](const GridSpec& g, const py::array_t<double>& u, double t) {
            return field_to_numpy(heat_propagate(numpy_to_field(g, u), t));
        },
        py::arg("grid"), py::arg("u"), py::arg("t"));

    m.def(
        "leray_project",
        [](const GridSpec& g, const py::array_t<double>& u) {
            return field_to_numpy(leray_project(numpy_to_field(g, u)));
        },
        py::arg("grid"), py::arg("u"));

    m.def(
        "apply_F",
        [](const GridSpec& g, const py::array_t<double>& f, double t) {
            return field_to_numpy(apply_F(numpy_to_tensor(g, f), t));
        },
        py::arg("grid"), py::arg("f"), py::arg("t"));

    m.def(
        "tensor_divergence",
        [](const GridSpec& g, const py::array_t<double>& f) {
            return field_to_numpy(tensor_divergence(numpy_to_tensor(g, f)));
        },
        py::arg("grid"), py::arg("f"));

    m.def(
        "max_divergence",
        [](const GridSpec& g, const py::array_t<double>& u) {
            return max_divergence(numpy_to_field(g, u));
        },
        py::arg("grid"), py::arg("u"));

    m.def(
        "lp_norm",
        [](const GridSpec& g, const py::array_t<double>& u, double p) {
            return lp_norm(numpy_to_field(g, u), p);
        },
        py::arg("grid"), py::arg("u"), py::arg("p"));

    m.def(
        "norms_and_moments",
        [](const GridSpec& g, const py::array_t<double>& u, const std::vector<double>& ps) {
            return norms_to_dict(norms_and_moments(numpy_to_field(g, u), ps), g.dim);
        },
        py::arg("grid"), py::arg("u"), py::arg("exponents"));

    m.def(
        "functionals",
        [](const GridSpec& g, const py::array_t<double>& u, const std::string& calibration) {
            Functionals f = functionals(numpy_to_field(g, u), calib_or_default(calibration));
            py::dict d;
            d["J"] = f.J;
            d["K"] = f.K;
            d["L"] = f.L;
            return d;
        },
        py::arg("grid"), py::arg("u"), py::arg("calibration") = "");

    m.def(
        "lambda_rescale",
        [](const GridSpec& g, const py::array_t<double>& u, int lam) {
            return field_to_numpy(lambda_rescale(numpy_to_field(g, u), lam));
        },
        py::arg("grid"), py::arg("u"), py::arg("lam"));

    m.def("F_kernel_lp_norm", &F_kernel_lp_norm, py::arg("grid"), py::arg("t"), py::arg("p"),
          py::arg("self_similar_radius") = 0.0);
    m.def("grad_e1_l2_norm", &grad_e1_l2_norm, py::arg("dim"));

    m.def(
        "simulate",
        [](const GridSpec& g, const py::array_t<double>& a, double t_end, int steps,
           bool geometric, bool nonlinearity) {
            TimeGrid tg = geometric ? TimeGrid::geometric(t_end) : TimeGrid::uniform(t_end, steps);
            Trajectory tr = integrate(numpy_to_field(g, a), std::nullopt, tg, nonlinearity);
            py::dict d;
            d["t"] = tr.tg.nodes;
            py::dict series;
            for (const auto& [p, v] : tr.norm_series) {
                const std::string key = std::isinf(p) ? "inf" : std::to_string(p);
                series[py::str(key)] = v;
            }
            d["norms"] = series;
            d["energy_integral"] = tr.energy_integral;
            d["final"] = field_to_numpy(tr.at(tr.size() - 1));
            return d;
        },
        py::arg("grid"), py::arg("a"), py::arg("t_end") = 1.0, py::arg("steps") = 64,
        py::arg("geometric") = false, py::arg("nonlinearity") = true);

    m.def(
        "synthesize",
        [](const GridSpec& g, const py::array_t<double>& a, double t_end, double tol,
           int max_outer, bool override_smallness, double profile_R,
           const std::string& calibration) {
            const Calibration calib = calib_or_default(calibration);
            VectorField af = numpy_to_field(g, a);
            TimeGrid tg = TimeGrid::geometric(t_end);
            ForceProfile phi;
            std::string binding;
            if (profile_R > 0.0) {
                phi = realize_profile(ProfileBase::builtin_bump(), g, profile_R);
            } else {
                ChooseRResult cr = choose_R(af, ProfileBase::builtin_bump(), calib);
                phi = std::move(cr.profile);
                binding = cr.binding_condition;
            }
            SynthesisOptions opts;
            opts.tol = tol;
            opts.max_outer = max_outer;
            opts.override_smallness = override_smallness;
            SynthesisState st = synthesize(af, phi, tg, opts, calib);
            py::dict d;
            d["converged"] = st.converged;
            d["iterations"] = st.iterations;
            d["t_cut"] = st.t_cut;
            d["R"] = phi.radius;
            d["binding_condition"] = binding;
            d["delta_history"] = st.delta_history;
            d["ratio_history"] = st.ratio_history;
            py::list ch;
            for (const auto& c : st.c_history) {
                py::list rows;
                for (int k = 0; k < g.dim; ++k) {
                    py::list row;
                    for (int l = 0; l < g.dim; ++l) row.append(c.entries[k][l]);
                    rows.append(row);
                }
                ch.append(rows);
            }
            d["c_history"] = ch;
            py::list fc;
            for (int k = 0; k < g.dim; ++k) {
                py::list row;
                for (int l = 0; l < g.dim; ++l) row.append(st.force.coeffs[k][l]);
                fc.append(row);
            }
            d["force_coeffs"] = fc;
            d["flow_t"] = st.flow.tg.nodes;
            d["flow_l2"] = st.flow.series(2.0);
            return d;
        },
        py::arg("grid"), py::arg("a"), py::arg("t_end") = 64.0, py::arg("tol") = 1e-6,
        py::arg("max_outer") = 25, py::arg("override_smallness") = false,
        py::arg("profile_R") = 0.0, py::arg("calibration") = "");

    m.def(
        "check_smallness",
        [](const GridSpec& g, const py::array_t<double>& a, double profile_R,
           const std::string& calibration) {
            const Calibration calib = calib_or_default(calibration);
            ForceProfile phi = realize_profile(ProfileBase::builtin_bump(), g, profile_R);
            SmallnessReport rep = check_smallness(numpy_to_field(g, a), phi, calib);
            py::list entries;
            for (const auto& e : rep.entries) {
                py::dict ed;
                ed["name"] = e.name;
                ed["lhs"] = e.lhs;
                ed["rhs"] = e.rhs;
                ed["margin"] = e.margin;
                ed["pass"] = e.pass;
                entries.append(ed);
            }
            py::dict d;
            d["entries"] = entries;
            d["all_pass"] = rep.all_pass;
            return d;
        },
        py::arg("grid"), py::arg("a"), py::arg("profile_R") = 1.0, py::arg("calibration") = "");

    m.def(
        "decay_slope",
        [](const GridSpec& g, const std::vector<double>& t, const std::vector<double>& v,
           double t0, double t1) {
            if (t.size() != v.size()) throw std::invalid_argument("t/v size mismatch");
            std::vector<std::pair<double, double>> series;
            for (std::size_t i = 0; i < t.size(); ++i) series.emplace_back(t[i], v[i]);
            DecayReport rep = decay_slope(series, t0, t1, g);
            py::dict d;
            d["exponent"] = rep.exponent;
            d["intercept"] = rep.intercept;
            d["residual"] = rep.residual;
            d["points"] = rep.points;
            return d;
        },
        py::arg("grid"), py::arg("t"), py::arg("v"), py::arg("t0"), py::arg("t1"));

    m.def(
        "run_experiment",
        [](const std::string& config_path, const std::string& mode) {
            RunManifest man = run_experiment(ExperimentConfig::load(config_path), mode);
            py::dict d;
            d["config_hash"] = man.config_hash;
            d["artifact_count"] = man.artifacts.size();
            d["wall_clock_seconds"] = man.wall_clock_seconds;
            return d;
        },
        py::arg("config_path"), py::arg("mode") = "simulate");

    m.attr("__version__") = "0.1.0";
}
