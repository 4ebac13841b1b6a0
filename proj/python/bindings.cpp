#include "qlienard/analysis.hpp"
#include "qlienard/config.hpp"
#include "qlienard/errors.hpp"
#include "qlienard/reservoir.hpp"
#include "qlienard/run.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qlienard;

namespace {

std::vector<double> to_vector(const py::sequence& seq) { return seq.cast<std::vector<double>>(); }

py::array_t<double> as_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

Trajectory simulate(const DampingSpec& spec, const SystemParams& params, const NoiseSpec& noise,
                    const std::string& representation, double t_total, std::optional<double> dt,
                    std::pair<double, double> initial, std::uint64_t seed, std::size_t stride,
                    const std::string& scheme, double kappa, bool allow_coarse_dt)
{
    const Oscillator osc(spec, params, noise, kappa);
    const IntegratorScheme s{.kind = scheme_from_string(scheme),
                             .dt = dt.value_or(default_dt(params.omega0)),
                             .allow_coarse_dt = allow_coarse_dt};
    py::gil_scoped_release release;
    return integrate(osc, s, PhaseState{initial.first, initial.second}, representation_from_string(representation),
                     t_total, seed, stride);
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Quantum Lienard oscillators: coefficient maps, limit-cycle census, noisy amplitude dynamics.";
    m.attr("__version__") = std::string(toolkit_version);

    auto base = py::register_exception<Error>(m, "QLienardError", PyExc_RuntimeError);
    py::register_exception<DegenerateDegreeError>(m, "DegenerateDegreeError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<BlowUpError>(m, "BlowUpError", base.ptr());
    py::register_exception<InsufficientDataError>(m, "InsufficientDataError", base.ptr());

    py::enum_<Family>(m, "Family").value("Position", Family::Position).value("Velocity", Family::Velocity);
    py::enum_<Basis>(m, "Basis").value("A", Basis::A).value("M", Basis::M).value("Beta", Basis::Beta);
    py::enum_<Stability>(m, "Stability")
        .value("Stable", Stability::Stable)
        .value("Unstable", Stability::Unstable)
        .value("Degenerate", Stability::Degenerate);

    m.def("a_from_m", [](const py::sequence& c) { return a_from_m(to_vector(c)); }, py::arg("m"));
    m.def("m_from_a", [](const py::sequence& c) { return m_from_a(to_vector(c)); }, py::arg("a"));
    m.def("beta_from_m", [](const py::sequence& c) { return beta_from_m(to_vector(c)); }, py::arg("m"));
    m.def("m_from_beta", [](const py::sequence& c) { return m_from_beta(to_vector(c)); }, py::arg("beta"));

    py::class_<DampingSpec>(m, "DampingSpec")
        .def(py::init([](Family f, const py::sequence& c) { return DampingSpec(f, to_vector(c)); }),
             py::arg("family"), py::arg("m"))
        .def_static("from_a", [](const py::sequence& c) { return DampingSpec::from_a(to_vector(c)); })
        .def_static("from_beta", [](const py::sequence& c) { return DampingSpec::from_beta(to_vector(c)); })
        .def_property_readonly("family", &DampingSpec::family)
        .def_property_readonly("n", &DampingSpec::n)
        .def_property_readonly("m", &DampingSpec::m)
        .def_property_readonly("physical", &DampingSpec::physical)
        .def("__eq__", [](const DampingSpec& a, const DampingSpec& b) { return a == b; })
        .def("__repr__", [](const DampingSpec& s) {
            return "DampingSpec(" + std::string(to_string(s.family())) + ", m=" + py::repr(py::cast(s.m())).cast<std::string>() + ")";
        });

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init([](double omega0, double gamma, int n, double theta) {
                 SystemParams p{.omega0 = omega0, .gamma = gamma, .n = n, .theta = theta};
                 p.validate();
                 return p;
             }),
             py::arg("omega0") = 1.0, py::arg("gamma") = 1.0, py::arg("n") = 1, py::arg("theta") = 0.0)
        .def_readwrite("omega0", &SystemParams::omega0)
        .def_readwrite("gamma", &SystemParams::gamma)
        .def_readwrite("n", &SystemParams::n)
        .def_readwrite("theta", &SystemParams::theta);

    py::class_<NoiseSpec>(m, "NoiseSpec")
        .def_static("internal", &NoiseSpec::internal)
        .def_static("vacuum", &NoiseSpec::vacuum)
        .def_static("external", &NoiseSpec::external, py::arg("intensity"))
        .def_static("none", &NoiseSpec::none)
        .def_property_readonly("kind", [](const NoiseSpec& n) { return std::string(to_string(n.kind())); });

    m.def("coth_factor", &coth_factor, py::arg("omega"), py::arg("theta"));
    m.def("noise_intensity", &noise_intensity, py::arg("params"), py::arg("noise"));

    py::class_<LimitCycle>(m, "LimitCycle")
        .def_readonly("u_root", &LimitCycle::u_root)
        .def_readonly("radius", &LimitCycle::radius)
        .def_readonly("amplitude", &LimitCycle::amplitude)
        .def_readonly("stability", &LimitCycle::stability)
        .def_readonly("residual", &LimitCycle::residual)
        .def("__repr__", [](const LimitCycle& c) {
            return "LimitCycle(amplitude=" + format_double(c.amplitude) + ", " + std::string(to_string(c.stability)) + ")";
        });
    py::class_<AveragedCycle>(m, "AveragedCycle")
        .def_readonly("amplitude", &AveragedCycle::amplitude)
        .def_readonly("stability", &AveragedCycle::stability);

    m.def("limit_cycle_census",
          [](const DampingSpec& s, const SystemParams& p) { return limit_cycle_census(s, p).cycles; },
          py::arg("spec"), py::arg("params"));
    m.def("averaging_amplitude_condition", &averaging_amplitude_condition, py::arg("spec"), py::arg("params"),
          py::arg("quadrature_points") = 2048);

    py::class_<Trajectory>(m, "Trajectory")
        .def_property_readonly("dt", [](const Trajectory& t) { return t.dt; })
        .def_property_readonly("representation", [](const Trajectory& t) { return std::string(to_string(t.representation())); })
        .def("__len__", &Trajectory::size)
        .def("times", [](const Trajectory& t) {
            std::vector<double> out(t.size());
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = t.time(i);
            return as_array(out);
        })
        .def("radii", [](const Trajectory& t) { return as_array(t.radii()); })
        .def("states", [](const Trajectory& t) -> py::object {
            if (t.representation() == Representation::Amplitude) {
                py::array_t<std::complex<double>> out(t.size());
                auto view = out.mutable_unchecked<1>();
                for (std::size_t i = 0; i < t.size(); ++i) view(i) = t.amplitude()[i].alpha;
                return std::move(out);
            }
            py::array_t<double> out({t.size(), std::size_t{2}});
            auto view = out.mutable_unchecked<2>();
            for (std::size_t i = 0; i < t.size(); ++i) {
                view(i, 0) = t.phase()[i].x;
                view(i, 1) = t.phase()[i].v;
            }
            return std::move(out);
        }, "complex alpha for amplitude runs, an (N, 2) array of (x, x') for phase runs")
        .def("poincare_radii", [](const Trajectory& t, double phase) { return as_array(poincare_radii(t, phase)); },
             py::arg("section_phase") = 0.0);

    m.def("simulate", &simulate, py::arg("spec"), py::arg("params"), py::arg("noise") = NoiseSpec::none(),
          py::arg("representation") = "phase", py::arg("t_total") = 100.0, py::arg("dt") = py::none(),
          py::arg("initial") = std::pair<double, double>{0.1, 0.0}, py::arg("seed") = 1, py::arg("stride") = 1,
          py::arg("scheme") = "heun", py::arg("kappa") = 1.0, py::arg("allow_coarse_dt") = false);

    m.def("radial_statistics",
          [](const std::vector<Trajectory>& ensemble, double burn_in) {
              const auto s = radial_statistics(ensemble, burn_in);
              py::dict d;
              d["mean_r"] = s.mean_r;
              d["var_r"] = s.var_r;
              d["window_drift"] = s.window_drift;
              d["samples"] = s.samples;
              d["modes"] = s.histogram.modes();
              d["edges"] = as_array(s.histogram.edges);
              d["counts"] = s.histogram.counts;
              return d;
          },
          py::arg("ensemble"), py::arg("burn_in") = default_burn_in);

    m.def("fdr_closure_check",
          [](const SystemParams& p, std::size_t members, std::size_t modes, std::uint64_t seed) {
              FdrCheckOptions opts;
              opts.members = members;
              opts.modes = modes;
              opts.seed = seed;
              py::gil_scoped_release release;
              const auto r = fdr_closure_check(p, opts);
              py::gil_scoped_acquire acquire;
              py::dict d;
              d["gamma_bath"] = r.gamma_bath;
              d["predicted"] = r.predicted;
              d["measured"] = r.measured;
              d["relative_error"] = r.relative_error;
              d["covariance"] = as_array(r.covariance);
              return d;
          },
          py::arg("params"), py::arg("members") = 256, py::arg("modes") = 4096, py::arg("seed") = 1);

    m.def("bath_decay_fit",
          [](const SystemParams& p, std::size_t members, double alpha0, double t_total, std::uint64_t seed) {
              DecayFitOptions opts;
              opts.members = members;
              opts.alpha0 = {alpha0, 0.0};
              opts.t_total = t_total;
              opts.seed = seed;
              py::gil_scoped_release release;
              const auto r = bath_decay_fit(p, opts);
              py::gil_scoped_acquire acquire;
              py::dict d;
              d["gamma_bath"] = r.gamma_bath;
              d["gamma_fitted"] = r.gamma_fitted;
              d["relative_error"] = r.relative_error;
              d["times"] = as_array(r.times);
              d["mean_norm"] = as_array(r.mean_norm);
              d["warnings"] = r.warnings;
              return d;
          },
          py::arg("params"), py::arg("members") = 16, py::arg("alpha0") = 10.0, py::arg("t_total") = 100.0,
          py::arg("seed") = 1);

    m.def("preset_names", &preset_names);
    m.def("preset", [](const std::string& name) { return serialize_config(preset(name)); }, py::arg("name"),
          "Canonical JSON text of a figure or table preset.");
    m.def("run_config",
          [](const std::string& text, std::optional<std::string> output_dir) {
              RunConfig cfg = parse_config(text);
              if (output_dir) cfg.output_dir = *output_dir;
              RunOutcome out;
              {
                  py::gil_scoped_release release;
                  out = run(cfg);
              }
              py::dict d;
              d["exit_code"] = out.exit_code;
              d["diagnostics"] = out.diagnostics;
              std::vector<std::string> files;
              for (const auto& f : out.files) files.push_back(f.string());
              d["files"] = files;
              d["trajectories"] = out.trajectories;
              return d;
          },
          py::arg("config"), py::arg("output_dir") = py::none(),
          "Runs a JSON or YAML configuration and writes its outputs.");
}
