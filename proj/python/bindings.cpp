#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

#include "thermofit/core_model.hpp"
#include "thermofit/csv_io.hpp"
#include "thermofit/error.hpp"
#include "thermofit/fit_pipeline.hpp"
#include "thermofit/lm_solver.hpp"
#include "thermofit/sg_filter.hpp"
#include "thermofit/synth_gen.hpp"
#include "thermofit/time_series.hpp"

namespace py = pybind11;
using namespace thermofit;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::array_t<double> to_array(std::span<const double> v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

std::vector<double> to_vector(const Array& a) {
    if (a.ndim() != 1) throw InvalidArgument("expected a one-dimensional array");
    return {a.data(), a.data() + a.size()};
}

// Python-side exception classes, created once at import and kept alive by the module.
struct PyErrors {
    PyObject* error;
    PyObject* invalid_argument;
    PyObject* series_too_short;
    PyObject* degenerate_data;
    PyObject* singular_system;
    PyObject* file_error;
    PyObject* csv_error;
};
PyErrors g_errors{};

PyObject* new_exception(py::module_& m, const char* name, PyObject* bases) {
    const std::string qualified = std::string("thermofit._core.") + name;
    PyObject* cls = PyErr_NewException(qualified.c_str(), bases, nullptr);
    if (!cls) throw py::error_already_set();
    m.add_object(name, py::reinterpret_borrow<py::object>(cls));
    return cls;
}

void register_errors(py::module_& m) {
    g_errors.error = new_exception(m, "Error", PyExc_RuntimeError);
    auto with_value_error = py::make_tuple(py::handle(g_errors.error), py::handle(PyExc_ValueError));
    g_errors.invalid_argument = new_exception(m, "InvalidArgument", with_value_error.ptr());
    g_errors.series_too_short = new_exception(m, "SeriesTooShort", with_value_error.ptr());
    g_errors.degenerate_data = new_exception(m, "DegenerateData", g_errors.error);
    g_errors.singular_system = new_exception(m, "SingularSystem", g_errors.error);
    g_errors.file_error = new_exception(m, "FileError", g_errors.error);
    g_errors.csv_error = new_exception(m, "CsvError", g_errors.error);

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const SeriesTooShort& e) {
            PyErr_SetString(g_errors.series_too_short, e.what());
        } catch (const CsvError& e) {
            PyErr_SetString(g_errors.csv_error, e.what());
        } catch (const FileError& e) {
            PyErr_SetString(g_errors.file_error, e.what());
        } catch (const DegenerateData& e) {
            PyErr_SetString(g_errors.degenerate_data, e.what());
        } catch (const SingularSystem& e) {
            PyErr_SetString(g_errors.singular_system, e.what());
        } catch (const Error& e) {
            // InvalidArgument, UnstableDiscretization
            if (e.category() == ErrorCategory::InvalidArgument) {
                PyErr_SetString(g_errors.invalid_argument, e.what());
            } else {
                PyErr_SetString(g_errors.error, e.what());
            }
        }
    });
}

py::dict report_dict(const FitReport& r) {
    py::dict d;
    d["a"] = r.fit.a;
    d["b"] = r.fit.b;
    d["c"] = r.fit.c;
    if (r.process) {
        d["K"] = r.process->gain;
        d["tau"] = r.process->tau;
        d["t_ambient"] = r.process->t_ambient;
    } else {
        d["K"] = py::none();
        d["tau"] = py::none();
        d["t_ambient"] = py::none();
    }
    d["r_squared"] = r.r_squared;
    d["r_squared_raw"] = r.r_squared_raw;
    d["start"] = py::make_tuple(r.start.a, r.start.b, r.start.c);
    d["iterations"] = r.result.iterations;
    d["accepted_iterations"] = r.result.accepted_iterations;
    d["converged"] = std::string(to_string(r.result.converged));
    d["cost"] = r.result.cost;
    d["lambda_final"] = r.result.lambda_final;
    d["target"] = to_array(r.target);
    d["fitted"] = to_array(r.fitted);
    d["warnings"] = r.warnings;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "First-order thermal process identification";
    register_errors(m);

    // model
    py::enum_<DiscretizationMethod>(m, "DiscretizationMethod")
        .value("TUSTIN", DiscretizationMethod::Tustin)
        .value("FORWARD", DiscretizationMethod::Forward)
        .value("BACKWARD", DiscretizationMethod::Backward);

    py::class_<PhysicalParams>(m, "PhysicalParams")
        .def(py::init<double, double, double, double, double, double>(), py::arg("lamp_constant"),
             py::arg("area"), py::arg("heat_transfer_coeff"), py::arg("air_density"),
             py::arg("specific_heat"), py::arg("t_ambient"))
        .def_readwrite("lamp_constant", &PhysicalParams::lamp_constant)
        .def_readwrite("area", &PhysicalParams::area)
        .def_readwrite("heat_transfer_coeff", &PhysicalParams::heat_transfer_coeff)
        .def_readwrite("air_density", &PhysicalParams::air_density)
        .def_readwrite("specific_heat", &PhysicalParams::specific_heat)
        .def_readwrite("t_ambient", &PhysicalParams::t_ambient);

    py::class_<ProcessParams>(m, "ProcessParams")
        .def(py::init<double, double, double, double>(), py::arg("gain"), py::arg("tau"),
             py::arg("t_ambient") = 0.0, py::arg("dead_time") = 0.0)
        .def_readwrite("gain", &ProcessParams::gain)
        .def_readwrite("tau", &ProcessParams::tau)
        .def_readwrite("t_ambient", &ProcessParams::t_ambient)
        .def_readwrite("dead_time", &ProcessParams::dead_time)
        .def("__repr__", [](const ProcessParams& p) {
            return "ProcessParams(gain=" + std::to_string(p.gain) + ", tau=" +
                   std::to_string(p.tau) + ")";
        });

    py::class_<FitParams>(m, "FitParams")
        .def(py::init<double, double, double>(), py::arg("a"), py::arg("b"), py::arg("c"))
        .def_readwrite("a", &FitParams::a)
        .def_readwrite("b", &FitParams::b)
        .def_readwrite("c", &FitParams::c)
        .def("__repr__", [](const FitParams& p) {
            return "FitParams(a=" + std::to_string(p.a) + ", b=" + std::to_string(p.b) +
                   ", c=" + std::to_string(p.c) + ")";
        });

    py::class_<DiscreteModel>(m, "DiscreteModel")
        .def_readonly("num", &DiscreteModel::num)
        .def_readonly("den", &DiscreteModel::den)
        .def_readonly("sample_time", &DiscreteModel::sample_time)
        .def_readonly("delay_samples", &DiscreteModel::delay_samples)
        .def_property_readonly("pole", &DiscreteModel::pole)
        .def_property_readonly("dc_gain", &DiscreteModel::dc_gain);

    m.def("derive_process_params", &derive_process_params, py::arg("physical"),
          py::arg("dead_time") = 0.0);
    m.def("process_to_fit", &process_to_fit);
    m.def("fit_to_process", &fit_to_process);
    m.def(
        "step_response",
        [](const FitParams& f, const Array& t) {
            const auto tv = to_vector(t);
            std::vector<double> y(tv.size());
            for (std::size_t i = 0; i < tv.size(); ++i) y[i] = step_response(f, tv[i]);
            return to_array(y);
        },
        py::arg("params"), py::arg("t"));
    m.def(
        "discretize",
        [](const ProcessParams& p, const std::string& method, double ts) {
            return discretize(p, parse_method(method), ts);
        },
        py::arg("process"), py::arg("method") = "tustin", py::arg("sample_time"));
    m.def(
        "simulate_discrete",
        [](const DiscreteModel& model, const Array& u, double initial) {
            return to_array(simulate_discrete(model, to_vector(u), initial));
        },
        py::arg("model"), py::arg("input"), py::arg("initial_temp") = 0.0);
    m.def(
        "simulate_continuous",
        [](const PhysicalParams& p, const Array& u, double initial, double ts) {
            return to_array(simulate_continuous(p, to_vector(u), initial, ts));
        },
        py::arg("physical"), py::arg("input"), py::arg("initial_temp"), py::arg("sample_time"));

    // smoothing
    m.def(
        "sg_smooth",
        [](const Array& y, int order, int window) {
            const auto v = to_vector(y);
            std::vector<double> out;
            {
                py::gil_scoped_release release;
                out = sg_smooth(v, {order, window});
            }
            return to_array(out);
        },
        py::arg("y"), py::arg("order") = 3, py::arg("window") = 901);
    m.def(
        "sg_projection", [](int order, int window) { return sg_projection({order, window}); },
        py::arg("order"), py::arg("window"));

    // solver
    py::class_<LMConfig>(m, "LMConfig")
        .def(py::init<>())
        .def_readwrite("lambda0", &LMConfig::lambda0)
        .def_readwrite("lambda_up", &LMConfig::lambda_up)
        .def_readwrite("lambda_down", &LMConfig::lambda_down)
        .def_readwrite("max_iter", &LMConfig::max_iter)
        .def_readwrite("tol_grad", &LMConfig::tol_grad)
        .def_readwrite("tol_step", &LMConfig::tol_step)
        .def_readwrite("tol_cost", &LMConfig::tol_cost);

    py::class_<FitResult>(m, "FitResult")
        .def_property_readonly("params", [](const FitResult& r) { return to_array(r.params); })
        .def_readonly("cost", &FitResult::cost)
        .def_readonly("iterations", &FitResult::iterations)
        .def_readonly("accepted_iterations", &FitResult::accepted_iterations)
        .def_property_readonly("converged",
                               [](const FitResult& r) { return std::string(to_string(r.converged)); })
        .def_property_readonly("residuals", [](const FitResult& r) { return to_array(r.residuals); })
        .def_readonly("lambda_final", &FitResult::lambda_final)
        .def_property_readonly("cost_history",
                               [](const FitResult& r) { return to_array(r.cost_history); });

    // Generic least squares with Python callables evaluated one sample at a time:
    // predict(t, p) -> float and jacobian(t, p) -> sequence of len(p).
    m.def(
        "lm_fit",
        [](const std::function<double(double, std::vector<double>)>& predict,
           const std::function<std::vector<double>(double, std::vector<double>)>& jacobian,
           const Array& t, const Array& y, const Array& p0, std::optional<Array> sigma,
           std::optional<LMConfig> config) {
            const auto p0v = to_vector(p0);
            const std::size_t n = p0v.size();
            const FunctionModel model(
                n,
                [&](double ti, std::span<const double> p) {
                    return predict(ti, std::vector<double>(p.begin(), p.end()));
                },
                [&](double ti, std::span<const double> p, std::span<double> row) {
                    const auto r = jacobian(ti, std::vector<double>(p.begin(), p.end()));
                    if (r.size() != n) throw InvalidArgument("jacobian returned the wrong length");
                    std::copy(r.begin(), r.end(), row.begin());
                });
            const auto tv = to_vector(t), yv = to_vector(y);
            const Weights w = sigma ? Weights::from_sigma(to_vector(*sigma)) : Weights::unit();
            return lm_fit(model, {tv, yv}, w, p0v, config.value_or(LMConfig{}));
        },
        py::arg("predict"), py::arg("jacobian"), py::arg("t"), py::arg("y"), py::arg("p0"),
        py::arg("sigma") = py::none(), py::arg("config") = py::none());

    m.def(
        "step_response_jacobian",
        [](double t, const FitParams& p) {
            const auto j = step_response_jacobian(t, p);
            return py::make_tuple(j[0], j[1], j[2]);
        },
        py::arg("t"), py::arg("params"));
    m.def(
        "validate_step_jacobian",
        [](const Array& t, const FitParams& p) {
            const StepResponseModel model;
            const auto tv = to_vector(t);
            const std::vector<double> pv{p.a, p.b, p.c};
            return validate_jacobian(model, tv, pv).max_deviation;
        },
        py::arg("t"), py::arg("params"));

    // pipeline
    m.def(
        "fit_series",
        [](const Array& t, const Array& y, std::optional<std::pair<int, int>> smoothing,
           std::optional<LMConfig> config, std::optional<double> sigma) {
            auto ts = TimeSeries::from_samples(to_vector(t), to_vector(y));
            FitOptions o;
            if (smoothing) {
                o.smoothing = SGConfig{smoothing->first, smoothing->second};
            } else {
                o.smoothing.reset();
            }
            if (config) o.solver = *config;
            if (sigma) o.weights = Weights::uniform_sigma(*sigma, ts.size());
            FitReport report;
            {
                py::gil_scoped_release release;
                report = fit_series(ts, o);
            }
            return report_dict(report);
        },
        py::arg("t"), py::arg("y"), py::arg("smoothing") = std::make_pair(3, 901),
        py::arg("config") = py::none(), py::arg("sigma") = py::none(),
        "Fit the step response to a uniformly sampled record. Pass smoothing=None to fit raw data.");

    // data
    m.def(
        "generate",
        [](const FitParams& truth, double rate, double duration, double noise_sigma,
           std::uint64_t seed) {
            SynthSpec spec;
            spec.truth = truth;
            spec.rate = rate;
            spec.duration = duration;
            spec.noise_sigma = noise_sigma;
            spec.seed = seed;
            const auto ts = generate(spec);
            return py::make_tuple(to_array(ts.t()), to_array(ts.y()));
        },
        py::arg("truth"), py::arg("rate") = 100.0, py::arg("duration") = 300.0,
        py::arg("noise_sigma") = 0.5, py::arg("seed") = 42);
    m.def(
        "read_csv",
        [](const std::filesystem::path& path) {
            const auto ts = parse_csv(path);
            return py::make_tuple(to_array(ts.t()), to_array(ts.y()), ts.rate());
        },
        py::arg("path"));
    m.def(
        "write_csv",
        [](const std::filesystem::path& path, const Array& t, const Array& y) {
            write_csv(path, TimeSeries::from_samples(to_vector(t), to_vector(y)));
        },
        py::arg("path"), py::arg("t"), py::arg("y"));
}
