#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tanhfx/analysis.hpp"
#include "tanhfx/costmodel.hpp"
#include "tanhfx/lut_io.hpp"
#include "tanhfx/reference.hpp"

namespace py = pybind11;
using namespace tanhfx;

namespace {

py::object param_to_py(const Param& p) {
    if (const auto* s = std::get_if<Step>(&p)) return py::str(s->to_string());
    return py::int_(std::get<int>(p));
}

Param param_from_py(const KernelSpec& spec, const py::object& o) {
    if (spec.method == Method::Lambert) return o.cast<int>();
    return Step::parse(o.cast<std::string>());
}

py::dict report_dict(const ErrorReport& r) {
    py::dict d;
    d["max_abs_err"] = r.max_abs_err;
    d["argmax_input"] = r.argmax_input;
    d["mse"] = r.mse;
    d["rmse"] = r.rmse;
    d["n_points"] = r.n_points;
    d["clamp_region_included"] = r.clamp_region_included;
    return d;
}

SweepOptions sweep_options(std::optional<double> range, bool include_clamp_region, unsigned workers) {
    SweepOptions o;
    o.range = range;
    o.include_clamp_region = include_clamp_region;
    o.workers = workers;
    return o;
}

KernelSpec make_spec(const std::string& method, std::optional<std::string> step, int terms, int depth,
                     const std::string& centering, const std::string& derivs, bool grouped, int nr_iters,
                     const std::string& in_fmt, const std::string& out_fmt, double limit) {
    KernelSpec s;
    s.method = parse_method(method);
    if (step) {
        s.step = Step::parse(*step);
    } else if (s.method == Method::Velocity) {
        s.step = Step(7);
    }
    s.terms = terms;
    s.depth = depth;
    if (centering != "nearest" && centering != "truncate") throw ConfigError("centering must be nearest or truncate");
    s.centering = centering == "truncate" ? Centering::Truncate : Centering::Nearest;
    if (derivs != "runtime" && derivs != "stored") throw ConfigError("derivs must be runtime or stored");
    s.derivs = derivs == "stored" ? DerivativeSource::Stored : DerivativeSource::Runtime;
    s.grouped = grouped;
    s.nr_iters = nr_iters;
    s.in_fmt = QFormat::parse(in_fmt);
    s.out_fmt = QFormat::parse(out_fmt);
    s.limit = limit;
    return s;
}

/// A built kernel together with the spec it came from.
struct PyKernel {
    KernelSpec spec;
    Kernel kernel;

    explicit PyKernel(const KernelSpec& s) : spec(s), kernel(make_kernel(s)) {}
    PyKernel(KernelSpec s, Kernel k) : spec(std::move(s)), kernel(std::move(k)) {}

    double eval(double x) const {
        return dequantize(evaluate(kernel, quantize(x, spec.in_fmt).value));
    }
    std::int64_t eval_raw(std::int64_t raw) const { return evaluate(kernel, from_raw(raw, spec.in_fmt)).raw; }
};

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fixed-point tanh approximation kernels";

    static py::exception<CalibrationError> calib_exc(m, "CalibrationError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const CalibrationError& e) {
            py::set_error(calib_exc, e.what());
        }
    });

    py::class_<QFormat>(m, "QFormat")
        .def(py::init<int, int>(), py::arg("int_bits"), py::arg("frac_bits"))
        .def_static("parse", &QFormat::parse)
        .def_property_readonly("int_bits", &QFormat::int_bits)
        .def_property_readonly("frac_bits", &QFormat::frac_bits)
        .def_property_readonly("total_bits", &QFormat::total_bits)
        .def_property_readonly("min_raw", &QFormat::min_raw)
        .def_property_readonly("max_raw", &QFormat::max_raw)
        .def_property_readonly("ulp", &QFormat::ulp)
        .def("__str__", &QFormat::to_string)
        .def("__repr__", [](const QFormat& f) { return "QFormat('" + f.to_string() + "')"; })
        .def(py::self == py::self);

    m.def(
        "quantize",
        [](double x, const std::string& fmt) {
            const FxResult r = quantize(x, QFormat::parse(fmt));
            return py::make_tuple(r.value.raw, r.saturated);
        },
        py::arg("x"), py::arg("fmt"), "Round to nearest (ties away) and saturate; returns (raw, saturated).");
    m.def(
        "dequantize", [](std::int64_t raw, const std::string& fmt) { return dequantize(from_raw(raw, QFormat::parse(fmt))); },
        py::arg("raw"), py::arg("fmt"));

    m.def("tanh_ref", &tanh_ref);
    m.def("domain_bound", &domain_bound, py::arg("frac_bits"));
    m.def("velocity_factor", &velocity_factor);
    m.def("reciprocal_nr", &reciprocal_nr, py::arg("d"), py::arg("iters") = 3);
    m.def("lambert_value", &lambert_value, py::arg("x"), py::arg("depth"));

    py::class_<KernelSpec>(m, "KernelSpec")
        .def(py::init(&make_spec), py::arg("method"), py::arg("step") = py::none(), py::arg("terms") = 3,
             py::arg("depth") = 7, py::arg("centering") = "nearest", py::arg("derivs") = "runtime",
             py::arg("grouped") = false, py::arg("nr_iters") = 3, py::arg("in_fmt") = "S3.12",
             py::arg("out_fmt") = "S.15", py::arg("limit") = 6.0)
        .def_property_readonly("method", [](const KernelSpec& s) { return std::string(method_name(s.method)); })
        .def_property_readonly("param", [](const KernelSpec& s) { return param_to_py(s.param()); })
        .def_property_readonly("in_fmt", [](const KernelSpec& s) { return s.in_fmt; })
        .def_property_readonly("out_fmt", [](const KernelSpec& s) { return s.out_fmt; })
        .def_readonly("limit", &KernelSpec::limit)
        .def("label", &KernelSpec::label)
        .def("__repr__", [](const KernelSpec& s) {
            return "KernelSpec(" + s.label() + " " + param_to_string(s.param()) + ", " + s.in_fmt.to_string() +
                   " -> " + s.out_fmt.to_string() + ")";
        });

    py::class_<PyKernel>(m, "Kernel")
        .def(py::init<const KernelSpec&>(), py::arg("spec"))
        .def_readonly("spec", &PyKernel::spec)
        .def("__call__", &PyKernel::eval, py::arg("x"), "Quantize x, evaluate, and return the real output.")
        .def("eval_raw", &PyKernel::eval_raw, py::arg("raw"))
        .def(
            "eval_array",
            [](const PyKernel& k, py::array_t<double, py::array::c_style | py::array::forcecast> xs) {
                py::array_t<double> out(xs.request().shape);
                auto in = xs.unchecked();
                auto* dst = out.mutable_data();
                const double* src = xs.data();
                for (py::ssize_t i = 0; i < in.size(); ++i) dst[i] = k.eval(src[i]);
                return out;
            },
            py::arg("xs"))
        .def(
            "sweep",
            [](const PyKernel& k, std::optional<double> range, bool include_clamp_region, unsigned workers) {
                ErrorReport r;
                {
                    py::gil_scoped_release release;
                    r = sweep_error(k.kernel, sweep_options(range, include_clamp_region, workers));
                }
                return report_dict(r);
            },
            py::arg("range") = py::none(), py::arg("include_clamp_region") = true, py::arg("workers") = 0)
        .def("export_hex", [](const PyKernel& k) { return write_hex(export_lut(k.kernel)); })
        .def("export_cheader",
             [](const PyKernel& k, const std::string& symbol) { return write_cheader(export_lut(k.kernel), symbol); },
             py::arg("symbol") = "tanh_lut")
        .def_static(
            "from_hex",
            [](const std::string& text) {
                const LutArtifact art = read_hex(text);
                Kernel k = kernel_from_artifact(art);
                KernelSpec s;
                s.method = kernel_method(k);
                const KernelIo& io = kernel_io(k);
                s.in_fmt = io.in_fmt;
                s.out_fmt = io.out_fmt;
                s.limit = io.dom.limit;
                auto field = [&](const char* key) { return art.meta.count(key) ? art.meta.at(key) : std::string(); };
                if (auto st = field("step"); !st.empty()) s.step = Step::parse(st);
                if (auto th = field("threshold"); !th.empty()) s.step = Step::parse(th);
                if (auto t = field("terms"); !t.empty()) s.terms = std::stoi(t);
                s.grouped = field("grouped") == "true";
                s.centering = field("centering") == "truncate" ? Centering::Truncate : Centering::Nearest;
                s.derivs = field("derivs") == "stored" ? DerivativeSource::Stored : DerivativeSource::Runtime;
                return PyKernel(std::move(s), std::move(k));
            },
            py::arg("text"));

    m.def(
        "sweep_parameter",
        [](const KernelSpec& base, const std::vector<py::object>& params) {
            std::vector<Param> ps;
            for (const auto& p : params) ps.push_back(param_from_py(base, p));
            std::vector<SweepPoint> pts;
            {
                py::gil_scoped_release release;
                pts = sweep_parameter(base, ps);
            }
            py::list out;
            for (const auto& pt : pts) {
                py::dict d = report_dict(pt.report);
                d["param"] = param_to_py(pt.param);
                out.append(d);
            }
            return out;
        },
        py::arg("base"), py::arg("params"));

    m.def("table1", []() {
        std::vector<Table1Row> rows;
        {
            py::gil_scoped_release release;
            rows = reproduce_table1();
        }
        py::list out;
        for (const auto& r : rows) {
            py::dict d = report_dict(r.measured);
            d["id"] = r.id;
            d["config"] = r.spec.label() + " " + param_to_string(r.spec.param());
            d["published_max"] = r.published_max;
            d["published_mse_column"] = r.published_mse_column;
            d["max_within"] = r.max_within;
            d["rmse_within"] = r.rmse_within;
            d["mse_within"] = r.mse_within;
            d["note"] = r.note;
            out.append(d);
        }
        return out;
    });

    m.def(
        "calibrate",
        [](const KernelSpec& base, double target) {
            CalibrationResult c;
            {
                py::gil_scoped_release release;
                c = calibrate(base, target);
            }
            py::dict d;
            d["param"] = param_to_py(c.param);
            d["achieved_max_err"] = c.achieved_max_err;
            d["target"] = c.target;
            d["coarser_max_err"] = c.coarser_max_err ? py::cast(*c.coarser_max_err) : py::none();
            return d;
        },
        py::arg("base"), py::arg("target"));

    m.def(
        "cost",
        [](const KernelSpec& spec, bool stored_tvector) {
            CostOptions opts;
            opts.cr_tvector = stored_tvector ? TVectorSource::Stored : TVectorSource::Computed;
            const CostReport r = cost_of(spec, opts);
            py::dict d;
            d["adders"] = r.adders;
            d["multipliers"] = r.multipliers;
            d["squarers"] = r.squarers;
            d["dividers"] = r.dividers;
            d["lut_entries"] = r.lut_entries;
            d["lut_banks"] = r.lut_banks;
            d["pipeline_stages"] = r.pipeline_stages;
            d["notes"] = r.notes;
            py::dict blocks;
            for (const auto& b : r.blocks) {
                blocks[py::str(b.name)] = py::dict(py::arg("adders") = b.adders, py::arg("multipliers") = b.multipliers,
                                                   py::arg("squarers") = b.squarers, py::arg("dividers") = b.dividers,
                                                   py::arg("lut_entries") = b.lut_entries);
            }
            d["blocks"] = blocks;
            return d;
        },
        py::arg("spec"), py::arg("stored_tvector") = false);
}
