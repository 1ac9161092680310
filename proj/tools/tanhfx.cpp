// tanhfx command-line front end.
//
// Exit status: 0 success, 1 usage or configuration error,
// 2 calibration failure or a reproduction outside tolerance.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tanhfx/analysis.hpp"
#include "tanhfx/costmodel.hpp"
#include "tanhfx/lut_io.hpp"
#include "tanhfx/reference.hpp"

using namespace tanhfx;

namespace {

constexpr int kUsageError = 1;
constexpr int kCheckFailed = 2;

struct KernelFlags {
    std::string method = "pwl";
    std::optional<std::string> step;
    std::optional<std::string> threshold;
    int terms = 3;
    int depth = 7;
    std::string centering = "nearest";
    std::string derivs = "runtime";
    bool grouped = false;
    int nr_iters = 3;
    std::string in_fmt = "S3.12";
    std::string out_fmt = "S.15";
    double range = 6.0;

    void attach(CLI::App* cmd, bool with_param = true) {
        cmd->add_option("-m,--method", method, "pwl | taylor | catmull-rom | velocity | lambert")->required();
        if (with_param) {
            cmd->add_option("--step", step, "LUT step as 1/64 or 2^-6");
            cmd->add_option("--threshold", threshold, "velocity-factor threshold as 1/128 or 2^-7");
            cmd->add_option("-K,--depth", depth, "continued-fraction depth")->capture_default_str();
        }
        cmd->add_option("--terms", terms, "Taylor terms (3 = quadratic, 4 = cubic)")->capture_default_str();
        cmd->add_option("--centering", centering, "Taylor expansion point")
            ->check(CLI::IsMember({"nearest", "truncate"}))
            ->capture_default_str();
        cmd->add_option("--derivs", derivs, "Taylor coefficients")
            ->check(CLI::IsMember({"runtime", "stored"}))
            ->capture_default_str();
        cmd->add_flag("--grouped", grouped, "pair velocity-factor bits into 4-entry lookups");
        cmd->add_option("--nr-iters", nr_iters, "Newton-Raphson reciprocal iterations")->capture_default_str();
        cmd->add_option("--in-fmt", in_fmt, "input Q format")->capture_default_str();
        cmd->add_option("--out-fmt", out_fmt, "output Q format")->capture_default_str();
        cmd->add_option("--range", range, "input magnitude at which the output clamps")->capture_default_str();
    }

    KernelSpec spec() const {
        KernelSpec s;
        s.method = parse_method(method);
        if (step && threshold) {
            throw ConfigError("give either --step or --threshold, not both");
        }
        if (step) {
            s.step = Step::parse(*step);
        } else if (threshold) {
            s.step = Step::parse(*threshold);
        } else if (s.method == Method::Velocity) {
            s.step = Step(7);
        }
        s.terms = terms;
        s.depth = depth;
        s.centering = centering == "truncate" ? Centering::Truncate : Centering::Nearest;
        s.derivs = derivs == "stored" ? DerivativeSource::Stored : DerivativeSource::Runtime;
        s.grouped = grouped;
        s.nr_iters = nr_iters;
        s.in_fmt = QFormat::parse(in_fmt);
        s.out_fmt = QFormat::parse(out_fmt);
        s.limit = range;
        return s;
    }
};

/// Writes to `path`, or stdout when empty or "-".
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw ConfigError("cannot open '" + path + "' for writing");
    }
    f << text;
}

Param parse_param(const KernelSpec& base, const std::string& text) {
    if (base.method == Method::Lambert) {
        std::size_t used = 0;
        int k = std::stoi(text, &used);
        if (used != text.size()) {
            throw ConfigError("bad depth '" + text + "'");
        }
        return k;
    }
    return Step::parse(text);
}

std::vector<Param> split_params(const KernelSpec& base, const std::string& list) {
    std::vector<Param> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(parse_param(base, item));
        }
    }
    return out;
}

int run_eval(const KernelFlags& flags, const std::vector<std::string>& xs) {
    const KernelSpec spec = flags.spec();
    const Kernel k = make_kernel(spec);
    std::cout << "x,x_code,out_code,out,ref,err\n";
    for (const auto& text : xs) {
        std::size_t used = 0;
        const double xv = std::stod(text, &used);
        if (used != text.size()) {
            throw ConfigError("bad input value '" + text + "'");
        }
        const FxResult q = quantize(xv, spec.in_fmt);
        const FxValue y = evaluate(k, q.value);
        const double xq = dequantize(q.value);
        const double ref = ideal_output(xq, spec.io().dom);
        const double out = dequantize(y);
        std::cout << format_real(xq) << ',' << q.value.raw << ',' << y.raw << ',' << format_real(out) << ','
                  << format_real(ref) << ',' << format_real(std::fabs(out - ref)) << '\n';
        if (q.saturated) {
            std::cerr << "note: " << text << " saturated to " << format_real(xq) << '\n';
        }
    }
    return 0;
}

int run_sweep(const KernelFlags& flags, const std::string& params, const SweepOptions& opts, const std::string& out) {
    const KernelSpec base = flags.spec();
    std::string csv = sweep_csv_header() + '\n';
    if (params.empty()) {
        csv += sweep_csv_row(base, base.param(), sweep_error(make_kernel(base), opts)) + '\n';
    } else {
        for (const auto& pt : sweep_parameter(base, split_params(base, params), opts)) {
            csv += sweep_csv_row(base.with_param(pt.param), pt.param, pt.report) + '\n';
        }
    }
    emit(out, csv);
    return 0;
}

int run_table1(const SweepOptions& opts, const std::string& out) {
    std::string csv =
        "row,config,published_max,measured_max,max_within_25pct,published_mse_column,measured_rmse,"
        "rmse_within_25pct,measured_mse,mse_within_25pct,note\n";
    bool ok = true;
    for (const auto& r : reproduce_table1(opts)) {
        csv += r.id + ',' + r.spec.label() + ' ' + param_to_string(r.spec.param()) + ',' +
               format_real(r.published_max) + ',' + format_real(r.measured.max_abs_err) + ',' +
               (r.max_within ? "yes" : "no") + ',' + format_real(r.published_mse_column) + ',' +
               format_real(r.measured.rmse) + ',' + (r.rmse_within ? "yes" : "no") + ',' +
               format_real(r.measured.mse) + ',' + (r.mse_within ? "yes" : "no") + ",\"" + r.note + "\"\n";
        ok = ok && r.max_within && r.rmse_within;
    }
    emit(out, csv);
    std::cerr << "the published MSE column is compared with both measured MSE and RMSE; it tracks RMSE\n";
    return ok ? 0 : kCheckFailed;
}

std::string calibration_header() { return "method,param,in_fmt,out_fmt,range,target,achieved_max_err,coarser_max_err"; }

std::string calibration_row(const CalibrationResult& c) {
    return c.spec.label() + ',' + param_to_string(c.param) + ',' + c.spec.in_fmt.to_string() + ',' +
           c.spec.out_fmt.to_string() + ',' + format_real(c.spec.limit) + ',' + format_real(c.target) + ',' +
           format_real(c.achieved_max_err) + ',' + (c.coarser_max_err ? format_real(*c.coarser_max_err) : "");
}

double parse_target(const std::string& text, const KernelSpec& spec) {
    if (text == "in-ulp") return spec.in_fmt.ulp();
    if (text == "out-ulp") return spec.out_fmt.ulp();
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) {
        throw ConfigError("bad target '" + text + "'");
    }
    return v;
}

int run_calibrate(const KernelFlags& flags, const std::string& target, const SweepOptions& opts,
                  const std::string& out) {
    const KernelSpec base = flags.spec();
    try {
        const auto c = calibrate(base, parse_target(target, base), opts);
        emit(out, calibration_header() + '\n' + calibration_row(c) + '\n');
        return 0;
    } catch (const CalibrationError& e) {
        std::cerr << "calibration failed: " << e.what() << '\n';
        return kCheckFailed;
    }
}

int run_table3(const SweepOptions& opts, const std::string& out) {
    std::string csv =
        "row,column,published,published_max_err,in_ulp_param,in_ulp_err,out_ulp_param,out_ulp_err,distance\n";
    bool ok = true;
    for (const auto& o : reproduce_table3(opts)) {
        auto cell = [](const std::optional<CalibrationResult>& c) {
            return c ? param_to_string(c->param) + ',' + format_real(c->achieved_max_err) : std::string("none,");
        };
        csv += '"' + o.cell.row + "\"," + o.cell.column + ',' + param_to_string(o.cell.published) + ',' +
               format_real(o.published_max_err) + ',' + cell(o.input_ulp) + ',' + cell(o.output_ulp) + ',' +
               (o.input_ulp || o.output_ulp ? std::to_string(o.distance) : "none") + '\n';
        ok = ok && o.distance <= 1;
    }
    emit(out, csv);
    return ok ? 0 : kCheckFailed;
}

int run_cost(const KernelFlags& flags, bool stored_tvector, bool breakdown, const std::string& out) {
    const KernelSpec spec = flags.spec();
    CostOptions opts;
    opts.cr_tvector = stored_tvector ? TVectorSource::Stored : TVectorSource::Computed;
    const CostReport r = cost_of(spec, opts);
    std::string text = cost_csv_header() + '\n' + cost_csv_row(spec, r) + '\n';
    if (breakdown) {
        text += "\nblock,adders,multipliers,squarers,dividers,lut_entries\n";
        for (const auto& b : r.blocks) {
            text += b.name + ',' + std::to_string(b.adders) + ',' + std::to_string(b.multipliers) + ',' +
                    std::to_string(b.squarers) + ',' + std::to_string(b.dividers) + ',' +
                    std::to_string(b.lut_entries) + '\n';
        }
    }
    emit(out, text);
    std::cerr << "notes: " << r.notes << '\n';
    return 0;
}

int run_gen_lut(const KernelFlags& flags, const std::string& format, const std::string& symbol,
                const std::string& out) {
    const LutArtifact art = export_lut(make_kernel(flags.spec()));
    if (format == "hex") {
        emit(out, write_hex(art));
    } else if (format == "cheader") {
        emit(out, write_cheader(art, symbol));
    } else {
        emit(out, write_lut_csv(art));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fixed-point tanh approximation kernels: evaluation, error analysis and LUT export"};
    app.require_subcommand(1);

    SweepOptions sweep_opts;
    std::string out_path;
    auto add_sweep_flags = [&](CLI::App* cmd) {
        cmd->add_option("-j,--workers", sweep_opts.workers, "sweep threads (0 = all cores)");
        cmd->add_flag("!--exclude-clamp", sweep_opts.include_clamp_region,
                      "leave the clamped region out of the statistics");
        cmd->add_option("-o,--output", out_path, "output file (default stdout)");
    };

    KernelFlags kflags;

    auto* eval = app.add_subcommand("eval", "evaluate one kernel at given inputs");
    kflags.attach(eval);
    std::vector<std::string> xs;
    eval->add_option("-x,--x", xs, "input value(s)")->required();

    auto* sweep = app.add_subcommand("sweep", "exhaustive error sweep, optionally over a parameter list");
    kflags.attach(sweep);
    std::string params;
    sweep->add_option("--params", params, "comma-separated ladder, e.g. 1/8,1/16,1/32 or 3,5,7");
    add_sweep_flags(sweep);

    auto* table1 = app.add_subcommand("table1", "measure the six reference configurations");
    add_sweep_flags(table1);

    auto* table3 = app.add_subcommand("table3", "calibrate every method on the four precision/range rows");
    add_sweep_flags(table3);

    auto* calib = app.add_subcommand("calibrate", "coarsest parameter meeting a max-error target");
    kflags.attach(calib, false);
    std::string target;
    calib->add_option("--target", target, "max error as a number, in-ulp or out-ulp")->required();
    add_sweep_flags(calib);

    auto* cost = app.add_subcommand("cost", "hardware unit counts");
    kflags.attach(cost);
    bool stored_tvector = false;
    bool breakdown = false;
    cost->add_flag("--stored-tvector", stored_tvector, "Catmull-Rom t-vector read from a table");
    cost->add_flag("--breakdown", breakdown, "also list per-block counts");
    cost->add_option("-o,--output", out_path, "output file (default stdout)");

    auto* gen = app.add_subcommand("gen-lut", "export lookup-table entries");
    kflags.attach(gen);
    std::string format = "hex";
    std::string symbol = "tanh_lut";
    gen->add_option("--format", format)->check(CLI::IsMember({"hex", "cheader", "csv"}))->capture_default_str();
    gen->add_option("--symbol", symbol, "array name for the C header")->capture_default_str();
    gen->add_option("-o,--output", out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kUsageError;
    }

    try {
        if (*eval) return run_eval(kflags, xs);
        if (*sweep) return run_sweep(kflags, params, sweep_opts, out_path);
        if (*table1) return run_table1(sweep_opts, out_path);
        if (*table3) return run_table3(sweep_opts, out_path);
        if (*calib) return run_calibrate(kflags, target, sweep_opts, out_path);
        if (*cost) return run_cost(kflags, stored_tvector, breakdown, out_path);
        if (*gen) return run_gen_lut(kflags, format, symbol, out_path);
    } catch (const std::invalid_argument& e) {  // ConfigError and std::stoi/stod failures
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    }
    return kUsageError;
}
