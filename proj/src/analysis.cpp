#include "tanhfx/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace tanhfx {

namespace {

constexpr std::int64_t kChunkCodes = 4096;

struct ChunkStats {
    double max_err = -1.0;
    std::int64_t argmax_raw = 0;
    long double sum_sq = 0.0L;
    std::size_t count = 0;
};

unsigned resolve_workers(unsigned requested, std::size_t chunks) {
    unsigned w = requested != 0 ? requested : std::max(1U, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(chunks, 1)));
}

/// Step parameters order by shift, depths by value; both refine upward.
int param_rank(const Param& p) {
    return std::holds_alternative<Step>(p) ? std::get<Step>(p).shift() : std::get<int>(p);
}

KernelSpec table_spec(Method m, QFormat in, QFormat out, double limit) {
    KernelSpec s;
    s.method = m;
    s.in_fmt = in;
    s.out_fmt = out;
    s.limit = limit;
    return s;
}

template <class Body>
void sweep_chunks(std::atomic<std::size_t>& next, std::size_t n_chunks, Body&& body) {
    for (std::size_t c = next++; c < n_chunks; c = next++) {
        body(c);
    }
}

}  // namespace

ErrorReport sweep_error(const Evaluator& f, QFormat in_fmt, const DomainSpec& dom, const SweepOptions& opts) {
    const double range = opts.range.value_or(dom.limit);
    if (!(range >= 0.0)) {
        throw ConfigError("sweep range must be nonnegative");
    }
    const double scaled = std::floor(std::ldexp(range, in_fmt.frac_bits()));
    const std::int64_t hi = std::min<std::int64_t>(static_cast<std::int64_t>(scaled), in_fmt.max_raw());
    const std::int64_t lo = std::max<std::int64_t>(-static_cast<std::int64_t>(scaled), in_fmt.min_raw());
    const std::int64_t total = hi - lo + 1;
    const auto n_chunks = static_cast<std::size_t>((total + kChunkCodes - 1) / kChunkCodes);

    std::vector<ChunkStats> stats(n_chunks);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        try {
            sweep_chunks(next, n_chunks, [&](std::size_t c) {
            ChunkStats s;
            const std::int64_t begin = lo + static_cast<std::int64_t>(c) * kChunkCodes;
            const std::int64_t end = std::min(hi + 1, begin + kChunkCodes);
            for (std::int64_t raw = begin; raw < end; ++raw) {
                const FxValue x{raw, in_fmt};
                const double xv = dequantize(x);
                if (!opts.include_clamp_region && xv != 0.0 && std::fabs(xv) >= dom.limit) {
                    continue;
                }
                const double err = std::fabs(dequantize(f(x)) - ideal_output(xv, dom));
                if (err > s.max_err) {
                    s.max_err = err;
                    s.argmax_raw = raw;
                }
                s.sum_sq += static_cast<long double>(err) * err;
                ++s.count;
            }
            stats[c] = s;
            });
        } catch (...) {
            const std::lock_guard lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            next = n_chunks;
        }
    };
    const unsigned workers = resolve_workers(opts.workers, n_chunks);
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) {
            pool.emplace_back(work);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    ErrorReport r;
    r.clamp_region_included = opts.include_clamp_region;
    double best = -1.0;
    std::int64_t best_raw = 0;
    long double sum_sq = 0.0L;
    for (const auto& s : stats) {
        if (s.max_err > best) {
            best = s.max_err;
            best_raw = s.argmax_raw;
        }
        sum_sq += s.sum_sq;
        r.n_points += s.count;
    }
    if (r.n_points == 0) {
        return r;
    }
    r.max_abs_err = best;
    r.argmax_input = dequantize(FxValue{best_raw, in_fmt});
    r.mse = static_cast<double>(sum_sq / static_cast<long double>(r.n_points));
    r.rmse = std::sqrt(r.mse);
    return r;
}

ErrorReport sweep_error(const Kernel& kernel, const SweepOptions& opts) {
    const KernelIo& io = kernel_io(kernel);
    return sweep_error([&](const FxValue& x) { return evaluate(kernel, x); }, io.in_fmt, io.dom, opts);
}

std::vector<SweepPoint> sweep_parameter(const KernelSpec& base, const std::vector<Param>& params,
                                        const SweepOptions& opts) {
    if (params.size() < 2) {
        throw ConfigError("a parameter sweep needs at least two parameters");
    }
    const int direction = param_rank(params[1]) - param_rank(params[0]);
    for (std::size_t i = 1; i < params.size(); ++i) {
        if (params[i].index() != params[0].index()) {
            throw ConfigError("sweep parameters mix steps and depths");
        }
        const int d = param_rank(params[i]) - param_rank(params[i - 1]);
        if (d == 0 || (d > 0) != (direction > 0)) {
            throw ConfigError("sweep parameters must be strictly ordered; offending entry " +
                              param_to_string(params[i]));
        }
    }
    std::vector<SweepPoint> out;
    out.reserve(params.size());
    for (const auto& p : params) {
        Kernel k = [&] {
            try {
                return make_kernel(base.with_param(p));
            } catch (const std::exception& e) {
                throw ConfigError("parameter " + param_to_string(p) + ": " + e.what());
            }
        }();
        out.push_back(SweepPoint{p, sweep_error(k, opts)});
    }
    return out;
}

bool within_relative(double measured, double published, double tolerance) {
    return std::fabs(measured - published) <= tolerance * std::fabs(published);
}

std::vector<Table1Row> table1_rows() {
    const QFormat in(3, 12);
    const QFormat out(0, 15);
    auto spec = [&](Method m) { return table_spec(m, in, out, 6.0); };

    auto row = [](std::string id, KernelSpec s, double published_max, double published_mse_column) {
        Table1Row r;
        r.id = std::move(id);
        r.spec = std::move(s);
        r.published_max = published_max;
        r.published_mse_column = published_mse_column;
        return r;
    };

    std::vector<Table1Row> rows;
    {
        Table1Row r = row("A", spec(Method::Pwl), 4.65e-5, 1.24e-5);
        r.spec.step = Step(6);
        r.note = "two banks of 384 entries each correspond to step 1/128, not the listed 1/64";
        rows.push_back(r);
    }
    {
        Table1Row r = row("B1", spec(Method::Taylor), 3.65e-5, 1.16e-5);
        r.spec.step = Step(4);
        r.spec.terms = 3;
        rows.push_back(r);
    }
    {
        Table1Row r = row("B2", spec(Method::Taylor), 3.23e-5, 1.17e-5);
        r.spec.step = Step(3);
        r.spec.terms = 4;
        rows.push_back(r);
    }
    {
        Table1Row r = row("C", spec(Method::CatmullRom), 3.63e-5, 1.13e-5);
        r.spec.step = Step(4);
        rows.push_back(r);
    }
    {
        Table1Row r = row("D", spec(Method::Velocity), 3.85e-5, 9.53e-6);
        r.spec.step = Step(7);
        rows.push_back(r);
    }
    {
        Table1Row r = row("E", spec(Method::Lambert), 4.87e-5, 1.50e-5);
        r.spec.depth = 7;
        rows.push_back(r);
    }
    return rows;
}

std::vector<Table1Row> reproduce_table1(const SweepOptions& opts) {
    auto rows = table1_rows();
    for (auto& r : rows) {
        r.measured = sweep_error(make_kernel(r.spec), opts);
        r.max_within = within_relative(r.measured.max_abs_err, r.published_max, kTable1Tolerance);
        r.rmse_within = within_relative(r.measured.rmse, r.published_mse_column, kTable1Tolerance);
        r.mse_within = within_relative(r.measured.mse, r.published_mse_column, kTable1Tolerance);
    }
    return rows;
}

std::vector<Param> param_ladder(const KernelSpec& base) {
    std::vector<Param> ladder;
    if (base.method == Method::Lambert) {
        for (int k = 1; k <= LambertConfig::kMaxDepth; ++k) {
            ladder.emplace_back(k);
        }
        return ladder;
    }
    for (int s = 2; s <= 10 && s <= base.in_fmt.frac_bits(); ++s) {
        ladder.emplace_back(Step(s));
    }
    return ladder;
}

int ladder_distance(const Param& a, const Param& b) {
    if (a.index() != b.index()) {
        throw ConfigError("cannot compare a step with a depth");
    }
    return std::abs(param_rank(a) - param_rank(b));
}

CalibrationResult calibrate(const KernelSpec& base, double target, const SweepOptions& opts) {
    if (!(target > 0.0)) {
        throw ConfigError("calibration target must be positive");
    }
    std::optional<Param> best_param;
    double best_err = std::numeric_limits<double>::infinity();
    std::optional<double> previous_err;
    for (const auto& p : param_ladder(base)) {
        const KernelSpec spec = base.with_param(p);
        std::optional<Kernel> kernel;
        try {
            kernel = make_kernel(spec);
        } catch (const ConfigError&) {
            previous_err.reset();
            continue;  // e.g. an odd bit count for a grouped velocity table
        }
        const double err = sweep_error(*kernel, opts).max_abs_err;
        if (err <= target) {
            return CalibrationResult{spec, p, err, target, previous_err};
        }
        if (err < best_err) {
            best_err = err;
            best_param = p;
        }
        previous_err = err;
    }
    if (!best_param) {
        throw CalibrationError("no ladder entry of " + base.label() + " could be built", Param{0}, best_err);
    }
    throw CalibrationError("no ladder entry of " + base.label() + " reaches max error " + format_real(target) +
                               "; best " + format_real(best_err) + " at " + param_to_string(*best_param),
                           *best_param, best_err);
}

std::vector<Table3Cell> table3_cells() {
    struct Row {
        QFormat in;
        QFormat out;
        double limit;
        int a, b1, b2, c, d;  // step shifts
        int e;
    };
    const Row rows[] = {
        {QFormat(2, 13), QFormat(2, 13), 4.0, 7, 5, 4, 4, 7, 6},
        {QFormat(2, 13), QFormat(0, 15), 4.0, 7, 5, 4, 6, 8, 6},
        {QFormat(3, 12), QFormat(0, 15), 6.0, 7, 5, 4, 6, 8, 8},
        {QFormat(2, 5), QFormat(0, 7), 4.0, 3, 5, 5, 3, 3, 4},
    };
    std::vector<Table3Cell> cells;
    for (const auto& r : rows) {
        const std::string name =
            r.in.to_string() + " -> " + r.out.to_string() + ", +-" + format_real(r.limit);
        auto base = [&](Method m) { return table_spec(m, r.in, r.out, r.limit); };
        KernelSpec b1 = base(Method::Taylor);
        b1.terms = 3;
        KernelSpec b2 = base(Method::Taylor);
        b2.terms = 4;
        cells.push_back({name, "A", base(Method::Pwl), Step(r.a)});
        cells.push_back({name, "B1", b1, Step(r.b1)});
        cells.push_back({name, "B2", b2, Step(r.b2)});
        cells.push_back({name, "C", base(Method::CatmullRom), Step(r.c)});
        cells.push_back({name, "D", base(Method::Velocity), Step(r.d)});
        cells.push_back({name, "E", base(Method::Lambert), r.e});
    }
    return cells;
}

std::vector<Table3Outcome> reproduce_table3(const SweepOptions& opts) {
    std::vector<Table3Outcome> out;
    for (const auto& cell : table3_cells()) {
        Table3Outcome o;
        o.cell = cell;
        o.published_max_err = sweep_error(make_kernel(cell.base.with_param(cell.published)), opts).max_abs_err;
        o.distance = std::numeric_limits<int>::max();
        const double targets[] = {cell.base.in_fmt.ulp(), cell.base.out_fmt.ulp()};
        for (int i = 0; i < 2; ++i) {
            std::optional<CalibrationResult> res;
            try {
                res = calibrate(cell.base, targets[i], opts);
            } catch (const CalibrationError&) {
            }
            if (res) {
                o.distance = std::min(o.distance, ladder_distance(res->param, cell.published));
            }
            (i == 0 ? o.input_ulp : o.output_ulp) = res;
        }
        o.exact = o.distance == 0;
        out.push_back(std::move(o));
    }
    return out;
}

std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) {
        return "nan";
    }
    return std::string(buf, ptr);
}

std::string sweep_csv_header() { return "method,param,in_fmt,out_fmt,range,max_abs_err,argmax_input,mse,rmse,n_points"; }

std::string sweep_csv_row(const KernelSpec& spec, const Param& param, const ErrorReport& r) {
    std::string s = spec.label();
    s += ',' + param_to_string(param);
    s += ',' + spec.in_fmt.to_string();
    s += ',' + spec.out_fmt.to_string();
    s += ',' + format_real(spec.limit);
    s += ',' + format_real(r.max_abs_err);
    s += ',' + format_real(r.argmax_input);
    s += ',' + format_real(r.mse);
    s += ',' + format_real(r.rmse);
    s += ',' + std::to_string(r.n_points);
    return s;
}

}  // namespace tanhfx
