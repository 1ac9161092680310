// Acceptance suite: one PASS/FAIL line per criterion, details indented below.
// Exit status is the number of failed criteria.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tanhfx/analysis.hpp"
#include "tanhfx/costmodel.hpp"
#include "tanhfx/lut_io.hpp"
#include "tanhfx/reference.hpp"

using namespace tanhfx;

namespace {

// Pinned tolerances.
constexpr double kTable1Band = 0.25;  // relative, both max error and the MSE column
constexpr double kDerivTol = 1e-6;
constexpr double kFdStep = 1e-4;
constexpr double kLambertRelTol = 1e-12;
constexpr double kVfRelTol = 1e-12;
constexpr double kNrTol = 1e-12;
constexpr int kNrMaxIters = 4;
constexpr int kTable3MaxDistance = 1;
constexpr double kResidualRatioLo = 3.5;  // second order: halving r quarters the error
constexpr double kResidualRatioHi = 4.5;

int g_failed = 0;

void note(const std::string& s) { std::printf("    %s\n", s.c_str()); }

void verdict(int id, const std::string& name, bool ok) {
    std::printf("[%s] %d. %s\n", ok ? "PASS" : "FAIL", id, name.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failed;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

KernelSpec base(Method m, QFormat in = QFormat(3, 12), QFormat out = QFormat(0, 15), double limit = 6.0) {
    KernelSpec s;
    s.method = m;
    s.in_fmt = in;
    s.out_fmt = out;
    s.limit = limit;
    return s;
}

KernelSpec taylor(int terms) {
    KernelSpec s = base(Method::Taylor);
    s.terms = terms;
    return s;
}

// ---------------------------------------------------------------------------

void criterion_table1() {
    bool ok = true;
    for (const auto& r : reproduce_table1()) {
        const bool max_ok = within_relative(r.measured.max_abs_err, r.published_max, kTable1Band);
        const bool rmse_ok = within_relative(r.measured.rmse, r.published_mse_column, kTable1Band);
        ok = ok && max_ok && rmse_ok;
        note(r.id + " " + r.spec.label() + " " + param_to_string(r.spec.param()) + ": max " +
               fmt(r.measured.max_abs_err) + " vs " + fmt(r.published_max) + (max_ok ? " ok" : " OUT") +
               "; rmse " + fmt(r.measured.rmse) + " vs column " + fmt(r.published_mse_column) +
               (rmse_ok ? " ok" : " OUT") + "; mse " + fmt(r.measured.mse) + (r.mse_within ? " matches" : " does not match") +
               "; n=" + std::to_string(r.measured.n_points));
    }
    note("the published MSE column tracks RMSE; true MSE is ~1e-10, five orders of magnitude below it");
    verdict(1, "reference accuracy rows: max error and RMSE within 25% of published values", ok);
}

// ---------------------------------------------------------------------------

bool non_increasing(const std::vector<SweepPoint>& pts, std::string& trace) {
    bool ok = true;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        trace += (i ? "  " : "") + param_to_string(pts[i].param) + ":" + fmt(pts[i].report.max_abs_err) + "/" +
                 fmt(pts[i].report.rmse);
        if (i > 0) {
            ok = ok && pts[i].report.max_abs_err <= pts[i - 1].report.max_abs_err &&
                 pts[i].report.rmse <= pts[i - 1].report.rmse;
        }
    }
    return ok;
}

void criterion_trend() {
    struct Ladder {
        std::string name;
        KernelSpec spec;
        std::vector<Param> params;
    };
    // The four coarsest rungs of the step ladder for every step method.
    const std::vector<Param> steps = {Step(2), Step(3), Step(4), Step(5)};
    const std::vector<Ladder> ladders = {
        {"pwl", base(Method::Pwl), steps},
        {"taylor[3]", taylor(3), steps},
        {"taylor[4]", taylor(4), steps},
        {"catmull-rom", base(Method::CatmullRom), steps},
        {"velocity", base(Method::Velocity), steps},
        {"lambert odd K", base(Method::Lambert), {3, 5, 7, 9}},
        {"lambert K+1", base(Method::Lambert), {5, 6, 7, 8}},
    };
    bool ok = true;
    for (const auto& l : ladders) {
        std::string trace;
        const bool mono = non_increasing(sweep_parameter(l.spec, l.params), trace);
        ok = ok && mono;
        note(l.name + (mono ? " ok   " : " FAIL ") + trace);
    }
    note("output quantization floor (1 ulp of S.15) is " + fmt(0x1p-15));
    verdict(2, "max error and RMSE non-increasing over 4 refining parameters per method", ok);
}

// ---------------------------------------------------------------------------

void criterion_table3() {
    bool ok = true;
    int exact = 0;
    auto show = [](const std::optional<CalibrationResult>& c) {
        return c ? param_to_string(c->param) + " (" + fmt(c->achieved_max_err) + ")" : std::string("none");
    };
    for (const auto& o : reproduce_table3()) {
        const bool cell_ok = (o.input_ulp || o.output_ulp) && o.distance <= kTable3MaxDistance;
        ok = ok && cell_ok;
        exact += o.exact ? 1 : 0;
        if (!o.exact) {
            note(std::string(cell_ok ? "near " : "MISS ") + o.cell.row + " " + o.cell.column + ": published " +
                   param_to_string(o.cell.published) + " (" + fmt(o.published_max_err) + "), in-ulp " +
                   fmt(o.cell.base.in_fmt.ulp()) + " -> " + show(o.input_ulp) + ", out-ulp " +
                   fmt(o.cell.base.out_fmt.ulp()) + " -> " + show(o.output_ulp) + ", distance " +
                   std::to_string(o.distance));
        }
    }
    note(std::to_string(exact) + " of 24 cells exact under at least one ulp reading");
    verdict(3, "calibration grid: each cell exact or within one ladder step", ok);
}

// ---------------------------------------------------------------------------

void criterion_cost() {
    bool ok = true;
    auto expect = [&](const std::string& what, long got, long want) {
        const bool hit = got == want;
        ok = ok && hit;
        if (!hit) note(what + ": got " + std::to_string(got) + ", want " + std::to_string(want));
    };

    const auto pwl = cost_of(base(Method::Pwl));
    expect("pwl adders", pwl.adders, 2);
    expect("pwl multipliers", pwl.multipliers, 1);
    expect("pwl banks", pwl.lut_banks, 2);
    expect("pwl entries per bank at 1/64", pwl.lut_entries / pwl.lut_banks, 192);
    const bool annotated = pwl.notes.find("384") != std::string::npos && pwl.notes.find("1/128") != std::string::npos;
    ok = ok && annotated;
    note("pwl 1/64 note: " + pwl.notes);
    KernelSpec p128 = base(Method::Pwl);
    p128.step = Step(7);
    expect("pwl entries per bank at 1/128", cost_of(p128).lut_entries / 2, 384);

    KernelSpec b1 = taylor(3);
    b1.step = Step(4);
    const auto c1 = cost_of(b1);
    expect("B1 adders", c1.adders, 2);
    expect("B1 multipliers", c1.multipliers, 2);
    expect("B1 entries", c1.lut_entries, 96);
    KernelSpec b2 = taylor(4);
    b2.step = Step(3);
    const auto c2 = cost_of(b2);
    expect("B2 adders", c2.adders, 3);
    expect("B2 multipliers", c2.multipliers, 3);
    expect("B2 entries", c2.lut_entries, 48);

    KernelSpec vf = base(Method::Velocity);
    vf.step = Step(7);
    const auto v = cost_of(vf);
    expect("vf 1/128 entries", v.block("vf-product")->lut_entries, 10);
    expect("vf 1/128 product multipliers", v.block("vf-product")->multipliers, 9);
    KernelSpec vg = base(Method::Velocity, QFormat(2, 13), QFormat(0, 15), 4.0);
    vg.step = Step(8);
    vg.grouped = true;
    const auto g = cost_of(vg);
    expect("vf grouped 1/256 entries", g.block("vf-product")->lut_entries, 20);
    expect("vf grouped 1/256 product multipliers", g.block("vf-product")->multipliers, 4);
    for (const auto* r : {&v, &g}) {
        expect("vf conversion adders", r->block("tanh-conversion")->adders, 2);
        expect("vf conversion dividers", r->block("tanh-conversion")->dividers, 1);
        expect("vf refinement adders", r->block("residual-refinement")->adders, 2);
        expect("vf refinement multipliers", r->block("residual-refinement")->multipliers, 1);
        expect("vf refinement squarers", r->block("residual-refinement")->squarers, 1);
    }

    for (int k = 1; k <= 16; ++k) {
        KernelSpec l = base(Method::Lambert);
        l.depth = k;
        const auto r = cost_of(l);
        const int stages = std::max(k - 2, 0);
        expect("lambert K=" + std::to_string(k) + " recurrence adders", r.block("recurrence")->adders, 2 * stages);
        expect("lambert K=" + std::to_string(k) + " recurrence multipliers", r.block("recurrence")->multipliers,
               2 * stages);
        expect("lambert final dividers", r.block("final-quotient")->dividers, 1);
        expect("lambert final multipliers", r.block("final-quotient")->multipliers, 1);
    }
    note("vf 1/128: " + std::to_string(v.block("vf-product")->lut_entries) + " entries, " +
           std::to_string(v.block("vf-product")->multipliers) + " product multipliers; grouped 1/256: " +
           std::to_string(g.lut_entries) + " entries, " + std::to_string(g.block("vf-product")->multipliers));
    verdict(4, "cost model unit counts", ok);
}

// ---------------------------------------------------------------------------

std::vector<KernelSpec> all_kernel_specs() {
    std::vector<KernelSpec> specs;
    for (const auto& r : table1_rows()) specs.push_back(r.spec);
    KernelSpec t = taylor(3);
    t.step = Step(4);
    t.centering = Centering::Truncate;
    t.derivs = DerivativeSource::Stored;
    specs.push_back(t);
    KernelSpec g = base(Method::Velocity, QFormat(2, 13), QFormat(0, 15), 4.0);
    g.step = Step(8);
    g.grouped = true;
    specs.push_back(g);
    return specs;
}

bool symmetry_and_clamp(std::string& msg) {
    for (const auto& spec : all_kernel_specs()) {
        const Kernel k = make_kernel(spec);
        const KernelIo& io = kernel_io(k);
        const QFormat in = spec.in_fmt;
        for (std::int64_t raw = in.min_raw(); raw <= in.max_raw(); ++raw) {
            const FxValue x = from_raw(raw, in);
            const FxValue y = evaluate(k, x);
            const double xv = dequantize(x);
            if (std::llabs(y.raw) > io.clamp_raw || (std::fabs(xv) >= spec.limit && std::llabs(y.raw) != io.clamp_raw)) {
                msg = spec.label() + " out of range at x=" + fmt(xv);
                return false;
            }
            if (raw > in.min_raw() && evaluate(k, from_raw(-raw, in)).raw != -y.raw) {
                msg = spec.label() + " not odd at x=" + fmt(xv);
                return false;
            }
        }
    }
    msg = std::to_string(all_kernel_specs().size()) + " kernels, every 16-bit input code";
    return true;
}

bool knot_exactness(std::string& msg) {
    const KernelIo io = KernelIo::make(QFormat(3, 12), QFormat(0, 15), 6.0);
    auto code = [&](std::int64_t raw) { return from_raw(raw, io.in_fmt); };
    std::size_t checked = 0;
    for (int s = 2; s <= 8; ++s) {
        const Step step(s);
        const int shift = 12 - s;
        const auto pwl = PwlTable::build(step, io);
        for (std::size_t i = 0; i < pwl.knots().size(); ++i) {
            const auto raw = static_cast<std::int64_t>(i) << shift;
            if (raw > io.in_fmt.max_raw()) break;
            if (eval_pwl(pwl, code(raw)).raw != pwl.knots()[i]) return msg = "pwl knot " + std::to_string(i), false;
            ++checked;
        }
        for (int terms = 1; terms <= 4; ++terms) {
            for (auto c : {Centering::Nearest, Centering::Truncate}) {
                const auto t = TaylorTable::build(step, terms, io, c);
                for (std::size_t i = 0; i < t.knots().size(); ++i) {
                    const auto raw = static_cast<std::int64_t>(i) << shift;
                    if (raw > io.in_fmt.max_raw()) break;
                    if (eval_taylor(t, code(raw)).raw != t.knots()[i])
                        return msg = "taylor knot " + std::to_string(i), false;
                    ++checked;
                }
            }
        }
        const auto cr = CrTable::build(step, io);
        const auto w0 = catmull_rom_weights(Wide::from_int(0));
        const auto w1 = catmull_rom_weights(Wide::from_int(1));
        const auto cells = static_cast<std::int64_t>(cr.points().size()) - 4;
        for (std::int64_t i = 0; i <= cells; ++i) {
            const auto raw = i << shift;
            if (raw <= io.in_fmt.max_raw() && eval_catmullrom(cr, code(raw)).raw != cr.point(i))
                return msg = "catmull-rom t=0 at cell " + std::to_string(i), false;
            // The spline through P_{i-1}..P_{i+2} at t = 0 and t = 1.
            Wide at0, at1;
            for (int j = 0; j < 4; ++j) {
                const Wide p = Wide::from_int(cr.point(i - 1 + j));
                at0 = at0 + w0.w[j] * p;
                at1 = at1 + w1.w[j] * p;
            }
            if (at0 != Wide::from_int(cr.point(i)) || at1 != Wide::from_int(cr.point(i + 1)))
                return msg = "catmull-rom basis at cell " + std::to_string(i), false;
            checked += 2;
        }
    }
    msg = std::to_string(checked) + " knots and control points, steps 1/4..1/256";
    return true;
}

bool derivs_vs_fd(std::string& msg) {
    // Extended precision keeps the h^-3 stencil's rounding below 1e-7.
    const long double h = kFdStep;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const long double x = -4.0L + 8.0L * i / 99.0L;
        auto f = [](long double v) { return tanhl(v); };
        const long double d1 = (f(x + h) - f(x - h)) / (2 * h);
        const long double d2 = (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
        const long double d3 = (f(x + 2 * h) - 2 * f(x + h) + 2 * f(x - h) - f(x - 2 * h)) / (2 * h * h * h);
        const auto d = tanh_derivs(tanh_ref(static_cast<double>(x)));
        worst = std::max({worst, std::fabs(d.d1 - static_cast<double>(d1)), std::fabs(d.d2 - static_cast<double>(d2)),
                          std::fabs(d.d3 - static_cast<double>(d3))});
    }
    msg = "100 points in [-4, 4], worst |diff| " + fmt(worst);
    return worst <= kDerivTol;
}

double cf_direct(double x, int k) {
    const double x2 = x * x;
    double v = 2.0 * k + 1.0;
    for (int j = k - 1; j >= 0; --j) v = (2.0 * j + 1.0) + x2 / v;
    return x / v;
}

bool lambert_vs_cf(std::string& msg) {
    std::mt19937_64 rng(20260101);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    double worst = 0.0;
    bool k1_exact = true;
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng);
        k1_exact = k1_exact && lambert_value(x, 1) == 3 * x / (3 + x * x);
        for (int k = 1; k <= 8; ++k) {
            const double want = cf_direct(x, k);
            worst = std::max(worst, std::fabs(lambert_value(x, k) - want) / std::fabs(want));
        }
    }
    msg = "K=1..8, 1000 x in (-6, 6): worst relative " + fmt(worst) + (k1_exact ? ", K=1 exact" : ", K=1 NOT exact");
    return worst <= kLambertRelTol && k1_exact;
}

bool velocity_props(std::string& msg) {
    // f(a) for |a| <= 4, the span of stored factors f(2^k).
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst_exp = 0.0, worst_mul = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double a = u(rng), b = u(rng);
        worst_exp = std::max({worst_exp, std::fabs(velocity_factor(2 * a) / std::exp(4 * a) - 1),
                              std::fabs(velocity_factor(a) / std::exp(2 * a) - 1)});
        worst_mul = std::max(worst_mul, std::fabs(velocity_factor(a) * velocity_factor(b) / velocity_factor(a + b) - 1));
    }

    bool identical = true;
    const std::pair<KernelIo, int> cases[] = {
        {KernelIo::make(QFormat(2, 13), QFormat(0, 15), 4.0), 8},
        {KernelIo::make(QFormat(3, 12), QFormat(0, 15), 6.0), 7},
        {KernelIo::make(QFormat(3, 12), QFormat(0, 15), 6.0), 5},
    };
    for (const auto& [io, shift] : cases) {
        const auto flat = VfTable::build(Step(shift), io);
        const auto g = group_vf(flat);
        for (std::int64_t raw = io.in_fmt.min_raw(); raw <= io.in_fmt.max_raw() && identical; ++raw) {
            const FxValue x = from_raw(raw, io.in_fmt);
            identical = eval_velocity(flat, x) == eval_velocity(g, x);
        }
    }

    bool quadratic = true;
    std::string ratios;
    for (double a : {0.3, 1.1, 2.5}) {
        const double t = tanh_ref(a);
        double prev = 0.0;
        for (int s = 7; s <= 11; ++s) {
            const double r = std::ldexp(1.0, -s);
            const double err = std::fabs(refine_residual(t, r) - tanh_ref(a + r));
            if (s > 7) {
                const double ratio = prev / err;
                quadratic = quadratic && ratio >= kResidualRatioLo && ratio <= kResidualRatioHi;
                if (s == 8) ratios += (ratios.empty() ? "" : ", ") + fmt(ratio);
            }
            prev = err;
        }
    }
    msg = "f=e^2a worst " + fmt(worst_exp) + ", multiplicativity worst " + fmt(worst_mul) +
          (identical ? ", grouped == ungrouped on 3 exhaustive sweeps" : ", grouped DIFFERS") +
          ", residual error ratio per halving " + ratios;
    return worst_exp <= kVfRelTol && worst_mul <= kVfRelTol && identical && quadratic;
}

bool reciprocal_props(std::string& msg) {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double d = std::exp2(u(rng));
        worst = std::max(worst, std::fabs(reciprocal_nr(d, kNrMaxIters) * d - 1.0));
    }
    msg = "1000 d in (2^-4, 2^4), " + std::to_string(kNrMaxIters) + " iterations: worst relative " + fmt(worst);
    return worst <= kNrTol;
}

bool hex_round_trip(std::string& msg) {
    int n = 0;
    for (const auto& spec : all_kernel_specs()) {
        if (spec.method == Method::Lambert) continue;
        const Kernel k = make_kernel(spec);
        const Kernel back = kernel_from_artifact(read_hex(write_hex(export_lut(k))));
        for (std::int64_t raw = spec.in_fmt.min_raw(); raw <= spec.in_fmt.max_raw(); ++raw) {
            const FxValue x = from_raw(raw, spec.in_fmt);
            if (!(evaluate(back, x) == evaluate(k, x))) {
                msg = spec.label() + " differs after reload at raw " + std::to_string(raw);
                return false;
            }
        }
        ++n;
    }
    msg = std::to_string(n) + " table kernels reloaded, every input code identical";
    return true;
}

void criterion_properties() {
    const std::pair<const char*, std::function<bool(std::string&)>> props[] = {
        {"odd symmetry and range clamp", symmetry_and_clamp},
        {"knot / control-point exactness", knot_exactness},
        {"tanh_derivs vs finite differences", derivs_vs_fd},
        {"Lambert recurrence vs continued fraction", lambert_vs_cf},
        {"velocity factor", velocity_props},
        {"Newton-Raphson reciprocal", reciprocal_props},
        {"gen-lut hex round-trip", hex_round_trip},
    };
    bool ok = true;
    for (const auto& [name, fn] : props) {
        std::string msg;
        bool pass = false;
        try {
            pass = fn(msg);
        } catch (const std::exception& e) {
            msg = std::string("threw: ") + e.what();
        }
        ok = ok && pass;
        note(std::string(pass ? "ok   " : "FAIL ") + name + ": " + msg);
    }
    verdict(5, "property suites", ok);
}

}  // namespace

int main() {
    const std::function<void()> criteria[] = {criterion_table1, criterion_trend, criterion_table3, criterion_cost,
                                              criterion_properties};
    int id = 1;
    for (const auto& c : criteria) {
        try {
            c();
        } catch (const std::exception& e) {
            note(std::string("threw: ") + e.what());
            verdict(id, "aborted", false);
        }
        ++id;
    }
    std::printf("%d of 5 criteria failed\n", g_failed);
    return g_failed;
}
