#include "tanhfx/costmodel.hpp"

#include <cmath>

namespace tanhfx {

namespace {

long stored_cells(const KernelSpec& spec) {
    return static_cast<long>(std::ceil(std::ldexp(spec.limit, spec.step.shift())));
}

void add_block(CostReport& r, CostBlock b) {
    r.adders += b.adders;
    r.multipliers += b.multipliers;
    r.squarers += b.squarers;
    r.dividers += b.dividers;
    r.lut_entries += b.lut_entries;
    r.blocks.push_back(std::move(b));
}

void append_note(CostReport& r, const std::string& note) {
    if (!r.notes.empty()) {
        r.notes += "; ";
    }
    r.notes += note;
}

CostReport pwl_cost(const KernelSpec& spec) {
    CostReport r;
    const long cells = stored_cells(spec);
    const long per_bank = (cells + 1) / 2;
    r.lut_banks = 2;
    add_block(r, {"lut", 0, 0, 0, 0, 2 * per_bank});
    add_block(r, {"interpolator", 2, 1, 0, 0, 0});
    append_note(r, "alternate-entry split: 2 banks x " + std::to_string(per_bank) + " entries (range/step = " +
                       std::to_string(cells) + ")");
    // The commonly quoted sizing, 2 banks x 384 entries over range 6, is step 1/128.
    if (spec.limit == 6.0 && per_bank != 384) {
        append_note(r, "2 x 384 entries corresponds to step 1/128, not " + spec.step.to_string());
    }
    return r;
}

CostReport taylor_cost(const KernelSpec& spec) {
    CostReport r;
    const long cells = stored_cells(spec);
    const int degree = spec.terms - 1;
    const long columns = spec.derivs == DerivativeSource::Stored ? spec.terms : 1;
    add_block(r, {"lut", 0, 0, 0, 0, cells * columns});
    add_block(r, {"horner", degree, degree, 0, 0, 0});
    if (spec.derivs == DerivativeSource::Runtime) {
        append_note(r, "coefficients derived from the stored tanh value at run time; derivative logic not counted");
    } else {
        append_note(r, "coefficients stored: " + std::to_string(columns) + " columns of " + std::to_string(cells));
    }
    if (spec.centering == Centering::Nearest) {
        append_note(r, "nearest-knot addressing uses one extra knot at the range end");
    }
    return r;
}

CostReport catmull_rom_cost(const KernelSpec& spec, const CostOptions& opts) {
    CostReport r;
    const long points = stored_cells(spec) + 4;
    add_block(r, {"control-points", 0, 0, 0, 0, points});
    add_block(r, {"dot-product", 3, 4, 0, 0, 0});
    const int t_bits = spec.in_fmt.frac_bits() - spec.step.shift();
    if (opts.cr_tvector == TVectorSource::Computed) {
        // t^2, t^3, then four small-integer combinations (2 + 2 + 2 + 1 adds).
        add_block(r, {"t-vector", 7, 2, 0, 0, 0});
        append_note(r, "t-vector computed by cubic polynomial logic");
    } else {
        add_block(r, {"t-vector", 0, 0, 0, 0, 4L << t_bits});
        append_note(r, "t-vector stored: 4 x 2^" + std::to_string(t_bits) + " entries");
    }
    append_note(r, "4 control-point fetches per evaluation");
    return r;
}

CostReport velocity_cost(const KernelSpec& spec) {
    CostReport r;
    const int bits = VfTable::top_bit_for(spec.limit) + spec.step.shift() + 1;
    if (spec.grouped && bits % 2 != 0) {
        throw ConfigError("grouping needs an even number of stored bits, configuration has " + std::to_string(bits));
    }
    const int lookups = spec.grouped ? bits / 2 : bits;
    const long entries = spec.grouped ? 4L * lookups : bits;
    add_block(r, {"vf-product", 0, lookups - 1, 0, 0, entries});
    add_block(r, {"tanh-conversion", 2, 0, 0, 1, 0});
    add_block(r, {"residual-refinement", 2, 1, 1, 0, 0});
    append_note(r, std::to_string(bits) + " stored bits" +
                       (spec.grouped ? ", paired into " + std::to_string(lookups) + " 4-to-1 lookups" : ""));
    append_note(r, "divider as Newton-Raphson reciprocal (" + std::to_string(spec.nr_iters) +
                       " iterations) and a multiply");
    return r;
}

CostReport lambert_cost(const KernelSpec& spec) {
    CostReport r;
    const int k = spec.depth;
    const int busy_stages = k > 2 ? k - 2 : 0;
    r.pipeline_stages = k;
    add_block(r, {"x-squared", 0, 0, 1, 0, 0});
    add_block(r, {"recurrence", 2 * busy_stages, 2 * busy_stages, 0, 0, 0});
    add_block(r, {"final-quotient", 0, 1, 0, 1, 0});
    append_note(r, "stages 1-2 carry no adders or multipliers (T0 constant, T1 = const + x^2 from the shared squarer)");
    append_note(r, "divider as Newton-Raphson reciprocal (" + std::to_string(spec.nr_iters) +
                       " iterations) and a multiply");
    return r;
}

}  // namespace

const CostBlock* CostReport::block(const std::string& name) const {
    for (const auto& b : blocks) {
        if (b.name == name) {
            return &b;
        }
    }
    return nullptr;
}

CostReport cost_of(const KernelSpec& spec, const CostOptions& opts) {
    switch (spec.method) {
        case Method::Pwl: return pwl_cost(spec);
        case Method::Taylor: return taylor_cost(spec);
        case Method::CatmullRom: return catmull_rom_cost(spec, opts);
        case Method::Velocity: return velocity_cost(spec);
        case Method::Lambert: return lambert_cost(spec);
    }
    throw ConfigError("unknown method");
}

std::string cost_csv_header() { return "method,config,adders,multipliers,squarers,dividers,lut_entries,lut_banks,stages"; }

std::string cost_csv_row(const KernelSpec& spec, const CostReport& r) {
    std::string s = spec.label();
    s += ',' + param_to_string(spec.param());
    s += ',' + std::to_string(r.adders);
    s += ',' + std::to_string(r.multipliers);
    s += ',' + std::to_string(r.squarers);
    s += ',' + std::to_string(r.dividers);
    s += ',' + std::to_string(r.lut_entries);
    s += ',' + std::to_string(r.lut_banks);
    s += ',' + std::to_string(r.pipeline_stages);
    return s;
}

}  // namespace tanhfx
