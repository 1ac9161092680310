#include "tanhfx/rational_kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace tanhfx {

namespace {

using boost::multiprecision::cpp_int;

constexpr double kSeedOffset = 48.0 / 17.0;
constexpr double kSeedSlope = 32.0 / 17.0;
constexpr int kMaxTopBit = 3;

void check_iters(int iters) {
    if (iters < 0 || iters > 16) {
        throw ConfigError("Newton-Raphson iteration count must be in 0..16, got " + std::to_string(iters));
    }
}

std::uint64_t quantize_unsigned(double v, int frac_bits) {
    return static_cast<std::uint64_t>(std::llround(std::ldexp(v, frac_bits)));
}

}  // namespace

double velocity_factor(double a) {
    const double t = tanh_ref(a);
    if (!(std::fabs(t) < 1.0)) {
        throw DomainError("velocity factor undefined where |tanh a| rounds to 1");
    }
    return (1.0 + t) / (1.0 - t);
}

double vf_to_tanh(double f) {
    if (!(f > 0.0)) {
        throw DomainError("velocity factor must be positive");
    }
    return (f - 1.0) / (f + 1.0);
}

std::vector<double> reciprocal_nr_trace(double d, int iters) {
    check_iters(iters);
    if (!(d > 0.0) || !std::isfinite(d)) {
        throw DomainError("reciprocal_nr needs a finite positive divisor");
    }
    int e = 0;
    const double m = std::frexp(d, &e);  // d = m * 2^e, m in [0.5, 1)
    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(iters) + 1);
    if (m == 0.5) {
        trace.assign(static_cast<std::size_t>(iters) + 1, std::ldexp(1.0, 1 - e));
        return trace;
    }
    double y = kSeedOffset - kSeedSlope * m;
    trace.push_back(std::ldexp(y, -e));
    for (int i = 0; i < iters; ++i) {
        y = y * (2.0 - m * y);
        trace.push_back(std::ldexp(y, -e));
    }
    return trace;
}

double reciprocal_nr(double d, int iters) { return reciprocal_nr_trace(d, iters).back(); }

// ---------------------------------------------------------------------------
// Velocity factor tables

int VfTable::top_bit_for(double limit) {
    int k = -31;
    while (std::ldexp(1.0, k + 1) < limit) {
        ++k;
    }
    return k;
}

VfTable::VfTable(Step threshold, int top_bit, bool grouped, int entry_frac_bits, int nr_iters, KernelIo io,
                 std::vector<std::uint64_t> entries)
    : threshold_(threshold),
      top_bit_(top_bit),
      grouped_(grouped),
      entry_frac_bits_(entry_frac_bits),
      nr_iters_(nr_iters),
      io_(std::move(io)),
      entries_(std::move(entries)) {}

VfTable VfTable::build(Step threshold, const KernelIo& io, int entry_frac_bits, int nr_iters) {
    check_iters(nr_iters);
    if (threshold.shift() > io.in_fmt.frac_bits()) {
        throw ConfigError("threshold " + threshold.to_string() + " is below the input resolution of " +
                          io.in_fmt.to_string());
    }
    if (entry_frac_bits < 1 || entry_frac_bits > 30) {
        throw ConfigError("velocity-factor entries need 1..30 fraction bits");
    }
    const int top = top_bit_for(io.dom.limit);
    if (top > kMaxTopBit) {
        throw ConfigError("velocity-factor tables support domains up to 16");
    }
    if (top < -threshold.shift()) {
        throw ConfigError("domain limit lies below the velocity-factor threshold");
    }
    std::vector<std::uint64_t> entries;
    for (int k = -threshold.shift(); k <= top; ++k) {
        entries.push_back(quantize_unsigned(velocity_factor(std::ldexp(1.0, k)), entry_frac_bits));
    }
    return VfTable(threshold, top, false, entry_frac_bits, nr_iters, io, std::move(entries));
}

VfTable VfTable::from_entries(Step threshold, const KernelIo& io, bool grouped, int entry_frac_bits,
                              std::vector<std::uint64_t> entries, int nr_iters) {
    const VfTable shape = build(threshold, io, grouped ? entry_frac_bits / 2 : entry_frac_bits, nr_iters);
    const auto bits = static_cast<std::size_t>(shape.bit_count());
    const std::size_t want = grouped ? bits / 2 * 4 : bits;
    if ((grouped && bits % 2 != 0) || entries.size() != want) {
        throw ConfigError("velocity-factor table needs " + std::to_string(want) + " entries, got " +
                          std::to_string(entries.size()));
    }
    const std::uint64_t one = std::uint64_t{1} << entry_frac_bits;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const bool is_unit_slot = grouped && i % 4 == 0;
        if (is_unit_slot ? entries[i] != one : entries[i] <= one) {
            throw ConfigError("velocity-factor entry " + std::to_string(i) +
                              (is_unit_slot ? " must be exactly 1" : " must exceed 1"));
        }
    }
    return VfTable(threshold, shape.top_bit(), grouped, entry_frac_bits, nr_iters, io, std::move(entries));
}

int VfTable::entry_int_bits() const {
    std::uint64_t largest = 0;
    for (auto e : entries_) {
        largest = std::max(largest, e);
    }
    const int width = static_cast<int>(std::bit_width(largest));
    return std::max(width - entry_frac_bits_, 1);
}

double VfTable::entry_value(std::size_t i) const {
    return std::ldexp(static_cast<double>(entries_.at(i)), -entry_frac_bits_);
}

VfTable group_vf(const VfTable& tbl) {
    if (tbl.grouped()) {
        throw ConfigError("velocity-factor table is already grouped");
    }
    if (tbl.bit_count() % 2 != 0) {
        throw ConfigError("grouping needs an even number of stored bits, table has " +
                          std::to_string(tbl.bit_count()));
    }
    const int f = tbl.entry_frac_bits();
    const auto& e = tbl.entries();
    std::vector<std::uint64_t> grouped;
    grouped.reserve(e.size() * 2);
    for (std::size_t i = 0; i < e.size(); i += 2) {
        const unsigned __int128 product = static_cast<unsigned __int128>(e[i]) * e[i + 1];
        if (product >> 64 != 0) {
            throw ConfigError("grouped velocity-factor product exceeds 64 bits");
        }
        grouped.push_back(std::uint64_t{1} << (2 * f));
        grouped.push_back(e[i] << f);
        grouped.push_back(e[i + 1] << f);
        grouped.push_back(static_cast<std::uint64_t>(product));
    }
    return VfTable::from_entries(tbl.threshold(), tbl.io(), true, 2 * f, std::move(grouped), tbl.nr_iters());
}

double vf_product(const VfTable& tbl, const FxValue& magnitude) {
    if (magnitude.raw < 0) {
        throw DomainError("vf_product needs a nonnegative input");
    }
    const auto raw = static_cast<std::uint64_t>(magnitude.raw);
    const int low_pos = tbl.lowest_bit() + magnitude.fmt.frac_bits();
    const auto bit = [&](int i) { return static_cast<unsigned>((raw >> (low_pos + i)) & 1U); };

    // Both layouts accumulate bit_count * base_frac fraction bits, so equal
    // real products give equal integers.
    const int base_frac = tbl.grouped() ? tbl.entry_frac_bits() / 2 : tbl.entry_frac_bits();
    cpp_int product = 1;
    const auto& e = tbl.entries();
    if (tbl.grouped()) {
        for (int g = 0; g < tbl.bit_count() / 2; ++g) {
            const unsigned idx = bit(2 * g) | (bit(2 * g + 1) << 1);
            product *= e[static_cast<std::size_t>(4 * g) + idx];
        }
    } else {
        for (int i = 0; i < tbl.bit_count(); ++i) {
            if (bit(i) != 0) {
                product *= e[static_cast<std::size_t>(i)];
            } else {
                product <<= base_frac;
            }
        }
    }
    return std::ldexp(product.convert_to<double>(), -base_frac * tbl.bit_count());
}

double refine_residual(double t, double r) { return t + r * (1.0 - t * t); }

FxValue eval_velocity(const VfTable& tbl, const FxValue& x) {
    return detail::eval_odd(tbl.io(), x, [&](const FxValue& ax) {
        const int fin = ax.fmt.frac_bits();
        const int low_pos = tbl.lowest_bit() + fin;
        const std::int64_t residual_raw = ax.raw & ((std::int64_t{1} << low_pos) - 1);
        const double r = std::ldexp(static_cast<double>(residual_raw), -fin);

        const double f = vf_product(tbl, ax);
        double t = (f - 1.0) * reciprocal_nr(f + 1.0, tbl.nr_iters());
        t = refine_residual(t, r);
        return quantize(t, tbl.io().out_fmt).value.raw;
    });
}

// ---------------------------------------------------------------------------
// Lambert continued fraction

LambertConfig LambertConfig::make(int depth, const KernelIo& io, int nr_iters) {
    if (depth < 1 || depth > kMaxDepth) {
        throw ConfigError("continued-fraction depth must be in 1..16, got " + std::to_string(depth));
    }
    check_iters(nr_iters);
    return LambertConfig{depth, io, nr_iters};
}

RecurrenceState lambert_recurrence(double x, int depth) {
    if (depth < 1 || depth > LambertConfig::kMaxDepth) {
        throw ConfigError("continued-fraction depth must be in 1..16, got " + std::to_string(depth));
    }
    const double x2 = x * x;
    const double base = 2.0 * depth + 1.0;
    RecurrenceState s{1.0, base};
    for (int n = 1; n <= depth; ++n) {
        const double next = (base - 2.0 * n) * s.t_curr + x2 * s.t_prev;
        s.t_prev = s.t_curr;
        s.t_curr = next;
    }
    return s;
}

double lambert_value(double x, int depth) {
    const RecurrenceState s = lambert_recurrence(x, depth);
    return x * s.t_prev / s.t_curr;
}

FxValue eval_lambert(const LambertConfig& cfg, const FxValue& x) {
    return detail::eval_odd(cfg.io, x, [&](const FxValue& ax) {
        const double xv = dequantize(ax);
        const RecurrenceState s = lambert_recurrence(xv, cfg.depth);
        const double t = xv * s.t_prev * reciprocal_nr(s.t_curr, cfg.nr_iters);
        return quantize(t, cfg.io.out_fmt).value.raw;
    });
}

}  // namespace tanhfx
