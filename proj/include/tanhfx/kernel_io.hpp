#pragma once

#include <cstdint>
#include <cmath>

#include "tanhfx/fixedpoint.hpp"
#include "tanhfx/reference.hpp"

namespace tanhfx {

/// Input/output formats and domain shared by every kernel configuration.
struct KernelIo {
    QFormat in_fmt{3, 12};
    QFormat out_fmt{0, 15};
    DomainSpec dom{};
    std::int64_t clamp_raw = 32767;

    static KernelIo make(QFormat in_fmt, QFormat out_fmt, double limit);

    friend bool operator==(const KernelIo&, const KernelIo&) = default;
};

namespace detail {

void check_input_format(const KernelIo& io, const FxValue& x);

/// Odd-symmetry and clamp wrapper. `positive` maps a strictly positive
/// input inside the domain to a raw output code in io.out_fmt.
template <class PositiveEval>
FxValue eval_odd(const KernelIo& io, const FxValue& x, PositiveEval&& positive) {
    check_input_format(io, x);
    if (x.raw == 0) {
        return FxValue{0, io.out_fmt};
    }
    const bool negative = x.raw < 0;
    if (std::fabs(dequantize(x)) >= io.dom.limit) {
        return FxValue{negative ? -io.clamp_raw : io.clamp_raw, io.out_fmt};
    }
    const FxValue magnitude = negative ? negate(x).value : x;
    std::int64_t y = positive(magnitude);
    if (y > io.clamp_raw) {
        y = io.clamp_raw;
    } else if (y < -io.clamp_raw) {
        y = -io.clamp_raw;
    }
    return FxValue{negative ? -y : y, io.out_fmt};
}

}  // namespace detail
}  // namespace tanhfx
