#pragma once

#include "tanhfx/fixedpoint.hpp"

namespace tanhfx {

/// Analysis domain: inputs with |x| >= limit produce the saturated output
/// +-clamp_magnitude, where clamp_magnitude = 1 - 2^-b for b output fraction
/// bits. The limit is not required to reach atanh(clamp_magnitude).
struct DomainSpec {
    double limit = 6.0;
    double clamp_magnitude = 1.0 - 0x1p-15;

    static DomainSpec for_output(double limit, QFormat out_fmt);

    /// atanh(clamp_magnitude): where tanh itself reaches the clamp value.
    double saturation_point() const;
    /// Raw code of clamp_magnitude in `out_fmt`.
    std::int64_t clamp_code(QFormat out_fmt) const;

    friend bool operator==(const DomainSpec&, const DomainSpec&) = default;
};

/// Ground-truth tanh (platform libm, double precision).
double tanh_ref(double x);

/// atanh(1 - 2^-b) for b fraction bits, b in [1, 31].
double domain_bound(int frac_bits);

/// Same bound for a signed word of `total_bits` with `int_bits` integer bits.
double domain_bound_for_width(int total_bits, int int_bits = 0);

/// Clamped reference: sign(x) * clamp_magnitude beyond the domain limit,
/// tanh_ref(x) inside it.
double ideal_output(double x, const DomainSpec& dom);

}  // namespace tanhfx
