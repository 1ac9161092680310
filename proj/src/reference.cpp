#include "tanhfx/reference.hpp"

#include <cmath>
#include <string>

namespace tanhfx {

DomainSpec DomainSpec::for_output(double limit, QFormat out_fmt) {
    if (!(limit >= 0.0) || !std::isfinite(limit)) {
        throw ConfigError("domain limit must be finite and nonnegative");
    }
    return DomainSpec{limit, 1.0 - out_fmt.ulp()};
}

double DomainSpec::saturation_point() const { return std::atanh(clamp_magnitude); }

std::int64_t DomainSpec::clamp_code(QFormat out_fmt) const {
    return quantize(clamp_magnitude, out_fmt).value.raw;
}

double tanh_ref(double x) { return std::tanh(x); }

double domain_bound(int frac_bits) {
    if (frac_bits < 1 || frac_bits > 31) {
        throw ConfigError("domain_bound needs 1..31 fraction bits, got " + std::to_string(frac_bits));
    }
    return std::atanh(1.0 - std::ldexp(1.0, -frac_bits));
}

double domain_bound_for_width(int total_bits, int int_bits) {
    return domain_bound(total_bits - 1 - int_bits);
}

double ideal_output(double x, const DomainSpec& dom) {
    if (x != 0.0 && std::fabs(x) >= dom.limit) {
        return std::copysign(dom.clamp_magnitude, x);
    }
    return tanh_ref(x);
}

}  // namespace tanhfx
