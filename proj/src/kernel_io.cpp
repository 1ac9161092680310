#include "tanhfx/kernel_io.hpp"

namespace tanhfx {

KernelIo KernelIo::make(QFormat in_fmt, QFormat out_fmt, double limit) {
    KernelIo io;
    io.in_fmt = in_fmt;
    io.out_fmt = out_fmt;
    io.dom = DomainSpec::for_output(limit, out_fmt);
    io.clamp_raw = io.dom.clamp_code(out_fmt);
    return io;
}

namespace detail {

void check_input_format(const KernelIo& io, const FxValue& x) {
    if (x.fmt != io.in_fmt) {
        throw ConfigError("kernel expects " + io.in_fmt.to_string() + " input, got " + x.fmt.to_string());
    }
}

}  // namespace detail
}  // namespace tanhfx
