#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "tanhfx/fixedpoint.hpp"
#include "tanhfx/kernel_io.hpp"
#include "tanhfx/poly_kernels.hpp"
#include "tanhfx/rational_kernels.hpp"

namespace tanhfx {

enum class Method { Pwl, Taylor, CatmullRom, Velocity, Lambert };

std::string_view method_name(Method m);
/// Accepts the canonical names (pwl, taylor, catmull-rom, velocity, lambert)
/// and the short aliases cr, vf, trig, cf.
Method parse_method(std::string_view text);

/// The tunable parameter of a method: a step/threshold or a depth K.
using Param = std::variant<Step, int>;

std::string param_to_string(const Param& p);
/// Next coarser ladder entry: doubled step, or K - 1.
Param coarser(const Param& p);

/// Everything needed to construct one kernel.
struct KernelSpec {
    Method method = Method::Pwl;
    Step step{6};       // PWL / Taylor / Catmull-Rom step, velocity threshold
    int terms = 3;      // Taylor
    int depth = 7;      // Lambert K
    Centering centering = Centering::Nearest;
    DerivativeSource derivs = DerivativeSource::Runtime;
    bool grouped = false;
    int vf_entry_frac_bits = VfTable::kDefaultEntryFracBits;
    int nr_iters = 3;
    QFormat in_fmt{3, 12};
    QFormat out_fmt{0, 15};
    double limit = 6.0;

    Param param() const;
    KernelSpec with_param(const Param& p) const;
    KernelIo io() const { return KernelIo::make(in_fmt, out_fmt, limit); }
    /// Short label such as "taylor[3]" or "velocity[grouped]".
    std::string label() const;
};

using Kernel = std::variant<PwlTable, TaylorTable, CrTable, VfTable, LambertConfig>;

Kernel make_kernel(const KernelSpec& spec);
FxValue evaluate(const Kernel& k, const FxValue& x);
const KernelIo& kernel_io(const Kernel& k);
Method kernel_method(const Kernel& k);

}  // namespace tanhfx
