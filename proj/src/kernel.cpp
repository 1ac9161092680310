#include "tanhfx/kernel.hpp"

#include <string>

namespace tanhfx {

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace

std::string_view method_name(Method m) {
    switch (m) {
        case Method::Pwl: return "pwl";
        case Method::Taylor: return "taylor";
        case Method::CatmullRom: return "catmull-rom";
        case Method::Velocity: return "velocity";
        case Method::Lambert: return "lambert";
    }
    return "unknown";
}

Method parse_method(std::string_view text) {
    if (text == "pwl") return Method::Pwl;
    if (text == "taylor") return Method::Taylor;
    if (text == "catmull-rom" || text == "catmullrom" || text == "cr") return Method::CatmullRom;
    if (text == "velocity" || text == "vf" || text == "trig") return Method::Velocity;
    if (text == "lambert" || text == "cf") return Method::Lambert;
    throw ConfigError("unknown method '" + std::string(text) + "'");
}

std::string param_to_string(const Param& p) {
    return std::visit(overloaded{[](Step s) { return s.to_string(); }, [](int k) { return std::to_string(k); }}, p);
}

Param coarser(const Param& p) {
    return std::visit(overloaded{[](Step s) -> Param { return s.coarser(); }, [](int k) -> Param { return k - 1; }},
                      p);
}

Param KernelSpec::param() const {
    if (method == Method::Lambert) {
        return depth;
    }
    return step;
}

KernelSpec KernelSpec::with_param(const Param& p) const {
    KernelSpec out = *this;
    if (method == Method::Lambert) {
        if (!std::holds_alternative<int>(p)) {
            throw ConfigError("lambert is parameterized by its depth K");
        }
        out.depth = std::get<int>(p);
    } else {
        if (!std::holds_alternative<Step>(p)) {
            throw ConfigError(std::string(method_name(method)) + " is parameterized by a power-of-two step");
        }
        out.step = std::get<Step>(p);
    }
    return out;
}

std::string KernelSpec::label() const {
    std::string s(method_name(method));
    if (method == Method::Taylor) {
        s += "[" + std::to_string(terms) + "]";
    } else if (method == Method::Velocity && grouped) {
        s += "[grouped]";
    }
    return s;
}

Kernel make_kernel(const KernelSpec& spec) {
    const KernelIo io = spec.io();
    switch (spec.method) {
        case Method::Pwl: return PwlTable::build(spec.step, io);
        case Method::Taylor: return TaylorTable::build(spec.step, spec.terms, io, spec.centering, spec.derivs);
        case Method::CatmullRom: return CrTable::build(spec.step, io);
        case Method::Velocity: {
            VfTable t = VfTable::build(spec.step, io, spec.vf_entry_frac_bits, spec.nr_iters);
            if (spec.grouped) {
                return group_vf(t);
            }
            return t;
        }
        case Method::Lambert: return LambertConfig::make(spec.depth, io, spec.nr_iters);
    }
    throw ConfigError("unknown method");
}

FxValue evaluate(const Kernel& k, const FxValue& x) {
    return std::visit(overloaded{
                          [&](const PwlTable& t) { return eval_pwl(t, x); },
                          [&](const TaylorTable& t) { return eval_taylor(t, x); },
                          [&](const CrTable& t) { return eval_catmullrom(t, x); },
                          [&](const VfTable& t) { return eval_velocity(t, x); },
                          [&](const LambertConfig& c) { return eval_lambert(c, x); },
                      },
                      k);
}

const KernelIo& kernel_io(const Kernel& k) {
    return std::visit(overloaded{
                          [](const LambertConfig& c) -> const KernelIo& { return c.io; },
                          [](const auto& t) -> const KernelIo& { return t.io(); },
                      },
                      k);
}

Method kernel_method(const Kernel& k) {
    return std::visit(overloaded{
                          [](const PwlTable&) { return Method::Pwl; },
                          [](const TaylorTable&) { return Method::Taylor; },
                          [](const CrTable&) { return Method::CatmullRom; },
                          [](const VfTable&) { return Method::Velocity; },
                          [](const LambertConfig&) { return Method::Lambert; },
                      },
                      k);
}

}  // namespace tanhfx
