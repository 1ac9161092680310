#include "tanhfx/fixedpoint.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace tanhfx {

namespace {

int parse_int(std::string_view text, std::string_view what) {
    int value = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || text.empty()) {
        throw ConfigError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
    }
    return value;
}

__int128 abs128(__int128 v) { return v < 0 ? -v : v; }

}  // namespace

QFormat::QFormat(int int_bits, int frac_bits) : int_bits_(int_bits), frac_bits_(frac_bits) {
    if (int_bits < 0 || frac_bits < 0) {
        throw ConfigError("fixed-point format needs nonnegative bit counts");
    }
    const int total = total_bits();
    if (total < kMinTotalBits || total > kMaxTotalBits) {
        throw ConfigError("fixed-point format " + to_string() + " has " + std::to_string(total) +
                          " bits; supported widths are 4..32");
    }
}

QFormat QFormat::parse(std::string_view text) {
    if (text.size() < 3 || (text[0] != 'S' && text[0] != 's')) {
        throw ConfigError("format must look like S<int>.<frac>, got '" + std::string(text) + "'");
    }
    const auto dot = text.find('.');
    if (dot == std::string_view::npos) {
        throw ConfigError("format must look like S<int>.<frac>, got '" + std::string(text) + "'");
    }
    const auto int_part = text.substr(1, dot - 1);
    const auto frac_part = text.substr(dot + 1);
    const int int_bits = int_part.empty() ? 0 : parse_int(int_part, "integer bit count");
    const int frac_bits = parse_int(frac_part, "fraction bit count");
    return QFormat(int_bits, frac_bits);
}

std::string QFormat::to_string() const {
    std::string s = "S";
    if (int_bits_ != 0) {
        s += std::to_string(int_bits_);
    }
    s += '.';
    s += std::to_string(frac_bits_);
    return s;
}

double QFormat::ulp() const { return std::ldexp(1.0, -frac_bits_); }

__int128 round_shift(__int128 value, int shift, RoundMode mode) {
    if (shift <= 0) {
        return value << -shift;
    }
    const __int128 one = 1;
    switch (mode) {
        case RoundMode::NearestTiesAway: {
            const __int128 mag = (abs128(value) + (one << (shift - 1))) >> shift;
            return value < 0 ? -mag : mag;
        }
        case RoundMode::NearestEven: {
            __int128 q = value >> shift;
            const __int128 rem = value - (q << shift);
            const __int128 half = one << (shift - 1);
            if (rem > half || (rem == half && (q & 1) != 0)) {
                ++q;
            }
            return q;
        }
        case RoundMode::TowardZero: {
            const __int128 mag = abs128(value) >> shift;
            return value < 0 ? -mag : mag;
        }
        case RoundMode::Floor:
            return value >> shift;
    }
    return value >> shift;
}

FxResult saturate(__int128 raw, QFormat fmt) {
    if (raw > fmt.max_raw()) {
        return {FxValue{fmt.max_raw(), fmt}, true};
    }
    if (raw < fmt.min_raw()) {
        return {FxValue{fmt.min_raw(), fmt}, true};
    }
    return {FxValue{static_cast<std::int64_t>(raw), fmt}, false};
}

FxResult quantize(double x, QFormat fmt, RoundMode mode) {
    if (std::isnan(x)) {
        throw DomainError("cannot quantize NaN");
    }
    const double scaled = std::ldexp(x, fmt.frac_bits());
    double r = 0.0;
    switch (mode) {
        case RoundMode::NearestTiesAway: r = std::round(scaled); break;
        case RoundMode::NearestEven: r = std::nearbyint(scaled); break;
        case RoundMode::TowardZero: r = std::trunc(scaled); break;
        case RoundMode::Floor: r = std::floor(scaled); break;
    }
    if (r > static_cast<double>(fmt.max_raw())) {
        return {FxValue{fmt.max_raw(), fmt}, true};
    }
    if (r < static_cast<double>(fmt.min_raw())) {
        return {FxValue{fmt.min_raw(), fmt}, true};
    }
    return {FxValue{static_cast<std::int64_t>(r), fmt}, false};
}

double dequantize(const FxValue& v) { return std::ldexp(static_cast<double>(v.raw), -v.fmt.frac_bits()); }

FxValue from_raw(std::int64_t raw, QFormat fmt) {
    if (raw > fmt.max_raw() || raw < fmt.min_raw()) {
        throw ConfigError("raw code " + std::to_string(raw) + " does not fit " + fmt.to_string());
    }
    return FxValue{raw, fmt};
}

FxResult mul_round(const FxValue& a, const FxValue& b, QFormat out_fmt, RoundMode mode) {
    const __int128 product = static_cast<__int128>(a.raw) * b.raw;
    const int shift = a.fmt.frac_bits() + b.fmt.frac_bits() - out_fmt.frac_bits();
    return saturate(round_shift(product, shift, mode), out_fmt);
}

FxResult sat_add(const FxValue& a, const FxValue& b) {
    if (a.fmt != b.fmt) {
        throw ConfigError("sat_add operands differ in format: " + a.fmt.to_string() + " vs " +
                          b.fmt.to_string());
    }
    return saturate(static_cast<__int128>(a.raw) + b.raw, a.fmt);
}

FxResult negate(const FxValue& v) { return saturate(-static_cast<__int128>(v.raw), v.fmt); }

Step::Step(int shift) : shift_(shift) {
    if (shift < 0 || shift > 31) {
        throw ConfigError("step 2^-" + std::to_string(shift) + " outside the supported range 1 .. 2^-31");
    }
}

Step Step::parse(std::string_view text) {
    if (text == "1") {
        return Step(0);
    }
    if (text.starts_with("1/")) {
        const auto den_text = text.substr(2);
        long long den = 0;
        auto [ptr, ec] = std::from_chars(den_text.data(), den_text.data() + den_text.size(), den);
        if (ec != std::errc{} || ptr != den_text.data() + den_text.size() || den <= 0 ||
            (den & (den - 1)) != 0) {
            throw ConfigError("step must be 1/<power of two>, got '" + std::string(text) + "'");
        }
        int shift = 0;
        while ((1LL << shift) < den) {
            ++shift;
        }
        return Step(shift);
    }
    if (text.starts_with("2^-")) {
        return Step(parse_int(text.substr(3), "step exponent"));
    }
    if (text == "2^0") {
        return Step(0);
    }
    throw ConfigError("step must be written as 1/<2^n> or 2^-n, got '" + std::string(text) + "'");
}

std::string Step::to_string() const {
    if (shift_ == 0) {
        return "1";
    }
    return "1/" + std::to_string(1LL << shift_);
}

double Step::value() const { return std::ldexp(1.0, -shift_); }

double LutAddress::fraction() const { return std::ldexp(static_cast<double>(fraction_raw), -fraction_bits); }

double LutAddress::reconstruct(Step step) const {
    return std::ldexp(static_cast<double>(index), -step.shift()) +
           std::ldexp(static_cast<double>(fraction_raw), -(fraction_bits + step.shift()));
}

LutAddress split_address(const FxValue& v, Step step) {
    if (v.raw < 0) {
        throw DomainError("split_address needs a nonnegative input; apply odd symmetry first");
    }
    const int lsbs = v.fmt.frac_bits() - step.shift();
    if (lsbs < 0) {
        throw ConfigError("step " + step.to_string() + " is finer than the resolution of " + v.fmt.to_string());
    }
    const std::int64_t mask = (std::int64_t{1} << lsbs) - 1;
    return LutAddress{v.raw >> lsbs, v.raw & mask, lsbs};
}

Wide Wide::from_fx(const FxValue& v) { return from_ratio(v.raw, v.fmt.frac_bits()); }

Wide Wide::from_ratio(std::int64_t num, int den_shift) {
    return Wide(round_shift(static_cast<__int128>(num), den_shift - kFracBits));
}

Wide Wide::from_int(std::int64_t v) { return Wide(static_cast<__int128>(v) << kFracBits); }

double Wide::to_double() const { return std::ldexp(static_cast<double>(raw_), -kFracBits); }

FxResult Wide::to_fx(QFormat fmt, RoundMode mode) const {
    return saturate(round_shift(raw_, kFracBits - fmt.frac_bits(), mode), fmt);
}

Wide operator*(Wide a, Wide b) { return Wide(round_shift(a.raw_ * b.raw_, Wide::kFracBits)); }

Wide Wide::div_int(std::int64_t d) const {
    if (d <= 0) {
        throw DomainError("Wide::div_int needs a positive divisor");
    }
    const __int128 mag = (abs128(raw_) + d / 2) / d;
    return Wide(raw_ < 0 ? -mag : mag);
}

}  // namespace tanhfx
