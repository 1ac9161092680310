#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tanhfx {

/// Raised when an operation is called outside its mathematical domain
/// (negative LUT address, non-positive divisor, ...).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Raised when a format, table or kernel configuration is invalid.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Signed two's-complement layout: one sign bit, `int_bits` integer bits and
/// `frac_bits` fractional bits. Written `S<int>.<frac>`, with the integer
/// count omitted when zero (`S.15`).
class QFormat {
  public:
    static constexpr int kMinTotalBits = 4;
    static constexpr int kMaxTotalBits = 32;

    constexpr QFormat() = default;
    QFormat(int int_bits, int frac_bits);

    static QFormat parse(std::string_view text);
    std::string to_string() const;

    constexpr int int_bits() const { return int_bits_; }
    constexpr int frac_bits() const { return frac_bits_; }
    constexpr int total_bits() const { return 1 + int_bits_ + frac_bits_; }

    constexpr std::int64_t max_raw() const { return (std::int64_t{1} << (total_bits() - 1)) - 1; }
    constexpr std::int64_t min_raw() const { return -(std::int64_t{1} << (total_bits() - 1)); }

    /// Value of one least significant bit, 2^-frac_bits.
    double ulp() const;

    friend constexpr bool operator==(QFormat, QFormat) = default;

  private:
    int int_bits_ = 0;
    int frac_bits_ = 15;
};

enum class RoundMode {
    NearestTiesAway,  // +half then truncate magnitude; the default everywhere
    NearestEven,
    TowardZero,
    Floor,
};

/// Bit-exact fixed-point value. The real value is raw * 2^-frac_bits.
struct FxValue {
    std::int64_t raw = 0;
    QFormat fmt{};

    friend constexpr bool operator==(const FxValue&, const FxValue&) = default;
};

/// Result of a rounding/saturating operation. Saturation is never an error;
/// it is reported here instead.
struct FxResult {
    FxValue value;
    bool saturated = false;
};

FxResult quantize(double x, QFormat fmt, RoundMode mode = RoundMode::NearestTiesAway);
double dequantize(const FxValue& v);

/// Builds a value from a raw code, rejecting codes outside the format.
FxValue from_raw(std::int64_t raw, QFormat fmt);

/// Full-width product followed by a single rounding into `out_fmt`.
FxResult mul_round(const FxValue& a, const FxValue& b, QFormat out_fmt,
                   RoundMode mode = RoundMode::NearestTiesAway);

/// Saturating addition. Both operands must share a format.
FxResult sat_add(const FxValue& a, const FxValue& b);

/// Negation; the most negative code saturates to the most positive one.
FxResult negate(const FxValue& v);

/// Clamps `raw` into `fmt`'s code range.
FxResult saturate(__int128 raw, QFormat fmt);

/// Divides a signed integer by 2^shift with the given rounding. A negative
/// shift multiplies exactly.
__int128 round_shift(__int128 value, int shift, RoundMode mode = RoundMode::NearestTiesAway);

/// A power-of-two step 2^-shift. Steps are never decimals; see parse().
class Step {
  public:
    constexpr Step() = default;
    explicit Step(int shift);

    /// Accepts `1/64`, `2^-6` and `1`.
    static Step parse(std::string_view text);
    std::string to_string() const;

    constexpr int shift() const { return shift_; }
    double value() const;

    /// Next coarser step (twice as large).
    Step coarser() const { return Step(shift_ - 1); }
    Step finer() const { return Step(shift_ + 1); }

    friend constexpr auto operator<=>(Step, Step) = default;

  private:
    int shift_ = 0;
};

/// An input split into LUT address (msbs) and interpolation fraction (lsbs).
/// The fraction is `fraction_raw / 2^fraction_bits`.
struct LutAddress {
    std::int64_t index = 0;
    std::int64_t fraction_raw = 0;
    int fraction_bits = 0;

    double fraction() const;
    /// (index + fraction) * step, exact for every representable split.
    double reconstruct(Step step) const;
};

/// Shift/mask split of a nonnegative value. Throws DomainError for negative
/// values and ConfigError when the step is finer than the format's ulp.
LutAddress split_address(const FxValue& v, Step step);

/// Wide signed fixed-point accumulator used inside kernels: 48 fractional
/// bits in a 128-bit integer. Additions are exact, products round once to
/// 48 bits, and the only rounding to an output format is `to_fx`.
class Wide {
  public:
    static constexpr int kFracBits = 48;

    constexpr Wide() = default;

    static Wide from_fx(const FxValue& v);
    static Wide from_ratio(std::int64_t num, int den_shift);
    static Wide from_int(std::int64_t v);

    constexpr __int128 raw() const { return raw_; }
    double to_double() const;
    FxResult to_fx(QFormat fmt, RoundMode mode = RoundMode::NearestTiesAway) const;

    friend Wide operator+(Wide a, Wide b) { return Wide(a.raw_ + b.raw_); }
    friend Wide operator-(Wide a, Wide b) { return Wide(a.raw_ - b.raw_); }
    friend Wide operator-(Wide a) { return Wide(-a.raw_); }
    friend Wide operator*(Wide a, Wide b);
    friend Wide operator*(Wide a, std::int64_t k) { return Wide(a.raw_ * k); }
    /// Division by a small positive integer, rounded to nearest.
    Wide div_int(std::int64_t d) const;

    friend constexpr bool operator==(Wide, Wide) = default;

  private:
    explicit constexpr Wide(__int128 raw) : raw_(raw) {}
    __int128 raw_ = 0;
};

}  // namespace tanhfx
