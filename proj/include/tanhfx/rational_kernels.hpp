#pragma once

#include <cstdint>
#include <vector>

#include "tanhfx/fixedpoint.hpp"
#include "tanhfx/kernel_io.hpp"

namespace tanhfx {

/// f_a = (1 + tanh a) / (1 - tanh a); equals e^(2a).
double velocity_factor(double a);
/// tanh a = (f - 1) / (f + 1), by plain division. Requires f > 0.
double vf_to_tanh(double f);

/// Newton-Raphson reciprocal. The divisor is normalized to m * 2^e with
/// m in [0.5, 1), seeded with 48/17 - 32/17 m and refined with
/// y <- y (2 - m y). Exact powers of two are returned exactly.
double reciprocal_nr(double d, int iters = 3);

/// Per-iteration estimates of 1/d (index 0 is the seed), for convergence
/// studies.
std::vector<double> reciprocal_nr_trace(double d, int iters);

/// Velocity-factor lookup for the bits of |x| at or above the threshold
/// 2^-m. Entries are unsigned fixed point with entry_frac_bits() fraction
/// bits. Ungrouped tables hold f(2^k) for k = -m .. top_bit(); grouped tables
/// hold four entries per pair of bits, indexed by the pair value
/// ("00" -> 1, "01" -> lsb factor, "10" -> msb factor, "11" -> product).
class VfTable {
  public:
    static constexpr int kDefaultEntryFracBits = 20;

    static VfTable build(Step threshold, const KernelIo& io, int entry_frac_bits = kDefaultEntryFracBits,
                         int nr_iters = 3);
    static VfTable from_entries(Step threshold, const KernelIo& io, bool grouped, int entry_frac_bits,
                                std::vector<std::uint64_t> entries, int nr_iters = 3);

    /// Highest stored bit for a domain: the smallest k with limit <= 2^(k+1).
    static int top_bit_for(double limit);

    Step threshold() const { return threshold_; }
    int lowest_bit() const { return -threshold_.shift(); }
    int top_bit() const { return top_bit_; }
    /// Number of input bits covered by the table (top_bit - lowest_bit + 1).
    int bit_count() const { return top_bit_ - lowest_bit() + 1; }
    bool grouped() const { return grouped_; }
    /// Bits consumed per lookup: 1 ungrouped, 2 grouped.
    int bits_per_lookup() const { return grouped_ ? 2 : 1; }
    int entry_frac_bits() const { return entry_frac_bits_; }
    /// Integer bits needed by the largest entry.
    int entry_int_bits() const;
    int nr_iters() const { return nr_iters_; }
    const KernelIo& io() const { return io_; }
    const std::vector<std::uint64_t>& entries() const { return entries_; }
    /// Entry value as a real.
    double entry_value(std::size_t i) const;

  private:
    VfTable(Step threshold, int top_bit, bool grouped, int entry_frac_bits, int nr_iters, KernelIo io,
            std::vector<std::uint64_t> entries);

    Step threshold_;
    int top_bit_;
    bool grouped_;
    int entry_frac_bits_;
    int nr_iters_;
    KernelIo io_;
    std::vector<std::uint64_t> entries_;
};

/// Pairs adjacent bits into 4-entry groups. Throws ConfigError for an odd
/// bit count or an already grouped table.
VfTable group_vf(const VfTable& tbl);

/// Exact product of the velocity factors selected by |x|'s bits, as a real.
double vf_product(const VfTable& tbl, const FxValue& magnitude);

/// tanh(a + r) to first order in r from t = tanh a: t + r (1 - t^2).
double refine_residual(double t, double r);

FxValue eval_velocity(const VfTable& tbl, const FxValue& x);

/// Truncation depth K of Lambert's continued fraction, with K in [1, 16].
struct LambertConfig {
    static constexpr int kMaxDepth = 16;

    int depth = 7;
    KernelIo io{};
    int nr_iters = 3;

    static LambertConfig make(int depth, const KernelIo& io, int nr_iters = 3);
};

/// Running pair (T_{n-1}, T_n) of the Lambert recurrence.
struct RecurrenceState {
    double t_prev = 1.0;
    double t_curr = 0.0;
};

/// T_-1 = 1, T_0 = 2K + 1, T_n = (2K + 1 - 2n) T_{n-1} + x^2 T_{n-2} for
/// n = 1..K. Returns (T_{K-1}, T_K).
RecurrenceState lambert_recurrence(double x, int depth);

/// x T_{K-1} / T_K in double precision with plain division.
double lambert_value(double x, int depth);

FxValue eval_lambert(const LambertConfig& cfg, const FxValue& x);

}  // namespace tanhfx
