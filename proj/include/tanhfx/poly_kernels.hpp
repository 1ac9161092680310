#pragma once

#include <cstdint>
#include <vector>

#include "tanhfx/fixedpoint.hpp"
#include "tanhfx/kernel_io.hpp"

namespace tanhfx {

/// First three derivatives of tanh written in terms of t = tanh(x).
struct TanhDerivs {
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;
};

/// d1 = 1 - t^2, d2 = 2(t^3 - t), d3 = -2(1 - 4t^2 + 3t^4). Requires |t| <= 1.
TanhDerivs tanh_derivs(double t);

/// Piecewise linear interpolation over a uniform knot grid on [0, limit].
/// Knot k holds quantize(tanh(k * step)) in the output format, capped at the
/// clamp code.
class PwlTable {
  public:
    static PwlTable build(Step step, const KernelIo& io);
    /// Rebuilds a table from exported entries; validates count, range and
    /// monotonicity.
    static PwlTable from_entries(Step step, const KernelIo& io, std::vector<std::int64_t> knots);

    static std::size_t knot_count(Step step, double limit);

    Step step() const { return step_; }
    const KernelIo& io() const { return io_; }
    const std::vector<std::int64_t>& knots() const { return knots_; }

  private:
    PwlTable(Step step, KernelIo io, std::vector<std::int64_t> knots);

    Step step_;
    KernelIo io_;
    std::vector<std::int64_t> knots_;
};

FxValue eval_pwl(const PwlTable& tbl, const FxValue& x);

/// How the expansion point h is chosen from |x|.
enum class Centering {
    Nearest,   // nearest knot, |x - h| <= step/2
    Truncate,  // knot at or below |x|, the msb-only address
};

/// Where the Taylor coefficients come from.
enum class DerivativeSource {
    Runtime,  // only tanh(h) is stored; derivatives follow from tanh_derivs
    Stored,   // f'(h), f''(h)/2, f'''(h)/6 are stored next to tanh(h)
};

/// Truncated Taylor expansion of tanh about uniformly spaced knots, using
/// `terms` coefficients (3 = quadratic, 4 = cubic).
class TaylorTable {
  public:
    static constexpr int kMaxTerms = 4;

    static TaylorTable build(Step step, int terms, const KernelIo& io, Centering centering = Centering::Nearest,
                             DerivativeSource source = DerivativeSource::Runtime);
    /// `columns[0]` holds the knots; for stored derivatives `columns[j]`
    /// holds coefficient j in coefficient_format().
    static TaylorTable from_entries(Step step, int terms, const KernelIo& io, Centering centering,
                                    DerivativeSource source, std::vector<std::vector<std::int64_t>> columns);

    static std::size_t knot_count(Step step, double limit);

    Step step() const { return step_; }
    int terms() const { return terms_; }
    Centering centering() const { return centering_; }
    DerivativeSource source() const { return source_; }
    const KernelIo& io() const { return io_; }
    const std::vector<std::int64_t>& knots() const { return columns_.front(); }
    const std::vector<std::vector<std::int64_t>>& columns() const { return columns_; }
    /// Format of stored coefficients: the output precision plus one
    /// integer bit so that f'(0) = 1 fits.
    QFormat coefficient_format() const;

    /// Coefficients c0..c(terms-1) of the expansion about knot `index`.
    std::vector<Wide> coefficients(std::size_t index) const;

  private:
    TaylorTable(Step step, int terms, KernelIo io, Centering centering, DerivativeSource source,
                std::vector<std::vector<std::int64_t>> columns);

    Step step_;
    int terms_;
    KernelIo io_;
    Centering centering_;
    DerivativeSource source_;
    std::vector<std::vector<std::int64_t>> columns_;
};

FxValue eval_taylor(const TaylorTable& tbl, const FxValue& x);

/// The four cubic Catmull-Rom basis polynomials at t, already halved:
/// (-t^3+2t^2-t, 3t^3-5t^2+2, -3t^3+4t^2+t, t^3-t^2) / 2.
struct CatmullRomWeights {
    Wide w[4];
};
CatmullRomWeights catmull_rom_weights(Wide t);

/// Uniform cubic Catmull-Rom spline. Control points P_i = tanh(i * step) for
/// i = -1 .. N+2 with P_-1 = -P_1 (odd extension) and points past the domain
/// capped at the clamp code. Stored with offset one: points()[0] is P_-1.
class CrTable {
  public:
    static CrTable build(Step step, const KernelIo& io);
    static CrTable from_entries(Step step, const KernelIo& io, std::vector<std::int64_t> points);

    static std::size_t point_count(Step step, double limit);

    Step step() const { return step_; }
    const KernelIo& io() const { return io_; }
    const std::vector<std::int64_t>& points() const { return points_; }
    /// P_i for i >= -1.
    std::int64_t point(std::int64_t i) const { return points_[static_cast<std::size_t>(i + 1)]; }

  private:
    CrTable(Step step, KernelIo io, std::vector<std::int64_t> points);

    Step step_;
    KernelIo io_;
    std::vector<std::int64_t> points_;
};

FxValue eval_catmullrom(const CrTable& tbl, const FxValue& x);

}  // namespace tanhfx
