#include "tanhfx/poly_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace tanhfx {

namespace {

void check_step(Step step, const KernelIo& io) {
    if (step.shift() > io.in_fmt.frac_bits()) {
        throw ConfigError("step " + step.to_string() + " is finer than the input resolution of " +
                          io.in_fmt.to_string());
    }
}

std::size_t cells(Step step, double limit) {
    return static_cast<std::size_t>(std::ceil(std::ldexp(limit, step.shift())));
}

/// quantize(tanh(x)) capped at the clamp code.
std::int64_t tanh_code(double x, const KernelIo& io) {
    return std::min(quantize(tanh_ref(x), io.out_fmt).value.raw, io.clamp_raw);
}

void check_codes(const std::vector<std::int64_t>& codes, QFormat fmt, const char* what) {
    for (auto c : codes) {
        if (c > fmt.max_raw() || c < fmt.min_raw()) {
            throw ConfigError(std::string(what) + " entry " + std::to_string(c) + " does not fit " + fmt.to_string());
        }
    }
}

}  // namespace

TanhDerivs tanh_derivs(double t) {
    if (!(std::fabs(t) <= 1.0)) {
        throw DomainError("tanh_derivs needs |t| <= 1");
    }
    const double t2 = t * t;
    return TanhDerivs{1.0 - t2, 2.0 * (t2 * t - t), -2.0 * (1.0 - 4.0 * t2 + 3.0 * t2 * t2)};
}

// ---------------------------------------------------------------------------
// Piecewise linear

std::size_t PwlTable::knot_count(Step step, double limit) { return cells(step, limit) + 1; }

PwlTable::PwlTable(Step step, KernelIo io, std::vector<std::int64_t> knots)
    : step_(step), io_(std::move(io)), knots_(std::move(knots)) {}

PwlTable PwlTable::build(Step step, const KernelIo& io) {
    check_step(step, io);
    std::vector<std::int64_t> knots(knot_count(step, io.dom.limit));
    for (std::size_t k = 0; k < knots.size(); ++k) {
        knots[k] = tanh_code(static_cast<double>(k) * step.value(), io);
    }
    return PwlTable(step, io, std::move(knots));
}

PwlTable PwlTable::from_entries(Step step, const KernelIo& io, std::vector<std::int64_t> knots) {
    check_step(step, io);
    if (knots.size() != knot_count(step, io.dom.limit)) {
        throw ConfigError("PWL table for step " + step.to_string() + " needs " +
                          std::to_string(knot_count(step, io.dom.limit)) + " knots, got " +
                          std::to_string(knots.size()));
    }
    check_codes(knots, io.out_fmt, "PWL knot");
    if (!std::is_sorted(knots.begin(), knots.end())) {
        throw ConfigError("PWL knots must be non-decreasing");
    }
    return PwlTable(step, io, std::move(knots));
}

FxValue eval_pwl(const PwlTable& tbl, const FxValue& x) {
    return detail::eval_odd(tbl.io(), x, [&](const FxValue& ax) {
        const LutAddress addr = split_address(ax, tbl.step());
        const auto& knots = tbl.knots();
        const auto i = static_cast<std::size_t>(addr.index);
        const std::int64_t a = knots[i];
        const std::int64_t b = knots[std::min(i + 1, knots.size() - 1)];
        // f(a) + (f(b) - f(a)) * t, exact until the one rounding below.
        const __int128 scaled = (static_cast<__int128>(a) << addr.fraction_bits) +
                                static_cast<__int128>(b - a) * addr.fraction_raw;
        return static_cast<std::int64_t>(round_shift(scaled, addr.fraction_bits));
    });
}

// ---------------------------------------------------------------------------
// Taylor

std::size_t TaylorTable::knot_count(Step step, double limit) { return cells(step, limit) + 1; }

TaylorTable::TaylorTable(Step step, int terms, KernelIo io, Centering centering, DerivativeSource source,
                         std::vector<std::vector<std::int64_t>> columns)
    : step_(step),
      terms_(terms),
      io_(std::move(io)),
      centering_(centering),
      source_(source),
      columns_(std::move(columns)) {}

QFormat TaylorTable::coefficient_format() const { return QFormat(1, io_.out_fmt.frac_bits()); }

TaylorTable TaylorTable::build(Step step, int terms, const KernelIo& io, Centering centering,
                               DerivativeSource source) {
    check_step(step, io);
    if (terms < 1 || terms > kMaxTerms) {
        throw ConfigError("Taylor expansion supports 1..4 terms, got " + std::to_string(terms));
    }
    const std::size_t n = knot_count(step, io.dom.limit);
    std::vector<std::vector<std::int64_t>> columns;
    columns.emplace_back(n);
    for (std::size_t k = 0; k < n; ++k) {
        columns[0][k] = tanh_code(static_cast<double>(k) * step.value(), io);
    }
    if (source == DerivativeSource::Stored) {
        const QFormat cfmt(1, io.out_fmt.frac_bits());
        for (int j = 1; j < terms; ++j) {
            columns.emplace_back(n);
        }
        for (std::size_t k = 0; k < n; ++k) {
            const TanhDerivs d = tanh_derivs(tanh_ref(static_cast<double>(k) * step.value()));
            const double c[] = {d.d1, d.d2 / 2.0, d.d3 / 6.0};
            for (int j = 1; j < terms; ++j) {
                columns[static_cast<std::size_t>(j)][k] = quantize(c[j - 1], cfmt).value.raw;
            }
        }
    }
    return TaylorTable(step, terms, io, centering, source, std::move(columns));
}

TaylorTable TaylorTable::from_entries(Step step, int terms, const KernelIo& io, Centering centering,
                                      DerivativeSource source, std::vector<std::vector<std::int64_t>> columns) {
    check_step(step, io);
    if (terms < 1 || terms > kMaxTerms) {
        throw ConfigError("Taylor expansion supports 1..4 terms, got " + std::to_string(terms));
    }
    const std::size_t want_cols = source == DerivativeSource::Stored ? static_cast<std::size_t>(terms) : 1;
    if (columns.size() != want_cols) {
        throw ConfigError("Taylor table needs " + std::to_string(want_cols) + " columns, got " +
                          std::to_string(columns.size()));
    }
    const std::size_t n = knot_count(step, io.dom.limit);
    const QFormat cfmt(1, io.out_fmt.frac_bits());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != n) {
            throw ConfigError("Taylor table column " + std::to_string(j) + " needs " + std::to_string(n) +
                              " entries, got " + std::to_string(columns[j].size()));
        }
        check_codes(columns[j], j == 0 ? io.out_fmt : cfmt, "Taylor");
    }
    return TaylorTable(step, terms, io, centering, source, std::move(columns));
}

std::vector<Wide> TaylorTable::coefficients(std::size_t index) const {
    const int f = io_.out_fmt.frac_bits();
    const Wide t = Wide::from_ratio(columns_[0][index], f);
    std::vector<Wide> c;
    c.reserve(static_cast<std::size_t>(terms_));
    c.push_back(t);
    if (terms_ == 1) {
        return c;
    }
    if (source_ == DerivativeSource::Stored) {
        for (int j = 1; j < terms_; ++j) {
            c.push_back(Wide::from_ratio(columns_[static_cast<std::size_t>(j)][index], f));
        }
        return c;
    }
    const Wide one = Wide::from_int(1);
    const Wide t2 = t * t;
    c.push_back(one - t2);  // f'
    if (terms_ >= 3) {
        c.push_back(t2 * t - t);  // f''/2 = t^3 - t
    }
    if (terms_ >= 4) {
        // f'''/6 = -(1 - 4t^2 + 3t^4)/3
        c.push_back((-(one - t2 * 4 + (t2 * t2) * 3)).div_int(3));
    }
    return c;
}

FxValue eval_taylor(const TaylorTable& tbl, const FxValue& x) {
    return detail::eval_odd(tbl.io(), x, [&](const FxValue& ax) {
        const int lsbs = ax.fmt.frac_bits() - tbl.step().shift();
        std::int64_t index = 0;
        if (tbl.centering() == Centering::Nearest && lsbs > 0) {
            index = (ax.raw + (std::int64_t{1} << (lsbs - 1))) >> lsbs;
        } else {
            index = ax.raw >> lsbs;
        }
        const std::int64_t delta_raw = ax.raw - (index << lsbs);
        const Wide delta = Wide::from_ratio(delta_raw, ax.fmt.frac_bits());
        const auto c = tbl.coefficients(static_cast<std::size_t>(index));
        // Horner: c0 + d(c1 + d(c2 + d c3))
        Wide acc = c.back();
        for (auto j = c.size() - 1; j-- > 0;) {
            acc = c[j] + delta * acc;
        }
        return acc.to_fx(tbl.io().out_fmt).value.raw;
    });
}

// ---------------------------------------------------------------------------
// Catmull-Rom

CatmullRomWeights catmull_rom_weights(Wide t) {
    const Wide t2 = t * t;
    const Wide t3 = t2 * t;
    const Wide two = Wide::from_int(2);
    // The halving is exact whenever t carries fewer than 16 fraction bits.
    return CatmullRomWeights{{
        (-t3 + t2 * 2 - t).div_int(2),
        (t3 * 3 - t2 * 5 + two).div_int(2),
        (-(t3 * 3) + t2 * 4 + t).div_int(2),
        (t3 - t2).div_int(2),
    }};
}

std::size_t CrTable::point_count(Step step, double limit) { return cells(step, limit) + 4; }

CrTable::CrTable(Step step, KernelIo io, std::vector<std::int64_t> points)
    : step_(step), io_(std::move(io)), points_(std::move(points)) {}

CrTable CrTable::build(Step step, const KernelIo& io) {
    check_step(step, io);
    const std::size_t n = point_count(step, io.dom.limit);
    std::vector<std::int64_t> points(n);
    for (std::size_t k = 1; k < n; ++k) {
        points[k] = tanh_code(static_cast<double>(k - 1) * step.value(), io);
    }
    points[0] = -points[2];
    return CrTable(step, io, std::move(points));
}

CrTable CrTable::from_entries(Step step, const KernelIo& io, std::vector<std::int64_t> points) {
    check_step(step, io);
    if (points.size() != point_count(step, io.dom.limit)) {
        throw ConfigError("Catmull-Rom table for step " + step.to_string() + " needs " +
                          std::to_string(point_count(step, io.dom.limit)) + " control points, got " +
                          std::to_string(points.size()));
    }
    check_codes(points, io.out_fmt, "Catmull-Rom control point");
    if (points[0] != -points[2]) {
        throw ConfigError("Catmull-Rom P_-1 must equal -P_1");
    }
    return CrTable(step, io, std::move(points));
}

FxValue eval_catmullrom(const CrTable& tbl, const FxValue& x) {
    return detail::eval_odd(tbl.io(), x, [&](const FxValue& ax) {
        const LutAddress addr = split_address(ax, tbl.step());
        const CatmullRomWeights tv = catmull_rom_weights(Wide::from_ratio(addr.fraction_raw, addr.fraction_bits));
        const int f = tbl.io().out_fmt.frac_bits();
        Wide acc;
        for (int j = 0; j < 4; ++j) {
            acc = acc + Wide::from_ratio(tbl.point(addr.index - 1 + j), f) * tv.w[j];
        }
        return acc.to_fx(tbl.io().out_fmt).value.raw;
    });
}

}  // namespace tanhfx
