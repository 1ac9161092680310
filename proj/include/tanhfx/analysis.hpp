#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tanhfx/kernel.hpp"

namespace tanhfx {

/// Error statistics of one exhaustive sweep against ideal_output.
struct ErrorReport {
    double max_abs_err = 0.0;
    double argmax_input = 0.0;
    double mse = 0.0;
    double rmse = 0.0;
    std::size_t n_points = 0;
    bool clamp_region_included = true;
};

struct SweepOptions {
    /// Count points with |x| >= limit (the clamped region) in the statistics.
    bool include_clamp_region = true;
    /// Swept half-width; defaults to the kernel's domain limit.
    std::optional<double> range;
    /// 0 picks the hardware concurrency. Results do not depend on it.
    unsigned workers = 0;
};

using Evaluator = std::function<FxValue(const FxValue&)>;

/// Visits every code x of `in_fmt` with |x| <= range and measures
/// |dequantize(f(x)) - ideal_output(x, dom)|. Codes are processed in fixed
/// chunks combined in index order, so any worker count gives the same bits.
ErrorReport sweep_error(const Evaluator& f, QFormat in_fmt, const DomainSpec& dom, const SweepOptions& opts = {});
ErrorReport sweep_error(const Kernel& kernel, const SweepOptions& opts = {});

struct SweepPoint {
    Param param;
    ErrorReport report;
};

/// One sweep per parameter, in input order. Parameters must be strictly
/// ordered (all refining or all coarsening).
std::vector<SweepPoint> sweep_parameter(const KernelSpec& base, const std::vector<Param>& params,
                                        const SweepOptions& opts = {});

/// Published Table-1 style row and what the sweep measured for it.
struct Table1Row {
    std::string id;
    KernelSpec spec;
    double published_max = 0.0;
    /// The published column labelled MSE.
    double published_mse_column = 0.0;
    ErrorReport measured;
    bool max_within = false;
    bool rmse_within = false;
    bool mse_within = false;
    std::string note;
};

constexpr double kTable1Tolerance = 0.25;

bool within_relative(double measured, double published, double tolerance);

/// The six reference configurations (S3.12 in, S.15 out, range 6).
std::vector<Table1Row> table1_rows();
std::vector<Table1Row> reproduce_table1(const SweepOptions& opts = {});

/// Parameters tried by calibrate(), coarse to fine: steps 1/4 .. 1/1024 not
/// finer than the input resolution, or K = 1 .. 16.
std::vector<Param> param_ladder(const KernelSpec& base);

/// Ladder distance between two parameters of the same kind.
int ladder_distance(const Param& a, const Param& b);

struct CalibrationResult {
    KernelSpec spec;
    Param param;
    double achieved_max_err = 0.0;
    double target = 0.0;
    /// Max error at the next coarser ladder entry, if there is one.
    std::optional<double> coarser_max_err;
};

class CalibrationError : public std::runtime_error {
  public:
    CalibrationError(const std::string& what, Param best_param, double best_err)
        : std::runtime_error(what), best_param(best_param), best_err(best_err) {}

    Param best_param;
    double best_err;
};

/// First (coarsest) ladder entry whose max error is <= target.
CalibrationResult calibrate(const KernelSpec& base, double target, const SweepOptions& opts = {});

/// One cell of the precision/range calibration table.
struct Table3Cell {
    std::string row;     // e.g. "S3.12 -> S.15, +-6"
    std::string column;  // A, B1, B2, C, D, E
    KernelSpec base;
    Param published;
};

std::vector<Table3Cell> table3_cells();

/// Calibration of one cell under both ulp readings.
struct Table3Outcome {
    Table3Cell cell;
    std::optional<CalibrationResult> input_ulp;
    std::optional<CalibrationResult> output_ulp;
    /// Max error measured at the published parameter.
    double published_max_err = 0.0;
    bool exact = false;
    /// Smallest ladder distance from the published parameter over both readings.
    int distance = 0;
};

std::vector<Table3Outcome> reproduce_table3(const SweepOptions& opts = {});

/// Shortest decimal that parses back to the same double.
std::string format_real(double v);

std::string sweep_csv_header();
std::string sweep_csv_row(const KernelSpec& spec, const Param& param, const ErrorReport& r);

}  // namespace tanhfx
