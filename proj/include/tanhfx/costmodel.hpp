#pragma once

#include <string>
#include <vector>

#include "tanhfx/kernel.hpp"

namespace tanhfx {

/// Arithmetic units and storage of one datapath block.
struct CostBlock {
    std::string name;
    int adders = 0;
    int multipliers = 0;
    int squarers = 0;
    int dividers = 0;
    long lut_entries = 0;
};

/// Symbolic resource tally for one configuration. Totals are the sums over
/// `blocks`; `lut_entries` is always a multiple of `lut_banks`.
struct CostReport {
    int adders = 0;
    int multipliers = 0;
    int squarers = 0;
    int dividers = 0;
    long lut_entries = 0;
    int lut_banks = 1;
    int pipeline_stages = 0;
    std::string notes;
    std::vector<CostBlock> blocks;

    const CostBlock* block(const std::string& name) const;
};

/// Interpolation vector of the Catmull-Rom datapath: computed by cubic
/// polynomial logic or read from a second table indexed by t.
enum class TVectorSource { Computed, Stored };

struct CostOptions {
    TVectorSource cr_tvector = TVectorSource::Computed;
};

/// Closed-form unit counts. Only the positive half-range [0, limit) is
/// stored since the sign is handled by odd symmetry.
CostReport cost_of(const KernelSpec& spec, const CostOptions& opts = {});

std::string cost_csv_header();
std::string cost_csv_row(const KernelSpec& spec, const CostReport& r);

}  // namespace tanhfx
