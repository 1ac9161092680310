#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tanhfx/kernel.hpp"

namespace tanhfx {

/// Table entries of one kernel plus the parameters needed to rebuild it.
/// Entries are stored in address order; multi-column tables (stored Taylor
/// coefficients) are laid out column after column.
struct LutArtifact {
    std::map<std::string, std::string> meta;
    int width = 16;          // bits per entry
    bool is_signed = true;   // two's complement when true
    std::vector<std::int64_t> entries;
};

/// Throws ConfigError for kernels without a table (lambert).
LutArtifact export_lut(const Kernel& kernel);
Kernel kernel_from_artifact(const LutArtifact& art);

/// One entry per line as fixed-width uppercase hex, preceded by `//` header
/// lines of `key: value` pairs. Readable by $readmemh-style loaders.
std::string write_hex(const LutArtifact& art);
LutArtifact read_hex(std::string_view text);

/// C header with a const array plus WIDTH / COUNT / FORMAT macros.
std::string write_cheader(const LutArtifact& art, std::string_view symbol);

/// `index,raw,value` rows.
std::string write_lut_csv(const LutArtifact& art);

}  // namespace tanhfx
