#include "tanhfx/lut_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "tanhfx/analysis.hpp"

namespace tanhfx {

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

void put_io(LutArtifact& art, const KernelIo& io) {
    art.meta["in_fmt"] = io.in_fmt.to_string();
    art.meta["out_fmt"] = io.out_fmt.to_string();
    art.meta["limit"] = format_real(io.dom.limit);
}

const std::string& require(const LutArtifact& art, const std::string& key) {
    auto it = art.meta.find(key);
    if (it == art.meta.end()) {
        throw ConfigError("LUT artifact is missing '" + key + "'");
    }
    return it->second;
}

int meta_int(const LutArtifact& art, const std::string& key) {
    const auto& v = require(art, key);
    int out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError("LUT artifact field '" + key + "' is not an integer: '" + v + "'");
    }
    return out;
}

double meta_real(const LutArtifact& art, const std::string& key) {
    const auto& v = require(art, key);
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError("LUT artifact field '" + key + "' is not a number: '" + v + "'");
    }
    return out;
}

KernelIo io_from(const LutArtifact& art) {
    return KernelIo::make(QFormat::parse(require(art, "in_fmt")), QFormat::parse(require(art, "out_fmt")),
                          meta_real(art, "limit"));
}

std::vector<std::int64_t> slice(const std::vector<std::int64_t>& v, std::size_t begin, std::size_t count) {
    if (begin + count > v.size()) {
        throw ConfigError("LUT artifact has too few entries");
    }
    return {v.begin() + static_cast<std::ptrdiff_t>(begin), v.begin() + static_cast<std::ptrdiff_t>(begin + count)};
}

std::string entry_format_string(bool is_signed, int int_bits, int frac_bits) {
    return (is_signed ? "S" : "U") + (int_bits != 0 ? std::to_string(int_bits) : std::string()) + "." +
           std::to_string(frac_bits);
}

}  // namespace

LutArtifact export_lut(const Kernel& kernel) {
    LutArtifact art;
    std::visit(overloaded{
                   [&](const PwlTable& t) {
                       art.meta["method"] = "pwl";
                       art.meta["step"] = t.step().to_string();
                       put_io(art, t.io());
                       art.width = t.io().out_fmt.total_bits();
                       art.meta["frac_bits"] = std::to_string(t.io().out_fmt.frac_bits());
                       art.meta["entry_format"] = t.io().out_fmt.to_string();
                       art.entries = t.knots();
                   },
                   [&](const TaylorTable& t) {
                       art.meta["method"] = "taylor";
                       art.meta["step"] = t.step().to_string();
                       art.meta["terms"] = std::to_string(t.terms());
                       art.meta["centering"] = t.centering() == Centering::Nearest ? "nearest" : "truncate";
                       art.meta["derivs"] = t.source() == DerivativeSource::Runtime ? "runtime" : "stored";
                       put_io(art, t.io());
                       art.meta["columns"] = std::to_string(t.columns().size());
                       art.meta["frac_bits"] = std::to_string(t.io().out_fmt.frac_bits());
                       art.width = t.io().out_fmt.total_bits();
                       art.meta["entry_format"] = t.io().out_fmt.to_string();
                       if (t.columns().size() > 1) {
                           art.width = std::max(art.width, t.coefficient_format().total_bits());
                           art.meta["entry_format"] =
                               t.io().out_fmt.to_string() + " knots, " + t.coefficient_format().to_string() + " coefficients";
                       }
                       for (const auto& col : t.columns()) {
                           art.entries.insert(art.entries.end(), col.begin(), col.end());
                       }
                   },
                   [&](const CrTable& t) {
                       art.meta["method"] = "catmull-rom";
                       art.meta["step"] = t.step().to_string();
                       put_io(art, t.io());
                       art.width = t.io().out_fmt.total_bits();
                       art.meta["frac_bits"] = std::to_string(t.io().out_fmt.frac_bits());
                       art.meta["entry_format"] = t.io().out_fmt.to_string();
                       art.meta["first_index"] = "-1";
                       art.entries = t.points();
                   },
                   [&](const VfTable& t) {
                       art.meta["method"] = "velocity";
                       art.meta["threshold"] = t.threshold().to_string();
                       art.meta["grouped"] = t.grouped() ? "true" : "false";
                       art.meta["nr_iters"] = std::to_string(t.nr_iters());
                       art.meta["lowest_bit"] = std::to_string(t.lowest_bit());
                       art.meta["top_bit"] = std::to_string(t.top_bit());
                       put_io(art, t.io());
                       art.is_signed = false;
                       art.width = t.entry_int_bits() + t.entry_frac_bits();
                       art.meta["frac_bits"] = std::to_string(t.entry_frac_bits());
                       art.meta["entry_format"] = entry_format_string(false, t.entry_int_bits(), t.entry_frac_bits());
                       for (auto e : t.entries()) {
                           art.entries.push_back(static_cast<std::int64_t>(e));
                       }
                   },
                   [&](const LambertConfig&) {
                       throw ConfigError("the continued-fraction kernel has no lookup table to export");
                   },
               },
               kernel);
    art.meta["width"] = std::to_string(art.width);
    art.meta["count"] = std::to_string(art.entries.size());
    return art;
}

Kernel kernel_from_artifact(const LutArtifact& art) {
    const Method m = parse_method(require(art, "method"));
    const KernelIo io = io_from(art);
    switch (m) {
        case Method::Pwl: return PwlTable::from_entries(Step::parse(require(art, "step")), io, art.entries);
        case Method::Taylor: {
            const Step step = Step::parse(require(art, "step"));
            const int terms = meta_int(art, "terms");
            const Centering c = require(art, "centering") == "truncate" ? Centering::Truncate : Centering::Nearest;
            const DerivativeSource d =
                require(art, "derivs") == "stored" ? DerivativeSource::Stored : DerivativeSource::Runtime;
            const auto n_cols = static_cast<std::size_t>(meta_int(art, "columns"));
            if (n_cols == 0 || art.entries.size() % n_cols != 0) {
                throw ConfigError("Taylor artifact entry count does not split into columns");
            }
            const std::size_t per_col = art.entries.size() / n_cols;
            std::vector<std::vector<std::int64_t>> columns;
            for (std::size_t j = 0; j < n_cols; ++j) {
                columns.push_back(slice(art.entries, j * per_col, per_col));
            }
            return TaylorTable::from_entries(step, terms, io, c, d, std::move(columns));
        }
        case Method::CatmullRom: return CrTable::from_entries(Step::parse(require(art, "step")), io, art.entries);
        case Method::Velocity: {
            std::vector<std::uint64_t> entries;
            entries.reserve(art.entries.size());
            for (auto e : art.entries) {
                entries.push_back(static_cast<std::uint64_t>(e));
            }
            return VfTable::from_entries(Step::parse(require(art, "threshold")), io, require(art, "grouped") == "true",
                                         meta_int(art, "frac_bits"), std::move(entries), meta_int(art, "nr_iters"));
        }
        case Method::Lambert: break;
    }
    throw ConfigError("LUT artifact method '" + require(art, "method") + "' has no table");
}

std::string write_hex(const LutArtifact& art) {
    std::ostringstream os;
    for (const auto& [key, value] : art.meta) {
        os << "// " << key << ": " << value << '\n';
    }
    const int digits = (art.width + 3) / 4;
    const std::uint64_t mask = art.width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << art.width) - 1;
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string line(static_cast<std::size_t>(digits), '0');
    for (auto e : art.entries) {
        std::uint64_t v = static_cast<std::uint64_t>(e) & mask;
        for (int i = digits - 1; i >= 0; --i) {
            line[static_cast<std::size_t>(i)] = kHex[v & 0xF];
            v >>= 4;
        }
        os << line << '\n';
    }
    return os.str();
}

LutArtifact read_hex(std::string_view text) {
    LutArtifact art;
    std::vector<std::uint64_t> words;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) {
            eol = text.size();
        }
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.starts_with("//")) {
            line.remove_prefix(2);
            const auto colon = line.find(':');
            if (colon == std::string_view::npos) {
                continue;
            }
            auto trim = [](std::string_view s) {
                while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
                while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
                return s;
            };
            art.meta[std::string(trim(line.substr(0, colon)))] = std::string(trim(line.substr(colon + 1)));
            continue;
        }
        // Whitespace separated hex words.
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            std::size_t j = i;
            while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
            if (j > i) {
                std::uint64_t w = 0;
                auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + j, w, 16);
                if (ec != std::errc{} || ptr != line.data() + j) {
                    throw ConfigError("bad hex word '" + std::string(line.substr(i, j - i)) + "'");
                }
                words.push_back(w);
            }
            i = j;
        }
    }
    art.width = meta_int(art, "width");
    if (art.width < 1 || art.width > 64) {
        throw ConfigError("LUT artifact width must be 1..64");
    }
    art.is_signed = art.meta["method"] != "velocity";
    if (art.meta.contains("count") && static_cast<std::size_t>(meta_int(art, "count")) != words.size()) {
        throw ConfigError("LUT artifact declares " + art.meta["count"] + " entries but holds " +
                          std::to_string(words.size()));
    }
    for (auto w : words) {
        std::int64_t v = static_cast<std::int64_t>(w);
        if (art.is_signed && art.width < 64 && (w >> (art.width - 1)) & 1U) {
            v = static_cast<std::int64_t>(w) - (std::int64_t{1} << art.width);
        }
        art.entries.push_back(v);
    }
    return art;
}

std::string write_cheader(const LutArtifact& art, std::string_view symbol) {
    std::string upper(symbol);
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    const int storage = art.width <= 8 ? 8 : art.width <= 16 ? 16 : art.width <= 32 ? 32 : 64;
    const std::string type = (art.is_signed ? "int" : "uint") + std::to_string(storage) + "_t";

    std::ostringstream os;
    os << "// Generated lookup table; do not edit.\n";
    for (const auto& [key, value] : art.meta) {
        os << "// " << key << ": " << value << '\n';
    }
    os << "#pragma once\n\n#include <stdint.h>\n\n";
    os << "#define " << upper << "_WIDTH " << art.width << '\n';
    os << "#define " << upper << "_COUNT " << art.entries.size() << '\n';
    auto fmt = art.meta.find("entry_format");
    os << "#define " << upper << "_FORMAT \"" << (fmt != art.meta.end() ? fmt->second : "") << "\"\n\n";
    os << "static const " << type << ' ' << symbol << '[' << upper << "_COUNT] = {\n";
    for (std::size_t i = 0; i < art.entries.size(); ++i) {
        if (i % 8 == 0) os << "   ";
        const auto e = art.entries[i];
        if (storage == 64) {
            os << ' ' << e << (art.is_signed ? "LL" : "ULL");
        } else {
            os << ' ' << e;
        }
        os << (i + 1 < art.entries.size() ? "," : "");
        if (i % 8 == 7 || i + 1 == art.entries.size()) os << '\n';
    }
    os << "};\n";
    return os.str();
}

std::string write_lut_csv(const LutArtifact& art) {
    int frac = 0;
    if (auto it = art.meta.find("frac_bits"); it != art.meta.end()) {
        frac = std::stoi(it->second);
    }
    std::string out = "index,raw,value\n";
    for (std::size_t i = 0; i < art.entries.size(); ++i) {
        out += std::to_string(i) + ',' + std::to_string(art.entries[i]) + ',' +
               format_real(std::ldexp(static_cast<double>(art.entries[i]), -frac)) + '\n';
    }
    return out;
}

}  // namespace tanhfx
