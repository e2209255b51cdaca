#pragma once

// Output plumbing shared by serializers and the CLI: fixed-format numeric
// printing (17 significant digits, '.' radix, so re-reading is lossless
// and reruns are byte-identical) and the FNV-1a hash used to stamp every
// artifact with its generating configuration.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qburgers {

/// %.17g with the C locale; round-trips any finite double exactly.
std::string format_g17(double x);

/// Joins cells with commas; no quoting (cells never contain commas here).
std::string csv_join(const std::vector<std::string>& cells);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data);

/// Lower-case 16-digit hex.
std::string hex64(std::uint64_t v);

} // namespace qburgers
