#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace lgmd {

/// Shortest text that round-trips the double exactly; infinities
/// print as "inf" / "-inf".
std::string format_double(double v);
double parse_double(std::string_view text);

std::uint64_t splitmix64(std::uint64_t x);

/// Counter-based seed derivation: derive_seed(master, stream, index) mixes
/// the three words through splitmix64 so that every (stream, index) pair of
/// a master seed gets an independent, reproducible 64-bit seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t h = 1469598103934665603ULL);

/// Writes a whole file, refusing to replace an existing one.
void write_new_file(const std::filesystem::path& file, std::string_view content);

std::vector<std::string> split(std::string_view text, char sep);
std::string trim(std::string_view text);

}  // namespace lgmd
