#include "lgmd/util.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "lgmd/optimizers/bounds.hpp"

namespace lgmd {

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double parse_double(std::string_view text) {
    const std::string s = trim(text);
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s.empty()) throw std::invalid_argument("expected a number, got an empty string");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    return v;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index);
}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

void write_new_file(const std::filesystem::path& file, std::string_view content) {
    if (std::filesystem::exists(file)) {
        throw std::runtime_error("refusing to overwrite " + file.string());
    }
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("failed writing " + file.string());
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.push_back(trim(text.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r\n");
    return std::string(text.substr(first, last - first + 1));
}

namespace opt {

std::uint64_t Bounds::hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::size_t i = 0; i < size(); ++i) {
        h = fnv1a(names[i].data(), names[i].size(), h);
        h = fnv1a(&lower[i], sizeof(double), h);
        h = fnv1a(&upper[i], sizeof(double), h);
    }
    return h;
}

}  // namespace opt

}  // namespace lgmd
