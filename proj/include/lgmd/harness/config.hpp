#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace lgmd::harness {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat sectioned key-value text:
///
///     [section]
///     key = value   # comment
///
/// Keys before the first section header belong to section "".
class IniFile {
public:
    static IniFile parse(const std::string& text, const std::string& origin = "<config>");
    static IniFile load(const std::filesystem::path& file);

    std::optional<std::string> get(const std::string& section, const std::string& key) const;
    bool has(const std::string& section, const std::string& key) const;
    void set(const std::string& section, const std::string& key, const std::string& value);

    /// "section.key" for every entry never read through get().
    std::vector<std::string> unused() const;

private:
    std::map<std::string, std::map<std::string, std::string>> values_;
    std::map<std::string, std::map<std::string, int>> lines_;
    mutable std::set<std::string> read_;
    std::string origin_;
};

}  // namespace lgmd::harness
