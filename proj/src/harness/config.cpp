#include "lgmd/harness/config.hpp"

#include <fstream>
#include <sstream>

#include "lgmd/util.hpp"

namespace lgmd::harness {

IniFile IniFile::parse(const std::string& text, const std::string& origin) {
    IniFile ini;
    ini.origin_ = origin;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const std::string where = origin + ":" + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError(where + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError(where + ": missing key");
        if (ini.values_[section].count(key)) {
            throw ConfigError(where + ": duplicate key '" + key + "' (first set on line " +
                              std::to_string(ini.lines_[section][key]) + ")");
        }
        ini.values_[section][key] = trim(line.substr(eq + 1));
        ini.lines_[section][key] = line_no;
    }
    return ini;
}

IniFile IniFile::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot read config " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), file.string());
}

std::optional<std::string> IniFile::get(const std::string& section, const std::string& key) const {
    const auto s = values_.find(section);
    if (s == values_.end()) return std::nullopt;
    const auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    read_.insert(section + "." + key);
    return k->second;
}

bool IniFile::has(const std::string& section, const std::string& key) const {
    const auto s = values_.find(section);
    return s != values_.end() && s->second.count(key);
}

void IniFile::set(const std::string& section, const std::string& key, const std::string& value) {
    values_[section][key] = value;
}

std::vector<std::string> IniFile::unused() const {
    std::vector<std::string> out;
    for (const auto& [section, kv] : values_) {
        for (const auto& [key, value] : kv) {
            const std::string name = section + "." + key;
            if (!read_.count(name)) out.push_back(name);
        }
    }
    return out;
}

}  // namespace lgmd::harness
