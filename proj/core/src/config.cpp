#include "tcmfg/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "tcmfg/error.hpp"

namespace tcmfg {

namespace {

bool key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
}

std::size_t skip_space(const std::string& s, std::size_t i) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    return i;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

Config Config::parse(std::istream& is) {
    Config cfg;
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
        std::size_t i = skip_space(line, 0);
        if (i == line.size()) continue;
        if (line[i] == '[') {
            const auto close = line.find(']', i);
            if (close == std::string::npos) throw ParseError("unterminated section header", line_no, static_cast<int>(i) + 1);
            section = trim(line.substr(i + 1, close - i - 1));
            if (section.empty() || !std::all_of(section.begin(), section.end(), key_char))
                throw ParseError("invalid section name", line_no, static_cast<int>(i) + 2);
            if (skip_space(line, close + 1) != line.size())
                throw ParseError("unexpected text after section header", line_no, static_cast<int>(close) + 2);
            continue;
        }
        const std::size_t key_start = i;
        while (i < line.size() && key_char(line[i])) ++i;
        if (i == key_start) throw ParseError("expected a key", line_no, static_cast<int>(key_start) + 1);
        std::string key = line.substr(key_start, i - key_start);
        i = skip_space(line, i);
        if (i == line.size() || line[i] != '=')
            throw ParseError("expected '=' after key '" + key + "'", line_no, static_cast<int>(i) + 1);
        const std::size_t value_start = skip_space(line, i + 1);
        std::string value = trim(line.substr(std::min(value_start, line.size())));
        if (value.empty()) throw ParseError("missing value for key '" + key + "'", line_no, static_cast<int>(i) + 2);
        if (!section.empty()) key = section + "." + key;
        if (cfg.entries_.count(key))
            throw ParseError("duplicate key '" + key + "'", line_no, static_cast<int>(key_start) + 1);
        cfg.entries_[key] = Entry{value, line_no, static_cast<int>(value_start) + 1};
    }
    return cfg;
}

Config Config::parse_string(const std::string& text) {
    std::istringstream is(text);
    return parse(is);
}

Config Config::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InvalidArgument("cannot open config file '" + path + "'");
    return parse(is);
}

std::vector<std::string> Config::keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_) out.push_back(k);
    return out;
}

int Config::line(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
}

const Config::Entry& Config::require(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ParseError("missing required key '" + key + "'", 0, 0);
    return it->second;
}

std::string Config::get_string(const std::string& key) const { return require(key).value; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

double Config::get_double(const std::string& key) const {
    const Entry& e = require(key);
    double v = 0.0;
    const char* end = e.value.data() + e.value.size();
    auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw ParseError("key '" + key + "' expects a number, got '" + e.value + "'", e.line, e.column);
    return v;
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

std::int64_t Config::get_int(const std::string& key) const {
    const Entry& e = require(key);
    std::int64_t v = 0;
    const char* end = e.value.data() + e.value.size();
    auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw ParseError("key '" + key + "' expects an integer, got '" + e.value + "'", e.line, e.column);
    return v;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const Entry& e = require(key);
    if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
    if (e.value == "false" || e.value == "no" || e.value == "0") return false;
    throw ParseError("key '" + key + "' expects a boolean, got '" + e.value + "'", e.line, e.column);
}

std::vector<std::string> Config::get_list(const std::string& key) const {
    std::vector<std::string> out;
    if (!has(key)) return out;
    std::stringstream ss(require(key).value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> Config::get_doubles(const std::string& key) const {
    const Entry& e = require(key);
    std::vector<double> out;
    for (const std::string& item : get_list(key)) {
        double v = 0.0;
        const char* end = item.data() + item.size();
        auto [ptr, ec] = std::from_chars(item.data(), end, v);
        if (ec != std::errc() || ptr != end)
            throw ParseError("key '" + key + "' expects numbers, got '" + item + "'", e.line, e.column);
        out.push_back(v);
    }
    return out;
}

void Config::set(const std::string& key, const std::string& value) {
    auto& e = entries_[key];
    e.value = value;
}

} // namespace tcmfg
