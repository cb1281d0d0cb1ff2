#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

namespace tcmfg {

/// Flat key/value configuration: `key = value` lines, `#` comments, optional `[section]`
/// headers that prefix following keys with `section.`.
class Config {
public:
    static Config parse(std::istream& is);
    static Config parse_string(const std::string& text);
    static Config load(const std::string& path);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    std::vector<std::string> keys() const;
    /// Line of the key in the source (0 if absent).
    int line(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    /// Comma-separated list of values.
    std::vector<std::string> get_list(const std::string& key) const;
    std::vector<double> get_doubles(const std::string& key) const;

    void set(const std::string& key, const std::string& value);

private:
    struct Entry {
        std::string value;
        int line = 0;
        int column = 0; // column of the value
    };
    const Entry& require(const std::string& key) const;

    std::map<std::string, Entry> entries_;
};

} // namespace tcmfg
