#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace dynreg {

/// Raised for malformed configuration; the message carries the field path.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat key-value configuration with dotted section keys, e.g.
///   scenario.T = 256
///   loss.model = rademacher
/// Lines starting with '#' are comments. Later assignments win.
class KeyValueConfig {
public:
    static KeyValueConfig parse_file(const std::string& path);
    static KeyValueConfig parse_string(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

}  // namespace dynreg
