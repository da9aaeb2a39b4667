#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace marisec {

/// Raised for malformed files, unknown keys, or out-of-range values.
/// The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat `key = value` file with dotted section names and '#' comments.
class Config {
public:
    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

/// Typed access to a Config against the known-key schema. Every getter
/// records the effective value; leftover keys are rejected so typos in run
/// files fail loudly instead of silently using defaults.
class ConfigReader {
public:
    explicit ConfigReader(const Config& cfg) : cfg_(cfg) {}

    double get_double(const std::string& key, double def);
    std::int64_t get_int(const std::string& key, std::int64_t def);
    std::uint64_t get_uint(const std::string& key, std::uint64_t def);
    bool get_bool(const std::string& key, bool def);
    std::string get_string(const std::string& key, const std::string& def);

    /// Throws if the file contained keys no getter asked for.
    void finish() const;

    /// Sorted `key=value` lines of the effective configuration
    /// (defaults merged with file overrides).
    std::string canonical_text() const;

private:
    const Config& cfg_;
    std::map<std::string, std::string> effective_;
    std::vector<std::string> consumed_;
};

/// FNV-1a over the canonical text; embedded in every artifact.
std::uint64_t fnv1a64(const std::string& text);
std::string hash_hex(std::uint64_t h);

} // namespace marisec
