#include "marisec/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace marisec {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

Config Config::from_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        cfg.set(key, value);
    }
    return cfg;
}

double ConfigReader::get_double(const std::string& key, double def) {
    double v = def;
    if (cfg_.has(key)) {
        const std::string& s = cfg_.values().at(key);
        try {
            std::size_t pos = 0;
            v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "': not a number: " + s);
        }
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    effective_[key] = buf;
    consumed_.push_back(key);
    return v;
}

std::int64_t ConfigReader::get_int(const std::string& key, std::int64_t def) {
    std::int64_t v = def;
    if (cfg_.has(key)) {
        const std::string& s = cfg_.values().at(key);
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size())
            throw ConfigError("key '" + key + "': not an integer: " + s);
    }
    effective_[key] = std::to_string(v);
    consumed_.push_back(key);
    return v;
}

std::uint64_t ConfigReader::get_uint(const std::string& key, std::uint64_t def) {
    std::uint64_t v = def;
    if (cfg_.has(key)) {
        const std::string& s = cfg_.values().at(key);
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size())
            throw ConfigError("key '" + key + "': not an unsigned integer: " + s);
    }
    effective_[key] = std::to_string(v);
    consumed_.push_back(key);
    return v;
}

bool ConfigReader::get_bool(const std::string& key, bool def) {
    bool v = def;
    if (cfg_.has(key)) {
        std::string s = cfg_.values().at(key);
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
        if (s == "true" || s == "1" || s == "yes") v = true;
        else if (s == "false" || s == "0" || s == "no") v = false;
        else throw ConfigError("key '" + key + "': not a boolean: " + s);
    }
    effective_[key] = v ? "true" : "false";
    consumed_.push_back(key);
    return v;
}

std::string ConfigReader::get_string(const std::string& key, const std::string& def) {
    std::string v = cfg_.has(key) ? cfg_.values().at(key) : def;
    effective_[key] = v;
    consumed_.push_back(key);
    return v;
}

void ConfigReader::finish() const {
    std::set<std::string> known(consumed_.begin(), consumed_.end());
    for (const auto& [k, v] : cfg_.values()) {
        if (!known.count(k)) throw ConfigError("unknown config key: " + k);
    }
}

std::string ConfigReader::canonical_text() const {
    std::string out;
    for (const auto& [k, v] : effective_) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace marisec
