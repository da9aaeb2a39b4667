#pragma once

#include "marisec/agent.hpp"

#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace marisec::harness {

/// Append-only training metrics CSV. The first line carries the config hash
/// and seed; the step column must be strictly increasing.
class MetricsWriter {
public:
    MetricsWriter(const std::string& path, std::uint64_t config_hash, std::uint64_t seed, bool append);
    void write(const agent::MetricsRow& row);
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ofstream out_;
    std::int64_t last_step_ = -1;
};

struct CsvTable {
    std::map<std::string, std::string> comments; // key=value pairs from '#' lines
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const; // -1 if absent
    std::vector<double> col(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

} // namespace marisec::harness
