#include "marisec/metrics.hpp"

#include "marisec/config.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace marisec::harness {

MetricsWriter::MetricsWriter(const std::string& path, std::uint64_t config_hash, std::uint64_t seed,
                             bool append)
    : path_(path) {
    const bool write_header = !append;
    out_.open(path, append ? std::ios::app : std::ios::trunc);
    if (!out_) throw std::runtime_error("cannot open metrics file: " + path);
    if (write_header) {
        out_ << "# config_hash=" << hash_hex(config_hash) << " seed=" << seed << "\n";
        out_ << "step,episode,tau1,loss_q1,loss_q2,loss_v1,loss_v2,loss_pi,"
                "ep_secrecy_mean,ep_energy_mean,c6_violations,c7_violations\n";
    }
}

void MetricsWriter::write(const agent::MetricsRow& row) {
    if (row.step <= last_step_) throw std::logic_error("metrics step column must be monotone");
    last_step_ = row.step;
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%lld,%lld,%.6g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%d,%d\n",
                  static_cast<long long>(row.step), static_cast<long long>(row.episode), row.tau1,
                  row.losses.q1, row.losses.q2, row.losses.v1, row.losses.v2, row.losses.pi,
                  row.ep_secrecy_mean, row.ep_energy_mean, row.c6_violations, row.c7_violations);
    out_ << buf;
    out_.flush();
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return int(i);
    }
    return -1;
}

std::vector<double> CsvTable::col(const std::string& name) const {
    const int c = column(name);
    if (c < 0) throw std::runtime_error("missing CSV column: " + name);
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(r[std::size_t(c)]);
    return v;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV: " + path);
    CsvTable t;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ls(line.substr(1));
            std::string tok;
            while (ls >> tok) {
                auto eq = tok.find('=');
                if (eq != std::string::npos) t.comments[tok.substr(0, eq)] = tok.substr(eq + 1);
            }
            continue;
        }
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (t.header.empty()) {
            t.header = cells;
            continue;
        }
        if (cells.size() != t.header.size()) throw std::runtime_error("malformed CSV row in " + path);
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            try {
                row.push_back(std::stod(c));
            } catch (const std::exception&) {
                throw std::runtime_error("malformed CSV cell '" + c + "' in " + path);
            }
        }
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty()) throw std::runtime_error("empty CSV: " + path);
    return t;
}

} // namespace marisec::harness
