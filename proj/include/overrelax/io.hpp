#pragma once

// File formats: CSV for tabular outputs (traces, acf reports, datasets),
// flat key=value text for metadata sidecars.  Everything is written with a
// fixed format so identical inputs give byte-identical files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "overrelax/diagnostics.hpp"
#include "overrelax/model.hpp"
#include "overrelax/sampler.hpp"

namespace overrelax {

using KeyValueList = std::vector<std::pair<std::string, std::string>>;

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string find_value(const KeyValueList& kv, const std::string& key,
                              const std::string& fallback = {}) {
    for (const auto& [k, v] : kv)
        if (k == key) return v;
    return fallback;
}

/// Sidecar metadata path: the data file's extension replaced by ".meta".
inline std::filesystem::path sidecar_path(const std::filesystem::path& data_path) {
    std::filesystem::path p = data_path;
    p.replace_extension(".meta");
    return p;
}

namespace detail {

inline std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);  // '\n' endings everywhere
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

inline std::ifstream open_for_read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open for reading: " + path.string());
    return in;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace detail

inline void write_key_value_file(const std::filesystem::path& path,
                                 const KeyValueList& kv) {
    std::ofstream out = detail::open_for_write(path);
    for (const auto& [k, v] : kv) out << k << "=" << v << "\n";
}

/// Reads `key=value` lines; '#' starts a comment, blank lines are skipped.
inline KeyValueList read_key_value_file(const std::filesystem::path& path) {
    std::ifstream in = detail::open_for_read(path);
    KeyValueList kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::size_t b = line.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        std::size_t e = line.find_last_not_of(" \t");
        line = line.substr(b, e - b + 1);
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": expected key=value, got '" + line + "'");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto strip = [](std::string& s) {
            const std::size_t x = s.find_first_not_of(" \t");
            if (x == std::string::npos) { s.clear(); return; }
            const std::size_t y = s.find_last_not_of(" \t");
            s = s.substr(x, y - x + 1);
        };
        strip(key);
        strip(value);
        kv.emplace_back(std::move(key), std::move(value));
    }
    return kv;
}

/// Trace CSV: '#'-prefixed key=value comments carrying the resolved
/// configuration, then `iter,<fn names>` and one row per sweep.  The same
/// metadata goes to the .meta sidecar.
inline void write_chain_trace_csv(const std::filesystem::path& path,
                                  const ChainTrace& trace,
                                  const KeyValueList& metadata) {
    KeyValueList meta;
    meta.emplace_back("seed", std::to_string(trace.seed));
    meta.emplace_back("spec", trace.spec.describe());
    meta.emplace_back("burn_in", std::to_string(trace.burn_in));
    for (const auto& item : metadata) meta.push_back(item);

    std::ofstream out = detail::open_for_write(path);
    for (const auto& [k, v] : meta) out << "# " << k << "=" << v << "\n";
    out << "iter";
    for (const auto& name : trace.names) out << "," << name;
    out << "\n";
    const std::size_t rows = trace.n_iterations();
    for (std::size_t r = 0; r < rows; ++r) {
        out << (r + 1);
        for (const auto& col : trace.columns) out << "," << format_double(col[r]);
        out << "\n";
    }
    write_key_value_file(sidecar_path(path), meta);
}

/// Reads a trace CSV back: monitored names, columns, and burn_in/seed when
/// present in the comments.  The sampler spec is not reconstructed.
inline ChainTrace read_chain_trace_csv(const std::filesystem::path& path) {
    std::ifstream in = detail::open_for_read(path);
    ChainTrace trace;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            const std::size_t eq = line.find('=');
            if (eq != std::string::npos) {
                std::string key = line.substr(1, eq - 1);
                const std::size_t b = key.find_first_not_of(" \t");
                if (b != std::string::npos) {
                    key = key.substr(b);
                    const std::string value = line.substr(eq + 1);
                    if (key == "burn_in") trace.burn_in = std::stoul(value);
                    if (key == "seed") trace.seed = std::stoull(value);
                }
            }
            continue;
        }
        if (!header_seen) {
            const auto fields = detail::split_csv_line(line);
            if (fields.empty() || fields.front() != "iter")
                throw std::runtime_error(path.string() +
                                         ": trace header must start with 'iter'");
            trace.names.assign(fields.begin() + 1, fields.end());
            trace.columns.assign(trace.names.size(), {});
            header_seen = true;
            continue;
        }
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != trace.names.size() + 1)
            throw std::runtime_error(path.string() + ": malformed trace row '" +
                                     line + "'");
        for (std::size_t f = 0; f < trace.names.size(); ++f)
            trace.columns[f].push_back(std::stod(fields[f + 1]));
    }
    if (!header_seen)
        throw std::runtime_error(path.string() + ": no trace header found");
    return trace;
}

/// Acf report: summary values as comments, then `lag,acf` rows.
inline void write_acf_report_csv(const std::filesystem::path& path,
                                 const AcfReport& report,
                                 const KeyValueList& metadata = {}) {
    std::ofstream out = detail::open_for_write(path);
    out << "# function=" << report.function_name << "\n";
    out << "# act=" << format_double(report.act) << "\n";
    out << "# truncation_lag=" << report.truncation_lag << "\n";
    out << "# n_samples=" << report.n_samples << "\n";
    out << "# burn_in=" << report.burn_in << "\n";
    out << "# truncation_rule=" << truncation_rule_name(report.rule) << "\n";
    for (const auto& [k, v] : metadata) out << "# " << k << "=" << v << "\n";
    out << "lag,acf\n";
    for (std::size_t k = 0; k < report.acf.size(); ++k)
        out << k << "," << format_double(report.acf[k]) << "\n";
}

inline AcfReport read_acf_report_csv(const std::filesystem::path& path) {
    std::ifstream in = detail::open_for_read(path);
    AcfReport report;
    report.acf.clear();
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(1, eq - 1);
            const std::size_t b = key.find_first_not_of(" \t");
            if (b == std::string::npos) continue;
            key = key.substr(b);
            const std::string value = line.substr(eq + 1);
            if (key == "function") report.function_name = value;
            else if (key == "act") report.act = std::stod(value);
            else if (key == "truncation_lag") report.truncation_lag = std::stoul(value);
            else if (key == "n_samples") report.n_samples = std::stoul(value);
            else if (key == "burn_in") report.burn_in = std::stoul(value);
            else if (key == "truncation_rule") report.rule = parse_truncation_rule(value);
            continue;
        }
        if (!header_seen) {
            if (line != "lag,acf")
                throw std::runtime_error(path.string() + ": expected 'lag,acf' header");
            header_seen = true;
            continue;
        }
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 2)
            throw std::runtime_error(path.string() + ": malformed acf row '" + line + "'");
        report.acf.push_back(std::stod(fields[1]));
    }
    if (!header_seen)
        throw std::runtime_error(path.string() + ": no acf header found");
    return report;
}

/// Dataset CSV: `i,t,s` one row per count (i is 1-based), with generation
/// metadata (seed, true_tau, parameters) in the sidecar.
inline void write_pump_dataset_csv(const std::filesystem::path& path,
                                   const PumpDataset& data) {
    std::ofstream out = detail::open_for_write(path);
    out << "i,t,s\n";
    for (std::size_t i = 0; i < data.t.size(); ++i)
        out << (i + 1) << "," << format_double(data.t[i]) << "," << data.s[i] << "\n";
    KeyValueList meta;
    meta.emplace_back("p", std::to_string(data.t.size()));
    meta.emplace_back("seed", std::to_string(data.seed));
    meta.emplace_back("true_tau", format_double(data.true_tau));
    meta.emplace_back("gamma_shape", format_double(data.gamma_shape));
    meta.emplace_back("beta_true", format_double(data.beta_true));
    write_key_value_file(sidecar_path(path), meta);
}

inline PumpDataset read_pump_dataset_csv(const std::filesystem::path& path) {
    std::ifstream in = detail::open_for_read(path);
    PumpDataset data;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != "i,t,s")
                throw std::runtime_error(path.string() + ": expected 'i,t,s' header");
            header_seen = true;
            continue;
        }
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 3)
            throw std::runtime_error(path.string() + ": malformed dataset row '" +
                                     line + "'");
        data.t.push_back(std::stod(fields[1]));
        data.s.push_back(std::stol(fields[2]));
    }
    if (data.t.empty())
        throw std::runtime_error(path.string() + ": dataset has no rows");
    const std::filesystem::path meta_path = sidecar_path(path);
    if (std::filesystem::exists(meta_path)) {
        const KeyValueList meta = read_key_value_file(meta_path);
        if (const std::string v = find_value(meta, "seed"); !v.empty())
            data.seed = std::stoull(v);
        if (const std::string v = find_value(meta, "true_tau"); !v.empty())
            data.true_tau = std::stod(v);
        if (const std::string v = find_value(meta, "gamma_shape"); !v.empty())
            data.gamma_shape = std::stod(v);
        if (const std::string v = find_value(meta, "beta_true"); !v.empty())
            data.beta_true = std::stod(v);
    }
    return data;
}

}  // namespace overrelax
