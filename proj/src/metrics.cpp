#include "graphcf/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "graphcf/stats.hpp"

namespace graphcf {

namespace {

constexpr const char* kFoldHeader =
    "dataset,fold,t,runtime_s,correctness_at_1,correctness_at_k,"
    "sparsity_at_1,sparsity_at_k,ged_at_1,ged_at_k,oracle_calls,oracle_calls_raw";

constexpr const char* kMetricNames[9] = {
    "runtime_s",     "correctness_at_1", "correctness_at_k",
    "sparsity_at_1", "sparsity_at_k",    "ged_at_1",
    "ged_at_k",      "oracle_calls",     "oracle_calls_raw"};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::array<double, 9> metric_values(const MetricsRecord& r) {
    return {r.runtime_s,     r.correctness_at_1, r.correctness_at_k,
            r.sparsity_at_1, r.sparsity_at_k,    r.ged_at_1,
            r.ged_at_k,      r.oracle_calls,     r.oracle_calls_raw};
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace

int correctness_at(const Explanation& expl,
                   const std::map<std::string, int>& truth, int j) {
    if (j < 1) throw Error(Status::invalid_arg, "correctness_at: j must be >= 1");
    const auto query_it = truth.find(expl.query_id);
    if (query_it == truth.end()) {
        throw Error(Status::invalid_arg,
                    "correctness_at: no true label for query '" + expl.query_id + "'");
    }
    const int query_label = query_it->second;
    const std::size_t upto =
        std::min(static_cast<std::size_t>(j), expl.ranked.size());
    for (std::size_t i = 0; i < upto; ++i) {
        const auto it = truth.find(expl.ranked[i].graph_id);
        if (it == truth.end()) {
            throw Error(Status::invalid_arg,
                        "correctness_at: no true label for candidate '" +
                            expl.ranked[i].graph_id + "'");
        }
        if (it->second != query_label) return 1;
    }
    return 0;
}

double sparsity(const Graph& query, const Graph& candidate) {
    const double size = static_cast<double>(query.num_nodes() + query.num_edges());
    if (size <= 0.0) {
        throw Error(Status::invalid_arg,
                    "sparsity: query graph has no vertices or edges");
    }
    return graph_edit_distance(query, candidate).ged / size;
}

std::vector<AggregateRow> aggregate_records(
    const std::vector<MetricsRecord>& records) {
    std::map<std::pair<std::string, int>, std::vector<MetricsRecord>> groups;
    for (const MetricsRecord& r : records) groups[{r.dataset, r.t}].push_back(r);

    std::vector<AggregateRow> rows;
    for (const auto& [key, group] : groups) {
        AggregateRow row;
        row.dataset = key.first;
        row.t = key.second;
        row.folds = static_cast<int>(group.size());
        for (int m = 0; m < 9; ++m) {
            std::vector<double> vals;
            vals.reserve(group.size());
            for (const MetricsRecord& r : group) vals.push_back(metric_values(r)[m]);
            row.mean[m] = mean(vals);
            row.stddev[m] = stddev(vals);
        }
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const AggregateRow& a, const AggregateRow& b) {
        return a.dataset != b.dataset ? a.dataset < b.dataset : a.t < b.t;
    });
    return rows;
}

void write_fold_csv(const std::vector<MetricsRecord>& records,
                    const std::string& path) {
    if (records.empty()) {
        throw Error(Status::invalid_arg, "write_fold_csv: no records");
    }
    std::ofstream out(path);
    if (!out) throw Error(Status::io, "cannot open '" + path + "' for writing");
    out << kFoldHeader << '\n';
    for (const MetricsRecord& r : records) {
        out << r.dataset << ',' << r.fold << ',' << r.t;
        for (double v : metric_values(r)) out << ',' << fmt(v);
        out << '\n';
    }
    if (!out.good()) throw Error(Status::io, "write to '" + path + "' failed");
}

void write_aggregate_csv(const std::vector<AggregateRow>& rows,
                         const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(Status::io, "cannot open '" + path + "' for writing");
    out << "dataset,t,folds";
    for (const char* name : kMetricNames) {
        out << ',' << name << "_mean," << name << "_std";
    }
    out << '\n';
    for (const AggregateRow& row : rows) {
        out << row.dataset << ',' << row.t << ',' << row.folds;
        for (int m = 0; m < 9; ++m) {
            out << ',' << fmt(row.mean[m]) << ',' << fmt(row.stddev[m]);
        }
        out << '\n';
    }
    if (!out.good()) throw Error(Status::io, "write to '" + path + "' failed");
}

std::vector<MetricsRecord> read_fold_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Status::io, "cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(Status::parse, path + ": empty records file");
    }
    // tolerate a trailing \r from foreign line endings
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kFoldHeader) {
        throw Error(Status::parse, path + ": unexpected header row");
    }
    std::vector<MetricsRecord> records;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 12) {
            throw Error(Status::parse, path + ": line " + std::to_string(line_no) +
                                           ": expected 12 columns");
        }
        try {
            MetricsRecord r;
            r.dataset = cells[0];
            r.fold = std::stoi(cells[1]);
            r.t = std::stoi(cells[2]);
            r.runtime_s = std::stod(cells[3]);
            r.correctness_at_1 = std::stod(cells[4]);
            r.correctness_at_k = std::stod(cells[5]);
            r.sparsity_at_1 = std::stod(cells[6]);
            r.sparsity_at_k = std::stod(cells[7]);
            r.ged_at_1 = std::stod(cells[8]);
            r.ged_at_k = std::stod(cells[9]);
            r.oracle_calls = std::stod(cells[10]);
            r.oracle_calls_raw = std::stod(cells[11]);
            records.push_back(std::move(r));
        } catch (const std::exception&) {
            throw Error(Status::parse, path + ": line " + std::to_string(line_no) +
                                           ": malformed numeric cell");
        }
    }
    if (records.empty()) {
        throw Error(Status::parse, path + ": no records");
    }
    return records;
}

void write_report(const std::vector<MetricsRecord>& records,
                  const std::string& dir) {
    std::filesystem::create_directories(dir);
    write_fold_csv(records, dir + "/folds.csv");
    write_aggregate_csv(aggregate_records(records), dir + "/aggregate.csv");
}

std::string format_aggregate_table(const std::vector<AggregateRow>& rows) {
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-12s %4s %10s %9s %9s %9s %9s %8s %8s %12s\n",
                  "dataset", "t", "runtime_s", "corr@1", "corr@k", "spars@1",
                  "spars@k", "ged@1", "ged@k", "oracle_calls");
    out << buf;
    for (const AggregateRow& r : rows) {
        std::snprintf(buf, sizeof(buf),
                      "%-12s %4d %10.3f %9.3f %9.3f %9.3f %9.3f %8.2f %8.2f %12.1f\n",
                      r.dataset.c_str(), r.t, r.mean[0], r.mean[1], r.mean[2],
                      r.mean[3], r.mean[4], r.mean[5], r.mean[6], r.mean[7]);
        out << buf;
    }
    return out.str();
}

} // namespace graphcf
