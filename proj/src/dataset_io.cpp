#include "graphcf/dataset_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace graphcf {

namespace {

using nlohmann::json;

struct PendingMember {
    Graph graph;
    int label;
    long line;
};

Error parse_error(const std::string& source, long line, const std::string& what) {
    return Error(Status::parse,
                 source + ": line " + std::to_string(line) + ": " + what);
}

PendingMember parse_record(const json& rec, const std::string& source, long line) {
    if (!rec.is_object()) throw parse_error(source, line, "record is not an object");
    for (const char* field : {"snapshot", "graph_id", "num_nodes", "edges", "label"}) {
        if (!rec.contains(field)) {
            throw parse_error(source, line,
                              std::string("missing field '") + field + "'");
        }
    }
    const int t = rec.at("snapshot").get<int>();
    if (t < 0) throw parse_error(source, line, "snapshot index must be >= 0");
    const std::string id = rec.at("graph_id").get<std::string>();
    const int n = rec.at("num_nodes").get<int>();
    if (n <= 0) {
        throw Error(Status::validation,
                    source + ": line " + std::to_string(line) + ": graph '" + id +
                        "': num_nodes must be positive");
    }
    const int label = rec.at("label").get<int>();
    if (label != 0 && label != 1) {
        throw Error(Status::validation,
                    source + ": line " + std::to_string(line) + ": graph '" + id +
                        "': label must be 0 or 1");
    }

    Graph g(id, n);
    std::map<std::pair<int, int>, double> seen;
    for (const json& e : rec.at("edges")) {
        if (!e.is_array() || e.size() != 3) {
            throw parse_error(source, line, "edge entries must be [u, v, w]");
        }
        const int u = e[0].get<int>();
        const int v = e[1].get<int>();
        const double w = e[2].get<double>();
        if (u < 0 || v < 0 || u >= n || v >= n) {
            throw Error(Status::validation,
                        source + ": line " + std::to_string(line) + ": graph '" +
                            id + "': edge endpoint out of range");
        }
        if (u == v) {
            throw Error(Status::validation,
                        source + ": line " + std::to_string(line) + ": graph '" +
                            id + "': self-loop on vertex " + std::to_string(u));
        }
        if (w < 0.0) {
            throw Error(Status::validation,
                        source + ": line " + std::to_string(line) + ": graph '" +
                            id + "': negative weight on edge (" + std::to_string(u) +
                            ", " + std::to_string(v) + ")");
        }
        const auto key = std::minmax(u, v);
        const auto [it, inserted] = seen.emplace(key, w);
        if (!inserted && it->second != w) {
            throw Error(Status::validation,
                        source + ": line " + std::to_string(line) + ": graph '" +
                            id + "': asymmetric weights for edge (" +
                            std::to_string(key.first) + ", " +
                            std::to_string(key.second) + ")");
        }
        g.set_weight(u, v, w);
    }

    g.validate();
    return PendingMember{std::move(g), label, line};
}

} // namespace

TemporalDataset load_dataset(std::istream& in, const std::string& source_name) {
    std::map<int, std::vector<PendingMember>> by_snapshot;
    std::string line;
    long line_no = 0;
    long records = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception& e) {
            throw parse_error(source_name, line_no, e.what());
        }
        PendingMember pm = parse_record(rec, source_name, line_no);
        by_snapshot[rec.at("snapshot").get<int>()].push_back(std::move(pm));
        ++records;
    }
    if (records == 0) {
        throw Error(Status::validation, source_name + ": empty dataset");
    }

    std::vector<Snapshot> snapshots;
    int expected_t = 0;
    for (auto& [t, members] : by_snapshot) {
        if (t != expected_t) {
            throw Error(Status::validation,
                        source_name + ": snapshot indices are not contiguous (missing t=" +
                            std::to_string(expected_t) + ")");
        }
        ++expected_t;
        Snapshot snap;
        snap.t = t;
        // keep file order within a snapshot so round-trips are identities
        for (auto& pm : members) snap.members.push_back({std::move(pm.graph), pm.label});
        snapshots.push_back(std::move(snap));
    }

    TemporalDataset ds(std::move(snapshots));
    ds.validate();
    return ds;
}

TemporalDataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Status::io, "cannot open '" + path + "' for reading");
    return load_dataset(in, path);
}

void save_dataset(const TemporalDataset& dataset, std::ostream& out) {
    for (const Snapshot& snap : dataset.snapshots()) {
        for (const Member& m : snap.members) {
            json edges = json::array();
            for (const auto& [u, v] : m.graph.edges()) {
                edges.push_back({u, v, m.graph.weight(u, v)});
            }
            const json rec = {
                {"snapshot", snap.t},
                {"graph_id", m.graph.id()},
                {"num_nodes", m.graph.num_nodes()},
                {"edges", std::move(edges)},
                {"label", m.label},
            };
            out << rec.dump() << '\n';
        }
    }
}

void save_dataset(const TemporalDataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(Status::io, "cannot open '" + path + "' for writing");
    save_dataset(dataset, out);
    if (!out.good()) throw Error(Status::io, "write to '" + path + "' failed");
}

} // namespace graphcf
