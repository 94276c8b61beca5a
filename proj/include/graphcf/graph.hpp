#pragma once

#include <string>
#include <utility>
#include <vector>

#include "graphcf/error.hpp"

namespace graphcf {

/// Undirected weighted graph over an indexed vertex set. Weights are stored
/// as a dense symmetric matrix with a zero diagonal; an edge exists iff its
/// weight is > 0. The graph_id stays stable while the graph evolves across
/// snapshots.
class Graph {
public:
    Graph() = default;
    Graph(std::string graph_id, int num_nodes);

    const std::string& id() const { return id_; }
    int num_nodes() const { return n_; }

    double weight(int i, int j) const { return weights_[idx(i, j)]; }
    bool has_edge(int i, int j) const { return weight(i, j) > 0.0; }

    // sets both (i, j) and (j, i); w == 0 removes the edge
    void set_weight(int i, int j, double w);

    int num_edges() const;
    double total_weight() const;
    std::vector<std::pair<int, int>> edges() const;

    // sum of incident edge weights
    double weighted_degree(int i) const;
    // average collaborations per vertex: 2 * total_weight / num_nodes
    double mean_weighted_degree() const;

    void validate() const;

    bool operator==(const Graph& other) const = default;

private:
    std::size_t idx(int i, int j) const {
        check_bounds(i, j);
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
               static_cast<std::size_t>(j);
    }
    void check_bounds(int i, int j) const;

    std::string id_;
    int n_ = 0;
    std::vector<double> weights_;
};

bool has_cycle(const Graph& g);
bool is_connected(const Graph& g);

struct EditDistanceResult {
    double ged = 0.0;
    int node_term = 0;
    double edge_term = 0.0;
};

// Identity vertex alignment, unit costs. node_term = |n_a - n_b|; edge_term
// counts vertex pairs whose edge differs (present in one only, or present in
// both with different weights).
EditDistanceResult graph_edit_distance(const Graph& a, const Graph& b);

// 1 / (1 + ged), in (0, 1]
double similarity(const Graph& a, const Graph& b);

struct Member {
    Graph graph;
    int label = 0; // ground truth, in {0, 1}

    bool operator==(const Member&) const = default;
};

struct Snapshot {
    int t = 0;
    std::vector<Member> members;

    const Member* find(const std::string& graph_id) const;

    bool operator==(const Snapshot&) const = default;
};

/// Ordered snapshots t = 0..T over a stable graph-id space.
class TemporalDataset {
public:
    TemporalDataset() = default;
    explicit TemporalDataset(std::vector<Snapshot> snapshots);

    const std::vector<Snapshot>& snapshots() const { return snapshots_; }
    std::vector<Snapshot>& snapshots() { return snapshots_; }
    const Snapshot& snapshot(int t) const;
    int horizon() const { return static_cast<int>(snapshots_.size()) - 1; }
    bool empty() const { return snapshots_.empty(); }

    // time contiguity, per-snapshot id uniqueness, id persistence, graph
    // invariants; throws Error(Status::validation) naming the offender
    void validate() const;

    bool operator==(const TemporalDataset&) const = default;

private:
    std::vector<Snapshot> snapshots_;
};

} // namespace graphcf
