#pragma once

#include <cstdint>
#include <string>

#include "graphcf/graph.hpp"

namespace graphcf {

/// Dynamic Tree-Cycles: class 0 graphs are spanning trees, class 1 graphs are
/// trees plus at least one cycle-closing edge. Graphs evolve snapshot to
/// snapshot by within-class rewiring or explicit class flips; stored labels
/// are always recomputed by cycle detection.
struct TreeCyclesConfig {
    int num_graphs = 100;
    int nodes_per_graph = 28;
    int num_snapshots = 4;
    double cycle_fraction = 0.54;
    double mutation_rate = 0.10;
    double class_flip_prob = 0.10;
    std::uint64_t seed = 0;

    void validate() const;
};

TemporalDataset generate_tree_cycles(const TreeCyclesConfig& cfg);

/// Synthetic co-authorship ego-networks with integer collaboration weights.
/// An ego inactive at t carries its t-1 network forward unchanged. An ego is
/// labelled 1 iff its mean weighted degree reaches that snapshot's
/// percentile-th percentile of per-ego means.
struct CoauthorConfig {
    int num_egos = 36;
    int nodes_per_ego = 13;
    int num_snapshots = 11;
    // per-ego, per-year co-author edge probability band (ego-coauthor edges
    // always exist); weights are 1 + Geometric(weight_geometric_p)
    double coauthor_edge_prob_min = 0.32;
    double coauthor_edge_prob_max = 0.57;
    double weight_geometric_p = 0.5;
    double inactivity_prob = 0.2;
    double percentile = 75.0;
    std::uint64_t seed = 0;

    void validate() const;
};

TemporalDataset generate_coauthor(const CoauthorConfig& cfg);

// Loads a dataset in the standard file format and recomputes every label from
// edge weights by the percentile rule, overwriting stored labels.
TemporalDataset load_coauthor_file(const std::string& path, double percentile);

// Applies the percentile labelling rule in place; returns per-snapshot
// thresholds (mean weighted degree >= threshold gives label 1).
std::vector<double> relabel_by_percentile(TemporalDataset& ds, double percentile);

} // namespace graphcf
