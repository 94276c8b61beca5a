#include "graphcf/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace graphcf {

Graph::Graph(std::string graph_id, int num_nodes)
    : id_(std::move(graph_id)), n_(num_nodes) {
    if (num_nodes <= 0) {
        throw Error(Status::validation,
                    "graph '" + id_ + "': num_nodes must be positive");
    }
    weights_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
}

void Graph::check_bounds(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) {
        throw Error(Status::invalid_arg,
                    "graph '" + id_ + "': vertex index out of range");
    }
}

void Graph::set_weight(int i, int j, double w) {
    check_bounds(i, j);
    if (i == j) {
        throw Error(Status::validation,
                    "graph '" + id_ + "': self-loops are not allowed");
    }
    if (w < 0.0 || !std::isfinite(w)) {
        throw Error(Status::validation,
                    "graph '" + id_ + "': edge weight must be a finite non-negative number");
    }
    weights_[idx(i, j)] = w;
    weights_[idx(j, i)] = w;
}

int Graph::num_edges() const {
    int count = 0;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if (has_edge(i, j)) ++count;
    return count;
}

double Graph::total_weight() const {
    double sum = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            sum += weight(i, j);
    return sum;
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if (has_edge(i, j)) out.emplace_back(i, j);
    return out;
}

double Graph::weighted_degree(int i) const {
    double sum = 0.0;
    for (int j = 0; j < n_; ++j)
        if (j != i) sum += weight(i, j);
    return sum;
}

double Graph::mean_weighted_degree() const {
    return 2.0 * total_weight() / static_cast<double>(n_);
}

void Graph::validate() const {
    if (n_ <= 0) {
        throw Error(Status::validation,
                    "graph '" + id_ + "': num_nodes must be positive");
    }
    for (int i = 0; i < n_; ++i) {
        if (weights_[static_cast<std::size_t>(i) * n_ + i] != 0.0) {
            throw Error(Status::validation,
                        "graph '" + id_ + "': nonzero diagonal at vertex " +
                            std::to_string(i));
        }
        for (int j = 0; j < n_; ++j) {
            const double w = weights_[static_cast<std::size_t>(i) * n_ + j];
            if (w < 0.0 || !std::isfinite(w)) {
                throw Error(Status::validation,
                            "graph '" + id_ + "': negative weight at (" +
                                std::to_string(i) + ", " + std::to_string(j) + ")");
            }
            if (w != weights_[static_cast<std::size_t>(j) * n_ + i]) {
                throw Error(Status::validation,
                            "graph '" + id_ + "': asymmetric weights at (" +
                                std::to_string(i) + ", " + std::to_string(j) + ")");
            }
        }
    }
}

namespace {

// iterative DFS over the positive-weight adjacency
void dfs_component(const Graph& g, int start, std::vector<int>& component, int mark) {
    std::vector<int> stack{start};
    component[start] = mark;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v = 0; v < g.num_nodes(); ++v) {
            if (v != u && g.has_edge(u, v) && component[v] < 0) {
                component[v] = mark;
                stack.push_back(v);
            }
        }
    }
}

} // namespace

bool has_cycle(const Graph& g) {
    const int n = g.num_nodes();
    // A forest has exactly n - #components edges; anything more closes a cycle.
    std::vector<int> component(n, -1);
    int num_components = 0;
    for (int i = 0; i < n; ++i) {
        if (component[i] < 0) {
            dfs_component(g, i, component, num_components);
            ++num_components;
        }
    }
    return g.num_edges() > n - num_components;
}

bool is_connected(const Graph& g) {
    const int n = g.num_nodes();
    if (n <= 1) return true;
    std::vector<int> component(n, -1);
    dfs_component(g, 0, component, 0);
    return std::all_of(component.begin(), component.end(),
                       [](int c) { return c == 0; });
}

EditDistanceResult graph_edit_distance(const Graph& a, const Graph& b) {
    EditDistanceResult r;
    r.node_term = std::abs(a.num_nodes() - b.num_nodes());
    const int n = std::max(a.num_nodes(), b.num_nodes());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double wa =
                (i < a.num_nodes() && j < a.num_nodes()) ? a.weight(i, j) : 0.0;
            const double wb =
                (i < b.num_nodes() && j < b.num_nodes()) ? b.weight(i, j) : 0.0;
            const bool ea = wa > 0.0;
            const bool eb = wb > 0.0;
            if (ea != eb) {
                r.edge_term += 1.0; // insertion / deletion
            } else if (ea && wa != wb) {
                r.edge_term += 1.0; // weight substitution
            }
        }
    }
    r.ged = static_cast<double>(r.node_term) + r.edge_term;
    return r;
}

double similarity(const Graph& a, const Graph& b) {
    return 1.0 / (1.0 + graph_edit_distance(a, b).ged);
}

const Member* Snapshot::find(const std::string& graph_id) const {
    for (const Member& m : members)
        if (m.graph.id() == graph_id) return &m;
    return nullptr;
}

TemporalDataset::TemporalDataset(std::vector<Snapshot> snapshots)
    : snapshots_(std::move(snapshots)) {}

const Snapshot& TemporalDataset::snapshot(int t) const {
    if (t < 0 || t >= static_cast<int>(snapshots_.size())) {
        throw Error(Status::invalid_arg,
                    "snapshot index " + std::to_string(t) + " out of range");
    }
    return snapshots_[static_cast<std::size_t>(t)];
}

void TemporalDataset::validate() const {
    for (std::size_t k = 0; k < snapshots_.size(); ++k) {
        const Snapshot& s = snapshots_[k];
        if (s.t != static_cast<int>(k)) {
            throw Error(Status::validation,
                        "snapshot times must be contiguous from 0; found t=" +
                            std::to_string(s.t) + " at position " + std::to_string(k));
        }
        std::vector<std::string> ids;
        for (const Member& m : s.members) {
            if (m.label != 0 && m.label != 1) {
                throw Error(Status::validation,
                            "graph '" + m.graph.id() + "': label must be 0 or 1");
            }
            m.graph.validate();
            ids.push_back(m.graph.id());
        }
        std::sort(ids.begin(), ids.end());
        if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
            throw Error(Status::validation,
                        "snapshot t=" + std::to_string(s.t) +
                            " contains duplicate graph_ids");
        }
        if (k > 0) {
            for (const Member& m : s.members) {
                if (snapshots_[k - 1].find(m.graph.id()) == nullptr) {
                    throw Error(Status::validation,
                                "graph '" + m.graph.id() + "' appears at t=" +
                                    std::to_string(s.t) +
                                    " without being present at t-1");
                }
            }
        }
    }
}

} // namespace graphcf
