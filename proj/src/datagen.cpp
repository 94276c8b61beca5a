#include "graphcf/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "graphcf/dataset_io.hpp"
#include "graphcf/rng.hpp"
#include "graphcf/stats.hpp"

namespace graphcf {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(Status::validation, what);
}

std::string padded_id(const char* prefix, int i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%03d", prefix, i);
    return buf;
}

// uniform spanning tree via a random Prufer sequence
Graph random_tree(const std::string& id, int n, Rng& rng) {
    Graph g(id, n);
    if (n == 1) return g;
    if (n == 2) {
        g.set_weight(0, 1, 1.0);
        return g;
    }
    std::vector<int> prufer(static_cast<std::size_t>(n) - 2);
    for (int& p : prufer) p = rng.uniform_int(0, n - 1);
    std::vector<int> degree(static_cast<std::size_t>(n), 1);
    for (int p : prufer) ++degree[static_cast<std::size_t>(p)];
    // repeatedly join the smallest leaf to the next sequence entry
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (int p : prufer) {
        int leaf = -1;
        for (int v = 0; v < n; ++v) {
            if (degree[static_cast<std::size_t>(v)] == 1 && !used[static_cast<std::size_t>(v)]) {
                leaf = v;
                break;
            }
        }
        g.set_weight(leaf, p, 1.0);
        used[static_cast<std::size_t>(leaf)] = true;
        --degree[static_cast<std::size_t>(p)];
    }
    int a = -1, b = -1;
    for (int v = 0; v < n; ++v) {
        if (!used[static_cast<std::size_t>(v)] && degree[static_cast<std::size_t>(v)] == 1) {
            (a < 0 ? a : b) = v;
        }
    }
    g.set_weight(a, b, 1.0);
    return g;
}

// removes a random tree edge and reconnects the two components elsewhere;
// the result is again a spanning tree
void tree_rewire(Graph& g, Rng& rng) {
    const auto edges = g.edges();
    if (edges.empty()) return;
    const auto [u, v] = edges[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(edges.size()) - 1))];
    g.set_weight(u, v, 0.0);

    const int n = g.num_nodes();
    std::vector<bool> side_u(static_cast<std::size_t>(n), false);
    std::vector<int> stack{u};
    side_u[static_cast<std::size_t>(u)] = true;
    while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        for (int y = 0; y < n; ++y) {
            if (y != x && g.has_edge(x, y) && !side_u[static_cast<std::size_t>(y)]) {
                side_u[static_cast<std::size_t>(y)] = true;
                stack.push_back(y);
            }
        }
    }
    std::vector<int> comp_u, comp_v;
    for (int x = 0; x < n; ++x) {
        (side_u[static_cast<std::size_t>(x)] ? comp_u : comp_v).push_back(x);
    }
    const int a = comp_u[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(comp_u.size()) - 1))];
    const int b = comp_v[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(comp_v.size()) - 1))];
    g.set_weight(a, b, 1.0);
}

void add_random_non_edge(Graph& g, Rng& rng) {
    const int n = g.num_nodes();
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const int u = rng.uniform_int(0, n - 1);
        const int v = rng.uniform_int(0, n - 1);
        if (u != v && !g.has_edge(u, v)) {
            g.set_weight(u, v, 1.0);
            return;
        }
    }
}

// chance of a second cycle-closing edge; with cycle_fraction 0.54 this puts
// the mean edge count per snapshot near 27.62 on 28-node graphs
constexpr double kSecondCycleEdgeProb = 0.15;
// how far each instance diverges from the snapshot-0 base tree
constexpr double kInstanceDivergence = 0.35;

void add_cycle_edges(Graph& g, Rng& rng) {
    const int extra = 1 + (rng.bernoulli(kSecondCycleEdgeProb) ? 1 : 0);
    for (int e = 0; e < extra; ++e) add_random_non_edge(g, rng);
}

// keeps a spanning subset of the existing edges, dropping every extra edge
void break_cycles(Graph& g, Rng& rng) {
    auto edges = g.edges();
    rng.shuffle(edges);
    const int n = g.num_nodes();
    std::vector<int> parent(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (const auto& [u, v] : edges) {
        const int ru = find(u), rv = find(v);
        if (ru == rv) {
            g.set_weight(u, v, 0.0); // closing edge, drop it
        } else {
            parent[static_cast<std::size_t>(ru)] = rv;
        }
    }
}

// random edge move that must keep the graph connected and cyclic
void cyclic_rewire(Graph& g, Rng& rng) {
    for (int attempt = 0; attempt < 50; ++attempt) {
        const auto edges = g.edges();
        const auto [u, v] = edges[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<int>(edges.size()) - 1))];
        g.set_weight(u, v, 0.0);
        const int n = g.num_nodes();
        int a = -1, b = -1;
        for (int inner = 0; inner < 200; ++inner) {
            a = rng.uniform_int(0, n - 1);
            b = rng.uniform_int(0, n - 1);
            if (a != b && !g.has_edge(a, b)) break;
            a = -1;
        }
        if (a >= 0) {
            g.set_weight(a, b, 1.0);
            if (is_connected(g) && has_cycle(g)) return;
            g.set_weight(a, b, 0.0);
        }
        g.set_weight(u, v, 1.0); // revert and retry
    }
}

} // namespace

void TreeCyclesConfig::validate() const {
    require(num_graphs > 0, "tree-cycles config: num_graphs must be > 0");
    require(nodes_per_graph >= 3, "tree-cycles config: nodes_per_graph must be >= 3");
    require(num_snapshots >= 1, "tree-cycles config: num_snapshots must be >= 1");
    require(cycle_fraction >= 0.0 && cycle_fraction <= 1.0,
            "tree-cycles config: cycle_fraction must lie in [0, 1]");
    require(mutation_rate >= 0.0 && mutation_rate <= 1.0,
            "tree-cycles config: mutation_rate must lie in [0, 1]");
    require(class_flip_prob >= 0.0 && class_flip_prob <= 1.0,
            "tree-cycles config: class_flip_prob must lie in [0, 1]");
}

TemporalDataset generate_tree_cycles(const TreeCyclesConfig& cfg) {
    cfg.validate();
    Rng rng(Rng::derive_seed(cfg.seed, 0x7c31));
    const int n = cfg.nodes_per_graph;
    const int num_cyclic =
        static_cast<int>(std::lround(cfg.cycle_fraction * cfg.num_graphs));

    // instances diverge from a shared base tree, so cross-instance distances
    // stay well below full edge turnover
    const Graph base = random_tree("base", n, rng);
    const int divergence_moves =
        static_cast<int>(std::ceil(kInstanceDivergence * (n - 1)));

    std::vector<Snapshot> snapshots;
    Snapshot first;
    first.t = 0;
    for (int i = 0; i < cfg.num_graphs; ++i) {
        Graph g(padded_id("g", i), n);
        for (const auto& [u, v] : base.edges()) g.set_weight(u, v, 1.0);
        for (int m = 0; m < divergence_moves; ++m) tree_rewire(g, rng);
        if (i < num_cyclic) add_cycle_edges(g, rng);
        first.members.push_back({std::move(g), 0});
    }
    snapshots.push_back(std::move(first));

    for (int t = 1; t < cfg.num_snapshots; ++t) {
        Snapshot snap;
        snap.t = t;
        for (const Member& prev : snapshots.back().members) {
            Graph g = prev.graph;
            const bool cyclic = has_cycle(g);
            if (rng.bernoulli(cfg.class_flip_prob)) {
                if (cyclic) {
                    break_cycles(g, rng);
                } else {
                    add_cycle_edges(g, rng);
                }
            } else {
                const int moves = static_cast<int>(
                    std::ceil(cfg.mutation_rate * g.num_edges()));
                for (int m = 0; m < moves; ++m) {
                    if (cyclic) {
                        cyclic_rewire(g, rng);
                    } else {
                        tree_rewire(g, rng);
                    }
                }
            }
            snap.members.push_back({std::move(g), 0});
        }
        snapshots.push_back(std::move(snap));
    }

    // ground truth is always recomputed, never trusted from the mutation path
    for (Snapshot& snap : snapshots) {
        for (Member& m : snap.members) m.label = has_cycle(m.graph) ? 1 : 0;
    }

    TemporalDataset ds(std::move(snapshots));
    ds.validate();
    return ds;
}

void CoauthorConfig::validate() const {
    require(num_egos > 0, "coauthor config: num_egos must be > 0");
    require(nodes_per_ego >= 2, "coauthor config: nodes_per_ego must be >= 2");
    require(num_snapshots >= 1, "coauthor config: num_snapshots must be >= 1");
    require(percentile > 0.0 && percentile < 100.0,
            "coauthor config: percentile must lie in (0, 100)");
    require(inactivity_prob >= 0.0 && inactivity_prob <= 1.0,
            "coauthor config: inactivity_prob must lie in [0, 1]");
    require(weight_geometric_p > 0.0 && weight_geometric_p <= 1.0,
            "coauthor config: weight_geometric_p must lie in (0, 1]");
    require(coauthor_edge_prob_min >= 0.0 && coauthor_edge_prob_max <= 1.0 &&
                coauthor_edge_prob_min <= coauthor_edge_prob_max,
            "coauthor config: edge probability band must lie in [0, 1]");
}

TemporalDataset generate_coauthor(const CoauthorConfig& cfg) {
    cfg.validate();
    Rng rng(Rng::derive_seed(cfg.seed, 0xc0a0));
    const int n = cfg.nodes_per_ego;

    auto fresh_network = [&](const std::string& id) {
        Graph g(id, n);
        // vertex 0 is the ego and collaborates with every co-author
        for (int j = 1; j < n; ++j) {
            g.set_weight(0, j, 1.0 + rng.geometric(cfg.weight_geometric_p));
        }
        const double q = rng.uniform(cfg.coauthor_edge_prob_min,
                                     cfg.coauthor_edge_prob_max);
        for (int i = 1; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (rng.bernoulli(q)) {
                    g.set_weight(i, j, 1.0 + rng.geometric(cfg.weight_geometric_p));
                }
            }
        }
        return g;
    };

    std::vector<Snapshot> snapshots;
    for (int t = 0; t < cfg.num_snapshots; ++t) {
        Snapshot snap;
        snap.t = t;
        for (int e = 0; e < cfg.num_egos; ++e) {
            const std::string id = padded_id("ego", e);
            if (t > 0 && rng.bernoulli(cfg.inactivity_prob)) {
                // no activity this year; carry the previous network forward
                snap.members.push_back(snapshots.back().members[static_cast<std::size_t>(e)]);
            } else {
                snap.members.push_back({fresh_network(id), 0});
            }
        }
        snapshots.push_back(std::move(snap));
    }

    TemporalDataset ds(std::move(snapshots));
    relabel_by_percentile(ds, cfg.percentile);
    ds.validate();
    return ds;
}

std::vector<double> relabel_by_percentile(TemporalDataset& ds, double percentile) {
    std::vector<double> thresholds;
    for (Snapshot& snap : ds.snapshots()) {
        std::vector<double> means;
        means.reserve(snap.members.size());
        for (const Member& m : snap.members) {
            means.push_back(m.graph.mean_weighted_degree());
        }
        const double threshold = quantile_linear(means, percentile);
        thresholds.push_back(threshold);
        for (std::size_t i = 0; i < snap.members.size(); ++i) {
            snap.members[i].label = means[i] >= threshold ? 1 : 0;
        }
    }
    return thresholds;
}

TemporalDataset load_coauthor_file(const std::string& path, double percentile) {
    TemporalDataset ds = load_dataset(path);
    relabel_by_percentile(ds, percentile);
    return ds;
}

} // namespace graphcf
