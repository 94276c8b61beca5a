// Independent reference implementations used as test oracles. Everything in
// this header is deliberately written the slow, obvious way and must not
// call into the library code paths it is checking.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <vector>

#include "graphcf/graph.hpp"

namespace ref {

// ---- minimum edit-sequence cost, identity vertex alignment ----------------
//
// Breadth-first search over graph states. Unit-cost moves:
//   - set any vertex pair inside the current range to another weight value
//     (absent -> w is an insertion, w -> absent a deletion, w -> w' a
//     substitution),
//   - append an isolated vertex,
//   - remove the last vertex if it is isolated.
// Weights are restricted to a small alphabet so the state space is finite.

class EditSearch {
public:
    // alphabet maps weight value -> symbol (symbol 0 is "absent")
    EditSearch(int max_nodes, std::vector<double> weight_alphabet)
        : max_nodes_(max_nodes), alphabet_(std::move(weight_alphabet)) {
        num_pairs_ = max_nodes_ * (max_nodes_ - 1) / 2;
        symbols_ = static_cast<int>(alphabet_.size()) + 1;
    }

    int min_edit_cost(const graphcf::Graph& a, const graphcf::Graph& b) const {
        const std::uint64_t start = encode(a);
        const std::uint64_t goal = encode(b);
        if (start == goal) return 0;
        std::map<std::uint64_t, int> dist;
        dist[start] = 0;
        std::queue<std::uint64_t> frontier;
        frontier.push(start);
        while (!frontier.empty()) {
            const std::uint64_t state = frontier.front();
            frontier.pop();
            const int d = dist[state];
            for (const std::uint64_t next : neighbors(state)) {
                if (dist.count(next)) continue;
                if (next == goal) return d + 1;
                dist[next] = d + 1;
                frontier.push(next);
            }
        }
        return -1; // unreachable under a sane alphabet
    }

private:
    int pair_index(int i, int j) const { // i < j
        int idx = 0;
        for (int r = 0; r < i; ++r) idx += max_nodes_ - 1 - r;
        return idx + (j - i - 1);
    }

    int symbol_of(double w) const {
        if (w <= 0.0) return 0;
        for (std::size_t s = 0; s < alphabet_.size(); ++s) {
            if (alphabet_[s] == w) return static_cast<int>(s) + 1;
        }
        throw graphcf::Error(graphcf::Status::invalid_arg,
                             "edit search: weight outside the alphabet");
    }

    // state layout: pair symbols in base `symbols_`, node count on top
    std::uint64_t encode(const graphcf::Graph& g) const {
        std::uint64_t state = 0;
        std::uint64_t scale = 1;
        for (int i = 0; i < max_nodes_; ++i) {
            for (int j = i + 1; j < max_nodes_; ++j) {
                const int sym = (i < g.num_nodes() && j < g.num_nodes())
                                    ? symbol_of(g.weight(i, j))
                                    : 0;
                state += scale * static_cast<std::uint64_t>(sym);
                scale *= static_cast<std::uint64_t>(symbols_);
            }
        }
        return state + scale * static_cast<std::uint64_t>(g.num_nodes());
    }

    std::vector<int> decode_pairs(std::uint64_t state, int* nodes) const {
        std::vector<int> syms(static_cast<std::size_t>(num_pairs_));
        for (int p = 0; p < num_pairs_; ++p) {
            syms[static_cast<std::size_t>(p)] =
                static_cast<int>(state % static_cast<std::uint64_t>(symbols_));
            state /= static_cast<std::uint64_t>(symbols_);
        }
        *nodes = static_cast<int>(state);
        return syms;
    }

    std::uint64_t encode_pairs(const std::vector<int>& syms, int nodes) const {
        std::uint64_t state = 0;
        std::uint64_t scale = 1;
        for (int p = 0; p < num_pairs_; ++p) {
            state += scale * static_cast<std::uint64_t>(syms[static_cast<std::size_t>(p)]);
            scale *= static_cast<std::uint64_t>(symbols_);
        }
        return state + scale * static_cast<std::uint64_t>(nodes);
    }

    std::vector<std::uint64_t> neighbors(std::uint64_t state) const {
        int nodes = 0;
        std::vector<int> syms = decode_pairs(state, &nodes);
        std::vector<std::uint64_t> out;
        // edge edits inside the current range
        for (int i = 0; i < nodes; ++i) {
            for (int j = i + 1; j < nodes; ++j) {
                const int p = pair_index(i, j);
                const int old_sym = syms[static_cast<std::size_t>(p)];
                for (int s = 0; s < symbols_; ++s) {
                    if (s == old_sym) continue;
                    syms[static_cast<std::size_t>(p)] = s;
                    out.push_back(encode_pairs(syms, nodes));
                }
                syms[static_cast<std::size_t>(p)] = old_sym;
            }
        }
        // append an isolated vertex
        if (nodes < max_nodes_) out.push_back(encode_pairs(syms, nodes + 1));
        // drop the last vertex when isolated
        if (nodes > 1) {
            bool isolated = true;
            for (int i = 0; i < nodes - 1 && isolated; ++i) {
                if (syms[static_cast<std::size_t>(pair_index(i, nodes - 1))] != 0) {
                    isolated = false;
                }
            }
            if (isolated) out.push_back(encode_pairs(syms, nodes - 1));
        }
        return out;
    }

    int max_nodes_;
    std::vector<double> alphabet_;
    int num_pairs_;
    int symbols_;
};

// ---- straight-line GCN forward pass, no linear-algebra library ------------

struct DenseMatrix {
    int rows = 0, cols = 0;
    std::vector<double> data;
    DenseMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}
    double& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    double at(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

inline DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix c(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k)
            for (int j = 0; j < b.cols; ++j)
                c.at(i, j) += a.at(i, k) * b.at(k, j);
    return c;
}

// Z = A_hat relu(A_hat X W1) W2, everything computed with plain loops
inline DenseMatrix straight_line_encode(const graphcf::Graph& g,
                                        const DenseMatrix& w1,
                                        const DenseMatrix& w2) {
    const int n = g.num_nodes();
    DenseMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a.at(i, j) = i == j ? 1.0 : g.weight(i, j);
    std::vector<double> row_sums(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) row_sums[static_cast<std::size_t>(i)] += a.at(i, j);
    DenseMatrix a_hat(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a_hat.at(i, j) = a.at(i, j) / std::sqrt(row_sums[static_cast<std::size_t>(i)] *
                                                    row_sums[static_cast<std::size_t>(j)]);

    DenseMatrix x(n, 2);
    double max_deg = 0.0;
    std::vector<double> degs(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            if (j != i) degs[static_cast<std::size_t>(i)] += g.weight(i, j);
        max_deg = std::max(max_deg, degs[static_cast<std::size_t>(i)]);
    }
    for (int i = 0; i < n; ++i) {
        x.at(i, 0) = 1.0;
        x.at(i, 1) = max_deg > 0.0 ? degs[static_cast<std::size_t>(i)] / max_deg : 0.0;
    }

    DenseMatrix h = multiply(multiply(a_hat, x), w1);
    for (double& v : h.data) v = std::max(v, 0.0);
    return multiply(multiply(a_hat, h), w2);
}

// mean binary cross-entropy over ordered off-diagonal pairs, elementwise
inline double elementwise_bce(const DenseMatrix& z, const graphcf::Graph& g) {
    const int n = g.num_nodes();
    double sum = 0.0;
    int pairs = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double logit = 0.0;
            for (int c = 0; c < z.cols; ++c) logit += z.at(i, c) * z.at(j, c);
            const double p = 1.0 / (1.0 + std::exp(-logit));
            const double y = g.has_edge(i, j) ? 1.0 : 0.0;
            sum += -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
            ++pairs;
        }
    }
    return pairs > 0 ? sum / pairs : 0.0;
}

// ---- two-sample KS pieces --------------------------------------------------

// sup over all sample points of |F_a - F_b|, quadratic-time double loop
inline double brute_force_ks_statistic(const std::vector<double>& a,
                                       const std::vector<double>& b) {
    std::vector<double> points = a;
    points.insert(points.end(), b.begin(), b.end());
    double best = 0.0;
    for (const double x : points) {
        double fa = 0.0, fb = 0.0;
        for (const double v : a)
            if (v <= x) fa += 1.0;
        for (const double v : b)
            if (v <= x) fb += 1.0;
        best = std::max(best,
                        std::abs(fa / static_cast<double>(a.size()) -
                                 fb / static_cast<double>(b.size())));
    }
    return best;
}

// Q(lambda) = 2 sum_{k=1..100} (-1)^{k-1} exp(-2 k^2 lambda^2), as a p-value
inline double kolmogorov_series(double lambda) {
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        sum += (k % 2 == 1 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    }
    return std::min(1.0, std::max(0.0, 2.0 * sum));
}

} // namespace ref
