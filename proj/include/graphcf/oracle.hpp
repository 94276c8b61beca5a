#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "graphcf/graph.hpp"

namespace graphcf {

/// Ground-truth classifier with an invocation counter. The cycle kind labels
/// a graph 1 iff it contains a cycle; the percentile kind labels a graph 1
/// iff its mean weighted degree reaches the per-snapshot threshold frozen at
/// construction time.
class Oracle {
public:
    enum class Kind { cycle, percentile };

    static Oracle cycle();
    static Oracle percentile(std::vector<double> thresholds_by_t);
    // thresholds computed over the full population of each snapshot
    static Oracle percentile_from_dataset(const TemporalDataset& ds, double pct);

    Oracle(const Oracle& other);
    Oracle& operator=(const Oracle&) = delete;

    Kind kind() const { return kind_; }
    const std::vector<double>& thresholds() const { return thresholds_; }

    // increments the call counter by exactly 1
    int classify(const Graph& g, int t) const;

    void reset_counter() const { calls_.store(0); }
    long long read_counter() const { return calls_.load(); }

private:
    explicit Oracle(Kind kind) : kind_(kind) {}

    Kind kind_;
    std::vector<double> thresholds_;
    mutable std::atomic<long long> calls_{0};
};

} // namespace graphcf
