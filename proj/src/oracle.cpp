#include "graphcf/oracle.hpp"

#include "graphcf/stats.hpp"

namespace graphcf {

Oracle Oracle::cycle() { return Oracle(Kind::cycle); }

Oracle Oracle::percentile(std::vector<double> thresholds_by_t) {
    Oracle o(Kind::percentile);
    o.thresholds_ = std::move(thresholds_by_t);
    return o;
}

Oracle Oracle::percentile_from_dataset(const TemporalDataset& ds, double pct) {
    std::vector<double> thresholds;
    for (const Snapshot& snap : ds.snapshots()) {
        std::vector<double> means;
        means.reserve(snap.members.size());
        for (const Member& m : snap.members) {
            means.push_back(m.graph.mean_weighted_degree());
        }
        thresholds.push_back(quantile_linear(means, pct));
    }
    return percentile(std::move(thresholds));
}

Oracle::Oracle(const Oracle& other)
    : kind_(other.kind_),
      thresholds_(other.thresholds_),
      calls_(other.calls_.load()) {}

int Oracle::classify(const Graph& g, int t) const {
    if (kind_ == Kind::percentile &&
        (t < 0 || t >= static_cast<int>(thresholds_.size()))) {
        throw Error(Status::invalid_arg,
                    "percentile oracle has no threshold for t=" + std::to_string(t));
    }
    calls_.fetch_add(1);
    if (kind_ == Kind::cycle) {
        return has_cycle(g) ? 1 : 0;
    }
    return g.mean_weighted_degree() >= thresholds_[static_cast<std::size_t>(t)] ? 1 : 0;
}

} // namespace graphcf
