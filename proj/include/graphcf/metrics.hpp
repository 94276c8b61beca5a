#pragma once

#include <map>
#include <string>
#include <vector>

#include "graphcf/explainer.hpp"
#include "graphcf/graph.hpp"

namespace graphcf {

/// One evaluation row per (dataset, fold, t); per-query values are averaged
/// over that fold's test queries.
struct MetricsRecord {
    std::string dataset;
    int fold = 0;
    int t = 0;
    double runtime_s = 0.0;
    double correctness_at_1 = 0.0;
    double correctness_at_k = 0.0;
    double sparsity_at_1 = 0.0;
    double sparsity_at_k = 0.0;
    double ged_at_1 = 0.0;
    double ged_at_k = 0.0;
    double oracle_calls = 0.0;     // label comparisons (train x candidates at t=0)
    double oracle_calls_raw = 0.0; // classify invocations behind the cache
};

// 1 iff any of the first min(j, len) ranked candidates has a true label
// different from the query's; an empty list scores 0
int correctness_at(const Explanation& expl,
                   const std::map<std::string, int>& truth, int j);

// ged(query, candidate) / (num_nodes + num_edges of the query)
double sparsity(const Graph& query, const Graph& candidate);

struct AggregateRow {
    std::string dataset;
    int t = 0;
    int folds = 0;
    // column order mirrors the fold records
    double mean[9] = {0};
    double stddev[9] = {0};
};

std::vector<AggregateRow> aggregate_records(const std::vector<MetricsRecord>& records);

void write_fold_csv(const std::vector<MetricsRecord>& records,
                    const std::string& path);
void write_aggregate_csv(const std::vector<AggregateRow>& rows,
                         const std::string& path);
std::vector<MetricsRecord> read_fold_csv(const std::string& path);

// emits <dir>/folds.csv and <dir>/aggregate.csv
void write_report(const std::vector<MetricsRecord>& records,
                  const std::string& dir);

std::string format_aggregate_table(const std::vector<AggregateRow>& rows);

} // namespace graphcf
