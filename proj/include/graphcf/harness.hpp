#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphcf/datagen.hpp"
#include "graphcf/drift.hpp"
#include "graphcf/explainer.hpp"
#include "graphcf/metrics.hpp"

namespace graphcf {

struct DatasetConfig {
    enum class Family { tree_cycles, coauthor, file };
    Family family = Family::tree_cycles;
    TreeCyclesConfig tree_cycles;
    CoauthorConfig coauthor;
    std::string path;          // family == file
    double percentile = 75.0;  // oracle threshold rule for coauthor/file
    bool seed_pinned = false;  // dataset seed given explicitly in the config
};

struct RunConfig {
    DatasetConfig dataset;
    ExplainerConfig explainer;
    int folds = 10;
    double holdout = 0.10;
    std::uint64_t seed = 0;
    double significance = 0.05;
    int threads = 0; // 0 = one per fold up to hardware concurrency

    void validate() const;
};

// Parses the JSON run configuration (sections: dataset, model, explainer,
// eval, output). Family-specific model defaults: tree_cycles trains 50
// epochs at 1e-3, coauthor 150 epochs at 1e-4.
RunConfig parse_run_config(const std::string& json_text);
std::string run_config_output_dir(const std::string& json_text);

struct FoldDrift {
    int fold = 0;
    DriftReport report;
};

struct FoldExplanation {
    int fold = 0;
    Explanation explanation;
};

struct FoldStatus {
    int fold = 0;
    bool failed = false;
    std::string message;
    std::vector<std::string> warnings;
};

struct RunResult {
    std::string dataset_name;
    std::vector<MetricsRecord> records;
    std::vector<AggregateRow> aggregate;
    std::vector<FoldDrift> drift;
    std::vector<FoldExplanation> explanations;
    std::vector<FoldStatus> folds;
    std::vector<std::string> checkpoints; // serialized final state per fold
};

// 10-fold style cross-validation: each fold holds out a block of snapshot-0
// graph ids as perpetual test queries, fits on the remainder, then walks the
// snapshots in order (explain, record metrics and drift, adapt).
RunResult run_cv(const RunConfig& cfg);

// folds.csv, aggregate.csv, drift.csv, explanations.jsonl, summary.json and
// per-fold checkpoints under <out_dir>
void write_run_outputs(const RunResult& result, const std::string& out_dir);

std::string run_summary_json(const RunResult& result);

TemporalDataset build_dataset(const DatasetConfig& cfg);
Oracle build_oracle(const DatasetConfig& cfg, const TemporalDataset& ds);

} // namespace graphcf
