#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graphcf/gae.hpp"
#include "graphcf/graph.hpp"
#include "graphcf/oracle.hpp"
#include "graphcf/scorer.hpp"

namespace graphcf {

enum class PairSource { train_split, full_snapshot };

struct AdaptationConfig {
    int epochs = 10;
    double learning_rate = 1e-3;
    bool rehearsal = true;         // also re-minimize each GAE on its own class
    bool warm_start_scorer = false; // refit from scratch by default
    bool pool_filter = false;      // restrict pools to opposite-inferred-class graphs
    PairSource pair_source = PairSource::train_split;
};

struct ExplainerConfig {
    int hidden_dim = 8;
    int k = 10;
    GaeTrainConfig initial_train;  // 50 epochs @ 1e-3 (tree-cycles scale)
    AdaptationConfig adaptation;
    double scorer_l2 = 1e-4;
    std::uint64_t seed = 0;
};

struct RankedEntry {
    std::string graph_id;
    double score = 0.0;
    double ged = 0.0;
    double sim = 0.0;
};

// Per-query output; an empty ranked list is an explicit failure to produce
// any counterfactual candidate.
struct Explanation {
    int t = 0;
    std::string query_id;
    int inferred_class = 0;
    std::vector<RankedEntry> ranked;

    bool empty() const { return ranked.empty(); }
};

struct AdaptReport {
    int t = 0;
    std::size_t counterfactual_updates[2] = {0, 0};
    bool scorer_refitted = false;
    std::vector<std::string> warnings;
};

/// The full pipeline state: two class autoencoders, the pair scorer, and the
/// current time index. Supervised fit happens once at t = 0; every later
/// snapshot is processed without consulting the oracle.
class ExplainerState {
public:
    // Trains f0/f1 on the oracle-partitioned train split, then fits the
    // scorer on (train x snapshot) pairs labelled by class difference.
    static ExplainerState fit_initial(const Snapshot& snapshot0,
                                      const Oracle& oracle,
                                      const std::vector<std::string>& train_ids,
                                      const ExplainerConfig& cfg);

    // argmin over classes of the reconstruction error; ties go to class 0
    int infer_class(const Graph& g) const;

    // cache, when given, must cover the query and every pool graph
    Explanation explain(const Graph& query,
                        const std::vector<const Graph*>& pool,
                        const ErrorCache* cache = nullptr) const;

    // One online step: infer classes, collect top-k counterfactual
    // candidates, update both GAEs contrastively, refit the scorer on
    // inferred labels. Never calls the oracle.
    AdaptReport adapt(const Snapshot& snapshot);

    const GaeModel& f0() const { return f0_; }
    const GaeModel& f1() const { return f1_; }
    const PairScorer& scorer() const { return scorer_; }
    const ExplainerConfig& config() const { return cfg_; }
    int current_t() const { return current_t_; }
    int k() const { return cfg_.k; }
    void set_k(int k);
    const std::vector<std::string>& train_ids() const { return train_ids_; }
    // labels assigned by the oracle during the initial fit
    const std::map<std::string, int>& initial_labels() const { return initial_labels_; }
    long long fit_label_comparisons() const { return fit_label_comparisons_; }
    long long fit_oracle_calls() const { return fit_oracle_calls_; }

    std::string to_json() const;
    static ExplainerState from_json(const std::string& text);
    void save(const std::string& path) const;
    static ExplainerState load(const std::string& path);

private:
    ExplainerState() = default;

    GaeModel f0_;
    GaeModel f1_;
    PairScorer scorer_;
    ExplainerConfig cfg_;
    int current_t_ = -1;
    std::vector<std::string> train_ids_;
    std::map<std::string, int> initial_labels_;
    long long fit_label_comparisons_ = 0;
    long long fit_oracle_calls_ = 0;
};

// Similarity search against the oracle: the pool graph with the highest
// similarity among those the oracle places in the opposite class. Consults
// the oracle once per pool graph (plus once for the query).
Explanation baseline_dce(const Graph& query,
                         const std::vector<const Graph*>& pool,
                         const Oracle& oracle, int t);

std::string explanation_to_json(const Explanation& e);

} // namespace graphcf
