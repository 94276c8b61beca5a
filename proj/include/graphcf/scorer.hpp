#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "graphcf/gae.hpp"
#include "graphcf/graph.hpp"

namespace graphcf {

struct PairFeatures {
    double h_factual = 0.0;       // candidate error under the query-class GAE
    double h_counterfactual = 0.0; // candidate error under the opposite GAE
    double sim = 0.0;             // similarity(query, candidate), in (0, 1]
};

struct PairExample {
    PairFeatures features;
    int label = 0; // 1 iff the two graphs' classes differ
};

struct LogisticFit {
    std::vector<double> weights;
    double bias = 0.0;
    double loss = 0.0;
    int iterations = 0;
};

// Class-weight-balanced L2-regularized logistic regression, solved by
// full-batch gradient descent from zero parameters until the gradient norm
// drops below 1e-6 or 10,000 iterations pass. The bias is not regularized.
LogisticFit fit_logistic(const std::vector<std::vector<double>>& xs,
                         const std::vector<int>& ys, double l2_lambda,
                         const std::vector<double>* warm_weights = nullptr,
                         const double* warm_bias = nullptr);

double logistic_loss(const std::vector<std::vector<double>>& xs,
                     const std::vector<int>& ys, double l2_lambda,
                     const std::vector<double>& weights, double bias);

/// Logistic model over PairFeatures. Features are z-scored with moments
/// frozen at fit time; alpha, beta, gamma are the coefficients on
/// standardized (h_factual, h_counterfactual, sim).
class PairScorer {
public:
    explicit PairScorer(double l2_lambda = 1e-4) : l2_lambda_(l2_lambda) {}

    void fit(const std::vector<PairExample>& pairs, bool warm_start = false);

    // sigma(w . standardize(f) + bias), in (0, 1)
    double score(const PairFeatures& f) const;

    bool fitted() const { return fitted_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double gamma() const { return gamma_; }
    double bias() const { return bias_; }
    double l2_lambda() const { return l2_lambda_; }
    double train_loss() const { return train_loss_; }
    const std::array<double, 3>& feature_mean() const { return mean_; }
    const std::array<double, 3>& feature_std() const { return std_; }

    // checkpoint restore
    void restore(double alpha, double beta, double gamma, double bias,
                 std::array<double, 3> mean, std::array<double, 3> std,
                 double l2_lambda, bool fitted);

private:
    double alpha_ = 0.0;
    double beta_ = 0.0;
    double gamma_ = 0.0;
    double bias_ = 0.0;
    std::array<double, 3> mean_{0.0, 0.0, 0.0};
    std::array<double, 3> std_{1.0, 1.0, 1.0};
    double l2_lambda_ = 1e-4;
    double train_loss_ = 0.0;
    bool fitted_ = false;
};

PairFeatures extract_features(const Graph& query, const Graph& candidate,
                              const GaeModel& f0, const GaeModel& f1,
                              int query_class);

// Reconstruction errors of each graph under both class models, keyed by
// graph_id; avoids recomputing per-candidate errors across queries.
struct ErrorCache {
    std::map<std::string, std::pair<double, double>> errors;

    static ErrorCache build(const std::vector<const Graph*>& graphs,
                            const GaeModel& f0, const GaeModel& f1);
    const std::pair<double, double>& at(const std::string& graph_id) const;
};

// One example per ordered pair (train x all), self-pairs excluded, labelled 1
// iff the two labels differ. Pairs are canonicalized by (train id, candidate
// id) so fits are reproducible.
std::vector<PairExample> build_pair_training_set(
    const std::vector<const Graph*>& train_graphs,
    const std::vector<const Graph*>& all_graphs,
    const std::map<std::string, int>& labels,
    const ErrorCache* cache = nullptr,
    const GaeModel* f0 = nullptr, const GaeModel* f1 = nullptr);

struct RankedCandidate {
    std::string graph_id;
    double score = 0.0;
    double ged = 0.0;
    double sim = 0.0;
};

// Top-k candidates by score, descending; ties broken by higher sim, then
// lexicographic graph_id; the query itself is excluded from the pool.
std::vector<RankedCandidate> rank_candidates(
    const PairScorer& scorer, const Graph& query,
    const std::vector<const Graph*>& pool, const GaeModel& f0,
    const GaeModel& f1, int query_class, int k,
    const ErrorCache* cache = nullptr);

} // namespace graphcf
