#include "graphcf/scorer.hpp"

#include <algorithm>
#include <cmath>

namespace graphcf {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double stable_bce(double logit, double target) {
    return std::max(logit, 0.0) + std::log1p(std::exp(-std::abs(logit))) -
           target * logit;
}

} // namespace

double logistic_loss(const std::vector<std::vector<double>>& xs,
                     const std::vector<int>& ys, double l2_lambda,
                     const std::vector<double>& weights, double bias) {
    const std::size_t n = xs.size();
    std::size_t n_pos = 0;
    for (int y : ys) n_pos += static_cast<std::size_t>(y);
    const std::size_t n_neg = n - n_pos;
    const double w_pos = n_pos > 0 ? static_cast<double>(n) / (2.0 * n_pos) : 0.0;
    const double w_neg = n_neg > 0 ? static_cast<double>(n) / (2.0 * n_neg) : 0.0;

    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double z = bias;
        for (std::size_t j = 0; j < weights.size(); ++j) z += weights[j] * xs[i][j];
        loss += (ys[i] == 1 ? w_pos : w_neg) * stable_bce(z, ys[i]);
    }
    loss /= static_cast<double>(n);
    for (double w : weights) loss += 0.5 * l2_lambda * w * w;
    return loss;
}

LogisticFit fit_logistic(const std::vector<std::vector<double>>& xs,
                         const std::vector<int>& ys, double l2_lambda,
                         const std::vector<double>* warm_weights,
                         const double* warm_bias) {
    if (xs.empty() || xs.size() != ys.size()) {
        throw Error(Status::invalid_arg, "logistic fit: empty or mismatched inputs");
    }
    const std::size_t n = xs.size();
    const std::size_t d = xs[0].size();
    std::size_t n_pos = 0;
    for (int y : ys) n_pos += static_cast<std::size_t>(y);
    if (n_pos == 0 || n_pos == n) {
        throw Error(Status::validation,
                    "logistic fit: training pairs contain a single label only");
    }
    const double w_pos = static_cast<double>(n) / (2.0 * static_cast<double>(n_pos));
    const double w_neg =
        static_cast<double>(n) / (2.0 * static_cast<double>(n - n_pos));

    LogisticFit fit;
    fit.weights.assign(d, 0.0);
    if (warm_weights != nullptr) fit.weights = *warm_weights;
    if (warm_bias != nullptr) fit.bias = *warm_bias;

    constexpr int kMaxIterations = 10000;
    constexpr double kGradTolerance = 1e-6;
    double step = 1.0;
    double loss = logistic_loss(xs, ys, l2_lambda, fit.weights, fit.bias);

    std::vector<double> grad_w(d, 0.0);
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        std::fill(grad_w.begin(), grad_w.end(), 0.0);
        double grad_b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double z = fit.bias;
            for (std::size_t j = 0; j < d; ++j) z += fit.weights[j] * xs[i][j];
            const double residual =
                (ys[i] == 1 ? w_pos : w_neg) * (sigmoid(z) - ys[i]);
            for (std::size_t j = 0; j < d; ++j) grad_w[j] += residual * xs[i][j];
            grad_b += residual;
        }
        double grad_norm_sq = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            grad_w[j] = grad_w[j] / static_cast<double>(n) + l2_lambda * fit.weights[j];
            grad_norm_sq += grad_w[j] * grad_w[j];
        }
        grad_b /= static_cast<double>(n);
        grad_norm_sq += grad_b * grad_b;
        fit.iterations = iter + 1;
        if (std::sqrt(grad_norm_sq) < kGradTolerance) break;

        // plain descent with deterministic step backoff / regrowth
        for (int backoff = 0; backoff < 60; ++backoff) {
            std::vector<double> trial_w(d);
            for (std::size_t j = 0; j < d; ++j) trial_w[j] = fit.weights[j] - step * grad_w[j];
            const double trial_b = fit.bias - step * grad_b;
            const double trial_loss =
                logistic_loss(xs, ys, l2_lambda, trial_w, trial_b);
            if (trial_loss <= loss || step < 1e-16) {
                fit.weights = std::move(trial_w);
                fit.bias = trial_b;
                loss = trial_loss;
                step = std::min(step * 1.1, 16.0);
                break;
            }
            step *= 0.5;
        }
        if (!std::isfinite(loss)) {
            throw Error(Status::numeric, "logistic fit: non-finite loss");
        }
    }
    fit.loss = loss;
    return fit;
}

void PairScorer::fit(const std::vector<PairExample>& pairs, bool warm_start) {
    if (pairs.empty()) {
        throw Error(Status::invalid_arg, "scorer fit: no training pairs");
    }
    const std::size_t n = pairs.size();
    std::array<double, 3> mean{0.0, 0.0, 0.0};
    for (const PairExample& p : pairs) {
        mean[0] += p.features.h_factual;
        mean[1] += p.features.h_counterfactual;
        mean[2] += p.features.sim;
    }
    for (double& m : mean) m /= static_cast<double>(n);
    std::array<double, 3> sd{0.0, 0.0, 0.0};
    for (const PairExample& p : pairs) {
        const double d0 = p.features.h_factual - mean[0];
        const double d1 = p.features.h_counterfactual - mean[1];
        const double d2 = p.features.sim - mean[2];
        sd[0] += d0 * d0;
        sd[1] += d1 * d1;
        sd[2] += d2 * d2;
    }
    static const char* kFeatureNames[3] = {"h_factual", "h_counterfactual", "sim"};
    for (std::size_t j = 0; j < 3; ++j) {
        sd[j] = std::sqrt(sd[j] / static_cast<double>(n));
        if (!(sd[j] > 0.0)) {
            throw Error(Status::validation,
                        std::string("scorer fit: feature '") + kFeatureNames[j] +
                            "' is degenerate (zero variance)");
        }
    }

    std::vector<std::vector<double>> xs(n, std::vector<double>(3));
    std::vector<int> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i][0] = (pairs[i].features.h_factual - mean[0]) / sd[0];
        xs[i][1] = (pairs[i].features.h_counterfactual - mean[1]) / sd[1];
        xs[i][2] = (pairs[i].features.sim - mean[2]) / sd[2];
        ys[i] = pairs[i].label;
    }

    LogisticFit result;
    if (warm_start && fitted_) {
        const std::vector<double> warm{alpha_, beta_, gamma_};
        result = fit_logistic(xs, ys, l2_lambda_, &warm, &bias_);
    } else {
        result = fit_logistic(xs, ys, l2_lambda_);
    }
    alpha_ = result.weights[0];
    beta_ = result.weights[1];
    gamma_ = result.weights[2];
    bias_ = result.bias;
    mean_ = mean;
    std_ = sd;
    train_loss_ = result.loss;
    fitted_ = true;
}

double PairScorer::score(const PairFeatures& f) const {
    if (!fitted_) {
        throw Error(Status::state, "scorer has not been fitted");
    }
    const double z = alpha_ * (f.h_factual - mean_[0]) / std_[0] +
                     beta_ * (f.h_counterfactual - mean_[1]) / std_[1] +
                     gamma_ * (f.sim - mean_[2]) / std_[2] + bias_;
    return sigmoid(z);
}

void PairScorer::restore(double alpha, double beta, double gamma, double bias,
                         std::array<double, 3> mean, std::array<double, 3> std,
                         double l2_lambda, bool fitted) {
    alpha_ = alpha;
    beta_ = beta;
    gamma_ = gamma;
    bias_ = bias;
    mean_ = mean;
    std_ = std;
    l2_lambda_ = l2_lambda;
    fitted_ = fitted;
}

PairFeatures extract_features(const Graph& query, const Graph& candidate,
                              const GaeModel& f0, const GaeModel& f1,
                              int query_class) {
    const GaeModel& factual = query_class == 0 ? f0 : f1;
    const GaeModel& counterfactual = query_class == 0 ? f1 : f0;
    PairFeatures f;
    f.h_factual = reconstruction_error(factual, candidate);
    f.h_counterfactual = reconstruction_error(counterfactual, candidate);
    f.sim = similarity(query, candidate);
    return f;
}

ErrorCache ErrorCache::build(const std::vector<const Graph*>& graphs,
                             const GaeModel& f0, const GaeModel& f1) {
    ErrorCache cache;
    for (const Graph* g : graphs) {
        if (cache.errors.contains(g->id())) continue;
        cache.errors.emplace(g->id(), std::make_pair(reconstruction_error(f0, *g),
                                                     reconstruction_error(f1, *g)));
    }
    return cache;
}

const std::pair<double, double>& ErrorCache::at(const std::string& graph_id) const {
    const auto it = errors.find(graph_id);
    if (it == errors.end()) {
        throw Error(Status::internal, "error cache is missing graph '" + graph_id + "'");
    }
    return it->second;
}

std::vector<PairExample> build_pair_training_set(
    const std::vector<const Graph*>& train_graphs,
    const std::vector<const Graph*>& all_graphs,
    const std::map<std::string, int>& labels, const ErrorCache* cache,
    const GaeModel* f0, const GaeModel* f1) {
    if (cache == nullptr && (f0 == nullptr || f1 == nullptr)) {
        throw Error(Status::invalid_arg,
                    "build_pair_training_set needs either an error cache or both models");
    }
    ErrorCache local;
    if (cache == nullptr) {
        local = ErrorCache::build(all_graphs, *f0, *f1);
        cache = &local;
    }
    auto label_of = [&labels](const Graph& g) {
        const auto it = labels.find(g.id());
        if (it == labels.end()) {
            throw Error(Status::validation,
                        "graph '" + g.id() + "' has no label for pair building");
        }
        return it->second;
    };

    std::vector<const Graph*> train_sorted = train_graphs;
    std::vector<const Graph*> all_sorted = all_graphs;
    const auto by_id = [](const Graph* a, const Graph* b) { return a->id() < b->id(); };
    std::sort(train_sorted.begin(), train_sorted.end(), by_id);
    std::sort(all_sorted.begin(), all_sorted.end(), by_id);

    std::vector<PairExample> pairs;
    pairs.reserve(train_sorted.size() * all_sorted.size());
    for (const Graph* query : train_sorted) {
        const int query_label = label_of(*query);
        for (const Graph* candidate : all_sorted) {
            if (candidate->id() == query->id()) continue;
            const auto& [err0, err1] = cache->at(candidate->id());
            PairExample ex;
            ex.features.h_factual = query_label == 0 ? err0 : err1;
            ex.features.h_counterfactual = query_label == 0 ? err1 : err0;
            ex.features.sim = similarity(*query, *candidate);
            ex.label = label_of(*candidate) != query_label ? 1 : 0;
            pairs.push_back(ex);
        }
    }
    return pairs;
}

std::vector<RankedCandidate> rank_candidates(
    const PairScorer& scorer, const Graph& query,
    const std::vector<const Graph*>& pool, const GaeModel& f0,
    const GaeModel& f1, int query_class, int k, const ErrorCache* cache) {
    if (k < 1) {
        throw Error(Status::invalid_arg, "rank_candidates: k must be >= 1");
    }
    std::vector<RankedCandidate> ranked;
    for (const Graph* candidate : pool) {
        if (candidate->id() == query.id()) continue;
        PairFeatures f;
        const EditDistanceResult ed = graph_edit_distance(query, *candidate);
        f.sim = 1.0 / (1.0 + ed.ged);
        if (cache != nullptr) {
            const auto& [err0, err1] = cache->at(candidate->id());
            f.h_factual = query_class == 0 ? err0 : err1;
            f.h_counterfactual = query_class == 0 ? err1 : err0;
        } else {
            const GaeModel& factual = query_class == 0 ? f0 : f1;
            const GaeModel& counterfactual = query_class == 0 ? f1 : f0;
            f.h_factual = reconstruction_error(factual, *candidate);
            f.h_counterfactual = reconstruction_error(counterfactual, *candidate);
        }
        ranked.push_back({candidate->id(), scorer.score(f), ed.ged, f.sim});
    }
    std::sort(ranked.begin(), ranked.end(),
              [](const RankedCandidate& a, const RankedCandidate& b) {
                  if (a.score != b.score) return a.score > b.score;
                  if (a.sim != b.sim) return a.sim > b.sim;
                  return a.graph_id < b.graph_id;
              });
    if (ranked.size() > static_cast<std::size_t>(k)) {
        ranked.resize(static_cast<std::size_t>(k));
    }
    return ranked;
}

} // namespace graphcf
