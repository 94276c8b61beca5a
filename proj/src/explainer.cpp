#include "graphcf/explainer.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "graphcf/rng.hpp"

namespace graphcf {

namespace {

using nlohmann::json;

std::vector<const Graph*> snapshot_pointers(const Snapshot& snap) {
    std::vector<const Graph*> out;
    out.reserve(snap.members.size());
    for (const Member& m : snap.members) out.push_back(&m.graph);
    return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json data = json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    const auto& data = j.at("data");
    if (static_cast<int>(data.size()) != rows * cols) {
        throw Error(Status::parse, "checkpoint matrix has wrong element count");
    }
    Eigen::MatrixXd m(rows, cols);
    int idx = 0;
    for (int i = 0; i < rows; ++i)
        for (int jj = 0; jj < cols; ++jj) m(i, jj) = data[idx++].get<double>();
    return m;
}

json model_to_json(const GaeModel& m) {
    return json{{"class_tag", m.class_tag},
                {"w1", matrix_to_json(m.w1)},
                {"w2", matrix_to_json(m.w2)},
                {"adam_w1",
                 {{"m", matrix_to_json(m.adam_w1.m)},
                  {"v", matrix_to_json(m.adam_w1.v)},
                  {"step", m.adam_w1.step}}},
                {"adam_w2",
                 {{"m", matrix_to_json(m.adam_w2.m)},
                  {"v", matrix_to_json(m.adam_w2.v)},
                  {"step", m.adam_w2.step}}}};
}

GaeModel model_from_json(const json& j) {
    GaeModel m;
    m.class_tag = j.at("class_tag").get<int>();
    m.w1 = matrix_from_json(j.at("w1"));
    m.w2 = matrix_from_json(j.at("w2"));
    m.adam_w1 = {matrix_from_json(j.at("adam_w1").at("m")),
                 matrix_from_json(j.at("adam_w1").at("v")),
                 j.at("adam_w1").at("step").get<long>()};
    m.adam_w2 = {matrix_from_json(j.at("adam_w2").at("m")),
                 matrix_from_json(j.at("adam_w2").at("v")),
                 j.at("adam_w2").at("step").get<long>()};
    return m;
}

} // namespace

ExplainerState ExplainerState::fit_initial(const Snapshot& snapshot0,
                                           const Oracle& oracle,
                                           const std::vector<std::string>& train_ids,
                                           const ExplainerConfig& cfg) {
    if (snapshot0.members.empty()) {
        throw Error(Status::invalid_arg, "fit_initial: snapshot is empty");
    }
    if (train_ids.empty()) {
        throw Error(Status::invalid_arg, "fit_initial: train split is empty");
    }

    ExplainerState state;
    state.cfg_ = cfg;
    state.train_ids_ = train_ids;
    std::sort(state.train_ids_.begin(), state.train_ids_.end());

    const long long calls_before = oracle.read_counter();
    // one oracle call per unique graph; pair labelling reuses the cache
    std::map<std::string, int> labels;
    for (const Member& m : snapshot0.members) {
        labels.emplace(m.graph.id(), oracle.classify(m.graph, snapshot0.t));
    }
    state.initial_labels_ = labels;
    state.fit_oracle_calls_ = oracle.read_counter() - calls_before;

    std::vector<Graph> train_class[2];
    std::vector<const Graph*> train_ptrs;
    for (const std::string& id : state.train_ids_) {
        const Member* m = snapshot0.find(id);
        if (m == nullptr) {
            throw Error(Status::invalid_arg,
                        "fit_initial: train graph '" + id + "' is not in the snapshot");
        }
        train_class[labels.at(id)].push_back(m->graph);
        train_ptrs.push_back(&m->graph);
    }
    for (int c = 0; c < 2; ++c) {
        if (train_class[c].empty()) {
            throw Error(Status::validation,
                        "fit_initial: class " + std::to_string(c) +
                            " has no training graphs");
        }
    }

    GaeTrainConfig train_cfg = cfg.initial_train;
    train_cfg.seed = cfg.seed;
    state.f0_ = train(GaeModel::glorot(cfg.hidden_dim, 0, Rng::derive_seed(cfg.seed, 0)),
                      train_class[0], train_cfg, TrainDirection::minimize);
    state.f1_ = train(GaeModel::glorot(cfg.hidden_dim, 1, Rng::derive_seed(cfg.seed, 1)),
                      train_class[1], train_cfg, TrainDirection::minimize);

    const std::vector<const Graph*> all_ptrs = snapshot_pointers(snapshot0);
    // the label comparison count matches the labelling pass over the full
    // train x candidate cross product
    state.fit_label_comparisons_ =
        static_cast<long long>(train_ptrs.size()) *
        static_cast<long long>(all_ptrs.size());

    const ErrorCache cache = ErrorCache::build(all_ptrs, state.f0_, state.f1_);
    const std::vector<PairExample> pairs =
        build_pair_training_set(train_ptrs, all_ptrs, labels, &cache);
    state.scorer_ = PairScorer(cfg.scorer_l2);
    state.scorer_.fit(pairs);
    state.current_t_ = snapshot0.t;
    return state;
}

void ExplainerState::set_k(int k) {
    if (k < 1) throw Error(Status::invalid_arg, "k must be >= 1");
    cfg_.k = k;
}

int ExplainerState::infer_class(const Graph& g) const {
    const double err0 = reconstruction_error(f0_, g);
    const double err1 = reconstruction_error(f1_, g);
    return err0 <= err1 ? 0 : 1;
}

Explanation ExplainerState::explain(const Graph& query,
                                    const std::vector<const Graph*>& pool,
                                    const ErrorCache* cache) const {
    const auto class_of = [&](const Graph& g) {
        if (cache != nullptr) {
            if (const auto it = cache->errors.find(g.id()); it != cache->errors.end()) {
                return it->second.first <= it->second.second ? 0 : 1;
            }
        }
        return infer_class(g);
    };

    Explanation out;
    out.t = current_t_;
    out.query_id = query.id();
    out.inferred_class = class_of(query);

    std::vector<const Graph*> candidates;
    candidates.reserve(pool.size());
    for (const Graph* g : pool) {
        if (g->id() == query.id()) continue;
        if (cfg_.adaptation.pool_filter && class_of(*g) == out.inferred_class)
            continue;
        candidates.push_back(g);
    }
    if (candidates.empty()) return out;

    const auto ranked = rank_candidates(scorer_, query, candidates, f0_, f1_,
                                        out.inferred_class, cfg_.k, cache);
    out.ranked.reserve(ranked.size());
    for (const RankedCandidate& rc : ranked) {
        out.ranked.push_back({rc.graph_id, rc.score, rc.ged, rc.sim});
    }
    return out;
}

AdaptReport ExplainerState::adapt(const Snapshot& snapshot) {
    if (snapshot.t != current_t_ + 1) {
        throw Error(Status::state,
                    "adapt expects snapshot t=" + std::to_string(current_t_ + 1) +
                        ", got t=" + std::to_string(snapshot.t));
    }
    AdaptReport report;
    report.t = snapshot.t;

    // all inference happens against the frozen pre-update state
    const std::vector<const Graph*> all_ptrs = snapshot_pointers(snapshot);
    const ErrorCache cache = ErrorCache::build(all_ptrs, f0_, f1_);
    std::map<std::string, int> inferred;
    for (const Member& m : snapshot.members) {
        const auto& [err0, err1] = cache.at(m.graph.id());
        inferred.emplace(m.graph.id(), err0 <= err1 ? 0 : 1);
    }

    // candidates targeted at class c: top-k lists of queries inferred 1-c
    std::map<std::string, const Graph*> target_sets[2];
    for (const Member& m : snapshot.members) {
        const int query_class = inferred.at(m.graph.id());
        std::vector<const Graph*> candidates;
        for (const Graph* g : all_ptrs) {
            if (g->id() == m.graph.id()) continue;
            if (cfg_.adaptation.pool_filter && inferred.at(g->id()) == query_class)
                continue;
            candidates.push_back(g);
        }
        if (candidates.empty()) continue;
        const auto ranked = rank_candidates(scorer_, m.graph, candidates, f0_, f1_,
                                            query_class, cfg_.k, &cache);
        for (const RankedCandidate& rc : ranked) {
            const Member* cand = snapshot.find(rc.graph_id);
            target_sets[1 - query_class].emplace(rc.graph_id, &cand->graph);
        }
    }

    GaeTrainConfig adapt_cfg = cfg_.initial_train;
    adapt_cfg.epochs = cfg_.adaptation.epochs;
    adapt_cfg.learning_rate = cfg_.adaptation.learning_rate;

    GaeModel* models[2] = {&f0_, &f1_};
    for (int c = 0; c < 2; ++c) {
        if (target_sets[c].empty()) {
            report.warnings.push_back(
                "t=" + std::to_string(snapshot.t) + ": class " + std::to_string(c) +
                " received no counterfactual candidates; GAE update skipped");
            continue;
        }
        std::vector<Graph> batch;
        batch.reserve(target_sets[c].size()); // deduplicated, id-sorted
        for (const auto& [id, g] : target_sets[c]) batch.push_back(*g);
        report.counterfactual_updates[c] = batch.size();
        // counterfactual GAE absorbs the candidates...
        *models[c] = train(std::move(*models[c]), batch, adapt_cfg,
                           TrainDirection::minimize);
        // ...while the factual GAE is pushed away from them
        *models[1 - c] = train(std::move(*models[1 - c]), batch, adapt_cfg,
                               TrainDirection::maximize);
    }

    if (cfg_.adaptation.rehearsal) {
        for (int c = 0; c < 2; ++c) {
            std::vector<Graph> own_class;
            for (const Member& m : snapshot.members) {
                if (inferred.at(m.graph.id()) == c) own_class.push_back(m.graph);
            }
            if (own_class.empty()) {
                report.warnings.push_back(
                    "t=" + std::to_string(snapshot.t) + ": no graphs inferred as class " +
                    std::to_string(c) + "; rehearsal skipped");
                continue;
            }
            *models[c] = train(std::move(*models[c]), own_class, adapt_cfg,
                               TrainDirection::minimize);
        }
    }

    // scorer refit on labels re-inferred under the updated models
    const ErrorCache new_cache = ErrorCache::build(all_ptrs, f0_, f1_);
    std::map<std::string, int> new_labels;
    for (const Member& m : snapshot.members) {
        const auto& [err0, err1] = new_cache.at(m.graph.id());
        new_labels.emplace(m.graph.id(), err0 <= err1 ? 0 : 1);
    }
    std::vector<const Graph*> pair_queries;
    if (cfg_.adaptation.pair_source == PairSource::train_split) {
        for (const std::string& id : train_ids_) {
            if (const Member* m = snapshot.find(id)) pair_queries.push_back(&m->graph);
        }
    }
    if (pair_queries.empty()) pair_queries = all_ptrs;

    bool single_class = true;
    for (const auto& [id, label] : new_labels) {
        if (label != new_labels.begin()->second) {
            single_class = false;
            break;
        }
    }
    if (single_class) {
        report.warnings.push_back(
            "t=" + std::to_string(snapshot.t) +
            ": all graphs inferred as one class; keeping the previous scorer");
    } else {
        const std::vector<PairExample> pairs = build_pair_training_set(
            pair_queries, all_ptrs, new_labels, &new_cache);
        if (cfg_.adaptation.warm_start_scorer) {
            scorer_.fit(pairs, /*warm_start=*/true);
        } else {
            PairScorer fresh(cfg_.scorer_l2);
            fresh.fit(pairs);
            scorer_ = fresh;
        }
        report.scorer_refitted = true;
    }

    current_t_ = snapshot.t;
    return report;
}

Explanation baseline_dce(const Graph& query,
                         const std::vector<const Graph*>& pool,
                         const Oracle& oracle, int t) {
    Explanation out;
    out.query_id = query.id();
    out.t = t;
    out.inferred_class = oracle.classify(query, t);

    std::vector<const Graph*> sorted = pool;
    std::sort(sorted.begin(), sorted.end(),
              [](const Graph* a, const Graph* b) { return a->id() < b->id(); });

    const Graph* best = nullptr;
    double best_sim = -1.0;
    for (const Graph* g : sorted) {
        if (g->id() == query.id()) continue;
        if (oracle.classify(*g, t) == out.inferred_class) continue;
        const double sim = similarity(query, *g);
        if (sim > best_sim) { // ties keep the lexicographically first id
            best_sim = sim;
            best = g;
        }
    }
    if (best != nullptr) {
        out.ranked.push_back({best->id(), best_sim,
                              graph_edit_distance(query, *best).ged, best_sim});
    }
    return out;
}

std::string explanation_to_json(const Explanation& e) {
    json ranked = json::array();
    for (const RankedEntry& r : e.ranked) {
        ranked.push_back({{"graph_id", r.graph_id},
                          {"score", r.score},
                          {"ged", r.ged},
                          {"sim", r.sim}});
    }
    const json rec = {{"t", e.t},
                      {"query_id", e.query_id},
                      {"inferred_class", e.inferred_class},
                      {"ranked", std::move(ranked)}};
    return rec.dump();
}

std::string ExplainerState::to_json() const {
    json cfg = {{"hidden_dim", cfg_.hidden_dim},
                {"k", cfg_.k},
                {"epochs", cfg_.initial_train.epochs},
                {"learning_rate", cfg_.initial_train.learning_rate},
                {"beta1", cfg_.initial_train.beta1},
                {"beta2", cfg_.initial_train.beta2},
                {"epsilon", cfg_.initial_train.epsilon},
                {"seed", cfg_.seed},
                {"scorer_l2", cfg_.scorer_l2},
                {"adapt_epochs", cfg_.adaptation.epochs},
                {"adapt_learning_rate", cfg_.adaptation.learning_rate},
                {"rehearsal", cfg_.adaptation.rehearsal},
                {"warm_start_scorer", cfg_.adaptation.warm_start_scorer},
                {"pool_filter", cfg_.adaptation.pool_filter},
                {"pair_source", cfg_.adaptation.pair_source == PairSource::train_split
                                    ? "train_split"
                                    : "full_snapshot"}};
    const json doc = {
        {"format", "graphcf-checkpoint"},
        {"version", 1},
        {"current_t", current_t_},
        {"train_ids", train_ids_},
        {"initial_labels", initial_labels_},
        {"fit_label_comparisons", fit_label_comparisons_},
        {"fit_oracle_calls", fit_oracle_calls_},
        {"config", std::move(cfg)},
        {"f0", model_to_json(f0_)},
        {"f1", model_to_json(f1_)},
        {"scorer",
         {{"alpha", scorer_.alpha()},
          {"beta", scorer_.beta()},
          {"gamma", scorer_.gamma()},
          {"bias", scorer_.bias()},
          {"mean", scorer_.feature_mean()},
          {"std", scorer_.feature_std()},
          {"l2_lambda", scorer_.l2_lambda()},
          {"fitted", scorer_.fitted()}}},
    };
    return doc.dump(2);
}

ExplainerState ExplainerState::from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(Status::parse, std::string("checkpoint: ") + e.what());
    }
    if (doc.value("format", "") != "graphcf-checkpoint") {
        throw Error(Status::parse, "checkpoint: unrecognized format tag");
    }
    ExplainerState state;
    state.current_t_ = doc.at("current_t").get<int>();
    state.train_ids_ = doc.at("train_ids").get<std::vector<std::string>>();
    state.initial_labels_ =
        doc.at("initial_labels").get<std::map<std::string, int>>();
    state.fit_label_comparisons_ = doc.at("fit_label_comparisons").get<long long>();
    state.fit_oracle_calls_ = doc.at("fit_oracle_calls").get<long long>();

    const json& cfg = doc.at("config");
    state.cfg_.hidden_dim = cfg.at("hidden_dim").get<int>();
    state.cfg_.k = cfg.at("k").get<int>();
    state.cfg_.initial_train.epochs = cfg.at("epochs").get<int>();
    state.cfg_.initial_train.learning_rate = cfg.at("learning_rate").get<double>();
    state.cfg_.initial_train.beta1 = cfg.at("beta1").get<double>();
    state.cfg_.initial_train.beta2 = cfg.at("beta2").get<double>();
    state.cfg_.initial_train.epsilon = cfg.at("epsilon").get<double>();
    state.cfg_.seed = cfg.at("seed").get<std::uint64_t>();
    state.cfg_.scorer_l2 = cfg.at("scorer_l2").get<double>();
    state.cfg_.adaptation.epochs = cfg.at("adapt_epochs").get<int>();
    state.cfg_.adaptation.learning_rate = cfg.at("adapt_learning_rate").get<double>();
    state.cfg_.adaptation.rehearsal = cfg.at("rehearsal").get<bool>();
    state.cfg_.adaptation.warm_start_scorer = cfg.at("warm_start_scorer").get<bool>();
    state.cfg_.adaptation.pool_filter = cfg.at("pool_filter").get<bool>();
    state.cfg_.adaptation.pair_source =
        cfg.at("pair_source").get<std::string>() == "full_snapshot"
            ? PairSource::full_snapshot
            : PairSource::train_split;

    state.f0_ = model_from_json(doc.at("f0"));
    state.f1_ = model_from_json(doc.at("f1"));
    const json& s = doc.at("scorer");
    state.scorer_ = PairScorer(s.at("l2_lambda").get<double>());
    state.scorer_.restore(s.at("alpha").get<double>(), s.at("beta").get<double>(),
                          s.at("gamma").get<double>(), s.at("bias").get<double>(),
                          s.at("mean").get<std::array<double, 3>>(),
                          s.at("std").get<std::array<double, 3>>(),
                          s.at("l2_lambda").get<double>(),
                          s.at("fitted").get<bool>());
    return state;
}

void ExplainerState::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error(Status::io, "cannot open '" + path + "' for writing");
    out << to_json() << '\n';
    if (!out.good()) throw Error(Status::io, "write to '" + path + "' failed");
}

ExplainerState ExplainerState::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Status::io, "cannot open '" + path + "' for reading");
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

} // namespace graphcf
