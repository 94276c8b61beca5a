#include "graphcf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "graphcf/rng.hpp"
#include "graphcf/stats.hpp"

namespace graphcf {

namespace {

using nlohmann::json;

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

std::map<std::string, int> truth_labels(const Snapshot& snap) {
    std::map<std::string, int> labels;
    for (const Member& m : snap.members) labels.emplace(m.graph.id(), m.label);
    return labels;
}

struct FoldOutput {
    std::vector<MetricsRecord> records;
    std::vector<FoldDrift> drift;
    std::vector<FoldExplanation> explanations;
    FoldStatus status;
    std::string checkpoint;
};

FoldOutput run_fold(const RunConfig& cfg, const TemporalDataset& ds,
                    const std::string& dataset_name,
                    const std::vector<std::string>& test_ids, int fold) {
    FoldOutput out;
    out.status.fold = fold;

    const Oracle oracle = build_oracle(cfg.dataset, ds);
    oracle.reset_counter();

    ExplainerConfig expl_cfg = cfg.explainer;
    expl_cfg.seed = Rng::derive_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(fold));

    const Snapshot& snapshot0 = ds.snapshot(0);
    std::vector<std::string> train_ids;
    for (const Member& m : snapshot0.members) {
        if (std::find(test_ids.begin(), test_ids.end(), m.graph.id()) ==
            test_ids.end()) {
            train_ids.push_back(m.graph.id());
        }
    }

    std::optional<ExplainerState> state;
    std::vector<double> prev_errors;
    for (int t = 0; t <= ds.horizon(); ++t) {
        const Snapshot& snap = ds.snapshot(t);
        const auto started = std::chrono::steady_clock::now();
        const long long calls_before = oracle.read_counter();

        std::vector<const Graph*> pool;
        pool.reserve(snap.members.size());
        for (const Member& m : snap.members) pool.push_back(&m.graph);

        if (t == 0) {
            state = ExplainerState::fit_initial(snapshot0, oracle, train_ids, expl_cfg);
        } else {
            const AdaptReport report = state->adapt(snap);
            for (const std::string& w : report.warnings) {
                out.status.warnings.push_back("fold " + std::to_string(fold) + ": " + w);
            }
        }

        const ErrorCache cache = ErrorCache::build(pool, state->f0(), state->f1());
        const std::map<std::string, int> truth = truth_labels(snap);

        MetricsRecord rec;
        rec.dataset = dataset_name;
        rec.fold = fold;
        rec.t = t;

        std::vector<double> corr1, corrk, spars1, sparsk, ged1, gedk;
        for (const std::string& id : test_ids) {
            const Member* query = snap.find(id);
            if (query == nullptr) {
                throw Error(Status::validation,
                            "test graph '" + id + "' is missing at t=" +
                                std::to_string(t));
            }
            Explanation expl = state->explain(query->graph, pool, &cache);
            corr1.push_back(correctness_at(expl, truth, 1));
            corrk.push_back(correctness_at(expl, truth, state->k()));
            if (!expl.ranked.empty()) {
                const double size =
                    static_cast<double>(query->graph.num_nodes() +
                                        query->graph.num_edges());
                ged1.push_back(expl.ranked.front().ged);
                spars1.push_back(expl.ranked.front().ged / size);
                double ged_sum = 0.0;
                for (const RankedEntry& r : expl.ranked) ged_sum += r.ged;
                const double ged_mean =
                    ged_sum / static_cast<double>(expl.ranked.size());
                gedk.push_back(ged_mean);
                sparsk.push_back(ged_mean / size);
            }
            out.explanations.push_back({fold, std::move(expl)});
        }

        rec.runtime_s = elapsed_seconds(started);
        rec.correctness_at_1 = corr1.empty() ? 0.0 : mean(corr1);
        rec.correctness_at_k = corrk.empty() ? 0.0 : mean(corrk);
        rec.sparsity_at_1 = spars1.empty() ? 0.0 : mean(spars1);
        rec.sparsity_at_k = sparsk.empty() ? 0.0 : mean(sparsk);
        rec.ged_at_1 = ged1.empty() ? 0.0 : mean(ged1);
        rec.ged_at_k = gedk.empty() ? 0.0 : mean(gedk);
        if (t == 0) {
            rec.oracle_calls = static_cast<double>(state->fit_label_comparisons());
            rec.oracle_calls_raw = static_cast<double>(oracle.read_counter());
        } else {
            // the online path must never touch the oracle
            rec.oracle_calls = static_cast<double>(oracle.read_counter() - calls_before);
            rec.oracle_calls_raw = rec.oracle_calls;
        }
        out.records.push_back(std::move(rec));

        std::vector<double> errors =
            t == 0 ? error_sample(*state, snap, &state->initial_labels())
                   : error_sample(*state, snap);
        if (t > 0) {
            DriftReport report = detect(prev_errors, errors, cfg.significance);
            report.t = t;
            out.drift.push_back({fold, report});
        }
        prev_errors = std::move(errors);
    }
    out.checkpoint = state->to_json();
    return out;
}


} // namespace

void RunConfig::validate() const {
    if (folds < 2) throw Error(Status::validation, "run config: folds must be >= 2");
    if (!(holdout > 0.0 && holdout < 1.0)) {
        throw Error(Status::validation, "run config: holdout must lie in (0, 1)");
    }
    if (explainer.k < 1) throw Error(Status::validation, "run config: k must be >= 1");
    if (threads < 0) throw Error(Status::validation, "run config: threads must be >= 0");
}

TemporalDataset build_dataset(const DatasetConfig& cfg) {
    switch (cfg.family) {
        case DatasetConfig::Family::tree_cycles:
            return generate_tree_cycles(cfg.tree_cycles);
        case DatasetConfig::Family::coauthor:
            return generate_coauthor(cfg.coauthor);
        case DatasetConfig::Family::file:
            return load_coauthor_file(cfg.path, cfg.percentile);
    }
    throw Error(Status::internal, "unknown dataset family");
}

Oracle build_oracle(const DatasetConfig& cfg, const TemporalDataset& ds) {
    if (cfg.family == DatasetConfig::Family::tree_cycles) return Oracle::cycle();
    return Oracle::percentile_from_dataset(
        ds, cfg.family == DatasetConfig::Family::coauthor ? cfg.coauthor.percentile
                                                          : cfg.percentile);
}

RunResult run_cv(const RunConfig& cfg) {
    cfg.validate();
    const TemporalDataset ds = build_dataset(cfg.dataset);
    if (ds.empty()) throw Error(Status::validation, "run: dataset has no snapshots");

    std::string dataset_name;
    switch (cfg.dataset.family) {
        case DatasetConfig::Family::tree_cycles: dataset_name = "tree-cycles"; break;
        case DatasetConfig::Family::coauthor: dataset_name = "coauthor"; break;
        case DatasetConfig::Family::file:
            dataset_name = std::filesystem::path(cfg.dataset.path).stem().string();
            break;
    }

    std::vector<std::string> ids;
    for (const Member& m : ds.snapshot(0).members) ids.push_back(m.graph.id());
    std::sort(ids.begin(), ids.end());
    Rng shuffle_rng(Rng::derive_seed(cfg.seed, 0x5ca1e));
    shuffle_rng.shuffle(ids);

    const int n = static_cast<int>(ids.size());
    const int block = std::max(1, static_cast<int>(std::lround(cfg.holdout * n)));
    std::vector<std::vector<std::string>> test_blocks;
    for (int f = 0; f < cfg.folds; ++f) {
        std::vector<std::string> test;
        for (int i = 0; i < block; ++i) {
            test.push_back(ids[static_cast<std::size_t>((f * block + i) % n)]);
        }
        std::sort(test.begin(), test.end());
        test.erase(std::unique(test.begin(), test.end()), test.end());
        test_blocks.push_back(std::move(test));
    }

    std::vector<FoldOutput> outputs(static_cast<std::size_t>(cfg.folds));
    auto worker = [&](int fold) {
        try {
            outputs[static_cast<std::size_t>(fold)] =
                run_fold(cfg, ds, dataset_name, test_blocks[static_cast<std::size_t>(fold)], fold);
        } catch (const std::exception& e) {
            FoldOutput failed;
            failed.status.fold = fold;
            failed.status.failed = true;
            failed.status.message = e.what();
            outputs[static_cast<std::size_t>(fold)] = std::move(failed);
        }
        outputs[static_cast<std::size_t>(fold)].status.fold = fold;
    };

    int threads = cfg.threads;
    if (threads == 0) {
        threads = static_cast<int>(std::min<unsigned>(
            std::max(1u, std::thread::hardware_concurrency()),
            static_cast<unsigned>(cfg.folds)));
    }
    if (threads <= 1) {
        for (int f = 0; f < cfg.folds; ++f) worker(f);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (int f = next.fetch_add(1); f < cfg.folds; f = next.fetch_add(1)) {
                    worker(f);
                }
            });
        }
        for (std::thread& th : pool) th.join();
    }

    RunResult result;
    result.dataset_name = dataset_name;
    for (FoldOutput& out : outputs) {
        result.folds.push_back(out.status);
        if (out.status.failed) continue; // failed folds stay out of the aggregates
        result.records.insert(result.records.end(), out.records.begin(),
                              out.records.end());
        result.drift.insert(result.drift.end(), out.drift.begin(), out.drift.end());
        result.explanations.insert(result.explanations.end(),
                                   std::make_move_iterator(out.explanations.begin()),
                                   std::make_move_iterator(out.explanations.end()));
        result.checkpoints.push_back(std::move(out.checkpoint));
    }
    if (result.records.empty()) {
        throw Error(Status::validation, "run: every fold failed");
    }
    result.aggregate = aggregate_records(result.records);
    return result;
}

std::string run_summary_json(const RunResult& result) {
    json folds = json::array();
    for (const FoldStatus& s : result.folds) {
        folds.push_back({{"fold", s.fold},
                         {"failed", s.failed},
                         {"message", s.message},
                         {"warnings", s.warnings}});
    }
    json aggregate = json::array();
    for (const AggregateRow& row : result.aggregate) {
        aggregate.push_back({{"dataset", row.dataset},
                             {"t", row.t},
                             {"folds", row.folds},
                             {"runtime_s_mean", row.mean[0]},
                             {"correctness_at_1_mean", row.mean[1]},
                             {"correctness_at_1_std", row.stddev[1]},
                             {"correctness_at_k_mean", row.mean[2]},
                             {"correctness_at_k_std", row.stddev[2]},
                             {"sparsity_at_1_mean", row.mean[3]},
                             {"sparsity_at_k_mean", row.mean[4]},
                             {"ged_at_1_mean", row.mean[5]},
                             {"ged_at_k_mean", row.mean[6]},
                             {"oracle_calls_mean", row.mean[7]},
                             {"oracle_calls_raw_mean", row.mean[8]}});
    }
    const json doc = {{"dataset", result.dataset_name},
                      {"folds", std::move(folds)},
                      {"aggregate", std::move(aggregate)},
                      {"table", format_aggregate_table(result.aggregate)}};
    return doc.dump(2);
}

void write_run_outputs(const RunResult& result, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    write_report(result.records, out_dir);

    {
        std::ofstream out(out_dir + "/drift.csv");
        if (!out) throw Error(Status::io, "cannot open drift.csv for writing");
        out << "dataset,fold,t,ks_statistic,p_value,drifted,n_prev,n_curr,significance\n";
        char buf[256];
        for (const FoldDrift& d : result.drift) {
            std::snprintf(buf, sizeof(buf), "%s,%d,%d,%.12g,%.12g,%d,%d,%d,%.12g\n",
                          result.dataset_name.c_str(), d.fold, d.report.t,
                          d.report.ks_statistic, d.report.p_value,
                          d.report.drifted ? 1 : 0, d.report.n_prev,
                          d.report.n_curr, d.report.significance);
            out << buf;
        }
    }
    {
        std::ofstream out(out_dir + "/explanations.jsonl");
        if (!out) throw Error(Status::io, "cannot open explanations.jsonl for writing");
        for (const FoldExplanation& fe : result.explanations) {
            json rec = json::parse(explanation_to_json(fe.explanation));
            rec["fold"] = fe.fold;
            out << rec.dump() << '\n';
        }
    }
    {
        fs::create_directories(out_dir + "/checkpoints");
        std::size_t idx = 0;
        for (const FoldStatus& s : result.folds) {
            if (s.failed) continue;
            std::ofstream out(out_dir + "/checkpoints/fold_" +
                              std::to_string(s.fold) + ".json");
            out << result.checkpoints[idx++] << '\n';
        }
    }
    {
        std::ofstream out(out_dir + "/summary.json");
        if (!out) throw Error(Status::io, "cannot open summary.json for writing");
        out << run_summary_json(result) << '\n';
    }
}

RunConfig parse_run_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(Status::parse, std::string("run config: ") + e.what());
    }
    RunConfig cfg;

    const json dataset = doc.value("dataset", json::object());
    const std::string family = dataset.value("family", "tree_cycles");
    const json eval = doc.value("eval", json::object());
    cfg.seed = eval.value("seed", 0ull);
    cfg.folds = eval.value("folds", 10);
    cfg.holdout = eval.value("holdout", 0.10);
    cfg.significance = eval.value("significance", 0.05);
    cfg.threads = eval.value("threads", 0);

    const std::uint64_t derived_dataset_seed = Rng::derive_seed(cfg.seed, 0xda7a);
    if (family == "tree_cycles") {
        cfg.dataset.family = DatasetConfig::Family::tree_cycles;
        TreeCyclesConfig& tc = cfg.dataset.tree_cycles;
        tc.num_graphs = dataset.value("num_graphs", tc.num_graphs);
        tc.nodes_per_graph = dataset.value("nodes_per_graph", tc.nodes_per_graph);
        tc.num_snapshots = dataset.value("num_snapshots", tc.num_snapshots);
        tc.cycle_fraction = dataset.value("cycle_fraction", tc.cycle_fraction);
        tc.mutation_rate = dataset.value("mutation_rate", tc.mutation_rate);
        tc.class_flip_prob = dataset.value("class_flip_prob", tc.class_flip_prob);
        cfg.dataset.seed_pinned = dataset.contains("seed");
        tc.seed = dataset.value("seed", derived_dataset_seed);
    } else if (family == "coauthor") {
        cfg.dataset.family = DatasetConfig::Family::coauthor;
        CoauthorConfig& co = cfg.dataset.coauthor;
        co.num_egos = dataset.value("num_egos", co.num_egos);
        co.nodes_per_ego = dataset.value("nodes_per_ego", co.nodes_per_ego);
        co.num_snapshots = dataset.value("num_snapshots", co.num_snapshots);
        co.coauthor_edge_prob_min =
            dataset.value("coauthor_edge_prob_min", co.coauthor_edge_prob_min);
        co.coauthor_edge_prob_max =
            dataset.value("coauthor_edge_prob_max", co.coauthor_edge_prob_max);
        co.weight_geometric_p =
            dataset.value("weight_geometric_p", co.weight_geometric_p);
        co.inactivity_prob = dataset.value("inactivity_prob", co.inactivity_prob);
        co.percentile = dataset.value("percentile", co.percentile);
        cfg.dataset.seed_pinned = dataset.contains("seed");
        co.seed = dataset.value("seed", derived_dataset_seed);
    } else if (family == "file") {
        cfg.dataset.family = DatasetConfig::Family::file;
        if (!dataset.contains("path")) {
            throw Error(Status::validation,
                        "run config: dataset family 'file' requires a 'path'");
        }
        cfg.dataset.path = dataset.at("path").get<std::string>();
        cfg.dataset.percentile = dataset.value("percentile", 75.0);
    } else {
        throw Error(Status::validation,
                    "run config: unknown dataset family '" + family + "'");
    }

    // family-scaled training defaults
    const bool coauthor_like = cfg.dataset.family != DatasetConfig::Family::tree_cycles;
    GaeTrainConfig& train = cfg.explainer.initial_train;
    train.epochs = coauthor_like ? 150 : 50;
    train.learning_rate = coauthor_like ? 1e-4 : 1e-3;

    const json model = doc.value("model", json::object());
    cfg.explainer.hidden_dim = model.value("hidden_dim", 8);
    train.epochs = model.value("epochs", train.epochs);
    train.learning_rate = model.value("learning_rate", train.learning_rate);
    train.beta1 = model.value("beta1", train.beta1);
    train.beta2 = model.value("beta2", train.beta2);
    train.epsilon = model.value("epsilon", train.epsilon);

    const json explainer = doc.value("explainer", json::object());
    cfg.explainer.k = explainer.value("k", 10);
    cfg.explainer.scorer_l2 = explainer.value("scorer_l2", 1e-4);
    AdaptationConfig& ad = cfg.explainer.adaptation;
    // adaptation defaults mirror the initial training at one fifth the epochs
    ad.epochs = explainer.value(
        "adapt_epochs",
        std::max(1, static_cast<int>(std::ceil(train.epochs / 5.0))));
    ad.learning_rate = explainer.value("adapt_learning_rate", train.learning_rate);
    ad.rehearsal = explainer.value("rehearsal", true);
    ad.warm_start_scorer = explainer.value("warm_start_scorer", false);
    ad.pool_filter = explainer.value("pool_filter", false);
    const std::string pair_source = explainer.value("pair_source", "train_split");
    if (pair_source == "full_snapshot") {
        ad.pair_source = PairSource::full_snapshot;
    } else if (pair_source == "train_split") {
        ad.pair_source = PairSource::train_split;
    } else {
        throw Error(Status::validation,
                    "run config: unknown pair_source '" + pair_source + "'");
    }

    cfg.explainer.seed = cfg.seed;
    cfg.validate();
    return cfg;
}

std::string run_config_output_dir(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(Status::parse, std::string("run config: ") + e.what());
    }
    return doc.value("output", "out");
}

} // namespace graphcf
