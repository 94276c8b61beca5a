#include "graphcf/graphcf.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "graphcf/dataset_io.hpp"
#include "graphcf/datagen.hpp"
#include "graphcf/explainer.hpp"
#include "graphcf/harness.hpp"

namespace {

using namespace graphcf;
using nlohmann::json;

thread_local std::string g_last_error;

gcf_status status_code(Status s) {
    switch (s) {
        case Status::ok: return GCF_OK;
        case Status::invalid_arg: return GCF_ERR_INVALID_ARG;
        case Status::io: return GCF_ERR_IO;
        case Status::parse: return GCF_ERR_PARSE;
        case Status::validation: return GCF_ERR_VALIDATION;
        case Status::state: return GCF_ERR_STATE;
        case Status::numeric: return GCF_ERR_NUMERIC;
        case Status::internal: return GCF_ERR_INTERNAL;
    }
    return GCF_ERR_INTERNAL;
}

template <class Fn>
gcf_status guarded(Fn&& fn) {
    try {
        fn();
        return GCF_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_code(e.status());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return GCF_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return GCF_ERR_INTERNAL;
    }
}

gcf_status invalid(const char* message) {
    g_last_error = message;
    return GCF_ERR_INVALID_ARG;
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

} // namespace

struct gcf_dataset {
    graphcf::TemporalDataset data;
};

struct gcf_explainer {
    graphcf::ExplainerState state;
};

extern "C" {

const char* gcf_version(void) { return "0.1.0"; }

const char* gcf_last_error(void) { return g_last_error.c_str(); }

void gcf_string_free(char* s) { delete[] s; }

gcf_status gcf_dataset_load(const char* path, gcf_dataset** out) {
    if (path == nullptr || out == nullptr) return invalid("NULL argument");
    return guarded([&] { *out = new gcf_dataset{load_dataset(path)}; });
}

gcf_status gcf_dataset_save(const gcf_dataset* ds, const char* path) {
    if (ds == nullptr || path == nullptr) return invalid("NULL argument");
    return guarded([&] { save_dataset(ds->data, path); });
}

gcf_status gcf_dataset_generate(const char* config_json, gcf_dataset** out) {
    if (config_json == nullptr || out == nullptr) return invalid("NULL argument");
    return guarded([&] {
        json doc;
        try {
            doc = json::parse(config_json);
        } catch (const json::exception& e) {
            throw Error(Status::parse, std::string("generator config: ") + e.what());
        }
        // reuse the run-config dataset section parser
        const json wrapped = {{"dataset", doc}};
        const RunConfig cfg = parse_run_config(wrapped.dump());
        if (cfg.dataset.family == DatasetConfig::Family::file) {
            throw Error(Status::invalid_arg,
                        "generator config: family must be tree_cycles or coauthor");
        }
        *out = new gcf_dataset{build_dataset(cfg.dataset)};
    });
}

gcf_status gcf_dataset_load_coauthor(const char* path, double percentile,
                                     gcf_dataset** out) {
    if (path == nullptr || out == nullptr) return invalid("NULL argument");
    return guarded(
        [&] { *out = new gcf_dataset{load_coauthor_file(path, percentile)}; });
}

int gcf_dataset_num_snapshots(const gcf_dataset* ds) {
    return ds == nullptr ? -1 : static_cast<int>(ds->data.snapshots().size());
}

int gcf_dataset_num_graphs(const gcf_dataset* ds, int t) {
    if (ds == nullptr || t < 0 ||
        t >= static_cast<int>(ds->data.snapshots().size())) {
        return -1;
    }
    return static_cast<int>(ds->data.snapshot(t).members.size());
}

void gcf_dataset_free(gcf_dataset* ds) { delete ds; }

gcf_status gcf_explainer_fit(const gcf_dataset* ds, const char* config_json,
                             gcf_explainer** out) {
    if (ds == nullptr || config_json == nullptr || out == nullptr) {
        return invalid("NULL argument");
    }
    return guarded([&] {
        const RunConfig cfg = parse_run_config(config_json);
        if (ds->data.empty()) {
            throw Error(Status::invalid_arg, "fit: dataset has no snapshots");
        }
        const Oracle oracle = build_oracle(cfg.dataset, ds->data);
        std::vector<std::string> train_ids;
        for (const Member& m : ds->data.snapshot(0).members) {
            train_ids.push_back(m.graph.id());
        }
        *out = new gcf_explainer{ExplainerState::fit_initial(
            ds->data.snapshot(0), oracle, train_ids, cfg.explainer)};
    });
}

gcf_status gcf_explainer_adapt(gcf_explainer* ex, const gcf_dataset* ds) {
    if (ex == nullptr || ds == nullptr) return invalid("NULL argument");
    return guarded([&] {
        const int next_t = ex->state.current_t() + 1;
        if (next_t > ds->data.horizon()) {
            throw Error(Status::state,
                        "adapt: dataset has no snapshot t=" + std::to_string(next_t));
        }
        ex->state.adapt(ds->data.snapshot(next_t));
    });
}

gcf_status gcf_explainer_explain(const gcf_explainer* ex, const gcf_dataset* ds,
                                 const char* query_id, int k, char** json_out) {
    if (ex == nullptr || ds == nullptr || query_id == nullptr || json_out == nullptr) {
        return invalid("NULL argument");
    }
    return guarded([&] {
        const int t = ex->state.current_t();
        if (t < 0 || t > ds->data.horizon()) {
            throw Error(Status::state,
                        "explain: dataset has no snapshot t=" + std::to_string(t));
        }
        const Snapshot& snap = ds->data.snapshot(t);
        const Member* query = snap.find(query_id);
        if (query == nullptr) {
            throw Error(Status::invalid_arg,
                        std::string("explain: graph '") + query_id +
                            "' is not in snapshot t=" + std::to_string(t));
        }
        std::vector<const Graph*> pool;
        pool.reserve(snap.members.size());
        for (const Member& m : snap.members) pool.push_back(&m.graph);

        Explanation expl;
        if (k > 0 && k != ex->state.k()) {
            ExplainerState tweaked = ex->state;
            tweaked.set_k(k);
            expl = tweaked.explain(query->graph, pool);
        } else {
            expl = ex->state.explain(query->graph, pool);
        }
        *json_out = copy_string(explanation_to_json(expl));
    });
}

gcf_status gcf_explainer_current_t(const gcf_explainer* ex, int* t_out) {
    if (ex == nullptr || t_out == nullptr) return invalid("NULL argument");
    *t_out = ex->state.current_t();
    return GCF_OK;
}

gcf_status gcf_explainer_save(const gcf_explainer* ex, const char* path) {
    if (ex == nullptr || path == nullptr) return invalid("NULL argument");
    return guarded([&] { ex->state.save(path); });
}

gcf_status gcf_explainer_load(const char* path, gcf_explainer** out) {
    if (path == nullptr || out == nullptr) return invalid("NULL argument");
    return guarded([&] { *out = new gcf_explainer{ExplainerState::load(path)}; });
}

void gcf_explainer_free(gcf_explainer* ex) { delete ex; }

gcf_status gcf_run_cv(const char* config_json, const char* out_dir,
                      char** summary_json_out) {
    if (config_json == nullptr || out_dir == nullptr) {
        return invalid("NULL argument");
    }
    return guarded([&] {
        const RunConfig cfg = parse_run_config(config_json);
        const RunResult result = run_cv(cfg);
        write_run_outputs(result, out_dir);
        if (summary_json_out != nullptr) {
            *summary_json_out = copy_string(run_summary_json(result));
        }
    });
}

gcf_status gcf_report(const char* records_csv_path, const char* out_csv_path,
                      char** table_out) {
    if (records_csv_path == nullptr) return invalid("NULL argument");
    return guarded([&] {
        const auto records = read_fold_csv(records_csv_path);
        const auto rows = aggregate_records(records);
        if (out_csv_path != nullptr) write_aggregate_csv(rows, out_csv_path);
        if (table_out != nullptr) {
            *table_out = copy_string(format_aggregate_table(rows));
        }
    });
}

gcf_status gcf_drift_detect(const double* prev, int n_prev, const double* curr,
                            int n_curr, double significance, double* statistic,
                            double* p_value, int* drifted) {
    if (prev == nullptr || curr == nullptr) return invalid("NULL argument");
    if (n_prev <= 0 || n_curr <= 0) {
        return invalid("drift samples must be non-empty");
    }
    return guarded([&] {
        const DriftReport report =
            detect(std::vector<double>(prev, prev + n_prev),
                   std::vector<double>(curr, curr + n_curr), significance);
        if (statistic != nullptr) *statistic = report.ks_statistic;
        if (p_value != nullptr) *p_value = report.p_value;
        if (drifted != nullptr) *drifted = report.drifted ? 1 : 0;
    });
}

} // extern "C"
