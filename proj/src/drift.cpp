#include "graphcf/drift.hpp"

#include <algorithm>
#include <cmath>

#include "graphcf/error.hpp"

namespace graphcf {

double kolmogorov_q(double lambda) {
    // below ~0.05 the 100-term series has not converged; the true survival
    // probability there is 1 to double precision
    if (lambda < 0.05) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1) ? term : -term;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

std::pair<double, double> ks_two_sample(std::vector<double> a,
                                        std::vector<double> b) {
    if (a.empty() || b.empty()) {
        throw Error(Status::invalid_arg, "ks test requires two non-empty samples");
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());

    double statistic = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        statistic = std::max(statistic,
                             std::abs(static_cast<double>(i) / na -
                                      static_cast<double>(j) / nb));
    }

    const double effective = na * nb / (na + nb);
    const double p = kolmogorov_q(std::sqrt(effective) * statistic);
    return {statistic, p};
}

DriftReport detect(const std::vector<double>& prev_errors,
                   const std::vector<double>& curr_errors, double significance,
                   const DriftCallback& on_drift) {
    const auto [statistic, p_value] = ks_two_sample(prev_errors, curr_errors);
    DriftReport report;
    report.ks_statistic = statistic;
    report.p_value = p_value;
    report.significance = significance;
    report.drifted = p_value < significance;
    report.n_prev = static_cast<int>(prev_errors.size());
    report.n_curr = static_cast<int>(curr_errors.size());
    if (report.drifted && on_drift) on_drift(report);
    return report;
}

std::vector<double> error_sample(const ExplainerState& state,
                                 const Snapshot& snapshot,
                                 const std::map<std::string, int>* labels) {
    std::vector<const Member*> ordered;
    ordered.reserve(snapshot.members.size());
    for (const Member& m : snapshot.members) ordered.push_back(&m);
    std::sort(ordered.begin(), ordered.end(), [](const Member* a, const Member* b) {
        return a->graph.id() < b->graph.id();
    });

    std::vector<double> errors;
    errors.reserve(ordered.size());
    for (const Member* m : ordered) {
        int cls;
        if (labels != nullptr) {
            const auto it = labels->find(m->graph.id());
            if (it == labels->end()) {
                throw Error(Status::invalid_arg,
                            "error_sample: no label for graph '" + m->graph.id() + "'");
            }
            cls = it->second;
        } else {
            cls = state.infer_class(m->graph);
        }
        errors.push_back(
            reconstruction_error(cls == 0 ? state.f0() : state.f1(), m->graph));
    }
    return errors;
}

} // namespace graphcf
