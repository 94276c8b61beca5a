#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "graphcf/explainer.hpp"

namespace graphcf {

struct DriftReport {
    int t = 0;
    double ks_statistic = 0.0;
    double p_value = 1.0;
    bool drifted = false;
    int n_prev = 0;
    int n_curr = 0;
    double significance = 0.05;
};

// survival function of the Kolmogorov distribution,
// Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2), truncated at
// k = 100 and clamped to [0, 1]; tiny lambda maps to 1
double kolmogorov_q(double lambda);

// exact sup |F_a - F_b| over the merged samples, plus the asymptotic p-value
// with effective size n_a * n_b / (n_a + n_b)
std::pair<double, double> ks_two_sample(std::vector<double> a,
                                        std::vector<double> b);

using DriftCallback = std::function<void(const DriftReport&)>;

// drifted iff p_value < significance; on_drift fires when it does
DriftReport detect(const std::vector<double>& prev_errors,
                   const std::vector<double>& curr_errors,
                   double significance = 0.05,
                   const DriftCallback& on_drift = {});

// Reconstruction error of every snapshot graph under the GAE of its own
// class: the label map when given (oracle labels at t = 0), the inferred
// class otherwise. Samples are ordered by graph_id.
std::vector<double> error_sample(const ExplainerState& state,
                                 const Snapshot& snapshot,
                                 const std::map<std::string, int>* labels = nullptr);

} // namespace graphcf
