#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "graphcf/error.hpp"

namespace graphcf {

inline double mean(const std::vector<double>& xs) {
    if (xs.empty()) throw Error(Status::invalid_arg, "mean of empty sample");
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

// population standard deviation
inline double stddev(const std::vector<double>& xs) {
    const double m = mean(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(xs.size()));
}

// linearly interpolated quantile at percentile p in (0, 100);
// position (n - 1) * p / 100 between order statistics
inline double quantile_linear(std::vector<double> xs, double p) {
    if (xs.empty()) throw Error(Status::invalid_arg, "quantile of empty sample");
    if (p <= 0.0 || p >= 100.0) {
        throw Error(Status::invalid_arg, "percentile must lie in (0, 100)");
    }
    std::sort(xs.begin(), xs.end());
    const double pos = (static_cast<double>(xs.size()) - 1.0) * p / 100.0;
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= xs.size()) return xs.back();
    return xs[lo] + frac * (xs[lo + 1] - xs[lo]);
}

} // namespace graphcf
