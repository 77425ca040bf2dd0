#pragma once

// Plain serial sample statistics used as test oracles.

#include <cmath>
#include <cstddef>
#include <vector>

struct SampleStats {
    double mean = 0.0;
    double stderr_ = 0.0;
};

inline SampleStats sample_stats(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= n - 1.0;
    return {mean, std::sqrt(var / n)};
}

inline bool within_sigmas(const SampleStats& s, double target, double sigmas = 3.0) {
    return std::abs(s.mean - target) <= sigmas * s.stderr_;
}
