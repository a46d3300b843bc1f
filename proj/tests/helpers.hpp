// Copyright 2026 The Stone Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Test-only oracles, kept independent of the library code paths they check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace stone::testing {

// pass@k by exhaustive subset enumeration: count the size-k subsets of n
// samples (c of them correct) containing no correct sample, then take
// 1 - bad/total. Bitmask enumeration, so n must stay small.
inline double pass_at_k_enumerated(std::size_t n, std::size_t c, std::size_t k) {
    if (n > 20) throw std::invalid_argument("enumeration oracle is for small n");
    std::uint64_t total = 0, bad = 0;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcountll(mask)) != k) continue;
        ++total;
        // Samples 0..c-1 are the correct ones; a subset avoiding them all
        // is a miss.
        if ((mask & ((1ULL << c) - 1)) == 0) ++bad;
    }
    return 1.0 - static_cast<double>(bad) / static_cast<double>(total);
}

// Mann-Whitney AUROC via midranks over the pooled scores (ties get the
// average rank). An independent route to the pairwise statistic.
inline double auroc_rank_oracle(const std::vector<double>& wm, const std::vector<double>& human) {
    struct Entry {
        double score;
        bool is_wm;
    };
    std::vector<Entry> pooled;
    pooled.reserve(wm.size() + human.size());
    for (double z : wm) pooled.push_back({z, true});
    for (double z : human) pooled.push_back({z, false});
    std::sort(pooled.begin(), pooled.end(),
              [](const Entry& a, const Entry& b) { return a.score < b.score; });

    double rank_sum_wm = 0.0;
    std::size_t i = 0;
    while (i < pooled.size()) {
        std::size_t j = i;
        while (j < pooled.size() && pooled[j].score == pooled[i].score) ++j;
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t) {
            if (pooled[t].is_wm) rank_sum_wm += midrank;
        }
        i = j;
    }
    const auto n1 = static_cast<double>(wm.size());
    const auto n2 = static_cast<double>(human.size());
    const double u = rank_sum_wm - n1 * (n1 + 1.0) / 2.0;
    return u / (n1 * n2);
}

// Trapezoid integral over (fpr, tpr) points sorted by fpr.
inline double trapezoid_area(std::vector<std::pair<double, double>> points) {
    std::sort(points.begin(), points.end());
    double area = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        area += (points[i].first - points[i - 1].first) *
                (points[i].second + points[i - 1].second) / 2.0;
    }
    return area;
}

// Independent softmax + entropy for trace oracles.
inline std::vector<double> oracle_softmax(const std::vector<double>& logits) {
    const double m = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - m);
        sum += p[i];
    }
    for (double& v : p) v /= sum;
    return p;
}

inline double oracle_entropy(const std::vector<double>& probs) {
    double h = 0.0;
    for (double p : probs) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

inline double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double sample_stddev(const std::vector<double>& v) {
    const double m = mean(v);
    double sq = 0.0;
    for (double x : v) sq += (x - m) * (x - m);
    return std::sqrt(sq / static_cast<double>(v.size() - 1));
}

}  // namespace stone::testing
