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

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "stone/provider.hpp"
#include "stone/syntax_profile.hpp"
#include "stone/types.hpp"

namespace stone {

/// Shannon entropy in nats (0 log 0 := 0). Ranges over [0, ln |V|].
double entropy(const ProbVector& probs);

/// Same, rebased: pass 2.0 for bits.
double entropy(const ProbVector& probs, double log_base);

/// Unbiased pass@k estimator: 1 - C(n-c, k) / C(n, k). Exact whenever the
/// binomial products fit a double's integer range; overflow-safe product
/// form otherwise. Requires 0 <= c <= n and 1 <= k <= n.
double pass_at_k(std::size_t n, std::size_t c, std::size_t k);

/// z-score pools for the ROC: watermarked generations vs human-written code.
struct ScorePools {
    std::vector<double> wm;
    std::vector<double> human;
};

struct RocPoint {
    double fpr;
    double tpr;
};

/// (FPR, TPR) at every distinct pooled score (strict '>' indicators), plus
/// the all-positive point, ordered from (0,0) to (1,1).
std::vector<RocPoint> roc_points(const ScorePools& pools);

/// Area under the ROC as the pairwise comparison statistic: mean over
/// (wm, human) pairs of 1 if wm > human, 0.5 if equal, else 0. Both pools
/// must be non-empty.
double auroc(const ScorePools& pools);

/// Per-sample and corpus perplexity. A sample's score is exp(-A_j) with A_j
/// its mean realized log-probability; the corpus value is the arithmetic
/// mean over samples. A zero-probability realized token makes the sample's
/// perplexity +infinity and is flagged.
struct CorpusPpl {
    struct Sample {
        double mean_log_prob;
        std::size_t length;
        double ppl;
        bool infinite;
    };
    std::vector<Sample> samples;
    double mean_ppl = 0.0;
    std::size_t infinite_count = 0;
};

/// Scores each sequence with the provider's raw softmax distributions (one
/// provider call per token). Empty sequences are rejected.
CorpusPpl corpus_perplexity(LogitProvider& provider, const std::vector<TokenSequence>& corpus);

/// 1 - (ppl_wm - ppl_ref) / ppl_ref. Unclipped: values below 0 mean the
/// watermark degraded the distribution. ppl_ref must be positive.
double imperceptibility(double ppl_wm, double ppl_ref);

/// Component weights; must sum to 1 within kProbTolerance.
struct StemWeights {
    double alpha;  // correctness
    double beta;   // detectability
    double zeta;   // imperceptibility

    void validate() const;
    static StemWeights equal() { return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}; }
};

struct StemScore {
    double correctness;
    double detectability;
    double imperceptibility;
    double composite;
};

/// Weighted composite of the three components.
StemScore stem(double correctness, double detectability, double imperceptibility,
               const StemWeights& weights);

/// Every (alpha, beta, zeta) on the simplex with each weight a multiple of
/// `step` and the three summing to 1, in lexicographic (alpha, beta) order.
/// step = 0.1 yields exactly 66 configurations.
std::vector<StemWeights> weight_grid(double step = 0.1);

/// Mean step entropy grouped by the category of the realized token. A
/// category with no occurrences reports no mean (absent, not zero).
struct CategoryEntropyMeans {
    std::array<std::size_t, kNumCategories> counts{};
    std::array<double, kNumCategories> sums{};

    std::optional<double> mean(TokenCategory cat) const {
        const auto i = static_cast<std::size_t>(cat);
        if (counts[i] == 0) return std::nullopt;
        return sums[i] / static_cast<double>(counts[i]);
    }
};

/// Walks each sequence with the provider (raw softmax, one call per step)
/// and accumulates H_t under the realized token's category.
CategoryEntropyMeans category_entropy_means(LogitProvider& provider,
                                            const std::vector<TokenSequence>& corpus,
                                            const VocabularyProfile& profile);

/// Entropy-threshold selection statistics: the share of steps whose entropy
/// exceeds `threshold`, and the syntax share among the selected realized
/// tokens. top_k = 0 measures the raw distribution; a positive value
/// restricts it first (matching the EntropyThreshold gate's view).
struct SelectionStats {
    std::size_t total_steps = 0;
    std::size_t selected = 0;
    std::size_t syntax_among_selected = 0;
    std::array<std::size_t, kNumCategories> category_counts{};  // among selected

    double selected_fraction() const;
    double syntax_fraction() const;  // among selected
};

SelectionStats sweet_selection_stats(LogitProvider& provider,
                                     const std::vector<TokenSequence>& corpus,
                                     const VocabularyProfile& profile, double threshold,
                                     std::size_t top_k = 0);

}  // namespace stone
