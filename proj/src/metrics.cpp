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

#include "stone/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "stone/sampling.hpp"

namespace stone {

double entropy(const ProbVector& probs) {
    validate_probs(probs);
    double h = 0.0;
    for (double p : probs) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return std::max(h, 0.0);
}

double entropy(const ProbVector& probs, double log_base) {
    if (!(log_base > 0.0) || log_base == 1.0) {
        throw std::invalid_argument("log base must be positive and != 1");
    }
    return entropy(probs) / std::log(log_base);
}

double pass_at_k(std::size_t n, std::size_t c, std::size_t k) {
    if (c > n) throw std::invalid_argument("pass@k requires c <= n");
    if (k == 0 || k > n) throw std::invalid_argument("pass@k requires 1 <= k <= n");
    if (n - c < k) return 1.0;

    // C(n-c, k) / C(n, k) telescopes to prod_{i=n-c+1..n} (i - k) / i.
    // When both integer products stay exactly representable, one division
    // gives the correctly rounded ratio; otherwise fall back to the running
    // product, which never overflows.
    double num = 1.0, den = 1.0;
    bool exact = true;
    for (std::size_t i = n - c + 1; i <= n; ++i) {
        num *= static_cast<double>(i - k);
        den *= static_cast<double>(i);
        if (den >= 0x1.0p53) {
            exact = false;
            break;
        }
    }
    if (exact) return 1.0 - num / den;

    double ratio = 1.0;
    for (std::size_t i = n - c + 1; i <= n; ++i) {
        ratio *= static_cast<double>(i - k) / static_cast<double>(i);
    }
    return 1.0 - ratio;
}

namespace {

void check_pools(const ScorePools& pools) {
    if (pools.wm.empty() || pools.human.empty()) {
        throw std::invalid_argument("both score pools must be non-empty");
    }
}

}  // namespace

std::vector<RocPoint> roc_points(const ScorePools& pools) {
    check_pools(pools);
    std::set<double, std::greater<double>> thresholds(pools.wm.begin(), pools.wm.end());
    thresholds.insert(pools.human.begin(), pools.human.end());

    const auto J = static_cast<double>(pools.wm.size());
    const auto I = static_cast<double>(pools.human.size());
    std::vector<RocPoint> points;
    points.reserve(thresholds.size() + 1);
    auto rates = [&](double tau) -> RocPoint {
        std::size_t tp = 0, fp = 0;
        for (double z : pools.wm) tp += z > tau ? 1 : 0;
        for (double z : pools.human) fp += z > tau ? 1 : 0;
        return {static_cast<double>(fp) / I, static_cast<double>(tp) / J};
    };
    for (double tau : thresholds) {
        points.push_back(rates(tau));
    }
    points.push_back({1.0, 1.0});  // threshold below every score
    return points;
}

double auroc(const ScorePools& pools) {
    check_pools(pools);
    double favorable = 0.0;  // wins + half-ties, an exact half-integer
    for (double w : pools.wm) {
        for (double h : pools.human) {
            if (w > h) {
                favorable += 1.0;
            } else if (w == h) {
                favorable += 0.5;
            }
        }
    }
    return favorable /
           (static_cast<double>(pools.wm.size()) * static_cast<double>(pools.human.size()));
}

CorpusPpl corpus_perplexity(LogitProvider& provider, const std::vector<TokenSequence>& corpus) {
    CorpusPpl result;
    result.samples.reserve(corpus.size());
    double acc = 0.0;
    for (const TokenSequence& seq : corpus) {
        if (seq.empty()) {
            throw std::invalid_argument("cannot score an empty sequence");
        }
        validate_sequence(seq, provider.vocab_size());
        double log_prob_sum = 0.0;
        bool infinite = false;
        TokenSequence prefix;
        for (TokenId token : seq.tokens) {
            const ProbVector probs = softmax(provider.logits(prefix));
            const double p = probs[token];
            if (p <= 0.0) {
                infinite = true;
            } else {
                log_prob_sum += std::log(p);
            }
            prefix.push_back(token);
        }
        CorpusPpl::Sample sample;
        sample.length = seq.size();
        sample.mean_log_prob =
            infinite ? -std::numeric_limits<double>::infinity()
                     : log_prob_sum / static_cast<double>(seq.size());
        sample.infinite = infinite;
        sample.ppl = infinite ? std::numeric_limits<double>::infinity()
                              : std::exp(-sample.mean_log_prob);
        if (infinite) ++result.infinite_count;
        acc += sample.ppl;
        result.samples.push_back(sample);
    }
    result.mean_ppl = corpus.empty() ? 0.0 : acc / static_cast<double>(corpus.size());
    return result;
}

double imperceptibility(double ppl_wm, double ppl_ref) {
    if (!(ppl_ref > 0.0)) {
        throw std::invalid_argument("reference perplexity must be positive");
    }
    return 1.0 - (ppl_wm - ppl_ref) / ppl_ref;
}

void StemWeights::validate() const {
    if (alpha < 0.0 || beta < 0.0 || zeta < 0.0 || alpha > 1.0 || beta > 1.0 || zeta > 1.0) {
        throw std::invalid_argument("weights must lie in [0, 1]");
    }
    if (std::abs(alpha + beta + zeta - 1.0) > kProbTolerance) {
        throw std::invalid_argument("weights must sum to 1");
    }
}

StemScore stem(double correctness, double detectability, double imperceptibility,
               const StemWeights& weights) {
    weights.validate();
    return {correctness, detectability, imperceptibility,
            weights.alpha * correctness + weights.beta * detectability +
                weights.zeta * imperceptibility};
}

std::vector<StemWeights> weight_grid(double step) {
    if (!(step > 0.0 && step <= 1.0)) {
        throw std::invalid_argument("grid step must lie in (0, 1]");
    }
    const auto m = static_cast<std::size_t>(std::llround(1.0 / step));
    if (std::abs(static_cast<double>(m) * step - 1.0) > kProbTolerance) {
        throw std::invalid_argument("grid step must divide 1 evenly");
    }
    std::vector<StemWeights> grid;
    for (std::size_t i = 0; i <= m; ++i) {
        for (std::size_t j = 0; i + j <= m; ++j) {
            const std::size_t l = m - i - j;
            grid.push_back({static_cast<double>(i) / static_cast<double>(m),
                            static_cast<double>(j) / static_cast<double>(m),
                            static_cast<double>(l) / static_cast<double>(m)});
        }
    }
    return grid;
}

CategoryEntropyMeans category_entropy_means(LogitProvider& provider,
                                            const std::vector<TokenSequence>& corpus,
                                            const VocabularyProfile& profile) {
    if (provider.vocab_size() != profile.vocab_size()) {
        throw std::invalid_argument("provider and profile disagree on vocabulary size");
    }
    CategoryEntropyMeans result;
    for (const TokenSequence& seq : corpus) {
        validate_sequence(seq, profile.vocab_size());
        TokenSequence prefix;
        for (TokenId token : seq.tokens) {
            const double h = entropy(softmax(provider.logits(prefix)));
            const auto cat = static_cast<std::size_t>(profile.category(token));
            ++result.counts[cat];
            result.sums[cat] += h;
            prefix.push_back(token);
        }
    }
    return result;
}

double SelectionStats::selected_fraction() const {
    return total_steps == 0 ? 0.0
                            : static_cast<double>(selected) / static_cast<double>(total_steps);
}

double SelectionStats::syntax_fraction() const {
    return selected == 0 ? 0.0
                         : static_cast<double>(syntax_among_selected) /
                               static_cast<double>(selected);
}

SelectionStats sweet_selection_stats(LogitProvider& provider,
                                     const std::vector<TokenSequence>& corpus,
                                     const VocabularyProfile& profile, double threshold,
                                     std::size_t top_k) {
    if (provider.vocab_size() != profile.vocab_size()) {
        throw std::invalid_argument("provider and profile disagree on vocabulary size");
    }
    SelectionStats stats;
    for (const TokenSequence& seq : corpus) {
        validate_sequence(seq, profile.vocab_size());
        TokenSequence prefix;
        for (TokenId token : seq.tokens) {
            ProbVector probs = softmax(provider.logits(prefix));  // one call per step
            if (top_k > 0) probs = top_k_restrict(probs, top_k);
            ++stats.total_steps;
            if (entropy(probs) > threshold) {
                ++stats.selected;
                const TokenCategory cat = profile.category(token);
                ++stats.category_counts[static_cast<std::size_t>(cat)];
                if (cat != TokenCategory::Etc) ++stats.syntax_among_selected;
            }
            prefix.push_back(token);
        }
    }
    return stats;
}

}  // namespace stone
