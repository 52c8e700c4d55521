#pragma once

#include "clinsearch/corpus.hpp"
#include "clinsearch/embeddings.hpp"
#include "clinsearch/qrels.hpp"
#include "clinsearch/run_io.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace clinsearch {

/// Features for the linear re-ranker: per-topic min-max normalized baseline
/// and PRF scores, the embedding distance between topic text and document
/// title (in [0, 2], 1 when either side has no known words), and one-hot
/// topic-type and topic-field blocks.
struct FeatureVector {
    static constexpr size_t kDim = 9;
    // 0 bm25, 1 prf, 2 title_dist, 3-5 type one-hot, 6-8 field one-hot
    static const std::array<std::string_view, kDim>& names();

    std::array<double, kDim> values{};

    bool operator==(const FeatureVector&) const = default;
};

/// Pairwise-trained linear scoring model. Serializes to a versioned text
/// format (`feature weight` lines plus metadata comments) that reloads
/// exactly.
struct LinearRankModel {
    std::array<double, FeatureVector::kDim> weights{};
    uint64_t seed = 0;
    int epochs = 0;
    double learning_rate = 0.0;
    uint64_t pair_count = 0;
    double pair_accuracy = 0.0;

    double score(const FeatureVector& fv) const;

    void save(std::ostream& out) const;
    static LinearRankModel load(std::istream& in);
    void save_file(const std::string& path) const;
    static LinearRankModel load_file(const std::string& path);

    bool operator==(const LinearRankModel&) const = default;
};

FeatureVector extract_features(const Topic& topic, TopicField field, const Document& doc,
                               const std::vector<RunEntry>& baseline_ranking,
                               const std::vector<RunEntry>& prf_ranking,
                               const EmbeddingTable* table);

using PreferencePair = std::pair<FeatureVector, FeatureVector>; ///< (relevant, nonrelevant)

/// One pair per (relevant, nonrelevant) combination among the judged top
/// `depth` documents of the baseline run, capped per topic by seeded
/// sampling.
std::vector<PreferencePair>
build_training_set(const std::vector<Topic>& topics, TopicField field, const SampledQrels& qrels,
                   const RankedRun& baseline, const RankedRun& prf, const Corpus& corpus,
                   const EmbeddingTable* table, int depth = 100, size_t pair_cap = 1000,
                   uint64_t seed = 1);

/// Minimizes the pairwise logistic loss sum ln(1 + exp(-(w x+ - w x-))) by
/// seeded-order stochastic gradient descent from w = 0. Throws ConfigError
/// on an empty pair set.
LinearRankModel train_ranker(const std::vector<PreferencePair>& pairs, double learning_rate,
                             int epochs, uint64_t seed);

double pairwise_loss(const LinearRankModel& model, const std::vector<PreferencePair>& pairs);

/// Re-orders the top `depth` of each topic by model score (stable: ties keep
/// the original order); the tail keeps its order. The original score
/// multiset is reassigned positionally so per-topic scores stay
/// non-increasing and an unchanged order leaves the run bit-identical.
RankedRun rerank(const LinearRankModel& model, const RankedRun& run,
                 const std::map<int, std::unordered_map<std::string, FeatureVector>>& features,
                 int depth = 100);

} // namespace clinsearch
