#pragma once

#include "clinsearch/index.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clinsearch {

struct RankingParams {
    double k1 = 1.2;
    double b = 0.75;
    int top_k = 1000;

    void validate() const; ///< throws ConfigError

    bool operator==(const RankingParams&) const = default;
};

/// Per-facet score multipliers in [0, 2].
class FacetWeights {
public:
    FacetWeights() = default;

    double get(Facet f) const { return w_[static_cast<size_t>(f)]; }
    void set(Facet f, double w); ///< throws ConfigError outside [0, 2]
    bool any_positive() const;

    /// The unweighted baseline: {all: 1}.
    static FacetWeights baseline();

    /// "title:1,abstract:0.5"; unnamed facets stay 0.
    static FacetWeights parse(std::string_view spec);
    std::string format() const;

    bool operator==(const FacetWeights&) const = default;

private:
    std::array<double, kFacetCount> w_{};
};

struct WeightedTerm {
    std::string term;
    double weight = 1.0;
    std::optional<Facet> facet; ///< restrict scoring to one facet (concept ids)

    bool operator==(const WeightedTerm&) const = default;
};

/// A processed query: analyzed terms with weights plus the pre-stemming
/// surface words (used by embedding expansion and its word cap) and a trace
/// of the pipeline stages that produced it.
struct QueryRep {
    std::vector<WeightedTerm> terms;
    std::vector<std::string> surface_words;
    std::vector<std::string> trace;

    bool operator==(const QueryRep&) const = default;
};

QueryRep build_query(std::string_view text, const AnalyzerConfig& analyzer);

/// Okapi BM25 with the nonnegative idf form:
///   idf = ln(1 + (N - df + 0.5)/(df + 0.5))
///   tf' = tf (k1+1) / (tf + k1 (1 - b + b len/avglen))
/// Returns 0 when tf = 0; throws EvalError for unknown documents.
double bm25(const InvertedIndex& index, Facet f, std::string_view term,
            std::string_view doc_id, const RankingParams& params);

struct ScoredDoc {
    std::string doc_id;
    double score = 0.0;

    bool operator==(const ScoredDoc&) const = default;
};

/// Dismax scoring: per query term the maximum weighted per-facet BM25
/// contribution, summed over terms with their weights. Sorted by score
/// descending, ties by doc id ascending; zero-score documents are dropped
/// and at most top_k results are returned.
std::vector<ScoredDoc> search(const InvertedIndex& index, const QueryRep& query,
                              const FacetWeights& weights, const RankingParams& params);

} // namespace clinsearch
