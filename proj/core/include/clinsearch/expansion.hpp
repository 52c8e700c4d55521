#pragma once

#include "clinsearch/corpus.hpp"
#include "clinsearch/embeddings.hpp"
#include "clinsearch/qrels.hpp"
#include "clinsearch/ranking.hpp"

#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace clinsearch {

struct ExpansionParams {
    int feedback_docs = 30;           ///< PRF/RF retrieval depth
    int expansion_terms = 10;         ///< terms appended by PRF/RF
    double lambda = 0.2;              ///< weight of appended terms
    int max_neighbors_per_word = 3;   ///< embedding neighbours per query word
    int query_word_cap = 40;          ///< distinct surface words, whole query
    double similarity_threshold = 0.6;

    void validate() const; ///< throws ConfigError

    bool operator==(const ExpansionParams&) const = default;
};

/// Field-specific expansion weight defaults: note 0.9, desc 0.8, sum 0.2.
double default_expansion_lambda(TopicField field);

/// Candidate terms from the analyzed feedback documents minus `exclude`,
/// scored by tf x idf(all) summed over the documents, top n with ties broken
/// lexicographically, normalized so the best term scores 1.
std::vector<std::pair<std::string, double>>
select_feedback_terms(const std::vector<const Document*>& docs, int n,
                      const std::set<std::string>& exclude, const InvertedIndex& index);

/// Pseudo-relevance feedback: retrieves the top feedback_docs, appends
/// expansion_terms new terms with weight lambda x selection score.
QueryRep expand_prf(const QueryRep& query, const InvertedIndex& index, const Corpus& corpus,
                    const FacetWeights& weights, const RankingParams& params,
                    const ExpansionParams& expansion);

/// True relevance feedback: the feedback set is the judged-relevant subset
/// of the initial top feedback_docs. With no judged-relevant document the
/// query is returned unchanged.
QueryRep expand_rf(const QueryRep& query, int topic_id, const InvertedIndex& index,
                   const Corpus& corpus, const FacetWeights& weights,
                   const RankingParams& params, const SampledQrels& qrels,
                   const ExpansionParams& expansion);

/// Appends up to max_neighbors_per_word cosine neighbours per original
/// surface word, stopping once the query holds query_word_cap distinct
/// words; appended words are analyzed like any query text.
QueryRep expand_embeddings(const QueryRep& query, const EmbeddingTable& table,
                           const AnalyzerConfig& analyzer, const ExpansionParams& expansion);

/// Extracts concepts from the topic text and appends the preferred-name
/// tokens plus the concept ids as concepts-facet terms, all with weight
/// lambda.
QueryRep expand_concepts(const QueryRep& query, std::string_view topic_text,
                         const ConceptLexicon& lexicon, double lambda,
                         const AnalyzerConfig& analyzer);

} // namespace clinsearch
