#include "clinsearch/expansion.hpp"

#include "clinsearch/error.hpp"
#include "clinsearch/text.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

namespace clinsearch {

void ExpansionParams::validate() const {
    if (feedback_docs < 1) {
        throw ConfigError("expansion: feedback_docs must be >= 1");
    }
    if (expansion_terms < 0) {
        throw ConfigError("expansion: expansion_terms must be >= 0");
    }
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw ConfigError("expansion: lambda must be in [0, 1]");
    }
    if (max_neighbors_per_word < 0) {
        throw ConfigError("expansion: max_neighbors_per_word must be >= 0");
    }
    if (query_word_cap < 1) {
        throw ConfigError("expansion: query_word_cap must be >= 1");
    }
}

double default_expansion_lambda(TopicField field) {
    switch (field) {
        case TopicField::note: return 0.9;
        case TopicField::desc: return 0.8;
        case TopicField::sum: return 0.2;
    }
    return 0.2;
}

std::vector<std::pair<std::string, double>>
select_feedback_terms(const std::vector<const Document*>& docs, int n,
                      const std::set<std::string>& exclude, const InvertedIndex& index) {
    std::vector<std::pair<std::string, double>> out;
    if (docs.empty() || n <= 0) {
        return out;
    }
    const uint32_t n_docs = index.doc_count();
    std::map<std::string, double> selection; // deterministic candidate order
    for (const Document* doc : docs) {
        std::map<std::string, uint32_t> tf;
        for (const std::string* text : {&doc->title, &doc->abstract_text, &doc->body}) {
            for (auto& term : analyze(*text, index.analyzer())) {
                ++tf[term];
            }
        }
        for (const auto& [term, count] : tf) {
            if (exclude.contains(term)) {
                continue;
            }
            const double df = static_cast<double>(index.df(Facet::all, term));
            const double idf =
                std::log(1.0 + (static_cast<double>(n_docs) - df + 0.5) / (df + 0.5));
            selection[term] += static_cast<double>(count) * idf;
        }
    }
    out.assign(selection.begin(), selection.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (out.size() > static_cast<size_t>(n)) {
        out.resize(static_cast<size_t>(n));
    }
    if (!out.empty() && out.front().second > 0.0) {
        const double max = out.front().second;
        for (auto& [term, score] : out) {
            score /= max;
        }
    }
    return out;
}

namespace {

std::set<std::string> query_term_set(const QueryRep& query) {
    std::set<std::string> out;
    for (const auto& t : query.terms) {
        out.insert(t.term);
    }
    return out;
}

QueryRep append_feedback_terms(const QueryRep& query,
                               const std::vector<const Document*>& feedback,
                               const InvertedIndex& index, const ExpansionParams& expansion,
                               const char* stage_label) {
    const auto selected =
        select_feedback_terms(feedback, expansion.expansion_terms, query_term_set(query), index);
    QueryRep out = query;
    for (const auto& [term, score] : selected) {
        out.terms.push_back({term, expansion.lambda * score, std::nullopt});
    }
    out.trace.emplace_back(stage_label);
    return out;
}

std::vector<const Document*> resolve_docs(const std::vector<ScoredDoc>& ranked,
                                          const Corpus& corpus) {
    std::vector<const Document*> out;
    out.reserve(ranked.size());
    for (const auto& sd : ranked) {
        const Document* doc = corpus.find(sd.doc_id);
        if (doc == nullptr) {
            throw ConfigError("expansion: document '" + sd.doc_id + "' not found in the corpus");
        }
        out.push_back(doc);
    }
    return out;
}

} // namespace

QueryRep expand_prf(const QueryRep& query, const InvertedIndex& index, const Corpus& corpus,
                    const FacetWeights& weights, const RankingParams& params,
                    const ExpansionParams& expansion) {
    expansion.validate();
    RankingParams initial = params;
    initial.top_k = expansion.feedback_docs;
    const auto ranked = search(index, query, weights, initial);
    return append_feedback_terms(query, resolve_docs(ranked, corpus), index, expansion, "prf");
}

QueryRep expand_rf(const QueryRep& query, int topic_id, const InvertedIndex& index,
                   const Corpus& corpus, const FacetWeights& weights,
                   const RankingParams& params, const SampledQrels& qrels,
                   const ExpansionParams& expansion) {
    expansion.validate();
    RankingParams initial = params;
    initial.top_k = expansion.feedback_docs;
    const auto ranked = search(index, query, weights, initial);

    const auto topic_it = qrels.topics.find(topic_id);
    std::vector<ScoredDoc> relevant;
    if (topic_it != qrels.topics.end()) {
        for (const auto& sd : ranked) {
            const auto grade = topic_it->second.grade(sd.doc_id);
            if (grade && *grade >= 1) {
                relevant.push_back(sd);
            }
        }
    }
    if (relevant.empty()) {
        return query;
    }
    return append_feedback_terms(query, resolve_docs(relevant, corpus), index, expansion, "rf");
}

QueryRep expand_embeddings(const QueryRep& query, const EmbeddingTable& table,
                           const AnalyzerConfig& analyzer, const ExpansionParams& expansion) {
    expansion.validate();
    QueryRep out = query;
    std::set<std::string> distinct(query.surface_words.begin(), query.surface_words.end());

    // original words only, first occurrence order
    std::vector<std::string> originals;
    std::unordered_set<std::string> seen;
    for (const auto& w : query.surface_words) {
        if (seen.insert(w).second) {
            originals.push_back(w);
        }
    }
    bool capped = false;
    for (const auto& word : originals) {
        if (capped) {
            break;
        }
        for (const auto& [neighbor, sim] :
             table.neighbors(word, expansion.max_neighbors_per_word,
                             expansion.similarity_threshold)) {
            if (distinct.contains(neighbor)) {
                continue;
            }
            if (distinct.size() >= static_cast<size_t>(expansion.query_word_cap)) {
                capped = true;
                break;
            }
            distinct.insert(neighbor);
            out.surface_words.push_back(neighbor);
            for (auto& term : analyze(neighbor, analyzer)) {
                out.terms.push_back({std::move(term), expansion.lambda, std::nullopt});
            }
        }
    }
    out.trace.emplace_back("embeddings");
    return out;
}

QueryRep expand_concepts(const QueryRep& query, std::string_view topic_text,
                         const ConceptLexicon& lexicon, double lambda,
                         const AnalyzerConfig& analyzer) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw ConfigError("expansion: lambda must be in [0, 1]");
    }
    QueryRep out = query;
    for (const auto& match : extract_concepts(topic_text, lexicon)) {
        for (auto& term : analyze(match.preferred_name, analyzer)) {
            out.terms.push_back({std::move(term), lambda, std::nullopt});
        }
        out.terms.push_back({match.concept_id, lambda, Facet::concepts});
    }
    out.trace.emplace_back("concepts");
    return out;
}

} // namespace clinsearch
