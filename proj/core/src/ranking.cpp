#include "clinsearch/ranking.hpp"

#include "clinsearch/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace clinsearch {

void RankingParams::validate() const {
    if (!(k1 >= 0.0) || !std::isfinite(k1)) {
        throw ConfigError("ranking: k1 must be >= 0");
    }
    if (!(b >= 0.0 && b <= 1.0)) {
        throw ConfigError("ranking: b must be in [0, 1]");
    }
    if (top_k < 1) {
        throw ConfigError("ranking: top_k must be >= 1");
    }
}

void FacetWeights::set(Facet f, double w) {
    if (!(w >= 0.0 && w <= 2.0)) {
        throw ConfigError("facet weight for '" + std::string(to_string(f)) +
                          "' must be in [0, 2]");
    }
    w_[static_cast<size_t>(f)] = w;
}

bool FacetWeights::any_positive() const {
    for (double w : w_) {
        if (w > 0.0) {
            return true;
        }
    }
    return false;
}

FacetWeights FacetWeights::baseline() {
    FacetWeights w;
    w.set(Facet::all, 1.0);
    return w;
}

FacetWeights FacetWeights::parse(std::string_view spec) {
    FacetWeights out;
    size_t start = 0;
    while (start < spec.size()) {
        size_t comma = spec.find(',', start);
        if (comma == std::string_view::npos) {
            comma = spec.size();
        }
        std::string_view item = spec.substr(start, comma - start);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) {
            const size_t colon = item.find(':');
            if (colon == std::string_view::npos) {
                throw ConfigError("facet weights: expected 'facet:weight', got '" +
                                  std::string(item) + "'");
            }
            const auto facet = facet_from_string(item.substr(0, colon));
            if (!facet) {
                throw ConfigError("facet weights: unknown facet '" +
                                  std::string(item.substr(0, colon)) + "'");
            }
            double value = 0;
            const std::string_view num = item.substr(colon + 1);
            const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
            if (ec != std::errc{} || ptr != num.data() + num.size()) {
                throw ConfigError("facet weights: bad value '" + std::string(num) + "'");
            }
            out.set(*facet, value);
        }
        start = comma + 1;
    }
    return out;
}

std::string FacetWeights::format() const {
    std::string out;
    for (Facet f : kFacets) {
        if (!out.empty()) {
            out.push_back(',');
        }
        out += to_string(f);
        out.push_back(':');
        char buf[32];
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), get(f));
        out.append(buf, ptr);
    }
    return out;
}

QueryRep build_query(std::string_view text, const AnalyzerConfig& analyzer) {
    QueryRep query;
    query.surface_words = tokenize(text);
    for (auto& term : analyze(text, analyzer)) {
        query.terms.push_back({std::move(term), 1.0, std::nullopt});
    }
    return query;
}

namespace {

double idf(uint32_t n_docs, uint32_t df) {
    return std::log(1.0 + (static_cast<double>(n_docs) - static_cast<double>(df) + 0.5) /
                              (static_cast<double>(df) + 0.5));
}

double tf_component(uint32_t tf, double k1, double b, double norm_len) {
    const double f = static_cast<double>(tf);
    return f * (k1 + 1.0) / (f + k1 * (1.0 - b + b * norm_len));
}

} // namespace

double bm25(const InvertedIndex& index, Facet f, std::string_view term,
            std::string_view doc_id, const RankingParams& params) {
    params.validate();
    const auto ordinal = index.ordinal_of(doc_id);
    if (!ordinal) {
        throw EvalError("bm25: unknown document '" + std::string(doc_id) + "'");
    }
    const auto& postings = index.postings(f, term);
    const auto it = std::lower_bound(postings.begin(), postings.end(), *ordinal,
                                     [](const Posting& p, uint32_t ord) { return p.doc < ord; });
    if (it == postings.end() || it->doc != *ordinal) {
        return 0.0;
    }
    const double avg = index.avg_length(f);
    const double norm = avg > 0.0 ? static_cast<double>(index.length(f, *ordinal)) / avg : 0.0;
    return idf(index.doc_count(), static_cast<uint32_t>(postings.size())) *
           tf_component(it->tf, params.k1, params.b, norm);
}

std::vector<ScoredDoc> search(const InvertedIndex& index, const QueryRep& query,
                              const FacetWeights& weights, const RankingParams& params) {
    params.validate();
    if (!weights.any_positive()) {
        throw ConfigError("search: all facet weights are zero");
    }
    const uint32_t n = index.doc_count();
    std::vector<double> scores(n, 0.0);
    std::vector<double> term_best(n, 0.0);
    std::vector<uint32_t> stamp(n, 0);
    std::vector<uint32_t> touched;
    uint32_t epoch = 0;

    for (const auto& term : query.terms) {
        ++epoch;
        touched.clear();
        for (Facet f : kFacets) {
            if (term.facet && *term.facet != f) {
                continue;
            }
            const double w = weights.get(f);
            if (w <= 0.0) {
                continue;
            }
            const auto& postings = index.postings(f, term.term);
            if (postings.empty()) {
                continue;
            }
            const double term_idf = idf(n, static_cast<uint32_t>(postings.size()));
            const double avg = index.avg_length(f);
            for (const Posting& p : postings) {
                const double norm =
                    avg > 0.0 ? static_cast<double>(index.length(f, p.doc)) / avg : 0.0;
                const double candidate =
                    w * term_idf * tf_component(p.tf, params.k1, params.b, norm);
                if (stamp[p.doc] != epoch) {
                    stamp[p.doc] = epoch;
                    term_best[p.doc] = candidate;
                    touched.push_back(p.doc);
                } else if (candidate > term_best[p.doc]) {
                    term_best[p.doc] = candidate;
                }
            }
        }
        for (uint32_t doc : touched) {
            scores[doc] += term.weight * term_best[doc];
        }
    }

    std::vector<ScoredDoc> out;
    for (uint32_t doc = 0; doc < n; ++doc) {
        if (scores[doc] > 0.0) {
            out.push_back({index.doc_id(doc), scores[doc]});
        }
    }
    std::sort(out.begin(), out.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
        return a.score != b.score ? a.score > b.score : a.doc_id < b.doc_id;
    });
    if (out.size() > static_cast<size_t>(params.top_k)) {
        out.resize(static_cast<size_t>(params.top_k));
    }
    return out;
}

} // namespace clinsearch
