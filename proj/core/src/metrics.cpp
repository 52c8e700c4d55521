#include "clinsearch/metrics.hpp"

#include "clinsearch/error.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace clinsearch {

double gain(int grade) {
    return std::pow(2.0, grade) - 1.0;
}

double rank_discount(int rank) {
    return std::log2(static_cast<double>(rank) + 1.0);
}

namespace {

const std::vector<RunEntry>& entries_for(const RankedRun& run, int topic) {
    static const std::vector<RunEntry> empty;
    const auto it = run.by_topic.find(topic);
    return it == run.by_topic.end() ? empty : it->second;
}

double precision_at(const std::vector<RunEntry>& entries, const TopicJudgments& tj, int k) {
    int hits = 0;
    const int depth = std::min<int>(k, static_cast<int>(entries.size()));
    for (int i = 0; i < depth; ++i) {
        const auto grade = tj.grade(entries[static_cast<size_t>(i)].doc_id);
        if (grade && *grade >= 1) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(k);
}

double r_precision(const std::vector<RunEntry>& entries, const TopicJudgments& tj, uint32_t r) {
    int hits = 0;
    const size_t depth = std::min<size_t>(r, entries.size());
    for (size_t i = 0; i < depth; ++i) {
        const auto grade = tj.grade(entries[i].doc_id);
        if (grade && *grade >= 1) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(r);
}

double average_precision(const std::vector<RunEntry>& entries, const TopicJudgments& tj,
                         uint32_t r) {
    int hits = 0;
    double sum = 0.0;
    for (size_t i = 0; i < entries.size(); ++i) {
        const auto grade = tj.grade(entries[i].doc_id);
        if (grade && *grade >= 1) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(r);
}

double ndcg(const std::vector<RunEntry>& entries, const TopicJudgments& tj) {
    double dcg = 0.0;
    for (size_t i = 0; i < entries.size(); ++i) {
        const auto grade = tj.grade(entries[i].doc_id);
        if (grade && *grade > 0) {
            dcg += gain(*grade) / rank_discount(static_cast<int>(i) + 1);
        }
    }
    std::vector<int> grades;
    for (const auto& s : tj.strata) {
        for (const auto& [doc, grade] : s.judged) {
            if (grade > 0) {
                grades.push_back(grade);
            }
        }
    }
    std::sort(grades.begin(), grades.end(), std::greater<>());
    double idcg = 0.0;
    for (size_t i = 0; i < grades.size(); ++i) {
        idcg += gain(grades[i]) / rank_discount(static_cast<int>(i) + 1);
    }
    return idcg > 0.0 ? dcg / idcg : 0.0;
}

void require_fully_judged(const TopicJudgments& tj, int topic) {
    for (const auto& s : tj.strata) {
        if (!s.fully_judged()) {
            throw EvalError("exact metrics require fully judged strata (topic " +
                            std::to_string(topic) + ", stratum " + std::to_string(s.stratum_id) +
                            " has rate < 1)");
        }
    }
}

void require_judged(const TopicJudgments& tj, int topic) {
    for (const auto& s : tj.strata) {
        if (s.judged.empty()) {
            throw EvalError("topic " + std::to_string(topic) + " stratum " +
                            std::to_string(s.stratum_id) + " has no judged documents");
        }
    }
}

double inferred_ap(const std::vector<RunEntry>& entries, const TopicJudgments& tj,
                   double est_relevant, double epsilon) {
    const size_t n_strata = tj.strata.size();
    // index of the stratum containing each doc, cached once
    std::unordered_map<std::string, size_t> stratum_of;
    for (size_t s = 0; s < n_strata; ++s) {
        for (const auto& doc : tj.strata[s].pool_members) {
            stratum_of.emplace(doc, s);
        }
    }

    // running counts over the documents above the current rank
    std::vector<int> pooled_above(n_strata, 0);
    std::vector<int> judged_above(n_strata, 0);
    std::vector<int> relevant_above(n_strata, 0);
    std::vector<double> per_stratum_sum(n_strata, 0.0);

    for (size_t i = 0; i < entries.size(); ++i) {
        const int k = static_cast<int>(i) + 1;
        const auto it = stratum_of.find(entries[i].doc_id);
        const bool pooled = it != stratum_of.end();
        int doc_grade = -1;
        size_t doc_stratum = 0;
        if (pooled) {
            doc_stratum = it->second;
            const auto jt = tj.strata[doc_stratum].judged.find(entries[i].doc_id);
            if (jt != tj.strata[doc_stratum].judged.end()) {
                doc_grade = jt->second;
            }
        }

        if (doc_grade >= 1) {
            // expected precision at k: 1/k for the document itself plus the
            // estimated number of relevant documents above it
            double above = 0.0;
            for (size_t s = 0; s < n_strata; ++s) {
                if (pooled_above[s] == 0) {
                    continue;
                }
                double p_rel;
                if (tj.strata[s].fully_judged()) {
                    p_rel = judged_above[s] > 0 ? static_cast<double>(relevant_above[s]) /
                                                      static_cast<double>(judged_above[s])
                                                : 0.0;
                } else {
                    p_rel = (static_cast<double>(relevant_above[s]) + epsilon) /
                            (static_cast<double>(judged_above[s]) + 2.0 * epsilon);
                }
                above += static_cast<double>(pooled_above[s]) * p_rel;
            }
            per_stratum_sum[doc_stratum] += (1.0 + above) / static_cast<double>(k);
        }

        if (pooled) {
            ++pooled_above[doc_stratum];
            if (doc_grade >= 0) {
                ++judged_above[doc_stratum];
                if (doc_grade >= 1) {
                    ++relevant_above[doc_stratum];
                }
            }
        }
    }

    double total = 0.0;
    for (size_t s = 0; s < n_strata; ++s) {
        if (!tj.strata[s].judged.empty()) {
            total += static_cast<double>(tj.strata[s].pool_size) /
                     static_cast<double>(tj.strata[s].judged.size()) * per_stratum_sum[s];
        }
    }
    return total / est_relevant;
}

double inferred_ndcg(const std::vector<RunEntry>& entries, const TopicJudgments& tj) {
    const size_t n_strata = tj.strata.size();
    std::vector<double> per_stratum_dcg(n_strata, 0.0);
    for (size_t i = 0; i < entries.size(); ++i) {
        for (size_t s = 0; s < n_strata; ++s) {
            const auto it = tj.strata[s].judged.find(entries[i].doc_id);
            if (it != tj.strata[s].judged.end()) {
                if (it->second > 0) {
                    per_stratum_dcg[s] += gain(it->second) / rank_discount(static_cast<int>(i) + 1);
                }
                break;
            }
        }
    }
    double inf_dcg = 0.0;
    for (size_t s = 0; s < n_strata; ++s) {
        inf_dcg += static_cast<double>(tj.strata[s].pool_size) /
                   static_cast<double>(tj.strata[s].judged.size()) * per_stratum_dcg[s];
    }

    // ideal DCG from per-stratum estimated grade counts, packed greedily in
    // descending grade order; the last document of a grade may be fractional
    double est_count[3] = {0.0, 0.0, 0.0};
    for (const auto& s : tj.strata) {
        int counts[3] = {0, 0, 0};
        for (const auto& [doc, grade] : s.judged) {
            if (grade >= 1 && grade <= 2) {
                ++counts[grade];
            }
        }
        for (int g = 1; g <= 2; ++g) {
            est_count[g] += static_cast<double>(s.pool_size) * static_cast<double>(counts[g]) /
                            static_cast<double>(s.judged.size());
        }
    }
    double inf_idcg = 0.0;
    int rank = 1;
    double used = 0.0;
    for (int g = 2; g >= 1; --g) {
        double remaining = est_count[g];
        while (remaining > 1e-12) {
            const double room = 1.0 - used;
            const double take = std::min(room, remaining);
            inf_idcg += gain(g) * take / rank_discount(rank);
            used += take;
            remaining -= take;
            if (used >= 1.0 - 1e-12) {
                ++rank;
                used = 0.0;
            }
        }
    }
    return inf_idcg > 0.0 ? inf_dcg / inf_idcg : 0.0;
}

} // namespace

std::map<int, ExactScores> exact_metrics(const RankedRun& run, const SampledQrels& qrels,
                                         const MetricConfig& config) {
    std::map<int, ExactScores> out;
    for (const auto& [topic, tj] : qrels.topics) {
        require_judged(tj, topic);
        require_fully_judged(tj, topic);
        const uint32_t r = tj.judged_relevant_count();
        if (r == 0) {
            continue;
        }
        const auto& entries = entries_for(run, topic);
        ExactScores scores;
        scores.p_at_10 = precision_at(entries, tj, config.precision_cutoff);
        scores.r_prec = r_precision(entries, tj, r);
        scores.ap = average_precision(entries, tj, r);
        scores.ndcg = ndcg(entries, tj);
        out.emplace(topic, scores);
    }
    return out;
}

std::map<int, InferredScores> inferred_metrics(const RankedRun& run, const SampledQrels& qrels,
                                               const MetricConfig& config) {
    std::map<int, InferredScores> out;
    for (const auto& [topic, tj] : qrels.topics) {
        require_judged(tj, topic);
        const double est_relevant = tj.estimated_relevant();
        if (est_relevant <= 0.0) {
            continue;
        }
        const auto& entries = entries_for(run, topic);
        InferredScores scores;
        scores.inf_ap = inferred_ap(entries, tj, est_relevant, config.epsilon);
        scores.inf_ndcg = inferred_ndcg(entries, tj);
        out.emplace(topic, scores);
    }
    return out;
}

std::optional<MetricId> metric_from_string(std::string_view name) {
    if (name == "P@10") return MetricId::p_at_10;
    if (name == "R-Prec") return MetricId::r_prec;
    if (name == "AP") return MetricId::ap;
    if (name == "NDCG") return MetricId::ndcg;
    if (name == "infAP") return MetricId::inf_ap;
    if (name == "infNDCG") return MetricId::inf_ndcg;
    return std::nullopt;
}

std::string_view to_string(MetricId id) {
    switch (id) {
        case MetricId::p_at_10: return "P@10";
        case MetricId::r_prec: return "R-Prec";
        case MetricId::ap: return "AP";
        case MetricId::ndcg: return "NDCG";
        case MetricId::inf_ap: return "infAP";
        case MetricId::inf_ndcg: return "infNDCG";
    }
    return "infNDCG";
}

std::map<int, double> metric_scores(const RankedRun& run, const SampledQrels& qrels, MetricId id,
                                    const MetricConfig& config) {
    std::map<int, double> out;
    switch (id) {
        case MetricId::ap:
        case MetricId::ndcg: {
            for (const auto& [topic, scores] : exact_metrics(run, qrels, config)) {
                out.emplace(topic, id == MetricId::ap ? scores.ap : scores.ndcg);
            }
            break;
        }
        case MetricId::inf_ap:
        case MetricId::inf_ndcg: {
            for (const auto& [topic, scores] : inferred_metrics(run, qrels, config)) {
                out.emplace(topic, id == MetricId::inf_ap ? scores.inf_ap : scores.inf_ndcg);
            }
            break;
        }
        case MetricId::p_at_10:
        case MetricId::r_prec: {
            // judged relevance as ground truth; valid at any sampling rate
            for (const auto& [topic, tj] : qrels.topics) {
                require_judged(tj, topic);
                const uint32_t r = tj.judged_relevant_count();
                if (r == 0) {
                    continue;
                }
                const auto& entries = entries_for(run, topic);
                out.emplace(topic, id == MetricId::p_at_10
                                       ? precision_at(entries, tj, config.precision_cutoff)
                                       : r_precision(entries, tj, r));
            }
            break;
        }
    }
    return out;
}

double mean_score(const std::map<int, double>& per_topic) {
    if (per_topic.empty()) {
        throw EvalError("no topics qualify for the mean");
    }
    double sum = 0.0;
    for (const auto& [topic, score] : per_topic) {
        sum += score;
    }
    return sum / static_cast<double>(per_topic.size());
}

} // namespace clinsearch
