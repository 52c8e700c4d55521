#pragma once

#include "clinsearch/qrels.hpp"
#include "clinsearch/run_io.hpp"

#include <map>
#include <optional>
#include <string_view>

namespace clinsearch {

struct MetricConfig {
    int precision_cutoff = 10;  ///< the k of P@k
    double epsilon = 1e-5;      ///< smoothing for partially judged strata

    bool operator==(const MetricConfig&) const = default;
};

double gain(int grade);         ///< 2^grade - 1
double rank_discount(int rank); ///< log2(rank + 1)

struct ExactScores {
    double p_at_10 = 0.0;
    double r_prec = 0.0;
    double ap = 0.0;
    double ndcg = 0.0;
};

struct InferredScores {
    double inf_ap = 0.0;
    double inf_ndcg = 0.0;
};

/// Exact per-topic metrics; requires every stratum fully judged (throws
/// EvalError otherwise). Topics with no judged-relevant documents are
/// omitted; topics absent from the run score 0.
std::map<int, ExactScores> exact_metrics(const RankedRun& run, const SampledQrels& qrels,
                                         const MetricConfig& config = {});

/// Inferred AP and NDCG over stratified sampled judgments. Fully judged
/// strata use exact within-stratum precisions so that at sampling rate 1
/// the estimators equal the exact metrics; partially judged strata are
/// epsilon-smoothed. Throws EvalError on strata with no judged documents.
std::map<int, InferredScores> inferred_metrics(const RankedRun& run, const SampledQrels& qrels,
                                               const MetricConfig& config = {});

enum class MetricId { p_at_10, r_prec, ap, ndcg, inf_ap, inf_ndcg };

std::optional<MetricId> metric_from_string(std::string_view name);
std::string_view to_string(MetricId id);

/// Per-topic scores for one metric. AP and NDCG require full judgment;
/// P@10 and R-Prec treat judged relevance as ground truth at any rate.
std::map<int, double> metric_scores(const RankedRun& run, const SampledQrels& qrels, MetricId id,
                                    const MetricConfig& config = {});

/// Mean in ascending topic-id order (reproducible float summation); throws
/// EvalError when no topic qualifies.
double mean_score(const std::map<int, double>& per_topic);

} // namespace clinsearch
