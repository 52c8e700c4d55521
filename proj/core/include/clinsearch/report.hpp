#pragma once

#include "clinsearch/metrics.hpp"
#include "clinsearch/stats.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace clinsearch {

/// One run/metric cell of a comparison: the mean over topics plus paired
/// t-test significance marks against the baseline (dagger 95%, double
/// dagger 98%). Marks appear only when the test rejects.
struct ComparisonRow {
    std::string label; ///< run tag
    std::string field; ///< note/desc/sum when the tag carries it, else "-"
    MetricId metric = MetricId::inf_ndcg;
    double mean = 0.0;
    double t = 0.0;
    double p = 1.0;
    bool sig95 = false;
    bool sig98 = false;
};

struct ComparisonReport {
    std::string baseline_label;
    std::vector<ComparisonRow> rows; ///< baseline rows first, then input order
};

/// Compares each run against the baseline on infNDCG, infAP, R-Prec and
/// P@10. All runs must cover the same topic set (EvalError otherwise).
ComparisonReport compare_runs(const std::vector<RankedRun>& runs, const RankedRun& baseline,
                              const SampledQrels& qrels, const MetricConfig& config = {});

void write_report_text(const ComparisonReport& report, std::ostream& out);
void write_report_csv(const ComparisonReport& report, std::ostream& out);

struct DeltaRow {
    int topic_id = 0;
    double delta = 0.0;
};

/// Per-topic metric(a) - metric(b), ordered by topic id. Topics the metric
/// excludes (no judged-relevant documents) are omitted.
std::vector<DeltaRow> per_query_delta(const RankedRun& a, const RankedRun& b,
                                      const SampledQrels& qrels, MetricId metric,
                                      const MetricConfig& config = {});

void write_delta_csv(const std::vector<DeltaRow>& rows, std::ostream& out);

} // namespace clinsearch
