#include "clinsearch/report.hpp"

#include "clinsearch/error.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace clinsearch {

namespace {

const std::array<MetricId, 4> kReportMetrics = {MetricId::inf_ndcg, MetricId::inf_ap,
                                                MetricId::r_prec, MetricId::p_at_10};

std::string field_from_tag(const std::string& tag) {
    const size_t sep = tag.find_last_of("-_");
    const std::string suffix = sep == std::string::npos ? std::string() : tag.substr(sep + 1);
    if (suffix == "note" || suffix == "desc" || suffix == "sum") {
        return suffix;
    }
    return "-";
}

std::string mark_of(const ComparisonRow& row) {
    if (row.sig98) return "‡"; // double dagger
    if (row.sig95) return "†"; // dagger
    return "";
}

size_t display_width(const std::string& s) {
    size_t w = 0;
    for (char c : s) {
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
            ++w;
        }
    }
    return w;
}

std::string fmt4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

void check_same_topics(const RankedRun& run, const RankedRun& baseline) {
    if (run.topic_ids() != baseline.topic_ids()) {
        throw EvalError("runs cover different topic sets ('" + run.run_tag + "' vs '" +
                        baseline.run_tag + "')");
    }
}

std::vector<ComparisonRow> rows_for(const RankedRun& run, const std::string& label,
                                    const std::map<MetricId, std::map<int, double>>& base_scores,
                                    const SampledQrels& qrels, const MetricConfig& config) {
    std::vector<ComparisonRow> rows;
    for (MetricId metric : kReportMetrics) {
        const auto scores = metric_scores(run, qrels, metric, config);
        const auto& base = base_scores.at(metric);
        std::vector<double> a, b;
        a.reserve(base.size());
        b.reserve(base.size());
        for (const auto& [topic, base_value] : base) {
            const auto it = scores.find(topic);
            a.push_back(it == scores.end() ? 0.0 : it->second);
            b.push_back(base_value);
        }
        ComparisonRow row;
        row.label = label;
        row.field = field_from_tag(label);
        row.metric = metric;
        row.mean = mean_score(scores);
        if (a.size() >= 2) {
            const TTestResult t = paired_t_test(a, b);
            row.t = t.t;
            row.p = t.p_two_tailed;
            row.sig95 = t.sig95;
            row.sig98 = t.sig98;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

ComparisonReport compare_runs(const std::vector<RankedRun>& runs, const RankedRun& baseline,
                              const SampledQrels& qrels, const MetricConfig& config) {
    for (const auto& run : runs) {
        check_same_topics(run, baseline);
    }
    std::map<MetricId, std::map<int, double>> base_scores;
    for (MetricId metric : kReportMetrics) {
        base_scores.emplace(metric, metric_scores(baseline, qrels, metric, config));
    }
    ComparisonReport report;
    report.baseline_label = baseline.run_tag;
    for (auto& row : rows_for(baseline, baseline.run_tag, base_scores, qrels, config)) {
        row.sig95 = false; // the baseline is never marked against itself
        row.sig98 = false;
        report.rows.push_back(std::move(row));
    }
    for (const auto& run : runs) {
        for (auto& row : rows_for(run, run.run_tag, base_scores, qrels, config)) {
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

void write_report_text(const ComparisonReport& report, std::ostream& out) {
    // pivot: one line per run, one column per metric
    std::vector<std::string> labels;
    for (const auto& row : report.rows) {
        if (labels.empty() || labels.back() != row.label) {
            labels.push_back(row.label);
        }
    }
    size_t label_width = 4;
    for (const auto& label : labels) {
        label_width = std::max(label_width, display_width(label));
    }
    out << "baseline: " << report.baseline_label << "\n";
    std::ostringstream header;
    header << "run";
    header << std::string(label_width - 3 + 2, ' ');
    header << "field  ";
    for (MetricId metric : kReportMetrics) {
        std::string name(to_string(metric));
        header << name << std::string(12 - name.size(), ' ');
    }
    out << header.str() << "\n";
    for (const auto& label : labels) {
        std::string line = label + std::string(label_width - display_width(label) + 2, ' ');
        std::string field = "-";
        std::string cells;
        for (const auto& row : report.rows) {
            if (row.label != label) {
                continue;
            }
            field = row.field;
            std::string cell = fmt4(row.mean);
            const std::string mark = mark_of(row);
            if (!mark.empty()) {
                cell += " " + mark;
            }
            cell += std::string(12 - std::min<size_t>(11, display_width(cell)), ' ');
            cells += cell;
        }
        line += field + std::string(7 - std::min<size_t>(6, field.size()), ' ');
        line += cells;
        while (!line.empty() && line.back() == ' ') {
            line.pop_back();
        }
        out << line << "\n";
    }
}

void write_report_csv(const ComparisonReport& report, std::ostream& out) {
    out << "run,field,metric,mean,t,p,sig95,sig98,mark\n";
    for (const auto& row : report.rows) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s,%s,%s,%.4f,%.4f,%.6f,%d,%d,%s", row.label.c_str(),
                      row.field.c_str(), std::string(to_string(row.metric)).c_str(), row.mean,
                      row.t, row.p, row.sig95 ? 1 : 0, row.sig98 ? 1 : 0, mark_of(row).c_str());
        out << buf << "\n";
    }
}

std::vector<DeltaRow> per_query_delta(const RankedRun& a, const RankedRun& b,
                                      const SampledQrels& qrels, MetricId metric,
                                      const MetricConfig& config) {
    check_same_topics(a, b);
    const auto scores_a = metric_scores(a, qrels, metric, config);
    const auto scores_b = metric_scores(b, qrels, metric, config);
    std::vector<DeltaRow> out;
    for (const auto& [topic, score_a] : scores_a) {
        const auto it = scores_b.find(topic);
        if (it != scores_b.end()) {
            out.push_back({topic, score_a - it->second});
        }
    }
    return out;
}

void write_delta_csv(const std::vector<DeltaRow>& rows, std::ostream& out) {
    out << "topic_id,delta\n";
    for (const auto& row : rows) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%d,%.6f", row.topic_id, row.delta);
        out << buf << "\n";
    }
}

} // namespace clinsearch
