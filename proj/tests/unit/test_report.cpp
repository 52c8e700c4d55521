#include <doctest.h>

#include <clinsearch/error.hpp>
#include <clinsearch/report.hpp>

#include "fixtures.hpp"

#include <sstream>

using namespace clinsearch;

namespace {

// 10 topics, each with 6 relevant docs R1..R6 and pool filler N1..N6
SampledQrels report_qrels() {
    SampledQrels qrels;
    for (int t = 1; t <= 10; ++t) {
        Stratum stratum;
        stratum.stratum_id = 1;
        for (int i = 1; i <= 6; ++i) {
            stratum.judged.emplace("R" + std::to_string(i), 1);
            stratum.judged.emplace("N" + std::to_string(i), 0);
        }
        for (const auto& [doc, grade] : stratum.judged) {
            stratum.pool_members.insert(doc);
        }
        stratum.pool_size = static_cast<uint32_t>(stratum.judged.size());
        TopicJudgments tj;
        tj.strata.push_back(std::move(stratum));
        qrels.topics.emplace(t, std::move(tj));
    }
    return qrels;
}

RankedRun uniform_run(const std::string& tag, const std::vector<std::string>& order) {
    RankedRun run;
    run.run_tag = tag;
    for (int t = 1; t <= 10; ++t) {
        double score = 10.0;
        for (const auto& doc : order) {
            run.by_topic[t].push_back({doc, score});
            score -= 1.0;
        }
    }
    return run;
}

} // namespace

TEST_CASE("the baseline compared to itself carries no marks") {
    const auto qrels = report_qrels();
    const auto base = uniform_run("base-sum", {"R1", "N1", "R2", "N2", "R3", "N3", "R4", "N4"});
    const auto report = compare_runs({base}, base, qrels);
    REQUIRE(report.rows.size() == 8); // baseline + one run, 4 metrics each
    for (const auto& row : report.rows) {
        CHECK(!row.sig95);
        CHECK(!row.sig98);
        CHECK(row.field == "sum");
    }
}

TEST_CASE("a uniformly better run earns the 98% mark") {
    const auto qrels = report_qrels();
    const auto base = uniform_run(
        "base", {"N1", "N2", "N3", "N4", "N5", "N6", "R1", "R2", "R3", "R4", "R5", "R6"});
    const auto good = uniform_run(
        "good", {"R1", "R2", "R3", "R4", "R5", "R6", "N1", "N2", "N3", "N4", "N5", "N6"});
    const auto report = compare_runs({good}, base, qrels);
    for (const auto& row : report.rows) {
        if (row.label == "good") {
            CAPTURE(to_string(row.metric));
            CHECK(row.sig98);
            CHECK(row.t > 0.0);
        }
    }
}

TEST_CASE("report rows follow the input run order") {
    const auto qrels = report_qrels();
    const auto base = uniform_run("base", {"R1", "N1", "R2", "N2"});
    const auto a = uniform_run("run-a", {"R1", "R2", "N1", "N2"});
    const auto b = uniform_run("run-b", {"N1", "R1", "N2", "R2"});
    const auto report = compare_runs({a, b}, base, qrels);
    std::vector<std::string> order;
    for (const auto& row : report.rows) {
        if (order.empty() || order.back() != row.label) {
            order.push_back(row.label);
        }
    }
    CHECK(order == std::vector<std::string>{"base", "run-a", "run-b"});
    CHECK(report.baseline_label == "base");
}

TEST_CASE("topic-set mismatch is an error") {
    const auto qrels = report_qrels();
    const auto base = uniform_run("base", {"R1", "N1"});
    auto other = uniform_run("other", {"R1", "N1"});
    other.by_topic.erase(10);
    CHECK_THROWS_AS(compare_runs({other}, base, qrels), EvalError);
    CHECK_THROWS_AS(per_query_delta(other, base, qrels, MetricId::inf_ndcg), EvalError);
}

TEST_CASE("report text and CSV formats") {
    const auto qrels = report_qrels();
    const auto base = uniform_run("base", {"N1", "N2", "N3", "N4", "R1", "R2", "R3", "R4"});
    const auto good = uniform_run("good-sum", {"R1", "R2", "R3", "R4", "N1", "N2", "N3", "N4"});
    const auto report = compare_runs({good}, base, qrels);

    std::ostringstream text;
    write_report_text(report, text);
    CHECK(text.str().find("baseline: base") != std::string::npos);
    CHECK(text.str().find("good-sum") != std::string::npos);
    CHECK(text.str().find("‡") != std::string::npos); // double dagger somewhere

    std::ostringstream csv;
    write_report_csv(report, csv);
    CHECK(csv.str().rfind("run,field,metric,mean,t,p,sig95,sig98,mark\n", 0) == 0);
    CHECK(csv.str().find("good-sum,sum,infNDCG") != std::string::npos);
}

TEST_CASE("per-query deltas") {
    const auto qrels = report_qrels();
    const auto base = uniform_run("base", {"N1", "R1", "R2", "N2"});
    const auto better = uniform_run("better", {"R1", "R2", "N1", "N2"});

    // a run against itself: all zeros
    for (const auto& row : per_query_delta(base, base, qrels, MetricId::inf_ndcg)) {
        CHECK(row.delta == 0.0);
    }

    // antisymmetry and agreement with independent per-topic metric calls
    const auto ab = per_query_delta(better, base, qrels, MetricId::ap);
    const auto ba = per_query_delta(base, better, qrels, MetricId::ap);
    REQUIRE(ab.size() == 10);
    const auto scores_a = metric_scores(better, qrels, MetricId::ap);
    const auto scores_b = metric_scores(base, qrels, MetricId::ap);
    for (size_t i = 0; i < ab.size(); ++i) {
        CHECK(ab[i].topic_id == ba[i].topic_id);
        CHECK(ab[i].delta == doctest::Approx(-ba[i].delta).epsilon(1e-12));
        CHECK(ab[i].delta == doctest::Approx(scores_a.at(ab[i].topic_id) -
                                             scores_b.at(ab[i].topic_id))
                                 .epsilon(1e-12));
        if (i > 0) {
            CHECK(ab[i - 1].topic_id < ab[i].topic_id);
        }
    }

    std::ostringstream csv;
    write_delta_csv(ab, csv);
    CHECK(csv.str().rfind("topic_id,delta\n", 0) == 0);
}
