#include <benchmark/benchmark.h>

#include <clinsearch/index.hpp>
#include <clinsearch/metrics.hpp>
#include <clinsearch/ranking.hpp>
#include <clinsearch/text.hpp>

#include "fixtures.hpp"

using namespace clinsearch;

static void BM_PorterStem(benchmark::State& state) {
    const std::vector<std::string> words = {"relational", "conditional", "caresses",
                                            "hopefulness", "sepsis",     "adjustment",
                                            "generalizations"};
    for (auto _ : state) {
        for (const auto& w : words) {
            benchmark::DoNotOptimize(porter_stem(w));
        }
    }
}
BENCHMARK(BM_PorterStem);

static void BM_Analyze(benchmark::State& state) {
    const AnalyzerConfig config;
    const auto docs = fixtures::make_corpus(8, 5);
    for (auto _ : state) {
        for (const auto& doc : docs) {
            benchmark::DoNotOptimize(analyze(doc.body, config));
        }
    }
}
BENCHMARK(BM_Analyze);

static void BM_IndexBuild(benchmark::State& state) {
    const auto docs = fixtures::make_corpus(static_cast<size_t>(state.range(0)), 11);
    for (auto _ : state) {
        benchmark::DoNotOptimize(InvertedIndex::build(docs, AnalyzerConfig{}));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_IndexBuild)->Range(64, 1024)->Complexity();

static void BM_Search(benchmark::State& state) {
    const auto docs = fixtures::make_corpus(static_cast<size_t>(state.range(0)), 13);
    const auto index = InvertedIndex::build(docs, AnalyzerConfig{});
    const QueryRep query = build_query("sepsis fever chronic pain outcome", index.analyzer());
    FacetWeights weights;
    weights.set(Facet::title, 1.5);
    weights.set(Facet::all, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(search(index, query, weights, RankingParams{}));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Search)->Range(64, 1024)->Complexity();

static void BM_InferredMetrics(benchmark::State& state) {
    const auto fixture = fixtures::make_random_eval(20, 200, 21);
    for (auto _ : state) {
        benchmark::DoNotOptimize(inferred_metrics(fixture.run, fixture.qrels));
    }
}
BENCHMARK(BM_InferredMetrics);

BENCHMARK_MAIN();
