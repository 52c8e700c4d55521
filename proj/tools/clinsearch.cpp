// clinsearch: benchmarking CLI for clinical-literature search experiments.
//
// Subcommands: index, run, evaluate, compare, optimize, train-ltr, delta.
// Exit codes: 0 success, 1 validation/format error, 2 evaluation error.

#include <CLI11.hpp>

#include <clinsearch/error.hpp>
#include <clinsearch/index.hpp>
#include <clinsearch/ltr.hpp>
#include <clinsearch/metrics.hpp>
#include <clinsearch/optimizer.hpp>
#include <clinsearch/pipeline.hpp>
#include <clinsearch/report.hpp>
#include <clinsearch/run_io.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace clinsearch;

void write_text_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) {
            throw ConfigError("cannot write file '" + path + "'");
        }
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

FacetWeights load_weights_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open weights file '" + path + "'");
    }
    FacetWeights weights;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::istringstream ls(line);
        std::string facet_s;
        double value = 0;
        std::string extra;
        if (!(ls >> facet_s >> value) || (ls >> extra)) {
            throw ConfigError("weights file line " + std::to_string(line_no) +
                              ": expected '<facet> <weight>'");
        }
        const auto facet = facet_from_string(facet_s);
        if (!facet) {
            throw ConfigError("weights file line " + std::to_string(line_no) +
                              ": unknown facet '" + facet_s + "'");
        }
        weights.set(*facet, value);
    }
    return weights;
}

std::string format_weights_file(const FacetWeights& weights, double best_score) {
    std::ostringstream out;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "# best objective (mean infNDCG): %.6f\n", best_score);
    out << buf;
    for (Facet f : kFacets) {
        std::snprintf(buf, sizeof(buf), "%s %.4f\n", std::string(to_string(f)).c_str(),
                      weights.get(f));
        out << buf;
    }
    return out.str();
}

int cmd_index(const std::string& config_path, const std::string& out_path) {
    const PipelineConfig config = parse_config_file(config_path);
    const Resources res = load_resources(config, /*need_corpus=*/true, /*need_topics=*/false);
    const InvertedIndex index = InvertedIndex::build(res.corpus.docs, res.analyzer);
    index.save_file(out_path);
    std::cout << "indexed " << index.doc_count() << " documents -> " << out_path << "\n";
    return 0;
}

int cmd_run(const std::string& config_path, const std::string& index_path,
            const std::string& out_path, const std::string& weights_file) {
    PipelineConfig config = parse_config_file(config_path);
    if (!weights_file.empty()) {
        config.weights = load_weights_file(weights_file);
    }
    const Resources res = load_resources(config);
    const InvertedIndex index = InvertedIndex::load_file(index_path);
    const RankedRun run = run_pipeline(config, index, res);
    write_run_file(run, out_path);
    size_t rows = 0;
    for (const auto& [topic, entries] : run.by_topic) {
        rows += entries.size();
    }
    std::cout << "run '" << run.run_tag << "': " << run.by_topic.size() << " topics, " << rows
              << " rows -> " << out_path << "\n";
    return 0;
}

int cmd_evaluate(const std::string& run_path, const std::string& qrels_path,
                 const std::string& strata_path, bool per_topic, const std::string& csv_path) {
    const RankedRun run = read_run_file(run_path);
    const SampledQrels qrels = read_qrels_files(qrels_path, strata_path);

    bool fully_judged = true;
    for (const auto& [topic, tj] : qrels.topics) {
        for (const auto& s : tj.strata) {
            if (!s.fully_judged()) {
                fully_judged = false;
            }
        }
    }
    std::vector<MetricId> metrics = {MetricId::inf_ndcg, MetricId::inf_ap, MetricId::r_prec,
                                     MetricId::p_at_10};
    if (fully_judged) {
        metrics.push_back(MetricId::ndcg);
        metrics.push_back(MetricId::ap);
    }

    std::ostringstream csv;
    csv << "topic,metric,value\n";
    std::cout << "run: " << run.run_tag << "\n";
    for (MetricId metric : metrics) {
        const auto scores = metric_scores(run, qrels, metric);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%-8s mean %.4f over %zu topics",
                      std::string(to_string(metric)).c_str(), mean_score(scores), scores.size());
        std::cout << buf << "\n";
        for (const auto& [topic, value] : scores) {
            if (per_topic) {
                std::snprintf(buf, sizeof(buf), "  topic %-4d %.4f", topic, value);
                std::cout << buf << "\n";
            }
            std::snprintf(buf, sizeof(buf), "%d,%s,%.6f", topic,
                          std::string(to_string(metric)).c_str(), value);
            csv << buf << "\n";
        }
    }
    if (!csv_path.empty()) {
        write_text_file(csv_path, csv.str());
    }
    return 0;
}

int cmd_compare(const std::string& baseline_path, const std::vector<std::string>& run_paths,
                const std::string& qrels_path, const std::string& strata_path,
                const std::string& out_path, const std::string& csv_path) {
    const RankedRun baseline = read_run_file(baseline_path);
    std::vector<RankedRun> runs;
    runs.reserve(run_paths.size());
    for (const auto& path : run_paths) {
        runs.push_back(read_run_file(path));
    }
    const SampledQrels qrels = read_qrels_files(qrels_path, strata_path);
    const ComparisonReport report = compare_runs(runs, baseline, qrels);

    std::ostringstream text;
    write_report_text(report, text);
    if (out_path.empty()) {
        std::cout << text.str();
    } else {
        write_text_file(out_path, text.str());
    }
    if (!csv_path.empty()) {
        std::ostringstream csv;
        write_report_csv(report, csv);
        write_text_file(csv_path, csv.str());
    }
    return 0;
}

int cmd_optimize(const std::string& config_path, const std::string& index_path,
                 const std::string& out_path, const std::string& trace_path, int epochs,
                 double step, uint64_t seed, bool seed_given) {
    const PipelineConfig config = parse_config_file(config_path);
    if (config.qrels_path.empty()) {
        throw ConfigError("optimize needs a qrels path in the config");
    }
    const Resources res = load_resources(config);
    const InvertedIndex index = InvertedIndex::load_file(index_path);

    WeightGrid grid;
    grid.step = step;
    const Objective objective = [&](const FacetWeights& w) {
        return evaluate_weights(w, config, index, res);
    };
    const OptimizerRun result =
        hill_climb(objective, grid, seed_given ? seed : config.seed, epochs);

    write_text_file(out_path, format_weights_file(result.best_weights, result.best_score));
    if (!trace_path.empty()) {
        std::ostringstream trace;
        write_trace_csv(result, grid, trace);
        write_text_file(trace_path, trace.str());
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "best mean infNDCG %.6f with weights %s", result.best_score,
                  result.best_weights.format().c_str());
    std::cout << buf << "\n";
    return 0;
}

int cmd_train_ltr(const std::string& config_path, const std::string& index_path,
                  const std::string& out_path, double learning_rate, int epochs, uint64_t seed,
                  bool seed_given) {
    PipelineConfig config = parse_config_file(config_path);
    if (config.qrels_path.empty()) {
        throw ConfigError("train-ltr needs a qrels path in the config");
    }
    const Resources res = load_resources(config);
    const InvertedIndex index = InvertedIndex::load_file(index_path);

    // baseline and PRF runs of the configured pipeline feed the features
    PipelineConfig base_config = config;
    base_config.stages.clear();
    for (Stage stage : config.stages) {
        if (stage == Stage::demographics || stage == Stage::negation) {
            base_config.stages.push_back(stage);
        }
    }
    const RankedRun baseline = run_pipeline(base_config, index, res);
    PipelineConfig prf_config = base_config;
    prf_config.stages.push_back(Stage::prf);
    prf_config.prf_params = config.prf_params;
    const RankedRun prf = run_pipeline(prf_config, index, res);

    const EmbeddingTable* table = res.has_embeddings ? &res.embeddings : nullptr;
    const auto pairs = build_training_set(res.topics, config.field, res.qrels, baseline, prf,
                                          res.corpus, table, config.ltr_params.depth, 1000,
                                          seed_given ? seed : config.seed);
    const LinearRankModel model =
        train_ranker(pairs, learning_rate, epochs, seed_given ? seed : config.seed);
    model.save_file(out_path);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "trained on %zu pairs, pair accuracy %.4f -> %s",
                  pairs.size(), model.pair_accuracy, out_path.c_str());
    std::cout << buf << "\n";
    return 0;
}

int cmd_delta(const std::string& run_a_path, const std::string& run_b_path,
              const std::string& qrels_path, const std::string& strata_path,
              const std::string& metric_name, const std::string& out_path) {
    const auto metric = metric_from_string(metric_name);
    if (!metric) {
        throw ConfigError("unknown metric '" + metric_name +
                          "' (use P@10, R-Prec, AP, NDCG, infAP or infNDCG)");
    }
    const RankedRun a = read_run_file(run_a_path);
    const RankedRun b = read_run_file(run_b_path);
    const SampledQrels qrels = read_qrels_files(qrels_path, strata_path);
    const auto rows = per_query_delta(a, b, qrels, *metric);
    std::ostringstream csv;
    write_delta_csv(rows, csv);
    write_text_file(out_path, csv.str());
    std::cout << rows.size() << " per-topic deltas -> " << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"benchmarking platform for clinical-literature search"};
    app.require_subcommand(1);

    std::string config_path, index_path, out_path, weights_file;
    std::string run_path, qrels_path, strata_path, csv_path;
    std::string baseline_path, run_a, run_b;
    std::vector<std::string> run_paths;
    std::string metric_name = "infNDCG";
    std::string trace_path;
    bool per_topic = false;
    int epochs = 30;
    double step = 0.1;
    double learning_rate = 0.01;
    int train_epochs = 50;
    uint64_t seed = 0;

    auto* index_cmd = app.add_subcommand("index", "build and persist an inverted index");
    index_cmd->add_option("--config", config_path, "pipeline config file")->required();
    index_cmd->add_option("--out", out_path, "output index file")->required();

    auto* run_cmd = app.add_subcommand("run", "execute a pipeline config into a run file");
    run_cmd->add_option("--config", config_path)->required();
    run_cmd->add_option("--index", index_path)->required();
    run_cmd->add_option("--out", out_path)->required();
    run_cmd->add_option("--weights-file", weights_file, "facet weights from `optimize`");

    auto* eval_cmd = app.add_subcommand("evaluate", "score a run against qrels");
    eval_cmd->add_option("--run", run_path)->required();
    eval_cmd->add_option("--qrels", qrels_path)->required();
    eval_cmd->add_option("--strata", strata_path, "strata sidecar (pool sizes)");
    eval_cmd->add_flag("--per-topic", per_topic, "print per-topic scores");
    eval_cmd->add_option("--csv", csv_path, "write per-topic scores as CSV");

    auto* compare_cmd = app.add_subcommand("compare", "significance-marked comparison report");
    compare_cmd->add_option("--baseline", baseline_path)->required();
    compare_cmd->add_option("--run", run_paths, "run file (repeatable)")->required();
    compare_cmd->add_option("--qrels", qrels_path)->required();
    compare_cmd->add_option("--strata", strata_path);
    compare_cmd->add_option("--out", out_path, "write the text report here instead of stdout");
    compare_cmd->add_option("--csv", csv_path);

    auto* optimize_cmd = app.add_subcommand("optimize", "hill-climb facet weights");
    optimize_cmd->add_option("--config", config_path)->required();
    optimize_cmd->add_option("--index", index_path)->required();
    optimize_cmd->add_option("--out", out_path, "output weights file")->required();
    optimize_cmd->add_option("--trace", trace_path, "trace CSV");
    optimize_cmd->add_option("--epochs", epochs);
    optimize_cmd->add_option("--step", step);
    auto* opt_seed = optimize_cmd->add_option("--seed", seed, "override the config seed");

    auto* train_cmd = app.add_subcommand("train-ltr", "train the pairwise linear re-ranker");
    train_cmd->add_option("--config", config_path)->required();
    train_cmd->add_option("--index", index_path)->required();
    train_cmd->add_option("--out", out_path, "output model file")->required();
    train_cmd->add_option("--lr", learning_rate);
    train_cmd->add_option("--epochs", train_epochs);
    auto* train_seed = train_cmd->add_option("--seed", seed, "override the config seed");

    auto* delta_cmd = app.add_subcommand("delta", "per-topic metric deltas between two runs");
    delta_cmd->add_option("--run-a", run_a)->required();
    delta_cmd->add_option("--run-b", run_b)->required();
    delta_cmd->add_option("--qrels", qrels_path)->required();
    delta_cmd->add_option("--strata", strata_path);
    delta_cmd->add_option("--metric", metric_name, "P@10, R-Prec, AP, NDCG, infAP or infNDCG");
    delta_cmd->add_option("--out", out_path, "output CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (index_cmd->parsed()) {
            return cmd_index(config_path, out_path);
        }
        if (run_cmd->parsed()) {
            return cmd_run(config_path, index_path, out_path, weights_file);
        }
        if (eval_cmd->parsed()) {
            return cmd_evaluate(run_path, qrels_path, strata_path, per_topic, csv_path);
        }
        if (compare_cmd->parsed()) {
            return cmd_compare(baseline_path, run_paths, qrels_path, strata_path, out_path,
                               csv_path);
        }
        if (optimize_cmd->parsed()) {
            return cmd_optimize(config_path, index_path, out_path, trace_path, epochs, step, seed,
                                opt_seed->count() > 0);
        }
        if (train_cmd->parsed()) {
            return cmd_train_ltr(config_path, index_path, out_path, learning_rate, train_epochs,
                                 seed, train_seed->count() > 0);
        }
        if (delta_cmd->parsed()) {
            return cmd_delta(run_a, run_b, qrels_path, strata_path, metric_name, out_path);
        }
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const EvalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
