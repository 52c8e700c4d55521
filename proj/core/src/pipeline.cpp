#include "clinsearch/pipeline.hpp"

#include "clinsearch/error.hpp"
#include "clinsearch/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>

namespace clinsearch {

namespace {

std::string trim(std::string_view s) {
    size_t begin = 0;
    size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return std::string(s.substr(begin, end - begin));
}

std::string format_double(double v) {
    char buf[40];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

double parse_double(const std::string& value, const std::string& key, int line_no) {
    double out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError("config line " + std::to_string(line_no) + ": bad number for '" + key +
                          "'");
    }
    return out;
}

long parse_int(const std::string& value, const std::string& key, int line_no) {
    long out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError("config line " + std::to_string(line_no) + ": bad integer for '" + key +
                          "'");
    }
    return out;
}

bool parse_bool(const std::string& value, const std::string& key, int line_no) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("config line " + std::to_string(line_no) + ": bad boolean for '" + key +
                      "'");
}

std::string resolve_path(const std::string& value, const std::string& base_dir) {
    namespace fs = std::filesystem;
    fs::path p(value);
    if (p.is_absolute()) {
        return p.lexically_normal().generic_string();
    }
    const fs::path base = base_dir.empty() ? fs::current_path() : fs::path(base_dir);
    return (base / p).lexically_normal().generic_string();
}

struct LambdaDefaults {
    bool prf_set = false;
    bool rf_set = false;
    bool embeddings_set = false;
    bool concepts_set = false;
};

} // namespace

std::string_view to_string(Stage s) {
    switch (s) {
        case Stage::demographics: return "demographics";
        case Stage::negation: return "negation";
        case Stage::concepts: return "concepts";
        case Stage::prf: return "prf";
        case Stage::rf: return "rf";
        case Stage::embeddings: return "embeddings";
        case Stage::ltr: return "ltr";
    }
    return "prf";
}

std::optional<Stage> stage_from_string(std::string_view s) {
    for (Stage stage : {Stage::demographics, Stage::negation, Stage::concepts, Stage::prf,
                        Stage::rf, Stage::embeddings, Stage::ltr}) {
        if (to_string(stage) == s) {
            return stage;
        }
    }
    return std::nullopt;
}

PipelineConfig parse_config(std::istream& in, const std::string& base_dir) {
    PipelineConfig config;
    LambdaDefaults lambda_set;
    std::string section; // empty = global
    std::string line;
    int line_no = 0;

    auto path_value = [&](const std::string& value) { return resolve_path(value, base_dir); };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') {
            continue;
        }
        if (stripped.front() == '[') {
            if (stripped.back() != ']' || stripped.rfind("[stage:", 0) != 0) {
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": expected [stage:<name>]");
            }
            const std::string name = stripped.substr(7, stripped.size() - 8);
            if (!stage_from_string(name)) {
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": unknown stage '" + name + "'");
            }
            section = name;
            continue;
        }
        const size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        }

        if (section.empty()) {
            if (key == "corpus") {
                config.corpus_paths.push_back(path_value(value));
            } else if (key == "topics") {
                config.topics_path = path_value(value);
            } else if (key == "field") {
                const auto f = topic_field_from_string(value);
                if (!f) {
                    throw ConfigError("config line " + std::to_string(line_no) +
                                      ": field must be note, desc or sum");
                }
                config.field = *f;
            } else if (key == "stopwords") {
                config.stopwords_path = path_value(value);
            } else if (key == "lexicon") {
                config.lexicon_path = path_value(value);
            } else if (key == "embeddings") {
                config.embeddings_path = path_value(value);
            } else if (key == "qrels") {
                config.qrels_path = path_value(value);
            } else if (key == "strata") {
                config.strata_path = path_value(value);
            } else if (key == "mesh_map") {
                config.mesh_map_path = path_value(value);
            } else if (key == "negation_rules") {
                config.negation_rules_path = path_value(value);
            } else if (key == "demographic_rules") {
                config.demographic_rules_path = path_value(value);
            } else if (key == "stem") {
                config.stem = parse_bool(value, key, line_no);
            } else if (key == "seed") {
                config.seed = static_cast<uint64_t>(parse_int(value, key, line_no));
            } else if (key == "run_tag") {
                config.run_tag = value;
            } else if (key == "k1") {
                config.ranking.k1 = parse_double(value, key, line_no);
            } else if (key == "b") {
                config.ranking.b = parse_double(value, key, line_no);
            } else if (key == "top_k") {
                config.ranking.top_k = static_cast<int>(parse_int(value, key, line_no));
            } else if (key == "weights") {
                config.weights = FacetWeights::parse(value);
            } else if (key == "stages") {
                config.stages.clear();
                std::string item;
                std::istringstream ss(value);
                while (std::getline(ss, item, ',')) {
                    const std::string name = trim(item);
                    if (name.empty()) {
                        continue;
                    }
                    const auto stage = stage_from_string(name);
                    if (!stage) {
                        throw ConfigError("config line " + std::to_string(line_no) +
                                          ": unknown stage '" + name + "'");
                    }
                    config.stages.push_back(*stage);
                }
            } else {
                throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" +
                                  key + "'");
            }
            continue;
        }

        auto expansion_key = [&](ExpansionParams& params, bool& lambda_flag) {
            if (key == "feedback_docs") {
                params.feedback_docs = static_cast<int>(parse_int(value, key, line_no));
            } else if (key == "terms") {
                params.expansion_terms = static_cast<int>(parse_int(value, key, line_no));
            } else if (key == "lambda") {
                params.lambda = parse_double(value, key, line_no);
                lambda_flag = true;
            } else if (key == "max_neighbors") {
                params.max_neighbors_per_word = static_cast<int>(parse_int(value, key, line_no));
            } else if (key == "cap") {
                params.query_word_cap = static_cast<int>(parse_int(value, key, line_no));
            } else if (key == "threshold") {
                params.similarity_threshold = parse_double(value, key, line_no);
            } else {
                throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" +
                                  key + "' in [stage:" + section + "]");
            }
        };

        if (section == "prf") {
            expansion_key(config.prf_params, lambda_set.prf_set);
        } else if (section == "rf") {
            expansion_key(config.rf_params, lambda_set.rf_set);
        } else if (section == "embeddings") {
            expansion_key(config.embedding_params, lambda_set.embeddings_set);
        } else if (section == "concepts") {
            if (key == "lambda") {
                config.concepts_lambda = parse_double(value, key, line_no);
                lambda_set.concepts_set = true;
            } else {
                throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" +
                                  key + "' in [stage:concepts]");
            }
        } else if (section == "ltr") {
            if (key == "model") {
                config.ltr_params.model_path = path_value(value);
            } else if (key == "depth") {
                config.ltr_params.depth = static_cast<int>(parse_int(value, key, line_no));
            } else {
                throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" +
                                  key + "' in [stage:ltr]");
            }
        } else {
            throw ConfigError("config line " + std::to_string(line_no) + ": [stage:" + section +
                              "] takes no parameters");
        }
    }

    // field-specific expansion weight defaults unless the stage pinned one
    const double field_lambda = default_expansion_lambda(config.field);
    if (!lambda_set.prf_set) config.prf_params.lambda = field_lambda;
    if (!lambda_set.rf_set) config.rf_params.lambda = field_lambda;
    if (!lambda_set.embeddings_set) config.embedding_params.lambda = field_lambda;
    if (!lambda_set.concepts_set) config.concepts_lambda = field_lambda;

    config.ranking.validate();
    config.prf_params.validate();
    config.rf_params.validate();
    config.embedding_params.validate();
    if (config.ltr_params.depth < 1) {
        throw ConfigError("config: ltr depth must be >= 1");
    }
    if (config.run_tag.empty()) {
        throw ConfigError("config: run_tag must be nonempty");
    }
    return config;
}

PipelineConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    const std::string base = std::filesystem::path(path).parent_path().generic_string();
    return parse_config(in, base);
}

std::string serialize_config(const PipelineConfig& config) {
    std::ostringstream out;
    for (const auto& path : config.corpus_paths) {
        out << "corpus = " << path << "\n";
    }
    if (!config.topics_path.empty()) out << "topics = " << config.topics_path << "\n";
    out << "field = " << to_string(config.field) << "\n";
    out << "stem = " << (config.stem ? "true" : "false") << "\n";
    if (!config.stopwords_path.empty()) out << "stopwords = " << config.stopwords_path << "\n";
    if (!config.lexicon_path.empty()) out << "lexicon = " << config.lexicon_path << "\n";
    if (!config.embeddings_path.empty()) out << "embeddings = " << config.embeddings_path << "\n";
    if (!config.qrels_path.empty()) out << "qrels = " << config.qrels_path << "\n";
    if (!config.strata_path.empty()) out << "strata = " << config.strata_path << "\n";
    if (!config.mesh_map_path.empty()) out << "mesh_map = " << config.mesh_map_path << "\n";
    if (!config.negation_rules_path.empty())
        out << "negation_rules = " << config.negation_rules_path << "\n";
    if (!config.demographic_rules_path.empty())
        out << "demographic_rules = " << config.demographic_rules_path << "\n";
    out << "seed = " << config.seed << "\n";
    out << "run_tag = " << config.run_tag << "\n";
    out << "k1 = " << format_double(config.ranking.k1) << "\n";
    out << "b = " << format_double(config.ranking.b) << "\n";
    out << "top_k = " << config.ranking.top_k << "\n";
    out << "weights = " << config.weights.format() << "\n";
    if (!config.stages.empty()) {
        out << "stages = ";
        for (size_t i = 0; i < config.stages.size(); ++i) {
            if (i > 0) out << ", ";
            out << to_string(config.stages[i]);
        }
        out << "\n";
    }
    auto expansion_section = [&](const char* name, const ExpansionParams& p) {
        out << "[stage:" << name << "]\n";
        out << "feedback_docs = " << p.feedback_docs << "\n";
        out << "terms = " << p.expansion_terms << "\n";
        out << "lambda = " << format_double(p.lambda) << "\n";
        out << "max_neighbors = " << p.max_neighbors_per_word << "\n";
        out << "cap = " << p.query_word_cap << "\n";
        out << "threshold = " << format_double(p.similarity_threshold) << "\n";
    };
    std::vector<Stage> emitted;
    for (Stage stage : config.stages) {
        if (std::find(emitted.begin(), emitted.end(), stage) != emitted.end()) {
            continue;
        }
        emitted.push_back(stage);
        switch (stage) {
            case Stage::prf: expansion_section("prf", config.prf_params); break;
            case Stage::rf: expansion_section("rf", config.rf_params); break;
            case Stage::embeddings: expansion_section("embeddings", config.embedding_params); break;
            case Stage::concepts:
                out << "[stage:concepts]\n";
                out << "lambda = " << format_double(config.concepts_lambda) << "\n";
                break;
            case Stage::ltr:
                out << "[stage:ltr]\n";
                if (!config.ltr_params.model_path.empty()) {
                    out << "model = " << config.ltr_params.model_path << "\n";
                }
                out << "depth = " << config.ltr_params.depth << "\n";
                break;
            case Stage::demographics:
            case Stage::negation:
                break;
        }
    }
    return out.str();
}

void validate_stage_resources(const PipelineConfig& config) {
    for (Stage stage : config.stages) {
        switch (stage) {
            case Stage::concepts:
                if (config.lexicon_path.empty()) {
                    throw ConfigError("stage 'concepts' needs a lexicon path");
                }
                break;
            case Stage::rf:
                if (config.qrels_path.empty()) {
                    throw ConfigError("stage 'rf' needs a qrels path");
                }
                break;
            case Stage::embeddings:
                if (config.embeddings_path.empty()) {
                    throw ConfigError("stage 'embeddings' needs an embeddings path");
                }
                break;
            case Stage::ltr:
                if (config.ltr_params.model_path.empty()) {
                    throw ConfigError("stage 'ltr' needs a model path");
                }
                break;
            case Stage::demographics:
            case Stage::negation:
            case Stage::prf:
                break;
        }
    }
}

Resources load_resources(const PipelineConfig& config, bool need_corpus, bool need_topics) {
    validate_stage_resources(config);
    Resources res;

    res.analyzer.stem = config.stem;
    if (!config.stopwords_path.empty()) {
        std::ifstream in(config.stopwords_path);
        if (!in) {
            throw ConfigError("cannot open stopword file '" + config.stopwords_path + "'");
        }
        res.analyzer.stopwords = load_stopwords(in);
    }

    if (!config.lexicon_path.empty()) {
        std::ifstream in(config.lexicon_path);
        if (!in) {
            throw ConfigError("cannot open lexicon file '" + config.lexicon_path + "'");
        }
        res.lexicon = ConceptLexicon::parse(in);
    }
    if (!config.embeddings_path.empty()) {
        std::ifstream in(config.embeddings_path);
        if (!in) {
            throw ConfigError("cannot open embeddings file '" + config.embeddings_path + "'");
        }
        res.embeddings = EmbeddingTable::parse(in);
        res.has_embeddings = true;
    }
    if (!config.qrels_path.empty()) {
        res.qrels = read_qrels_files(config.qrels_path, config.strata_path);
        res.has_qrels = true;
    }
    if (!config.mesh_map_path.empty()) {
        std::ifstream in(config.mesh_map_path);
        if (!in) {
            throw ConfigError("cannot open keyword map file '" + config.mesh_map_path + "'");
        }
        res.mesh_map = load_keyword_map(in);
    }
    if (!config.negation_rules_path.empty()) {
        std::ifstream in(config.negation_rules_path);
        if (!in) {
            throw ConfigError("cannot open negation rules file '" + config.negation_rules_path +
                              "'");
        }
        res.negation = NegationRules::parse(in);
    }
    if (!config.demographic_rules_path.empty()) {
        std::ifstream in(config.demographic_rules_path);
        if (!in) {
            throw ConfigError("cannot open demographic rules file '" +
                              config.demographic_rules_path + "'");
        }
        res.demographics = DemographicRules::parse(in);
    }
    if (!config.ltr_params.model_path.empty()) {
        res.ltr_model = LinearRankModel::load_file(config.ltr_params.model_path);
        res.has_ltr_model = true;
    }

    if (need_corpus) {
        if (config.corpus_paths.empty()) {
            throw ConfigError("config: no corpus paths given");
        }
        Corpus raw = load_corpus(config.corpus_paths);
        // mesh map entries override inline keywords; concepts need a lexicon
        for (auto& doc : raw.docs) {
            KeywordMap effective;
            const auto it = res.mesh_map.find(doc.doc_id);
            effective.emplace(doc.doc_id,
                              it != res.mesh_map.end() ? it->second : doc.mesh_keywords);
            doc = augment_document(std::move(doc), effective, res.lexicon);
        }
        res.corpus.docs.clear();
        res.corpus.by_id.clear();
        for (auto& doc : raw.docs) {
            res.corpus.add(std::move(doc));
        }
    }
    if (need_topics) {
        if (config.topics_path.empty()) {
            throw ConfigError("config: no topics path given");
        }
        std::ifstream in(config.topics_path);
        if (!in) {
            throw ConfigError("cannot open topics file '" + config.topics_path + "'");
        }
        res.topics = load_topics(in);
    }
    return res;
}

namespace {

std::vector<RunEntry> to_entries(const std::vector<ScoredDoc>& ranked) {
    std::vector<RunEntry> out;
    out.reserve(ranked.size());
    for (const auto& sd : ranked) {
        out.push_back({sd.doc_id, sd.score});
    }
    return out;
}

} // namespace

RankedRun run_pipeline(const PipelineConfig& config, const InvertedIndex& index,
                       const Resources& resources) {
    validate_stage_resources(config);
    for (Stage stage : config.stages) {
        if (stage == Stage::rf && !resources.has_qrels) {
            throw ConfigError("stage 'rf' needs loaded qrels");
        }
        if (stage == Stage::embeddings && !resources.has_embeddings) {
            throw ConfigError("stage 'embeddings' needs a loaded embedding table");
        }
        if (stage == Stage::concepts && resources.lexicon.empty()) {
            throw ConfigError("stage 'concepts' needs a loaded lexicon");
        }
        if (stage == Stage::ltr && !resources.has_ltr_model) {
            throw ConfigError("stage 'ltr' needs a loaded model");
        }
    }
    if (!(index.analyzer() == resources.analyzer)) {
        throw ConfigError("index was built with a different analyzer configuration");
    }
    if (index.doc_count() != resources.corpus.docs.size()) {
        throw ConfigError("index does not match the corpus (" +
                          std::to_string(index.doc_count()) + " indexed documents vs " +
                          std::to_string(resources.corpus.docs.size()) + " corpus documents)");
    }
    for (const auto& doc : resources.corpus.docs) {
        if (!index.ordinal_of(doc.doc_id)) {
            throw ConfigError("index does not match the corpus (document '" + doc.doc_id +
                              "' is not indexed)");
        }
    }

    const bool ltr_enabled =
        std::find(config.stages.begin(), config.stages.end(), Stage::ltr) != config.stages.end();

    RankedRun run;
    run.run_tag = config.run_tag;
    std::map<int, QueryRep> base_queries;

    for (const Topic& topic : resources.topics) {
        // text stages first, in their written order
        std::string text(field_text(topic, config.field));
        std::vector<std::string> text_trace;
        for (Stage stage : config.stages) {
            if (stage == Stage::demographics) {
                text = normalize_demographics(text, resources.demographics);
                text_trace.emplace_back("demographics");
            } else if (stage == Stage::negation) {
                text = remove_negated(text, resources.negation);
                text_trace.emplace_back("negation");
            }
        }

        QueryRep query = build_query(text, resources.analyzer);
        query.trace = text_trace;
        base_queries.emplace(topic.topic_id, query);

        for (Stage stage : config.stages) {
            switch (stage) {
                case Stage::prf:
                    query = expand_prf(query, index, resources.corpus, config.weights,
                                       config.ranking, config.prf_params);
                    break;
                case Stage::rf:
                    query = expand_rf(query, topic.topic_id, index, resources.corpus,
                                      config.weights, config.ranking, resources.qrels,
                                      config.rf_params);
                    break;
                case Stage::embeddings:
                    query = expand_embeddings(query, resources.embeddings, resources.analyzer,
                                              config.embedding_params);
                    break;
                case Stage::concepts:
                    query = expand_concepts(query, text, resources.lexicon,
                                            config.concepts_lambda, resources.analyzer);
                    break;
                case Stage::demographics:
                case Stage::negation:
                case Stage::ltr:
                    break;
            }
        }

        run.by_topic[topic.topic_id] = to_entries(search(index, query, config.weights,
                                                         config.ranking));
    }

    if (ltr_enabled) {
        const EmbeddingTable* table = resources.has_embeddings ? &resources.embeddings : nullptr;
        std::map<int, std::unordered_map<std::string, FeatureVector>> features;
        for (const Topic& topic : resources.topics) {
            const QueryRep& base = base_queries.at(topic.topic_id);
            const auto baseline_entries =
                to_entries(search(index, base, config.weights, config.ranking));
            const auto prf_query = expand_prf(base, index, resources.corpus, config.weights,
                                              config.ranking, config.prf_params);
            const auto prf_entries =
                to_entries(search(index, prf_query, config.weights, config.ranking));

            auto& topic_features = features[topic.topic_id];
            const auto& entries = run.by_topic.at(topic.topic_id);
            const size_t prefix =
                std::min<size_t>(static_cast<size_t>(config.ltr_params.depth), entries.size());
            for (size_t i = 0; i < prefix; ++i) {
                const Document* doc = resources.corpus.find(entries[i].doc_id);
                if (doc == nullptr) {
                    throw ConfigError("ltr: document '" + entries[i].doc_id +
                                      "' not found in the corpus");
                }
                topic_features.emplace(entries[i].doc_id,
                                       extract_features(topic, config.field, *doc,
                                                        baseline_entries, prf_entries, table));
            }
        }
        run = rerank(resources.ltr_model, run, features, config.ltr_params.depth);
    }
    return run;
}

double evaluate_weights(const FacetWeights& weights, const PipelineConfig& config,
                        const InvertedIndex& index, const Resources& resources) {
    if (resources.topics.empty()) {
        throw EvalError("evaluate_weights: empty topic set");
    }
    if (!resources.has_qrels) {
        throw ConfigError("evaluate_weights: qrels required");
    }
    PipelineConfig candidate = config;
    candidate.weights = weights;
    const RankedRun run = run_pipeline(candidate, index, resources);
    return mean_score(metric_scores(run, resources.qrels, MetricId::inf_ndcg));
}

} // namespace clinsearch
