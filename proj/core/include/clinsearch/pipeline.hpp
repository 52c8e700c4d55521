#pragma once

#include "clinsearch/corpus.hpp"
#include "clinsearch/demographics.hpp"
#include "clinsearch/embeddings.hpp"
#include "clinsearch/expansion.hpp"
#include "clinsearch/index.hpp"
#include "clinsearch/ltr.hpp"
#include "clinsearch/negation.hpp"
#include "clinsearch/qrels.hpp"
#include "clinsearch/ranking.hpp"
#include "clinsearch/run_io.hpp"
#include "clinsearch/text.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clinsearch {

enum class Stage { demographics, negation, concepts, prf, rf, embeddings, ltr };

std::string_view to_string(Stage s);
std::optional<Stage> stage_from_string(std::string_view s);

struct LtrStageParams {
    std::string model_path;
    int depth = 100;

    bool operator==(const LtrStageParams&) const = default;
};

/// Declarative experiment description parsed from line-oriented
/// `key = value` files with [stage:<name>] sections. Every parameter has a
/// default, so a minimal config runs the unexpanded BM25 baseline. File
/// paths are resolved relative to the config location at parse time.
struct PipelineConfig {
    std::vector<std::string> corpus_paths;
    std::string topics_path;
    TopicField field = TopicField::sum;

    std::string stopwords_path;
    std::string lexicon_path;
    std::string embeddings_path;
    std::string qrels_path;
    std::string strata_path;
    std::string mesh_map_path;
    std::string negation_rules_path;
    std::string demographic_rules_path;

    bool stem = true;
    uint64_t seed = 1;
    std::string run_tag = "run";

    RankingParams ranking;
    FacetWeights weights = FacetWeights::baseline();

    std::vector<Stage> stages; ///< applied in the order written

    ExpansionParams prf_params;
    ExpansionParams rf_params;
    ExpansionParams embedding_params;
    double concepts_lambda = 0.2;
    LtrStageParams ltr_params;

    bool operator==(const PipelineConfig&) const = default;
};

PipelineConfig parse_config(std::istream& in, const std::string& base_dir);
PipelineConfig parse_config_file(const std::string& path);

/// Canonical form: defaults resolved, weights written in full, paths
/// absolute. parse -> serialize -> parse is the identity.
std::string serialize_config(const PipelineConfig& config);

/// Everything a pipeline may need, loaded once up front.
struct Resources {
    Corpus corpus;
    std::vector<Topic> topics;
    AnalyzerConfig analyzer;
    ConceptLexicon lexicon;
    EmbeddingTable embeddings;
    bool has_embeddings = false;
    SampledQrels qrels;
    bool has_qrels = false;
    KeywordMap mesh_map;
    NegationRules negation = NegationRules::defaults();
    DemographicRules demographics = DemographicRules::defaults();
    LinearRankModel ltr_model;
    bool has_ltr_model = false;
};

/// Rejects configs whose stage list references a resource that is not
/// configured (rf without qrels, concepts without lexicon, ...).
void validate_stage_resources(const PipelineConfig& config);

/// Loads and validates the referenced resources. Corpus documents get mesh
/// keywords merged from the keyword map over inline ones and concept ids
/// extracted when a lexicon is configured, matching the `index` command.
Resources load_resources(const PipelineConfig& config, bool need_corpus = true,
                         bool need_topics = true);

/// Runs the configured pipeline over every topic: text stages in order,
/// query construction, expansion stages in order, weighted dismax search,
/// optional LTR re-ranking. Deterministic given (config, inputs, seed).
RankedRun run_pipeline(const PipelineConfig& config, const InvertedIndex& index,
                       const Resources& resources);

/// The hill-climb objective: mean infNDCG of the configured pipeline under
/// the given facet weights (topics without judged-relevant documents are
/// excluded from the mean).
double evaluate_weights(const FacetWeights& weights, const PipelineConfig& config,
                        const InvertedIndex& index, const Resources& resources);

} // namespace clinsearch
