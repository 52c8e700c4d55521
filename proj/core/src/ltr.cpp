#include "clinsearch/ltr.hpp"

#include "clinsearch/error.hpp"
#include "clinsearch/rng.hpp"
#include "clinsearch/text.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace clinsearch {

namespace {

constexpr size_t kTypeOffset = 3;
constexpr size_t kFieldOffset = 6;

std::string format_double(double v) {
    char buf[40];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

double score_in(const std::vector<RunEntry>& ranking, const std::string& doc_id,
                bool* found = nullptr) {
    for (const auto& e : ranking) {
        if (e.doc_id == doc_id) {
            if (found) *found = true;
            return e.score;
        }
    }
    if (found) *found = false;
    return 0.0;
}

double normalized_score(const std::vector<RunEntry>& ranking, const std::string& doc_id) {
    bool found = false;
    const double s = score_in(ranking, doc_id, &found);
    if (!found || ranking.empty()) {
        return 0.0;
    }
    double lo = ranking.front().score;
    double hi = ranking.front().score;
    for (const auto& e : ranking) {
        lo = std::min(lo, e.score);
        hi = std::max(hi, e.score);
    }
    if (hi == lo) {
        return 1.0;
    }
    return (s - lo) / (hi - lo);
}

} // namespace

const std::array<std::string_view, FeatureVector::kDim>& FeatureVector::names() {
    static const std::array<std::string_view, kDim> n = {
        "bm25",       "prf",        "title_dist", "type_treatment", "type_diagnosis",
        "type_test",  "field_note", "field_desc", "field_sum",
    };
    return n;
}

double LinearRankModel::score(const FeatureVector& fv) const {
    double s = 0.0;
    for (size_t i = 0; i < FeatureVector::kDim; ++i) {
        s += weights[i] * fv.values[i];
    }
    return s;
}

void LinearRankModel::save(std::ostream& out) const {
    out << "# linear rank model v1\n";
    out << "# seed " << seed << "\n";
    out << "# epochs " << epochs << "\n";
    out << "# learning_rate " << format_double(learning_rate) << "\n";
    out << "# pairs " << pair_count << "\n";
    out << "# accuracy " << format_double(pair_accuracy) << "\n";
    for (size_t i = 0; i < FeatureVector::kDim; ++i) {
        out << FeatureVector::names()[i] << ' ' << format_double(weights[i]) << "\n";
    }
    if (!out) {
        throw FormatError("model save: write failed");
    }
}

LinearRankModel LinearRankModel::load(std::istream& in) {
    LinearRankModel model;
    std::array<bool, FeatureVector::kDim> seen{};
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (first) {
            if (line != "# linear rank model v1") {
                throw FormatError("model file: missing version header");
            }
            first = false;
            continue;
        }
        std::istringstream ls(line);
        if (line.front() == '#') {
            std::string hash, key;
            ls >> hash >> key;
            if (key == "seed") ls >> model.seed;
            else if (key == "epochs") ls >> model.epochs;
            else if (key == "learning_rate") ls >> model.learning_rate;
            else if (key == "pairs") ls >> model.pair_count;
            else if (key == "accuracy") ls >> model.pair_accuracy;
            continue;
        }
        std::string name;
        double weight = 0.0;
        std::string extra;
        if (!(ls >> name >> weight) || (ls >> extra)) {
            throw FormatError("model file: bad line '" + line + "'");
        }
        bool known = false;
        for (size_t i = 0; i < FeatureVector::kDim; ++i) {
            if (FeatureVector::names()[i] == name) {
                model.weights[i] = weight;
                seen[i] = true;
                known = true;
                break;
            }
        }
        if (!known) {
            throw FormatError("model file: unknown feature '" + name + "'");
        }
    }
    if (first) {
        throw FormatError("model file: empty");
    }
    for (size_t i = 0; i < FeatureVector::kDim; ++i) {
        if (!seen[i]) {
            throw FormatError("model file: missing feature '" +
                              std::string(FeatureVector::names()[i]) + "'");
        }
    }
    return model;
}

void LinearRankModel::save_file(const std::string& path) const {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) {
            throw ConfigError("cannot write model file '" + path + "'");
        }
        save(out);
    }
    std::filesystem::rename(tmp, path);
}

LinearRankModel LinearRankModel::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open model file '" + path + "'");
    }
    return load(in);
}

FeatureVector extract_features(const Topic& topic, TopicField field, const Document& doc,
                               const std::vector<RunEntry>& baseline_ranking,
                               const std::vector<RunEntry>& prf_ranking,
                               const EmbeddingTable* table) {
    FeatureVector fv;
    fv.values[0] = normalized_score(baseline_ranking, doc.doc_id);
    fv.values[1] = normalized_score(prf_ranking, doc.doc_id);

    double dist = 1.0;
    if (table != nullptr) {
        const auto topic_mean = table->mean_vector(tokenize(field_text(topic, field)));
        const auto title_mean = table->mean_vector(tokenize(doc.title));
        if (topic_mean && title_mean) {
            dist = 1.0 - cosine_similarity(*topic_mean, *title_mean);
        }
    }
    fv.values[2] = dist;

    switch (topic.type) {
        case TopicType::treatment: fv.values[kTypeOffset + 0] = 1.0; break;
        case TopicType::diagnosis: fv.values[kTypeOffset + 1] = 1.0; break;
        case TopicType::test: fv.values[kTypeOffset + 2] = 1.0; break;
        case TopicType::unknown: break; // all-zero one-hot
    }
    switch (field) {
        case TopicField::note: fv.values[kFieldOffset + 0] = 1.0; break;
        case TopicField::desc: fv.values[kFieldOffset + 1] = 1.0; break;
        case TopicField::sum: fv.values[kFieldOffset + 2] = 1.0; break;
    }
    return fv;
}

std::vector<PreferencePair>
build_training_set(const std::vector<Topic>& topics, TopicField field, const SampledQrels& qrels,
                   const RankedRun& baseline, const RankedRun& prf, const Corpus& corpus,
                   const EmbeddingTable* table, int depth, size_t pair_cap, uint64_t seed) {
    std::vector<PreferencePair> out;
    for (const Topic& topic : topics) {
        const auto qrels_it = qrels.topics.find(topic.topic_id);
        const auto run_it = baseline.by_topic.find(topic.topic_id);
        if (qrels_it == qrels.topics.end() || run_it == baseline.by_topic.end()) {
            continue;
        }
        const auto& base_entries = run_it->second;
        const auto prf_it = prf.by_topic.find(topic.topic_id);
        static const std::vector<RunEntry> empty;
        const auto& prf_entries = prf_it == prf.by_topic.end() ? empty : prf_it->second;

        std::vector<const std::string*> relevant;
        std::vector<const std::string*> nonrelevant;
        const size_t prefix = std::min<size_t>(static_cast<size_t>(depth), base_entries.size());
        for (size_t i = 0; i < prefix; ++i) {
            const auto grade = qrels_it->second.grade(base_entries[i].doc_id);
            if (!grade) {
                continue;
            }
            (*grade >= 1 ? relevant : nonrelevant).push_back(&base_entries[i].doc_id);
        }
        if (relevant.empty() || nonrelevant.empty()) {
            continue;
        }

        std::vector<std::pair<const std::string*, const std::string*>> pairs;
        pairs.reserve(relevant.size() * nonrelevant.size());
        for (const auto* rel : relevant) {
            for (const auto* nonrel : nonrelevant) {
                pairs.emplace_back(rel, nonrel);
            }
        }
        if (pairs.size() > pair_cap) {
            DetRng rng(mix_seed(seed, static_cast<uint64_t>(topic.topic_id)));
            rng.shuffle(pairs);
            pairs.resize(pair_cap);
        }

        std::unordered_map<std::string, FeatureVector> cache;
        auto features_of = [&](const std::string& doc_id) -> const FeatureVector& {
            const auto it = cache.find(doc_id);
            if (it != cache.end()) {
                return it->second;
            }
            const Document* doc = corpus.find(doc_id);
            if (doc == nullptr) {
                throw ConfigError("training: document '" + doc_id + "' not found in the corpus");
            }
            return cache
                .emplace(doc_id,
                         extract_features(topic, field, *doc, base_entries, prf_entries, table))
                .first->second;
        };
        for (const auto& [rel, nonrel] : pairs) {
            out.emplace_back(features_of(*rel), features_of(*nonrel));
        }
    }
    return out;
}

LinearRankModel train_ranker(const std::vector<PreferencePair>& pairs, double learning_rate,
                             int epochs, uint64_t seed) {
    if (pairs.empty()) {
        throw ConfigError("train_ranker: empty training set");
    }
    if (!(learning_rate > 0.0)) {
        throw ConfigError("train_ranker: learning rate must be positive");
    }
    if (epochs < 1) {
        throw ConfigError("train_ranker: epochs must be >= 1");
    }
    LinearRankModel model;
    model.seed = seed;
    model.epochs = epochs;
    model.learning_rate = learning_rate;
    model.pair_count = pairs.size();

    std::vector<size_t> order(pairs.size());
    for (size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    for (int epoch = 0; epoch < epochs; ++epoch) {
        DetRng rng(mix_seed(seed, static_cast<uint64_t>(epoch)));
        rng.shuffle(order);
        for (size_t idx : order) {
            const auto& [pos, neg] = pairs[idx];
            double z = 0.0;
            for (size_t i = 0; i < FeatureVector::kDim; ++i) {
                z += model.weights[i] * (pos.values[i] - neg.values[i]);
            }
            const double g = 1.0 / (1.0 + std::exp(z)); // sigmoid(-z)
            for (size_t i = 0; i < FeatureVector::kDim; ++i) {
                model.weights[i] += learning_rate * g * (pos.values[i] - neg.values[i]);
            }
        }
    }

    double correct = 0.0;
    for (const auto& [pos, neg] : pairs) {
        const double margin = model.score(pos) - model.score(neg);
        if (margin > 0.0) {
            correct += 1.0;
        } else if (margin == 0.0) {
            correct += 0.5;
        }
    }
    model.pair_accuracy = correct / static_cast<double>(pairs.size());
    return model;
}

double pairwise_loss(const LinearRankModel& model, const std::vector<PreferencePair>& pairs) {
    double loss = 0.0;
    for (const auto& [pos, neg] : pairs) {
        const double margin = model.score(pos) - model.score(neg);
        loss += std::log(1.0 + std::exp(-margin));
    }
    return loss;
}

RankedRun rerank(const LinearRankModel& model, const RankedRun& run,
                 const std::map<int, std::unordered_map<std::string, FeatureVector>>& features,
                 int depth) {
    if (depth < 1) {
        throw ConfigError("rerank: depth must be >= 1");
    }
    RankedRun out = run;
    for (auto& [topic, entries] : out.by_topic) {
        const size_t prefix = std::min<size_t>(static_cast<size_t>(depth), entries.size());
        if (prefix == 0) {
            continue;
        }
        const auto feats_it = features.find(topic);
        struct Scored {
            std::string doc_id;
            double model_score;
        };
        std::vector<Scored> scored;
        scored.reserve(prefix);
        for (size_t i = 0; i < prefix; ++i) {
            if (feats_it == features.end()) {
                throw ConfigError("rerank: no features for topic " + std::to_string(topic));
            }
            const auto fv = feats_it->second.find(entries[i].doc_id);
            if (fv == feats_it->second.end()) {
                throw ConfigError("rerank: missing features for document '" + entries[i].doc_id +
                                  "' in topic " + std::to_string(topic));
            }
            scored.push_back({entries[i].doc_id, model.score(fv->second)});
        }
        std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
            return a.model_score > b.model_score;
        });
        // the original score multiset is reassigned positionally, so scores
        // stay non-increasing and an unchanged order is bit-identical
        std::vector<double> original_scores;
        original_scores.reserve(entries.size());
        for (const auto& e : entries) {
            original_scores.push_back(e.score);
        }
        for (size_t i = 0; i < prefix; ++i) {
            entries[i] = {scored[i].doc_id, original_scores[i]};
        }
    }
    return out;
}

} // namespace clinsearch
