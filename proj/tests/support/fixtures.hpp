#pragma once

#include <clinsearch/corpus.hpp>
#include <clinsearch/qrels.hpp>
#include <clinsearch/rng.hpp>
#include <clinsearch/run_io.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace fixtures {

inline std::string data_dir() {
    return CLINSEARCH_DATA_DIR;
}

inline std::string data_path(const std::string& rel) {
    return (std::filesystem::path(data_dir()) / rel).generic_string();
}

/// Small clinical-flavoured vocabulary for synthetic corpora.
inline const std::vector<std::string>& vocabulary() {
    static const std::vector<std::string> v = {
        "sepsis",   "fever",    "cough",      "pain",      "chest",     "cardiac",
        "failure",  "stroke",   "pneumonia",  "infection", "treated",   "therapy",
        "chronic",  "acute",    "antibiotic", "aspirin",   "pressure",  "renal",
        "hepatic",  "biopsy",   "lesion",     "tumor",     "screening", "risk",
        "cohort",   "trial",    "outcome",    "mortality", "admission", "discharge",
    };
    return v;
}

/// Deterministic synthetic corpus: every document gets random title,
/// abstract and body text drawn from the vocabulary.
inline std::vector<clinsearch::Document> make_corpus(size_t n_docs, uint64_t seed) {
    clinsearch::DetRng rng(seed);
    const auto& vocab = vocabulary();
    std::vector<clinsearch::Document> docs;
    docs.reserve(n_docs);
    auto sentence = [&](size_t words) {
        std::string out;
        for (size_t i = 0; i < words; ++i) {
            if (!out.empty()) {
                out.push_back(' ');
            }
            out += vocab[rng.below(vocab.size())];
        }
        return out;
    };
    for (size_t i = 0; i < n_docs; ++i) {
        clinsearch::Document doc;
        char id[32];
        std::snprintf(id, sizeof(id), "S%05zu", i);
        doc.doc_id = id;
        doc.title = sentence(3 + rng.below(4));
        doc.abstract_text = sentence(8 + rng.below(8));
        doc.body = sentence(20 + rng.below(20));
        if (rng.below(3) == 0) {
            doc.mesh_keywords = {vocab[rng.below(vocab.size())]};
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

/// A random run over synthetic doc ids plus fully judged single-stratum
/// qrels over a superset of those ids.
struct RandomEval {
    clinsearch::RankedRun run;
    clinsearch::SampledQrels qrels;
};

inline RandomEval make_random_eval(size_t n_topics, size_t n_docs, uint64_t seed) {
    clinsearch::DetRng rng(seed);
    RandomEval out;
    out.run.run_tag = "synthetic";
    for (size_t t = 1; t <= n_topics; ++t) {
        std::vector<std::string> pool;
        for (size_t d = 0; d < n_docs; ++d) {
            char id[32];
            std::snprintf(id, sizeof(id), "D%03zu", d);
            pool.push_back(id);
        }
        rng.shuffle(pool);
        const size_t judged_count = 5 + rng.below(n_docs - 5);
        clinsearch::Stratum stratum;
        stratum.stratum_id = 1;
        bool any_relevant = false;
        for (size_t i = 0; i < judged_count; ++i) {
            const int grade = static_cast<int>(rng.below(3));
            stratum.judged.emplace(pool[i], grade);
            stratum.pool_members.insert(pool[i]);
            if (grade >= 1) {
                any_relevant = true;
            }
        }
        if (!any_relevant) { // keep every topic usable
            stratum.judged[pool[0]] = 2;
        }
        stratum.pool_size = static_cast<uint32_t>(stratum.judged.size());
        clinsearch::TopicJudgments tj;
        tj.strata.push_back(std::move(stratum));
        out.qrels.topics.emplace(static_cast<int>(t), std::move(tj));

        rng.shuffle(pool);
        const size_t retrieved = 10 + rng.below(n_docs - 10);
        auto& entries = out.run.by_topic[static_cast<int>(t)];
        double score = 100.0;
        for (size_t i = 0; i < retrieved; ++i) {
            score -= 0.01 + 0.001 * static_cast<double>(rng.below(100));
            entries.push_back({pool[i], score});
        }
    }
    return out;
}

/// Scratch directory under the build tree, cleared per use.
class TempDir {
public:
    explicit TempDir(const std::string& name) {
        path_ = std::filesystem::temp_directory_path() / ("clinsearch_test_" + name);
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }

    std::string file(const std::string& rel) const { return (path_ / rel).generic_string(); }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

} // namespace fixtures
