#include "clinsearch/qrels.hpp"

#include "clinsearch/error.hpp"

#include <fstream>
#include <istream>
#include <sstream>

namespace clinsearch {

double Stratum::sampling_rate() const {
    if (pool_size == 0) {
        return 0.0;
    }
    return static_cast<double>(judged.size()) / static_cast<double>(pool_size);
}

uint32_t Stratum::relevant_count() const {
    uint32_t n = 0;
    for (const auto& [doc, grade] : judged) {
        if (grade >= 1) {
            ++n;
        }
    }
    return n;
}

const Stratum* TopicJudgments::stratum_containing(const std::string& doc_id) const {
    for (const auto& s : strata) {
        if (s.pool_members.contains(doc_id)) {
            return &s;
        }
    }
    return nullptr;
}

std::optional<int> TopicJudgments::grade(const std::string& doc_id) const {
    for (const auto& s : strata) {
        const auto it = s.judged.find(doc_id);
        if (it != s.judged.end()) {
            return it->second;
        }
    }
    return std::nullopt;
}

uint32_t TopicJudgments::judged_relevant_count() const {
    uint32_t n = 0;
    for (const auto& s : strata) {
        n += s.relevant_count();
    }
    return n;
}

double TopicJudgments::estimated_relevant() const {
    double total = 0.0;
    for (const auto& s : strata) {
        if (!s.judged.empty()) {
            total += static_cast<double>(s.pool_size) * static_cast<double>(s.relevant_count()) /
                     static_cast<double>(s.judged.size());
        }
    }
    return total;
}

SampledQrels read_qrels(std::istream& qrels, std::istream* strata) {
    // (topic, stratum) -> stratum data, insertion keyed through maps
    std::map<int, std::map<int, Stratum>> staging;
    std::map<int, std::map<std::string, int>> doc_stratum; // topic -> doc -> stratum

    std::string line;
    int line_no = 0;
    while (std::getline(qrels, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::istringstream ls(line);
        std::string topic_s, stratum_s, doc, grade_s, extra;
        if (!(ls >> topic_s >> stratum_s >> doc >> grade_s) || (ls >> extra)) {
            throw FormatError("qrels line " + std::to_string(line_no) +
                              ": expected 'topic stratum doc grade'");
        }
        int topic = 0, stratum_id = 0, grade = 0;
        try {
            size_t used = 0;
            topic = std::stoi(topic_s, &used);
            if (used != topic_s.size()) throw std::invalid_argument(topic_s);
            stratum_id = std::stoi(stratum_s, &used);
            if (used != stratum_s.size()) throw std::invalid_argument(stratum_s);
            grade = std::stoi(grade_s, &used);
            if (used != grade_s.size()) throw std::invalid_argument(grade_s);
        } catch (const std::exception&) {
            throw FormatError("qrels line " + std::to_string(line_no) + ": malformed number");
        }
        if (grade < -1 || grade > 2) {
            throw FormatError("qrels line " + std::to_string(line_no) + ": grade must be in {-1, 0, 1, 2}");
        }
        auto& strata_of_topic = doc_stratum[topic];
        const auto [it, inserted] = strata_of_topic.emplace(doc, stratum_id);
        if (!inserted) {
            if (it->second != stratum_id) {
                throw FormatError("qrels line " + std::to_string(line_no) + ": document '" + doc +
                                  "' appears in two strata of topic " + std::to_string(topic));
            }
            throw FormatError("qrels line " + std::to_string(line_no) + ": duplicate document '" +
                              doc + "' in topic " + std::to_string(topic));
        }
        Stratum& s = staging[topic][stratum_id];
        s.stratum_id = stratum_id;
        s.pool_members.insert(doc);
        if (grade >= 0) {
            s.judged.emplace(doc, grade);
        }
    }

    if (strata != nullptr) {
        line_no = 0;
        while (std::getline(*strata, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            if (line.empty() || line.front() == '#') {
                continue;
            }
            std::istringstream ls(line);
            long topic = 0, stratum_id = 0, pool = 0;
            std::string extra;
            if (!(ls >> topic >> stratum_id >> pool) || (ls >> extra)) {
                throw FormatError("strata line " + std::to_string(line_no) +
                                  ": expected 'topic stratum pool_size'");
            }
            if (pool < 1) {
                throw FormatError("strata line " + std::to_string(line_no) +
                                  ": pool size must be >= 1");
            }
            Stratum& s = staging[static_cast<int>(topic)][static_cast<int>(stratum_id)];
            s.stratum_id = static_cast<int>(stratum_id);
            s.pool_size = static_cast<uint32_t>(pool);
        }
    }

    SampledQrels out;
    for (auto& [topic, strata_map] : staging) {
        TopicJudgments tj;
        for (auto& [sid, s] : strata_map) {
            if (s.pool_size == 0) {
                // no sidecar entry: pool is exactly the enumerated members
                s.pool_size = static_cast<uint32_t>(s.pool_members.size());
            }
            if (s.pool_size < s.pool_members.size()) {
                throw FormatError("qrels: topic " + std::to_string(topic) + " stratum " +
                                  std::to_string(sid) + " declares pool size " +
                                  std::to_string(s.pool_size) + " smaller than its " +
                                  std::to_string(s.pool_members.size()) + " enumerated documents");
            }
            tj.strata.push_back(std::move(s));
        }
        out.topics.emplace(topic, std::move(tj));
    }
    return out;
}

SampledQrels read_qrels_files(const std::string& qrels_path, const std::string& strata_path) {
    std::ifstream q(qrels_path);
    if (!q) {
        throw ConfigError("cannot open qrels file '" + qrels_path + "'");
    }
    if (strata_path.empty()) {
        return read_qrels(q, nullptr);
    }
    std::ifstream s(strata_path);
    if (!s) {
        throw ConfigError("cannot open strata file '" + strata_path + "'");
    }
    return read_qrels(q, &s);
}

} // namespace clinsearch
