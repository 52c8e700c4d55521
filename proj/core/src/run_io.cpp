#include "clinsearch/run_io.hpp"

#include "clinsearch/error.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace clinsearch {

namespace {

constexpr size_t kMaxRunDepth = 1000;

std::string format_score(double score) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", score);
    return buf;
}

bool has_whitespace(const std::string& s) {
    return std::any_of(s.begin(), s.end(),
                       [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

} // namespace

std::vector<int> RankedRun::topic_ids() const {
    std::vector<int> out;
    out.reserve(by_topic.size());
    for (const auto& [topic, entries] : by_topic) {
        out.push_back(topic);
    }
    return out;
}

RankedRun read_run(std::istream& in) {
    RankedRun run;
    run.run_tag.clear();
    std::map<int, int> last_rank;
    std::map<int, double> last_score;
    std::unordered_set<std::string> seen; // "topic doc"
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::istringstream ls(line);
        std::string topic_s, q0, doc, rank_s, score_s, tag, extra;
        if (!(ls >> topic_s >> q0 >> doc >> rank_s >> score_s >> tag) || (ls >> extra)) {
            throw FormatError("run line " + std::to_string(line_no) +
                              ": expected 'topic Q0 doc rank score tag'");
        }
        if (q0 != "Q0") {
            throw FormatError("run line " + std::to_string(line_no) + ": second field must be Q0");
        }
        int topic = 0;
        int rank = 0;
        double score = 0;
        try {
            size_t used = 0;
            topic = std::stoi(topic_s, &used);
            if (used != topic_s.size()) throw std::invalid_argument(topic_s);
            rank = std::stoi(rank_s, &used);
            if (used != rank_s.size()) throw std::invalid_argument(rank_s);
            score = std::stod(score_s, &used);
            if (used != score_s.size()) throw std::invalid_argument(score_s);
        } catch (const std::exception&) {
            throw FormatError("run line " + std::to_string(line_no) + ": malformed number");
        }
        if (run.run_tag.empty()) {
            run.run_tag = tag;
        } else if (tag != run.run_tag) {
            throw FormatError("run line " + std::to_string(line_no) + ": run tag changed from '" +
                              run.run_tag + "' to '" + tag + "'");
        }
        const int expected = last_rank.count(topic) ? last_rank[topic] + 1 : 1;
        if (rank != expected) {
            throw FormatError("run line " + std::to_string(line_no) + ": rank " +
                              std::to_string(rank) + " breaks the 1..n sequence (expected " +
                              std::to_string(expected) + ")");
        }
        if (last_score.count(topic) && score > last_score[topic]) {
            throw FormatError("run line " + std::to_string(line_no) +
                              ": score increases within topic " + std::to_string(topic));
        }
        if (!seen.insert(topic_s + " " + doc).second) {
            throw FormatError("run line " + std::to_string(line_no) + ": duplicate document '" +
                              doc + "' for topic " + std::to_string(topic));
        }
        auto& entries = run.by_topic[topic];
        if (entries.size() >= kMaxRunDepth) {
            throw FormatError("run line " + std::to_string(line_no) + ": more than " +
                              std::to_string(kMaxRunDepth) + " rows for topic " +
                              std::to_string(topic));
        }
        entries.push_back({doc, score});
        last_rank[topic] = rank;
        last_score[topic] = score;
    }
    if (run.run_tag.empty()) {
        run.run_tag = "run";
    }
    return run;
}

void write_run(const RankedRun& run, std::ostream& out) {
    if (run.run_tag.empty() || has_whitespace(run.run_tag)) {
        throw FormatError("run tag must be nonempty without whitespace");
    }
    for (const auto& [topic, entries] : run.by_topic) {
        struct Row {
            std::string score_text;
            double rounded;
            const RunEntry* entry;
        };
        std::vector<Row> rows;
        rows.reserve(entries.size());
        for (const auto& e : entries) {
            if (e.doc_id.empty() || has_whitespace(e.doc_id)) {
                throw FormatError("doc id must be nonempty without whitespace");
            }
            std::string text = format_score(e.score);
            rows.push_back({text, std::stod(text), &e});
        }
        // sort on the printed score so that write -> read -> write is stable
        std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
            return a.rounded != b.rounded ? a.rounded > b.rounded
                                          : a.entry->doc_id < b.entry->doc_id;
        });
        int rank = 1;
        for (const Row& row : rows) {
            out << topic << " Q0 " << row.entry->doc_id << ' ' << rank << ' ' << row.score_text
                << ' ' << run.run_tag << '\n';
            ++rank;
        }
    }
    if (!out) {
        throw FormatError("run write failed");
    }
}

RankedRun read_run_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open run file '" + path + "'");
    }
    return read_run(in);
}

void write_run_file(const RankedRun& run, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) {
            throw ConfigError("cannot write run file '" + path + "'");
        }
        write_run(run, out);
    }
    std::filesystem::rename(tmp, path);
}

} // namespace clinsearch
