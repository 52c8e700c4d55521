#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace clinsearch {

struct RunEntry {
    std::string doc_id;
    double score = 0.0;

    bool operator==(const RunEntry&) const = default;
};

/// A ranked retrieval run in the standard submission format
/// `topic Q0 doc rank score tag`. Per topic the entries are ordered, scores
/// non-increasing, doc ids unique, at most 1000 rows.
struct RankedRun {
    std::string run_tag = "run";
    std::map<int, std::vector<RunEntry>> by_topic;

    std::vector<int> topic_ids() const;

    bool operator==(const RankedRun&) const = default;
};

/// Validates field count, rank contiguity, score monotonicity, duplicate
/// docs, tag consistency and the 1000-row cap; errors carry line numbers.
RankedRun read_run(std::istream& in);

/// Emits ranks 1..n per topic in (score, doc id) order with scores printed
/// to 4 decimal places; the sort key uses the printed score so that
/// write -> read -> write is byte-identical.
void write_run(const RankedRun& run, std::ostream& out);

RankedRun read_run_file(const std::string& path);
void write_run_file(const RankedRun& run, const std::string& path); ///< atomic (tmp + rename)

} // namespace clinsearch
