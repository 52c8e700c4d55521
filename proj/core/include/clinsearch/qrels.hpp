#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace clinsearch {

/// One stratum of a judged pool. The sampling rate is judged/pool_size; a
/// fully judged stratum (rate 1) makes the inferred metrics reduce exactly
/// to the exact ones.
struct Stratum {
    int stratum_id = 0;
    uint32_t pool_size = 0;             ///< may exceed the enumerated members
    std::set<std::string> pool_members; ///< judged docs plus grade -1 rows
    std::map<std::string, int> judged;  ///< doc -> grade in {0, 1, 2}

    double sampling_rate() const;
    bool fully_judged() const { return judged.size() == pool_size; }
    uint32_t relevant_count() const; ///< judged with grade >= 1
};

struct TopicJudgments {
    std::vector<Stratum> strata;

    const Stratum* stratum_containing(const std::string& doc_id) const;
    std::optional<int> grade(const std::string& doc_id) const;
    uint32_t judged_relevant_count() const;

    /// Pool-size-weighted estimate of the number of relevant documents:
    /// sum over strata of |pool| * relevant/|judged|.
    double estimated_relevant() const;
};

struct SampledQrels {
    std::map<int, TopicJudgments> topics;
};

/// qrels lines `topic stratum doc grade`; grade -1 marks a pooled but
/// unjudged document. Optional strata sidecar `topic stratum pool_size`
/// declares pool sizes; without it every stratum counts as fully judged.
/// Validates stratum disjointness and pool-size consistency.
SampledQrels read_qrels(std::istream& qrels, std::istream* strata);
SampledQrels read_qrels_files(const std::string& qrels_path, const std::string& strata_path = "");

} // namespace clinsearch
