#pragma once

#include "clinsearch/corpus.hpp"
#include "clinsearch/text.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace clinsearch {

enum class Facet : uint8_t { title = 0, abstract, body, mesh, concepts, all };

inline constexpr size_t kFacetCount = 6;
inline constexpr std::array<Facet, kFacetCount> kFacets = {
    Facet::title, Facet::abstract, Facet::body, Facet::mesh, Facet::concepts, Facet::all,
};

std::string_view to_string(Facet f);
std::optional<Facet> facet_from_string(std::string_view s);

struct Posting {
    uint32_t doc = 0; ///< ordinal
    uint32_t tf = 0;

    bool operator==(const Posting&) const = default;
};

/// Analyzed token stream of one facet of a document. Text facets go through
/// the analyzer, mesh keywords are analyzed like text, concept ids are kept
/// verbatim, and `all` is the concatenation of title+abstract+body streams.
std::vector<std::string> facet_tokens(const Document& doc, Facet f, const AnalyzerConfig& config);

/// Immutable multi-facet inverted index. Ordinals follow corpus order, which
/// makes rebuilds bit-identical; after build the index is safe for any
/// number of concurrent readers.
class InvertedIndex {
public:
    InvertedIndex() = default;

    static InvertedIndex build(std::span<const Document> docs, AnalyzerConfig analyzer);

    /// Combines two partition-built sub-indexes; ordinals of `right` are
    /// shifted past `left`. Equivalent to a single-pass build over the
    /// concatenated corpus.
    static InvertedIndex merge(const InvertedIndex& left, const InvertedIndex& right);

    uint32_t doc_count() const { return static_cast<uint32_t>(doc_ids_.size()); }
    const std::vector<Posting>& postings(Facet f, std::string_view term) const;
    uint32_t df(Facet f, std::string_view term) const;
    uint32_t length(Facet f, uint32_t ordinal) const;
    uint64_t total_length(Facet f) const;
    double avg_length(Facet f) const;
    const std::string& doc_id(uint32_t ordinal) const;
    std::optional<uint32_t> ordinal_of(std::string_view doc_id) const;
    const AnalyzerConfig& analyzer() const { return analyzer_; }

    const std::map<std::string, std::vector<Posting>, std::less<>>& terms(Facet f) const;

    /// Binary format with a version header; save -> load -> save is
    /// byte-identical.
    void save(std::ostream& out) const;
    static InvertedIndex load(std::istream& in);
    void save_file(const std::string& path) const;
    static InvertedIndex load_file(const std::string& path);

    bool operator==(const InvertedIndex& other) const;

private:
    struct FacetData {
        std::map<std::string, std::vector<Posting>, std::less<>> postings;
        std::vector<uint32_t> lengths;
        uint64_t total_tokens = 0;

        bool operator==(const FacetData&) const = default;
    };

    std::array<FacetData, kFacetCount> facets_;
    std::vector<std::string> doc_ids_;
    std::unordered_map<std::string, uint32_t> ordinal_;
    AnalyzerConfig analyzer_;

    void rebuild_ordinals();
};

} // namespace clinsearch
