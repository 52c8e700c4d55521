#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace clinsearch {

/// Dictionary of concept phrases with semantic types, loaded from
/// pipe-delimited `phrase|concept_id|semantic_type|preferred_name` lines.
/// Phrases are lowercased and tokenized at load time and matched greedily,
/// longest first.
class ConceptLexicon {
public:
    struct Entry {
        std::vector<std::string> phrase; ///< lowercased tokens
        std::string concept_id;
        std::string semantic_type;
        std::string preferred_name;

        bool operator==(const Entry&) const = default;
    };

    ConceptLexicon() = default;
    explicit ConceptLexicon(std::vector<Entry> entries,
                            std::set<std::string> allowed_types = default_allowed_types());

    static ConceptLexicon parse(std::istream& in);

    static const std::set<std::string>& default_allowed_types();

    const std::vector<Entry>& entries() const { return entries_; }
    const std::set<std::string>& allowed_types() const { return allowed_; }
    bool empty() const { return entries_.empty(); }

    /// Longest phrase starting at tokens[pos]; returns {entry index, phrase
    /// length} or {-1, 0} when nothing matches.
    std::pair<int, size_t> match_at(const std::vector<std::string>& tokens, size_t pos) const;

private:
    struct TrieNode {
        std::map<std::string, int> children;
        int entry = -1;
    };

    std::vector<Entry> entries_;
    std::set<std::string> allowed_;
    std::vector<TrieNode> trie_;

    void build_trie();
};

struct ConceptMatch {
    std::string concept_id;
    std::string preferred_name;

    bool operator==(const ConceptMatch&) const = default;
};

/// Greedy left-to-right longest match over lowercased tokens. A match whose
/// semantic type is not allowed still consumes its tokens but is not
/// reported. Results are de-duplicated by concept id in first-occurrence
/// order.
std::vector<ConceptMatch> extract_concepts(std::string_view text, const ConceptLexicon& lexicon);

} // namespace clinsearch
