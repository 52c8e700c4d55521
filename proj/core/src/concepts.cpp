#include "clinsearch/concepts.hpp"

#include "clinsearch/error.hpp"
#include "clinsearch/text.hpp"

#include <istream>
#include <unordered_set>

namespace clinsearch {

namespace {

std::string join_tokens(const std::vector<std::string>& toks) {
    std::string out;
    for (const auto& t : toks) {
        if (!out.empty()) out.push_back(' ');
        out += t;
    }
    return out;
}

} // namespace

ConceptLexicon::ConceptLexicon(std::vector<Entry> entries, std::set<std::string> allowed_types)
    : entries_(std::move(entries)), allowed_(std::move(allowed_types)) {
    std::unordered_set<std::string> seen;
    for (const auto& e : entries_) {
        if (e.phrase.empty()) {
            throw FormatError("concept lexicon: empty phrase");
        }
        if (!seen.insert(join_tokens(e.phrase)).second) {
            throw FormatError("concept lexicon: duplicate phrase '" + join_tokens(e.phrase) + "'");
        }
    }
    build_trie();
}

ConceptLexicon ConceptLexicon::parse(std::istream& in) {
    std::vector<Entry> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::vector<std::string> fields;
        size_t start = 0;
        while (true) {
            const size_t bar = line.find('|', start);
            if (bar == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, bar - start));
            start = bar + 1;
        }
        if (fields.size() != 4) {
            throw FormatError("concept lexicon line " + std::to_string(line_no) + ": expected 4 '|'-separated fields, got " +
                              std::to_string(fields.size()));
        }
        Entry e;
        e.phrase = tokenize(fields[0]);
        e.concept_id = fields[1];
        e.semantic_type = fields[2];
        e.preferred_name = fields[3];
        if (e.phrase.empty()) {
            throw FormatError("concept lexicon line " + std::to_string(line_no) + ": empty phrase");
        }
        if (e.concept_id.empty()) {
            throw FormatError("concept lexicon line " + std::to_string(line_no) + ": empty concept id");
        }
        entries.push_back(std::move(e));
    }
    try {
        return ConceptLexicon(std::move(entries));
    } catch (const FormatError& e) {
        throw FormatError(std::string(e.what()));
    }
}

const std::set<std::string>& ConceptLexicon::default_allowed_types() {
    static const std::set<std::string> types = {
        "Disease or Syndrome",
        "Sign or Symptom",
        "Pathologic Function",
        "Diagnostic Procedure",
        "Anatomical Abnormality",
        "Laboratory Procedure",
        "Pharmacologic Substance",
        "Neoplastic Process",
        "Therapeutic or Preventive Procedure",
    };
    return types;
}

void ConceptLexicon::build_trie() {
    trie_.clear();
    trie_.push_back({});
    for (size_t idx = 0; idx < entries_.size(); ++idx) {
        int node = 0;
        for (const auto& token : entries_[idx].phrase) {
            auto it = trie_[static_cast<size_t>(node)].children.find(token);
            if (it == trie_[static_cast<size_t>(node)].children.end()) {
                trie_.push_back({});
                const int next = static_cast<int>(trie_.size()) - 1;
                trie_[static_cast<size_t>(node)].children.emplace(token, next);
                node = next;
            } else {
                node = it->second;
            }
        }
        trie_[static_cast<size_t>(node)].entry = static_cast<int>(idx);
    }
}

std::pair<int, size_t> ConceptLexicon::match_at(const std::vector<std::string>& tokens,
                                                size_t pos) const {
    if (trie_.empty()) {
        return {-1, 0};
    }
    int node = 0;
    int best_entry = -1;
    size_t best_len = 0;
    for (size_t i = pos; i < tokens.size(); ++i) {
        const auto it = trie_[static_cast<size_t>(node)].children.find(tokens[i]);
        if (it == trie_[static_cast<size_t>(node)].children.end()) {
            break;
        }
        node = it->second;
        if (trie_[static_cast<size_t>(node)].entry >= 0) {
            best_entry = trie_[static_cast<size_t>(node)].entry;
            best_len = i - pos + 1;
        }
    }
    return {best_entry, best_len};
}

std::vector<ConceptMatch> extract_concepts(std::string_view text, const ConceptLexicon& lexicon) {
    std::vector<ConceptMatch> out;
    if (lexicon.empty()) {
        return out;
    }
    const auto tokens = tokenize(text);
    std::unordered_set<std::string> seen;
    size_t i = 0;
    while (i < tokens.size()) {
        const auto [entry_idx, len] = lexicon.match_at(tokens, i);
        if (entry_idx < 0) {
            ++i;
            continue;
        }
        const auto& entry = lexicon.entries()[static_cast<size_t>(entry_idx)];
        if (lexicon.allowed_types().contains(entry.semantic_type) &&
            seen.insert(entry.concept_id).second) {
            out.push_back({entry.concept_id, entry.preferred_name});
        }
        i += len; // a disallowed match still consumes its tokens
    }
    return out;
}

} // namespace clinsearch
