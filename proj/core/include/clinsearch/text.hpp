#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace clinsearch {

/// Replaces Latin-1 letters with ASCII equivalents ("naïve" -> "naive") and
/// drops every other non-7-bit character. Input is treated as UTF-8;
/// malformed byte sequences are dropped.
std::string transliterate_ascii(std::string_view utf8);

/// Lowercased alphanumeric runs; everything else splits tokens.
std::vector<std::string> tokenize(std::string_view text);

/// Tokenization that keeps the original spelling and records clause
/// boundaries (. , ; : ! ? and newlines) between adjacent tokens. Used by
/// negation scoping, which must not cross clause punctuation.
struct RawTokens {
    std::vector<std::string> tokens;  ///< original case
    std::vector<std::string> folded;  ///< lowercased
    std::vector<bool> boundary_after; ///< boundary between token i and i+1
};
RawTokens raw_tokenize(std::string_view text);

/// Porter's suffix-stripping algorithm (steps 1a-5b), matching the behaviour
/// of the widely used reference implementation: words of length <= 2 are
/// returned unchanged.
std::string porter_stem(std::string_view word);

const std::set<std::string>& default_stopwords();

/// One word per line; blank lines and lines starting with '#' are skipped.
std::set<std::string> load_stopwords(std::istream& in);

struct AnalyzerConfig {
    std::set<std::string> stopwords = default_stopwords();
    bool stem = true;
    // Text is always lowercased before any other step.

    bool operator==(const AnalyzerConfig&) const = default;
};

/// lowercase -> split -> drop stopwords -> Porter stem. Tokens containing
/// digits skip the stemming step. Term order is preserved.
std::vector<std::string> analyze(std::string_view text, const AnalyzerConfig& config);

} // namespace clinsearch
