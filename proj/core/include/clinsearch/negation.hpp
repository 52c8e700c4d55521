#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace clinsearch {

/// NegEx-style trigger rules. Rules are data, not code: the bundled defaults
/// cover a small trigger subset and can be replaced from a rules file with
/// [pre], [post] and [term] sections, one phrase per line.
struct NegationRules {
    std::vector<std::vector<std::string>> pre_triggers;
    std::vector<std::vector<std::string>> post_triggers;
    std::vector<std::vector<std::string>> terminations;
    int scope_window = 5;

    static const NegationRules& defaults();
    static NegationRules parse(std::istream& in);

    /// Throws ConfigError when no triggers exist or a trigger doubles as a
    /// termination term.
    void validate() const;
};

/// Token-index ranges [begin, end) into raw_tokenize(text).tokens.
struct NegationSpan {
    std::pair<int, int> trigger;
    std::pair<int, int> negated;
};

/// Pre-triggers scope forward, post-triggers scope backward, both up to
/// scope_window tokens and stopping at clause boundaries and termination
/// terms.
std::vector<NegationSpan> detect_negation(std::string_view text, const NegationRules& rules);

/// Deletes trigger tokens together with their scoped spans; the surviving
/// tokens are rejoined with single spaces (punctuation is not preserved).
std::string remove_negated(std::string_view text, const NegationRules& rules);

} // namespace clinsearch
