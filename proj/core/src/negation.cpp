#include "clinsearch/negation.hpp"

#include "clinsearch/error.hpp"
#include "clinsearch/text.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

namespace clinsearch {

namespace {

std::vector<std::string> phrase_tokens(const std::string& line) {
    return tokenize(line);
}

// Longest trigger in `triggers` starting at tokens[pos]; 0 when none.
size_t match_phrase(const std::vector<std::vector<std::string>>& triggers,
                    const std::vector<std::string>& tokens, size_t pos) {
    size_t best = 0;
    for (const auto& phrase : triggers) {
        if (phrase.size() <= best || pos + phrase.size() > tokens.size()) {
            continue;
        }
        bool ok = true;
        for (size_t i = 0; i < phrase.size(); ++i) {
            if (tokens[pos + i] != phrase[i]) {
                ok = false;
                break;
            }
        }
        if (ok) {
            best = phrase.size();
        }
    }
    return best;
}

} // namespace

const NegationRules& NegationRules::defaults() {
    static const NegationRules rules = [] {
        NegationRules r;
        for (const char* p : {"no", "not", "without", "denies", "negative for", "free of"}) {
            r.pre_triggers.push_back(phrase_tokens(p));
        }
        for (const char* p : {"ruled out", "unlikely"}) {
            r.post_triggers.push_back(phrase_tokens(p));
        }
        for (const char* p : {"but", "however", "although", "except"}) {
            r.terminations.push_back(phrase_tokens(p));
        }
        r.validate();
        return r;
    }();
    return rules;
}

NegationRules NegationRules::parse(std::istream& in) {
    NegationRules rules;
    std::vector<std::vector<std::string>>* section = nullptr;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (line == "[pre]") {
            section = &rules.pre_triggers;
        } else if (line == "[post]") {
            section = &rules.post_triggers;
        } else if (line == "[term]") {
            section = &rules.terminations;
        } else if (line.front() == '[') {
            throw FormatError("negation rules line " + std::to_string(line_no) +
                              ": unknown section " + line);
        } else {
            if (section == nullptr) {
                throw FormatError("negation rules line " + std::to_string(line_no) +
                                  ": phrase outside a section");
            }
            auto toks = phrase_tokens(line);
            if (toks.empty()) {
                throw FormatError("negation rules line " + std::to_string(line_no) +
                                  ": empty phrase");
            }
            section->push_back(std::move(toks));
        }
    }
    rules.validate();
    return rules;
}

void NegationRules::validate() const {
    if (pre_triggers.empty() && post_triggers.empty()) {
        throw ConfigError("negation rules define no triggers");
    }
    if (scope_window < 1) {
        throw ConfigError("negation scope window must be positive");
    }
    auto overlaps = [&](const std::vector<std::vector<std::string>>& triggers) {
        for (const auto& t : triggers) {
            for (const auto& term : terminations) {
                if (t == term) {
                    return true;
                }
            }
        }
        return false;
    };
    if (overlaps(pre_triggers) || overlaps(post_triggers)) {
        throw ConfigError("negation trigger doubles as a termination term");
    }
}

std::vector<NegationSpan> detect_negation(std::string_view text, const NegationRules& rules) {
    const RawTokens rt = raw_tokenize(text);
    const int n = static_cast<int>(rt.folded.size());
    std::vector<NegationSpan> out;

    auto boundary_between = [&](int left, int right) {
        // any clause boundary between adjacent tokens left and right = left+1
        (void)right;
        return rt.boundary_after[static_cast<size_t>(left)];
    };

    int i = 0;
    while (i < n) {
        const size_t pre_len = match_phrase(rules.pre_triggers, rt.folded, static_cast<size_t>(i));
        if (pre_len > 0) {
            const int trig_end = i + static_cast<int>(pre_len);
            int end = trig_end;
            while (end < n && end - trig_end < rules.scope_window) {
                if (end > i && boundary_between(end - 1, end)) {
                    break;
                }
                if (match_phrase(rules.terminations, rt.folded, static_cast<size_t>(end)) > 0) {
                    break;
                }
                ++end;
            }
            out.push_back({{i, trig_end}, {trig_end, end}});
            i = trig_end;
            continue;
        }
        const size_t post_len = match_phrase(rules.post_triggers, rt.folded, static_cast<size_t>(i));
        if (post_len > 0) {
            const int trig_end = i + static_cast<int>(post_len);
            int begin = i;
            while (begin > 0 && i - begin < rules.scope_window) {
                const int prev = begin - 1;
                if (boundary_between(prev, begin)) {
                    break;
                }
                if (match_phrase(rules.terminations, rt.folded, static_cast<size_t>(prev)) > 0) {
                    break;
                }
                begin = prev;
            }
            out.push_back({{i, trig_end}, {begin, i}});
            i = trig_end;
            continue;
        }
        ++i;
    }
    return out;
}

std::string remove_negated(std::string_view text, const NegationRules& rules) {
    const RawTokens rt = raw_tokenize(text);
    std::vector<bool> removed(rt.tokens.size(), false);
    for (const auto& span : detect_negation(text, rules)) {
        for (int i = span.trigger.first; i < span.trigger.second; ++i) {
            removed[static_cast<size_t>(i)] = true;
        }
        for (int i = span.negated.first; i < span.negated.second; ++i) {
            removed[static_cast<size_t>(i)] = true;
        }
    }
    std::string out;
    for (size_t i = 0; i < rt.tokens.size(); ++i) {
        if (removed[i]) {
            continue;
        }
        if (!out.empty()) {
            out.push_back(' ');
        }
        out.append(rt.tokens[i]);
    }
    return out;
}

} // namespace clinsearch
