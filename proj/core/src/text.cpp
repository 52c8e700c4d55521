#include "clinsearch/text.hpp"

#include "clinsearch/error.hpp"

#include <array>
#include <cctype>
#include <istream>

namespace clinsearch {

namespace {

// Latin-1 letters -> ASCII; everything else outside 7-bit is dropped.
std::string_view latin1_fold(uint32_t cp) {
    switch (cp) {
        case 0xC0: case 0xC1: case 0xC2: case 0xC3: case 0xC4: case 0xC5: return "A";
        case 0xC6: return "AE";
        case 0xC7: return "C";
        case 0xC8: case 0xC9: case 0xCA: case 0xCB: return "E";
        case 0xCC: case 0xCD: case 0xCE: case 0xCF: return "I";
        case 0xD0: return "D";
        case 0xD1: return "N";
        case 0xD2: case 0xD3: case 0xD4: case 0xD5: case 0xD6: case 0xD8: return "O";
        case 0xD9: case 0xDA: case 0xDB: case 0xDC: return "U";
        case 0xDD: return "Y";
        case 0xDE: return "TH";
        case 0xDF: return "ss";
        case 0xE0: case 0xE1: case 0xE2: case 0xE3: case 0xE4: case 0xE5: return "a";
        case 0xE6: return "ae";
        case 0xE7: return "c";
        case 0xE8: case 0xE9: case 0xEA: case 0xEB: return "e";
        case 0xEC: case 0xED: case 0xEE: case 0xEF: return "i";
        case 0xF0: return "d";
        case 0xF1: return "n";
        case 0xF2: case 0xF3: case 0xF4: case 0xF5: case 0xF6: case 0xF8: return "o";
        case 0xF9: case 0xFA: case 0xFB: case 0xFC: return "u";
        case 0xFD: case 0xFF: return "y";
        case 0xFE: return "th";
        default: return "";
    }
}

bool is_boundary_char(char c) {
    return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?' || c == '\n';
}

} // namespace

std::string transliterate_ascii(std::string_view utf8) {
    std::string out;
    out.reserve(utf8.size());
    size_t i = 0;
    const size_t n = utf8.size();
    while (i < n) {
        const unsigned char b0 = static_cast<unsigned char>(utf8[i]);
        if (b0 < 0x80) {
            out.push_back(static_cast<char>(b0));
            ++i;
            continue;
        }
        size_t len = 0;
        uint32_t cp = 0;
        if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            ++i; // stray continuation or invalid lead byte
            continue;
        }
        if (i + len > n) {
            ++i;
            continue;
        }
        bool valid = true;
        for (size_t k = 1; k < len; ++k) {
            const unsigned char bk = static_cast<unsigned char>(utf8[i + k]);
            if ((bk & 0xC0) != 0x80) {
                valid = false;
                break;
            }
            cp = (cp << 6) | (bk & 0x3F);
        }
        if (!valid) {
            ++i;
            continue;
        }
        out.append(latin1_fold(cp));
        i += len;
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        const unsigned char u = static_cast<unsigned char>(c);
        if (u < 0x80 && std::isalnum(u)) {
            cur.push_back(static_cast<char>(std::tolower(u)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) {
        out.push_back(std::move(cur));
    }
    return out;
}

RawTokens raw_tokenize(std::string_view text) {
    RawTokens out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            std::string folded;
            folded.reserve(cur.size());
            for (char c : cur) {
                folded.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
            }
            out.tokens.push_back(std::move(cur));
            out.folded.push_back(std::move(folded));
            out.boundary_after.push_back(false);
            cur.clear();
        }
    };
    for (char c : text) {
        const unsigned char u = static_cast<unsigned char>(c);
        if (u < 0x80 && std::isalnum(u)) {
            cur.push_back(c);
        } else {
            flush();
            if (is_boundary_char(c) && !out.tokens.empty()) {
                out.boundary_after.back() = true;
            }
        }
    }
    flush();
    return out;
}

const std::set<std::string>& default_stopwords() {
    static const std::set<std::string> words = {
        "a", "about", "above", "after", "again", "against", "all", "am", "an", "and", "any",
        "are", "as", "at", "be", "because", "been", "before", "being", "below", "between",
        "both", "but", "by", "cannot", "could", "did", "do", "does", "doing", "down",
        "during", "each", "few", "for", "from", "further", "had", "has", "have", "having",
        "he", "her", "here", "hers", "herself", "him", "himself", "his", "how", "i", "if",
        "in", "into", "is", "it", "its", "itself", "me", "more", "most", "my", "myself",
        "no", "nor", "not", "of", "off", "on", "once", "only", "or", "other", "ought",
        "our", "ours", "ourselves", "out", "over", "own", "same", "she", "should", "so",
        "some", "such", "than", "that", "the", "their", "theirs", "them", "themselves",
        "then", "there", "these", "they", "this", "those", "through", "to", "too", "under",
        "until", "up", "very", "was", "we", "were", "what", "when", "where", "which",
        "while", "who", "whom", "why", "with", "would", "you", "your", "yours", "yourself",
        "yourselves",
    };
    return words;
}

std::set<std::string> load_stopwords(std::istream& in) {
    std::set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::string folded;
        for (char c : line) {
            folded.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
        out.insert(std::move(folded));
    }
    return out;
}

std::vector<std::string> analyze(std::string_view text, const AnalyzerConfig& config) {
    std::vector<std::string> out;
    for (auto& token : tokenize(text)) {
        if (config.stopwords.contains(token)) {
            continue;
        }
        if (config.stem) {
            bool alpha = true;
            for (char c : token) {
                if (c < 'a' || c > 'z') {
                    alpha = false;
                    break;
                }
            }
            if (alpha) {
                out.push_back(porter_stem(token));
                continue;
            }
        }
        out.push_back(std::move(token));
    }
    return out;
}

} // namespace clinsearch
