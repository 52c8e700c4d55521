#include "clinsearch/demographics.hpp"

#include "clinsearch/error.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <limits>
#include <sstream>

namespace clinsearch {

namespace {

std::string fold_lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

std::string gender_alternation(const std::map<std::string, std::string>& genders) {
    std::vector<std::string> keys;
    keys.reserve(genders.size());
    for (const auto& [token, label] : genders) {
        keys.push_back(token);
    }
    // longer tokens first so the regex alternation prefers them
    std::sort(keys.begin(), keys.end(), [](const std::string& a, const std::string& b) {
        return a.size() != b.size() ? a.size() > b.size() : a < b;
    });
    std::string alt;
    for (const auto& k : keys) {
        if (!alt.empty()) alt.push_back('|');
        alt += k;
    }
    return alt;
}

} // namespace

DemographicRules::DemographicRules(std::vector<AgeBand> bands,
                                   std::map<std::string, std::string> genders)
    : bands_(std::move(bands)), genders_(std::move(genders)) {
    if (bands_.empty()) {
        throw ConfigError("demographic rules need at least one age band");
    }
    for (size_t i = 0; i + 1 < bands_.size(); ++i) {
        if (!(bands_[i].max_age < bands_[i + 1].max_age)) {
            throw ConfigError("demographic age bands must have increasing bounds");
        }
    }
    if (bands_.back().max_age != std::numeric_limits<double>::infinity()) {
        throw ConfigError("the last demographic age band must be unbounded ('*')");
    }
    for (const auto& [token, label] : genders_) {
        if (label != "male" && label != "female") {
            throw ConfigError("gender label must be 'male' or 'female', got '" + label + "'");
        }
    }

    const std::string g = gender_alternation(genders_);
    const auto flags = std::regex::ECMAScript | std::regex::icase | std::regex::optimize;
    // Applied in order; at equal match positions the earlier pattern wins.
    patterns_.push_back({std::regex(R"((\d{1,3})\s*-?\s*(?:y\s*/\s*o|y\.o\.|yo\b)(?:[\s,]*\b()" + g + R"()\b)?)", flags), false});
    patterns_.push_back({std::regex(R"((\d{1,3})[\s-]*(?:years?|yrs?)[\s-]*old\b(?:[\s,]*\b()" + g + R"()\b)?)", flags), false});
    patterns_.push_back({std::regex(R"((\d{1,3})[\s-]*(?:months?|mos?)[\s-]*old\b(?:[\s,]*\b()" + g + R"()\b)?)", flags), true});
    patterns_.push_back({std::regex(R"((\d{1,3})[\s-]+\b()" + g + R"()\b)", flags), false});
}

const DemographicRules& DemographicRules::defaults() {
    static const DemographicRules rules(
        {
            {1, "infant"},
            {11, "child"},
            {17, "adolescent"},
            {39, "adult"},
            {64, "middle-aged"},
            {std::numeric_limits<double>::infinity(), "elderly"},
        },
        {
            {"m", "male"}, {"male", "male"}, {"man", "male"}, {"boy", "male"},
            {"f", "female"}, {"female", "female"}, {"woman", "female"}, {"girl", "female"},
        });
    return rules;
}

DemographicRules DemographicRules::parse(std::istream& in) {
    std::vector<AgeBand> bands;
    std::map<std::string, std::string> genders;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first) || first.front() == '#') {
            continue;
        }
        if (first == "gender") {
            std::string token, label, extra;
            if (!(ls >> token >> label) || (ls >> extra)) {
                throw FormatError("demographic rules line " + std::to_string(line_no) +
                                  ": expected 'gender <token> <label>'");
            }
            genders[fold_lower(token)] = fold_lower(label);
        } else {
            std::string label, extra;
            if (!(ls >> label) || (ls >> extra)) {
                throw FormatError("demographic rules line " + std::to_string(line_no) +
                                  ": expected '<maxage> <label>'");
            }
            double max_age = 0;
            if (first == "*") {
                max_age = std::numeric_limits<double>::infinity();
            } else {
                try {
                    max_age = std::stod(first);
                } catch (const std::exception&) {
                    throw FormatError("demographic rules line " + std::to_string(line_no) +
                                      ": bad max age '" + first + "'");
                }
            }
            bands.push_back({max_age, fold_lower(label)});
        }
    }
    try {
        return DemographicRules(std::move(bands), std::move(genders));
    } catch (const ConfigError& e) {
        throw FormatError(std::string("demographic rules: ") + e.what());
    }
}

const std::string& DemographicRules::band_label(double age_years) const {
    for (const auto& band : bands_) {
        if (age_years <= band.max_age) {
            return band.label;
        }
    }
    return bands_.back().label;
}

std::string normalize_demographics(std::string_view text, const DemographicRules& rules) {
    std::string out;
    out.reserve(text.size());
    size_t pos = 0;
    const std::string input(text);
    while (pos < input.size()) {
        size_t best_begin = std::string::npos;
        size_t best_pattern = 0;
        std::smatch best_match;
        for (size_t p = 0; p < rules.patterns_.size(); ++p) {
            std::smatch m;
            if (!std::regex_search(input.cbegin() + static_cast<std::ptrdiff_t>(pos), input.cend(), m,
                                   rules.patterns_[p].re)) {
                continue;
            }
            const size_t begin = pos + static_cast<size_t>(m.position(0));
            if (begin < best_begin) {
                best_begin = begin;
                best_pattern = p;
                best_match = m;
            }
        }
        if (best_begin == std::string::npos) {
            out.append(input, pos, std::string::npos);
            break;
        }
        out.append(input, pos, best_begin - pos);
        double age = std::stod(best_match[1].str());
        if (rules.patterns_[best_pattern].age_in_months) {
            age /= 12.0;
        }
        out.append(rules.band_label(age));
        if (best_match.size() > 2 && best_match[2].matched) {
            out.push_back(' ');
            out.append(rules.gender_map().at(fold_lower(best_match[2].str())));
        }
        pos = best_begin + static_cast<size_t>(best_match.length(0));
    }
    return out;
}

} // namespace clinsearch
