#pragma once

#include <iosfwd>
#include <map>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace clinsearch {

struct AgeBand {
    double max_age; ///< inclusive upper bound in years; infinity for the last band
    std::string label;
};

/// Rule-based age/gender rewriting ("86 y/o m" -> "elderly male").
///
/// Age bands and the gender vocabulary come from a rules file with
/// `<maxage> <label>` lines (`*` for the unbounded last band) and
/// `gender <token> <label>` lines. The surface patterns that recognise age
/// expressions are fixed, applied in order, first match wins.
class DemographicRules {
public:
    DemographicRules(std::vector<AgeBand> bands, std::map<std::string, std::string> genders);

    static const DemographicRules& defaults();
    static DemographicRules parse(std::istream& in);

    const std::vector<AgeBand>& bands() const { return bands_; }
    const std::map<std::string, std::string>& gender_map() const { return genders_; }
    const std::string& band_label(double age_years) const;

private:
    struct Pattern {
        std::regex re;
        bool age_in_months;
    };

    std::vector<AgeBand> bands_;
    std::map<std::string, std::string> genders_; // token -> "male"/"female"
    std::vector<Pattern> patterns_;

    friend std::string normalize_demographics(std::string_view, const DemographicRules&);
};

/// Replaces each age/gender expression with "<band-label> <gender-word>"
/// (band label alone when no gender token adjoins); all other text is
/// byte-identical. Idempotent.
std::string normalize_demographics(std::string_view text, const DemographicRules& rules);

} // namespace clinsearch
