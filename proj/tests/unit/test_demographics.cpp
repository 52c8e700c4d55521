#include <doctest.h>

#include <clinsearch/demographics.hpp>
#include <clinsearch/error.hpp>

#include "fixtures.hpp"

#include <fstream>
#include <sstream>

using namespace clinsearch;

TEST_CASE("age and gender expressions are rewritten") {
    const auto& rules = DemographicRules::defaults();
    CHECK(normalize_demographics("86 y/o m", rules) == "elderly male");
    CHECK(normalize_demographics("3 y/o f with fever", rules) == "child female with fever");
    CHECK(normalize_demographics("patient with fever", rules) == "patient with fever");
    CHECK(normalize_demographics("45 year old woman", rules) == "middle-aged female");
    // band label alone when no gender token adjoins
    CHECK(normalize_demographics("12 y/o with rash", rules) == "adolescent with rash");
}

TEST_CASE("unmatched text is byte-identical") {
    const auto& rules = DemographicRules::defaults();
    const std::string text = "History:\t86 y/o m; BP 120/80, SpO2 98%.";
    CHECK(normalize_demographics(text, rules) == "History:\telderly male; BP 120/80, SpO2 98%.");
}

TEST_CASE("normalization is idempotent") {
    const auto& rules = DemographicRules::defaults();
    const char* inputs[] = {
        "86 y/o m",      "3 y/o f with fever", "45 year old woman with chest pain",
        "94 M with CAD", "8 months old with cough", "no demographics here",
        "2 y/o boy and 70 yr old f",
    };
    for (const char* text : inputs) {
        const std::string once = normalize_demographics(text, rules);
        CAPTURE(text);
        CHECK(normalize_demographics(once, rules) == once);
    }
}

TEST_CASE("band lookup uses the first band covering the age") {
    const auto& rules = DemographicRules::defaults();
    CHECK(rules.band_label(0.5) == "infant");
    CHECK(rules.band_label(2) == "child");
    CHECK(rules.band_label(17) == "adolescent");
    CHECK(rules.band_label(18) == "adult");
    CHECK(rules.band_label(64) == "middle-aged");
    CHECK(rules.band_label(65) == "elderly");
    CHECK(rules.band_label(120) == "elderly");
}

TEST_CASE("bundled demographic rules file matches the defaults") {
    std::ifstream in(fixtures::data_path("demographics.rules"));
    REQUIRE(in.good());
    const auto rules = DemographicRules::parse(in);
    const auto& defaults = DemographicRules::defaults();
    REQUIRE(rules.bands().size() == defaults.bands().size());
    for (size_t i = 0; i < rules.bands().size(); ++i) {
        CHECK(rules.bands()[i].max_age == defaults.bands()[i].max_age);
        CHECK(rules.bands()[i].label == defaults.bands()[i].label);
    }
    CHECK(rules.gender_map() == defaults.gender_map());
    CHECK(normalize_demographics("86 y/o m", rules) == "elderly male");
}

TEST_CASE("demographic rules validation") {
    std::istringstream no_unbounded("10 child\n64 adult\ngender m male\n");
    CHECK_THROWS_AS(DemographicRules::parse(no_unbounded), FormatError);

    std::istringstream bad_order("64 adult\n10 child\n* elderly\n");
    CHECK_THROWS_AS(DemographicRules::parse(bad_order), FormatError);

    std::istringstream bad_gender("* elderly\ngender m boy\n");
    CHECK_THROWS_AS(DemographicRules::parse(bad_gender), FormatError);
}
