#include <doctest.h>

#include <clinsearch/error.hpp>
#include <clinsearch/expansion.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace clinsearch;

namespace {

Document make_doc(std::string id, std::string title, std::string body = "") {
    Document doc;
    doc.doc_id = std::move(id);
    doc.title = std::move(title);
    doc.body = std::move(body);
    return doc;
}

struct Fixture {
    Corpus corpus;
    InvertedIndex index;

    explicit Fixture(std::vector<Document> docs) {
        for (auto& doc : docs) {
            corpus.add(std::move(doc));
        }
        index = InvertedIndex::build(corpus.docs, AnalyzerConfig{});
    }
};

std::vector<std::string> doc_order(const std::vector<ScoredDoc>& ranked) {
    std::vector<std::string> out;
    for (const auto& sd : ranked) {
        out.push_back(sd.doc_id);
    }
    return out;
}

} // namespace

TEST_CASE("feedback term selection") {
    Fixture fx({
        make_doc("D1", "sepsis", "sepsis"),
        make_doc("D2", "sepsis", "sepsis sepsis"),
        make_doc("D3", "fever cough", "fever lactate lactate"),
    });

    SUBCASE("a single shared term tops the list with score 1") {
        const std::vector<const Document*> docs = {fx.corpus.find("D1"), fx.corpus.find("D2")};
        const auto selected = select_feedback_terms(docs, 5, {}, fx.index);
        REQUIRE(!selected.empty());
        CHECK(selected[0].first == "sepsi");
        CHECK(selected[0].second == doctest::Approx(1.0));
    }

    SUBCASE("excluded terms never return") {
        const std::vector<const Document*> docs = {fx.corpus.find("D3")};
        const auto selected = select_feedback_terms(docs, 10, {"fever"}, fx.index);
        for (const auto& [term, score] : selected) {
            CHECK(term != "fever");
        }
    }

    SUBCASE("ordering matches the exhaustive tf x idf computation") {
        const std::vector<const Document*> docs = {fx.corpus.find("D1"), fx.corpus.find("D2"),
                                                   fx.corpus.find("D3")};
        // oracle: recompute sum_d tf * idf_all per candidate term
        std::map<std::string, double> expected;
        for (const auto* doc : docs) {
            std::map<std::string, int> tf;
            for (const std::string* text : {&doc->title, &doc->abstract_text, &doc->body}) {
                for (const auto& t : analyze(*text, fx.index.analyzer())) {
                    ++tf[t];
                }
            }
            for (const auto& [term, count] : tf) {
                const double df = fx.index.df(Facet::all, term);
                expected[term] += count * std::log(1.0 + (3.0 - df + 0.5) / (df + 0.5));
            }
        }
        std::vector<std::pair<std::string, double>> sorted(expected.begin(), expected.end());
        std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
        const auto got = select_feedback_terms(docs, 3, {}, fx.index);
        REQUIRE(got.size() == 3);
        for (size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].first == sorted[i].first);
            CHECK(got[i].second ==
                  doctest::Approx(sorted[i].second / sorted[0].second).epsilon(1e-12));
        }
    }

    SUBCASE("empty inputs give empty results") {
        CHECK(select_feedback_terms({}, 5, {}, fx.index).empty());
        CHECK(select_feedback_terms({fx.corpus.find("D1")}, 0, {}, fx.index).empty());
    }
}

TEST_CASE("PRF appends weighted terms after the originals") {
    Fixture fx({
        make_doc("D1", "sepsis treatment", "sepsis lactate antibiotics"),
        make_doc("D2", "lactate clearance", "lactate levels in shock"),
        make_doc("D3", "unrelated", "gardening"),
    });
    const QueryRep query = build_query("sepsis", fx.index.analyzer());
    ExpansionParams params;
    params.feedback_docs = 2;
    params.expansion_terms = 3;
    params.lambda = 0.5;

    const QueryRep expanded =
        expand_prf(query, fx.index, fx.corpus, FacetWeights::baseline(), RankingParams{}, params);
    REQUIRE(expanded.terms.size() > query.terms.size());
    for (size_t i = 0; i < query.terms.size(); ++i) {
        CHECK(expanded.terms[i] == query.terms[i]); // original prefix intact
    }
    for (size_t i = query.terms.size(); i < expanded.terms.size(); ++i) {
        CHECK(expanded.terms[i].weight <= 0.5 + 1e-12);
        CHECK(expanded.terms[i].term != "sepsi"); // excluded original
    }
    CHECK(expanded.trace == std::vector<std::string>{"prf"});

    // purity: the same inputs give the same expansion
    CHECK(expand_prf(query, fx.index, fx.corpus, FacetWeights::baseline(), RankingParams{},
                     params) == expanded);
}

TEST_CASE("PRF with lambda 0 does not change the ranking") {
    const auto docs = fixtures::make_corpus(50, 77);
    Fixture fx(docs);
    const QueryRep query = build_query("sepsis fever pain", fx.index.analyzer());
    ExpansionParams params;
    params.lambda = 0.0;
    const QueryRep expanded =
        expand_prf(query, fx.index, fx.corpus, FacetWeights::baseline(), RankingParams{}, params);
    const auto base = search(fx.index, query, FacetWeights::baseline(), RankingParams{});
    const auto after = search(fx.index, expanded, FacetWeights::baseline(), RankingParams{});
    REQUIRE(base.size() == after.size());
    for (size_t i = 0; i < base.size(); ++i) {
        CHECK(base[i].doc_id == after[i].doc_id);
        CHECK(base[i].score == after[i].score); // +0 exactly
    }
}

TEST_CASE("PRF pulls a synonym document up, verified by brute-force scoring") {
    Fixture fx({
        make_doc("D1", "sepsis care", "sepsis bacteremia bacteremia bacteremia bacteremia"),
        make_doc("D2", "bacteremia outcomes", "bacteremia in adults"),
        make_doc("D3", "orthopedic surgery", "knee replacement"),
    });
    const QueryRep query = build_query("sepsis", fx.index.analyzer());
    ExpansionParams params;
    params.feedback_docs = 1; // only D1 feeds back
    params.expansion_terms = 2;
    params.lambda = 1.0;
    const QueryRep expanded =
        expand_prf(query, fx.index, fx.corpus, FacetWeights::baseline(), RankingParams{}, params);

    const auto got = search(fx.index, expanded, FacetWeights::baseline(), RankingParams{});
    const auto expected = oracles::brute_force_search(fx.corpus.docs, expanded,
                                                      FacetWeights::baseline(), RankingParams{},
                                                      fx.index.analyzer());
    CHECK(doc_order(got) == doc_order(expected));
    // the bacteremia-only document is now retrieved
    bool found = false;
    for (const auto& sd : got) {
        if (sd.doc_id == "D2") {
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("PRF with zero expansion terms is the identity on ranking") {
    const auto docs = fixtures::make_corpus(40, 41);
    Fixture fx(docs);
    const QueryRep query = build_query("chronic cardiac failure", fx.index.analyzer());
    ExpansionParams params;
    params.expansion_terms = 0;
    const QueryRep expanded =
        expand_prf(query, fx.index, fx.corpus, FacetWeights::baseline(), RankingParams{}, params);
    CHECK(expanded.terms == query.terms);
    const auto base = search(fx.index, query, FacetWeights::baseline(), RankingParams{});
    const auto after = search(fx.index, expanded, FacetWeights::baseline(), RankingParams{});
    CHECK(base == after);
}

TEST_CASE("PRF feedback depth beyond the corpus size is not an error") {
    Fixture fx({make_doc("D1", "fever", "fever")});
    const QueryRep query = build_query("fever", fx.index.analyzer());
    ExpansionParams params;
    params.feedback_docs = 50;
    CHECK_NOTHROW(expand_prf(query, fx.index, fx.corpus, FacetWeights::baseline(),
                             RankingParams{}, params));
}

TEST_CASE("RF restricts feedback to judged-relevant documents") {
    Fixture fx({
        make_doc("D1", "sepsis", "sepsis lactate"),
        make_doc("D2", "sepsis", "sepsis gardening"),
        make_doc("D3", "noise", "noise"),
    });
    const QueryRep query = build_query("sepsis", fx.index.analyzer());
    ExpansionParams params;
    params.expansion_terms = 4;
    params.lambda = 1.0;

    SampledQrels qrels;
    Stratum stratum;
    stratum.stratum_id = 1;
    stratum.judged = {{"D1", 2}, {"D2", 0}};
    stratum.pool_members = {"D1", "D2"};
    stratum.pool_size = 2;
    TopicJudgments tj;
    tj.strata.push_back(stratum);
    qrels.topics.emplace(7, tj);

    const QueryRep expanded = expand_rf(query, 7, fx.index, fx.corpus, FacetWeights::baseline(),
                                        RankingParams{}, qrels, params);
    // expansion terms come from D1 only: "gardening" (D2) must not appear
    bool has_lactate = false;
    for (const auto& term : expanded.terms) {
        CHECK(term.term != "garden");
        if (term.term == "lactat") {
            has_lactate = true;
        }
    }
    CHECK(has_lactate);
    CHECK(expanded.trace == std::vector<std::string>{"rf"});

    SUBCASE("no judged-relevant docs leaves the query unchanged") {
        SampledQrels none;
        Stratum s;
        s.stratum_id = 1;
        s.judged = {{"D1", 0}};
        s.pool_members = {"D1"};
        s.pool_size = 1;
        TopicJudgments t;
        t.strata.push_back(s);
        none.topics.emplace(7, t);
        CHECK(expand_rf(query, 7, fx.index, fx.corpus, FacetWeights::baseline(), RankingParams{},
                        none, params) == query);
    }

    SUBCASE("all top docs relevant makes RF equal PRF") {
        SampledQrels all;
        Stratum s;
        s.stratum_id = 1;
        s.judged = {{"D1", 1}, {"D2", 1}, {"D3", 1}};
        s.pool_members = {"D1", "D2", "D3"};
        s.pool_size = 3;
        TopicJudgments t;
        t.strata.push_back(s);
        all.topics.emplace(7, t);
        const auto rf = expand_rf(query, 7, fx.index, fx.corpus, FacetWeights::baseline(),
                                  RankingParams{}, all, params);
        auto prf = expand_prf(query, fx.index, fx.corpus, FacetWeights::baseline(),
                              RankingParams{}, params);
        prf.trace = rf.trace; // identical terms, different stage label
        CHECK(rf == prf);
    }
}

TEST_CASE("embedding expansion") {
    EmbeddingTable table;
    table.insert("sepsis", {1.0, 0.0, 0.05});
    table.insert("infection", {0.98, 0.0, 0.1});
    table.insert("bacteremia", {0.95, 0.1, 0.0});
    table.insert("fever", {0.0, 1.0, 0.0});
    table.insert("pyrexia", {0.05, 0.98, 0.0});
    const AnalyzerConfig analyzer;

    SUBCASE("neighbors match the exhaustive cosine oracle") {
        QueryRep query = build_query("sepsis", analyzer);
        ExpansionParams params;
        params.lambda = 0.4;
        const QueryRep expanded = expand_embeddings(query, table, analyzer, params);
        // oracle: cosine neighbours of "sepsis" above 0.6, top 3
        const auto nbrs = table.neighbors("sepsis", 3, 0.6);
        REQUIRE(nbrs.size() == 2);
        std::vector<std::string> appended(expanded.surface_words.begin() + 1,
                                          expanded.surface_words.end());
        std::vector<std::string> expected;
        for (const auto& [w, sim] : nbrs) {
            expected.push_back(w);
        }
        CHECK(appended == expected);
        CHECK(expanded.trace == std::vector<std::string>{"embeddings"});
    }

    SUBCASE("unknown words add nothing") {
        QueryRep query = build_query("gardening", analyzer);
        const QueryRep expanded = expand_embeddings(query, table, analyzer, ExpansionParams{});
        CHECK(expanded.terms == query.terms);
        CHECK(expanded.surface_words == query.surface_words);
    }

    SUBCASE("the distinct word cap stops expansion") {
        // a query of 38 distinct words; cap 40 leaves room for 2 additions
        std::string text;
        for (int i = 0; i < 37; ++i) {
            text += "w" + std::to_string(i) + " ";
        }
        text += "sepsis"; // word 38 with in-vocabulary neighbours
        QueryRep query = build_query(text, analyzer);
        REQUIRE(query.surface_words.size() == 38);
        ExpansionParams params;
        params.max_neighbors_per_word = 3;
        const QueryRep expanded = expand_embeddings(query, table, analyzer, params);
        CHECK(expanded.surface_words.size() <= 40);
        CHECK(expanded.surface_words.size() - query.surface_words.size() <= 2);
    }

    SUBCASE("a query already at the cap gains nothing") {
        std::string text = "sepsis fever";
        for (int i = 0; i < 45; ++i) {
            text += " w" + std::to_string(i);
        }
        QueryRep query = build_query(text, analyzer);
        REQUIRE(query.surface_words.size() == 47);
        const QueryRep expanded = expand_embeddings(query, table, analyzer, ExpansionParams{});
        CHECK(expanded.surface_words.size() == query.surface_words.size());
        CHECK(expanded.terms == query.terms);
    }

    SUBCASE("repeated expansion with the same inputs is identical") {
        QueryRep query = build_query("sepsis fever", analyzer);
        ExpansionParams params;
        const auto a = expand_embeddings(query, table, analyzer, params);
        const auto b = expand_embeddings(query, table, analyzer, params);
        CHECK(a == b);
    }
}

TEST_CASE("concept expansion appends names and concept-facet ids") {
    std::istringstream lex_in(
        "myocardial infarction|C1|Disease or Syndrome|myocardial infarction\n"
        "boston|C4|Geographic Area|boston\n");
    const auto lexicon = ConceptLexicon::parse(lex_in);
    const AnalyzerConfig analyzer;
    const QueryRep query = build_query("chest pain", analyzer);

    SUBCASE("no lexicon match leaves terms unchanged") {
        const auto expanded = expand_concepts(query, "nothing to see", lexicon, 0.5, analyzer);
        CHECK(expanded.terms == query.terms);
        CHECK(expanded.trace == std::vector<std::string>{"concepts"});
    }

    SUBCASE("a match appends name tokens once plus the restricted id") {
        const auto expanded = expand_concepts(
            query, "myocardial infarction after myocardial infarction in boston", lexicon, 0.5,
            analyzer);
        REQUIRE(expanded.terms.size() == query.terms.size() + 3);
        CHECK(expanded.terms[2].term == "myocardi");
        CHECK(expanded.terms[3].term == "infarct");
        CHECK(expanded.terms[4].term == "C1");
        CHECK(expanded.terms[4].facet == Facet::concepts);
        for (size_t i = 2; i < expanded.terms.size(); ++i) {
            CHECK(expanded.terms[i].weight == 0.5);
        }
    }

    SUBCASE("PRF then concepts composes with both trace labels") {
        Fixture fx({make_doc("D1", "myocardial infarction", "chest pain study")});
        ExpansionParams params;
        params.expansion_terms = 2;
        const auto prf = expand_prf(query, fx.index, fx.corpus, FacetWeights::baseline(),
                                    RankingParams{}, params);
        const auto both =
            expand_concepts(prf, "myocardial infarction", lexicon, 0.5, analyzer);
        CHECK(both.trace == std::vector<std::string>{"prf", "concepts"});
        for (size_t i = 0; i < query.terms.size(); ++i) {
            CHECK(both.terms[i] == query.terms[i]);
        }
    }
}

TEST_CASE("expansion parameter validation") {
    ExpansionParams params;
    params.lambda = 1.5;
    CHECK_THROWS_AS(params.validate(), ConfigError);
    params = {};
    params.feedback_docs = 0;
    CHECK_THROWS_AS(params.validate(), ConfigError);
    params = {};
    params.query_word_cap = 0;
    CHECK_THROWS_AS(params.validate(), ConfigError);
}

TEST_CASE("field-specific lambda defaults") {
    CHECK(default_expansion_lambda(TopicField::note) == doctest::Approx(0.9));
    CHECK(default_expansion_lambda(TopicField::desc) == doctest::Approx(0.8));
    CHECK(default_expansion_lambda(TopicField::sum) == doctest::Approx(0.2));
}
