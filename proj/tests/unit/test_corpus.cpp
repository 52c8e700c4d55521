#include <doctest.h>

#include <clinsearch/corpus.hpp>
#include <clinsearch/error.hpp>

#include "fixtures.hpp"

#include <fstream>
#include <sstream>

using namespace clinsearch;

TEST_CASE("parse_document fills absent fields with empties") {
    const Document doc = parse_document("#id: D1\n#title: a study\n");
    CHECK(doc.doc_id == "D1");
    CHECK(doc.title == "a study");
    CHECK(doc.abstract_text.empty());
    CHECK(doc.body.empty());
    CHECK(doc.mesh_keywords.empty());
}

TEST_CASE("parse_document transliterates to 7-bit") {
    const Document doc = parse_document("#id: D1\n#title: naïve analysis\n");
    CHECK(doc.title == "naive analysis");
}

TEST_CASE("parse_document format errors") {
    CHECK_THROWS_AS(parse_document("#title: no id\n"), FormatError);
    CHECK_THROWS_AS(parse_document("#id:   \n"), FormatError);
    CHECK_THROWS_AS(parse_document("#id: D1\n#title: a\n#title: b\n"), FormatError);
    CHECK_THROWS_AS(parse_document("stray text\n#id: D1\n"), FormatError);
    CHECK_THROWS_AS(parse_document("#id: D1\n#note: wrong schema\n"), FormatError);
}

TEST_CASE("body runs until the record ends, mesh splits on commas") {
    const Document doc = parse_document(
        "#id: D2\n#mesh: Sepsis, Anti-Bacterial Agents , \n#body: first line\nsecond line\n");
    CHECK(doc.mesh_keywords == std::vector<std::string>{"Sepsis", "Anti-Bacterial Agents"});
    CHECK(doc.body == "first line\nsecond line");
}

TEST_CASE("document parse/serialize round-trip") {
    std::ifstream in(fixtures::data_path("mini/corpus.txt"));
    REQUIRE(in.good());
    auto docs = parse_documents(in);
    CHECK(docs.size() == 100);

    Document multiline;
    multiline.doc_id = "ML1";
    multiline.title = "with body spanning lines";
    multiline.body = "first line\nsecond line\n\nfourth line";
    docs.push_back(multiline);

    std::ostringstream serialized;
    serialize_documents(docs, serialized);
    std::istringstream again(serialized.str());
    CHECK(parse_documents(again) == docs);
}

TEST_CASE("load_topics parses the tagged topic format") {
    std::istringstream in(
        "#topic: 22\n"
        "#type: treatment\n"
        "#summary: 94 M with CAD s/p 4v-CABG, CHF, CRI presented with vfib arrest.\n"
        "---\n"
        "#topic: 23\n"
        "#summary: something else\n");
    const auto topics = load_topics(in);
    REQUIRE(topics.size() == 2);
    CHECK(topics[0].topic_id == 22);
    CHECK(topics[0].type == TopicType::treatment);
    CHECK(topics[0].summary == "94 M with CAD s/p 4v-CABG, CHF, CRI presented with vfib arrest.");
    CHECK(topics[1].type == TopicType::unknown); // defaulted
}

TEST_CASE("load_topics accepts a 30-topic file") {
    std::ostringstream file;
    for (int t = 1; t <= 30; ++t) {
        if (t > 1) file << "---\n";
        file << "#topic: " << t << "\n#type: diagnosis\n#note: case number " << t << "\n";
    }
    std::istringstream in(file.str());
    CHECK(load_topics(in).size() == 30);
}

TEST_CASE("load_topics errors") {
    std::istringstream dup("#topic: 1\n#note: x\n---\n#topic: 1\n#note: y\n");
    CHECK_THROWS_AS(load_topics(dup), FormatError);

    std::istringstream empty_fields("#topic: 1\n#type: test\n");
    CHECK_THROWS_AS(load_topics(empty_fields), FormatError);

    std::istringstream bad_type("#topic: 1\n#type: surgery\n#note: x\n");
    CHECK_THROWS_AS(load_topics(bad_type), FormatError);

    std::istringstream partial("#topic: 1\n#summary: only summary\n");
    CHECK(load_topics(partial).size() == 1); // empty note is fine
}

TEST_CASE("augment_document sets keywords and extracts concepts") {
    std::istringstream lex_in(
        "myocardial infarction|C1|Disease or Syndrome|myocardial infarction\n"
        "boston|C4|Geographic Area|boston\n");
    const auto lexicon = ConceptLexicon::parse(lex_in);

    Document doc;
    doc.doc_id = "D1";
    doc.title = "myocardial infarction in boston";
    doc.body = "recurrent myocardial infarction data";

    KeywordMap keywords;
    keywords["D9"] = {"Sepsis"};
    Document out = augment_document(doc, keywords, lexicon);
    CHECK(out.mesh_keywords.empty()); // absent from the map
    CHECK(out.concept_ids == std::vector<std::string>{"C1"}); // once, disallowed excluded

    keywords["D1"] = {"Myocardial Infarction"};
    out = augment_document(doc, keywords, lexicon);
    CHECK(out.mesh_keywords == std::vector<std::string>{"Myocardial Infarction"});

    // idempotent
    CHECK(augment_document(out, keywords, lexicon) == out);
}

TEST_CASE("augmentation only yields concept ids present in the lexicon") {
    std::ifstream lex_in(fixtures::data_path("mini/lexicon.txt"));
    REQUIRE(lex_in.good());
    const auto lexicon = ConceptLexicon::parse(lex_in);
    std::set<std::string> known;
    for (const auto& e : lexicon.entries()) {
        known.insert(e.concept_id);
    }
    std::ifstream corpus_in(fixtures::data_path("mini/corpus.txt"));
    for (const auto& doc : parse_documents(corpus_in)) {
        const auto augmented = augment_document(doc, {}, lexicon);
        for (const auto& id : augmented.concept_ids) {
            CHECK(known.contains(id));
        }
    }
}

TEST_CASE("corpus rejects duplicate ids") {
    Corpus corpus;
    Document a;
    a.doc_id = "D1";
    corpus.add(a);
    CHECK(corpus.find("D1") != nullptr);
    CHECK(corpus.find("D2") == nullptr);
    CHECK_THROWS_AS(corpus.add(a), FormatError);
}

TEST_CASE("load_corpus concatenates files and rejects cross-file duplicates") {
    fixtures::TempDir tmp("corpus_multi");
    {
        std::ofstream a(tmp.file("a.txt"));
        a << "#id: A1\n#title: first file\n";
        std::ofstream b(tmp.file("b.txt"));
        b << "#id: B1\n#title: second file\n---\n#id: B2\n#title: more\n";
    }
    const Corpus corpus = load_corpus({tmp.file("a.txt"), tmp.file("b.txt")});
    CHECK(corpus.docs.size() == 3);
    CHECK(corpus.docs[0].doc_id == "A1"); // file order preserved
    CHECK(corpus.find("B2") != nullptr);

    {
        std::ofstream c(tmp.file("c.txt"));
        c << "#id: A1\n#title: duplicate across files\n";
    }
    CHECK_THROWS_AS(load_corpus({tmp.file("a.txt"), tmp.file("c.txt")}), FormatError);
    CHECK_THROWS_AS(load_corpus({tmp.file("missing.txt")}), ConfigError);
}

TEST_CASE("keyword map parsing") {
    std::istringstream in("D1|Sepsis, Shock\nD2|\n");
    const auto map = load_keyword_map(in);
    CHECK(map.at("D1") == std::vector<std::string>{"Sepsis", "Shock"});
    CHECK(map.at("D2").empty());

    std::istringstream dup("D1|a\nD1|b\n");
    CHECK_THROWS_AS(load_keyword_map(dup), FormatError);
}
