#pragma once

#include "clinsearch/concepts.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace clinsearch {

/// One article with its facet fields. All text is 7-bit after ingestion.
struct Document {
    std::string doc_id;
    std::string title;
    std::string abstract_text;
    std::string body;
    std::vector<std::string> mesh_keywords;
    std::vector<std::string> concept_ids;

    bool operator==(const Document&) const = default;
};

enum class TopicType { treatment, diagnosis, test, unknown };
enum class TopicField { note, desc, sum };

/// One clinical case with three verbosity levels of the same question.
struct Topic {
    int topic_id = 0;
    std::string note;
    std::string description;
    std::string summary;
    TopicType type = TopicType::unknown;

    bool operator==(const Topic&) const = default;
};

std::string_view to_string(TopicType t);
std::optional<TopicType> topic_type_from_string(std::string_view s);
std::string_view to_string(TopicField f);
std::optional<TopicField> topic_field_from_string(std::string_view s);
std::string_view field_text(const Topic& topic, TopicField field);

/// Tagged record format: records separated by `---` lines; tags #id: #title:
/// #abstract: #body: #mesh: each start a line and run until the next tag.
/// Non-ASCII characters are transliterated or dropped on ingestion.
Document parse_document(std::string_view record);
std::vector<Document> parse_documents(std::istream& in);
void serialize_document(const Document& doc, std::ostream& out);
void serialize_documents(const std::vector<Document>& docs, std::ostream& out);

/// Topic records use #topic: #type: #note: #desc: #summary:.
std::vector<Topic> load_topics(std::istream& in);

/// `doc_id|kw1,kw2` lines.
using KeywordMap = std::unordered_map<std::string, std::vector<std::string>>;
KeywordMap load_keyword_map(std::istream& in);

/// Sets mesh_keywords from the map (empty when the doc id is absent) and
/// fills concept_ids by running concept extraction over title, abstract and
/// body. Idempotent.
Document augment_document(Document doc, const KeywordMap& keywords, const ConceptLexicon& lexicon);

struct Corpus {
    std::vector<Document> docs;
    std::unordered_map<std::string, size_t> by_id;

    const Document* find(std::string_view doc_id) const;
    void add(Document doc); ///< throws FormatError on duplicate ids
};

Corpus load_corpus(const std::vector<std::string>& paths);

} // namespace clinsearch
