#include "clinsearch/corpus.hpp"

#include "clinsearch/error.hpp"
#include "clinsearch/text.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace clinsearch {

namespace {

std::string trim(std::string_view s) {
    size_t begin = 0;
    size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return std::string(s.substr(begin, end - begin));
}

bool is_record_separator(std::string_view line) {
    return trim(line) == "---";
}

// Splits a stream into `---`-separated records; blank-only records dropped.
std::vector<std::string> split_records(std::istream& in) {
    std::vector<std::string> records;
    std::string current;
    std::string line;
    auto flush = [&] {
        if (!trim(current).empty()) {
            records.push_back(current);
        }
        current.clear();
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (is_record_separator(line)) {
            flush();
        } else {
            current += line;
            current.push_back('\n');
        }
    }
    flush();
    return records;
}

// A tag line is `#<lowercase word>:`; returns the tag name or empty.
std::string_view tag_of(std::string_view line) {
    if (line.empty() || line.front() != '#') {
        return {};
    }
    size_t i = 1;
    while (i < line.size() && line[i] >= 'a' && line[i] <= 'z') ++i;
    if (i == 1 || i >= line.size() || line[i] != ':') {
        return {};
    }
    return line.substr(1, i - 1);
}

struct TaggedRecord {
    std::vector<std::pair<std::string, std::string>> fields; // tag -> trimmed value
};

TaggedRecord parse_tagged(std::string_view record, const std::vector<std::string_view>& known_tags,
                          const char* what) {
    TaggedRecord out;
    std::unordered_set<std::string> seen;
    std::string current_tag;
    std::string current_value;
    auto flush = [&] {
        if (!current_tag.empty()) {
            out.fields.emplace_back(current_tag, trim(current_value));
        }
        current_tag.clear();
        current_value.clear();
    };
    size_t pos = 0;
    while (pos <= record.size()) {
        const size_t nl = record.find('\n', pos);
        const std::string_view line =
            record.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? record.size() + 1 : nl + 1;

        const std::string_view tag = tag_of(line);
        if (!tag.empty()) {
            if (std::find(known_tags.begin(), known_tags.end(), tag) == known_tags.end()) {
                throw FormatError(std::string(what) + ": unknown tag #" + std::string(tag) + ":");
            }
            if (!seen.insert(std::string(tag)).second) {
                throw FormatError(std::string(what) + ": repeated tag #" + std::string(tag) + ":");
            }
            flush();
            current_tag = std::string(tag);
            current_value = std::string(line.substr(tag.size() + 2));
        } else if (!current_tag.empty()) {
            current_value.push_back('\n');
            current_value.append(line);
        } else if (!trim(line).empty()) {
            throw FormatError(std::string(what) + ": content before the first tag");
        }
    }
    flush();
    return out;
}

std::vector<std::string> split_commas(std::string_view value) {
    std::vector<std::string> out;
    size_t start = 0;
    while (start <= value.size()) {
        const size_t comma = value.find(',', start);
        const std::string item =
            trim(value.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                     : comma - start));
        if (!item.empty()) {
            out.push_back(item);
        }
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

} // namespace

std::string_view to_string(TopicType t) {
    switch (t) {
        case TopicType::treatment: return "treatment";
        case TopicType::diagnosis: return "diagnosis";
        case TopicType::test: return "test";
        case TopicType::unknown: return "unknown";
    }
    return "unknown";
}

std::optional<TopicType> topic_type_from_string(std::string_view s) {
    if (s == "treatment") return TopicType::treatment;
    if (s == "diagnosis") return TopicType::diagnosis;
    if (s == "test") return TopicType::test;
    if (s == "unknown") return TopicType::unknown;
    return std::nullopt;
}

std::string_view to_string(TopicField f) {
    switch (f) {
        case TopicField::note: return "note";
        case TopicField::desc: return "desc";
        case TopicField::sum: return "sum";
    }
    return "sum";
}

std::optional<TopicField> topic_field_from_string(std::string_view s) {
    if (s == "note") return TopicField::note;
    if (s == "desc") return TopicField::desc;
    if (s == "sum" || s == "summary") return TopicField::sum;
    return std::nullopt;
}

std::string_view field_text(const Topic& topic, TopicField field) {
    switch (field) {
        case TopicField::note: return topic.note;
        case TopicField::desc: return topic.description;
        case TopicField::sum: return topic.summary;
    }
    return topic.summary;
}

Document parse_document(std::string_view record) {
    static const std::vector<std::string_view> tags = {"id", "title", "abstract", "body", "mesh"};
    const std::string ascii = transliterate_ascii(record);
    const TaggedRecord rec = parse_tagged(ascii, tags, "document");
    Document doc;
    for (const auto& [tag, value] : rec.fields) {
        if (tag == "id") {
            doc.doc_id = value;
        } else if (tag == "title") {
            doc.title = value;
        } else if (tag == "abstract") {
            doc.abstract_text = value;
        } else if (tag == "body") {
            doc.body = value;
        } else if (tag == "mesh") {
            doc.mesh_keywords = split_commas(value);
        }
    }
    if (doc.doc_id.empty()) {
        throw FormatError("document: missing or empty #id: tag");
    }
    return doc;
}

std::vector<Document> parse_documents(std::istream& in) {
    std::vector<Document> out;
    for (const auto& record : split_records(in)) {
        out.push_back(parse_document(record));
    }
    return out;
}

void serialize_document(const Document& doc, std::ostream& out) {
    out << "#id: " << doc.doc_id << "\n";
    if (!doc.title.empty()) out << "#title: " << doc.title << "\n";
    if (!doc.abstract_text.empty()) out << "#abstract: " << doc.abstract_text << "\n";
    if (!doc.mesh_keywords.empty()) {
        out << "#mesh: ";
        for (size_t i = 0; i < doc.mesh_keywords.size(); ++i) {
            if (i > 0) out << ", ";
            out << doc.mesh_keywords[i];
        }
        out << "\n";
    }
    if (!doc.body.empty()) out << "#body: " << doc.body << "\n";
}

void serialize_documents(const std::vector<Document>& docs, std::ostream& out) {
    for (size_t i = 0; i < docs.size(); ++i) {
        if (i > 0) out << "---\n";
        serialize_document(docs[i], out);
    }
}

std::vector<Topic> load_topics(std::istream& in) {
    static const std::vector<std::string_view> tags = {"topic", "type", "note", "desc", "summary"};
    std::vector<Topic> out;
    std::unordered_set<int> ids;
    for (const auto& record : split_records(in)) {
        const std::string ascii = transliterate_ascii(record);
        const TaggedRecord rec = parse_tagged(ascii, tags, "topic");
        Topic topic;
        bool has_id = false;
        for (const auto& [tag, value] : rec.fields) {
            if (tag == "topic") {
                try {
                    size_t used = 0;
                    topic.topic_id = std::stoi(value, &used);
                    if (used != value.size() || topic.topic_id <= 0) {
                        throw std::invalid_argument(value);
                    }
                } catch (const std::exception&) {
                    throw FormatError("topic: bad #topic: id '" + value + "'");
                }
                has_id = true;
            } else if (tag == "type") {
                const auto type = topic_type_from_string(value);
                if (!type) {
                    throw FormatError("topic: bad #type: '" + value + "'");
                }
                topic.type = *type;
            } else if (tag == "note") {
                topic.note = value;
            } else if (tag == "desc") {
                topic.description = value;
            } else if (tag == "summary") {
                topic.summary = value;
            }
        }
        if (!has_id) {
            throw FormatError("topic: missing #topic: tag");
        }
        if (topic.note.empty() && topic.description.empty() && topic.summary.empty()) {
            throw FormatError("topic " + std::to_string(topic.topic_id) +
                              ": all three text fields are empty");
        }
        if (!ids.insert(topic.topic_id).second) {
            throw FormatError("topic: duplicate topic id " + std::to_string(topic.topic_id));
        }
        out.push_back(std::move(topic));
    }
    return out;
}

KeywordMap load_keyword_map(std::istream& in) {
    KeywordMap out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (trim(line).empty() || line.front() == '#') {
            continue;
        }
        const size_t bar = line.find('|');
        if (bar == std::string::npos) {
            throw FormatError("keyword map line " + std::to_string(line_no) +
                              ": expected 'doc_id|kw1,kw2'");
        }
        const std::string id = trim(line.substr(0, bar));
        if (id.empty()) {
            throw FormatError("keyword map line " + std::to_string(line_no) + ": empty doc id");
        }
        if (!out.emplace(id, split_commas(line.substr(bar + 1))).second) {
            throw FormatError("keyword map line " + std::to_string(line_no) +
                              ": duplicate doc id '" + id + "'");
        }
    }
    return out;
}

Document augment_document(Document doc, const KeywordMap& keywords, const ConceptLexicon& lexicon) {
    const auto it = keywords.find(doc.doc_id);
    doc.mesh_keywords = it != keywords.end() ? it->second : std::vector<std::string>{};
    doc.concept_ids.clear();
    std::unordered_set<std::string> seen;
    for (const std::string* text : {&doc.title, &doc.abstract_text, &doc.body}) {
        for (const auto& match : extract_concepts(*text, lexicon)) {
            if (seen.insert(match.concept_id).second) {
                doc.concept_ids.push_back(match.concept_id);
            }
        }
    }
    return doc;
}

const Document* Corpus::find(std::string_view doc_id) const {
    const auto it = by_id.find(std::string(doc_id));
    return it == by_id.end() ? nullptr : &docs[it->second];
}

void Corpus::add(Document doc) {
    if (!by_id.emplace(doc.doc_id, docs.size()).second) {
        throw FormatError("corpus: duplicate doc id '" + doc.doc_id + "'");
    }
    docs.push_back(std::move(doc));
}

Corpus load_corpus(const std::vector<std::string>& paths) {
    Corpus corpus;
    for (const auto& path : paths) {
        std::ifstream in(path);
        if (!in) {
            throw ConfigError("cannot open corpus file '" + path + "'");
        }
        for (auto& doc : parse_documents(in)) {
            corpus.add(std::move(doc));
        }
    }
    return corpus;
}

} // namespace clinsearch
