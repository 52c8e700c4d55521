#include "clinsearch/index.hpp"

#include "clinsearch/error.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_set>

namespace clinsearch {

namespace {

constexpr char kMagic[8] = {'C', 'L', 'S', 'I', 'D', 'X', '0', '1'};

void put_u8(std::ostream& out, uint8_t v) { out.put(static_cast<char>(v)); }

void put_u32(std::ostream& out, uint32_t v) {
    char buf[4];
    for (int i = 0; i < 4; ++i) {
        buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    }
    out.write(buf, 4);
}

void put_u64(std::ostream& out, uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) {
        buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    }
    out.write(buf, 8);
}

void put_str(std::ostream& out, std::string_view s) {
    put_u32(out, static_cast<uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

uint8_t get_u8(std::istream& in) {
    const int c = in.get();
    if (c == EOF) {
        throw FormatError("index file: truncated");
    }
    return static_cast<uint8_t>(c);
}

uint32_t get_u32(std::istream& in) {
    char buf[4];
    if (!in.read(buf, 4)) {
        throw FormatError("index file: truncated");
    }
    uint32_t v = 0;
    for (int i = 3; i >= 0; --i) {
        v = (v << 8) | static_cast<uint8_t>(buf[i]);
    }
    return v;
}

uint64_t get_u64(std::istream& in) {
    char buf[8];
    if (!in.read(buf, 8)) {
        throw FormatError("index file: truncated");
    }
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) {
        v = (v << 8) | static_cast<uint8_t>(buf[i]);
    }
    return v;
}

std::string get_str(std::istream& in) {
    const uint32_t len = get_u32(in);
    std::string s(len, '\0');
    if (len > 0 && !in.read(s.data(), len)) {
        throw FormatError("index file: truncated");
    }
    return s;
}

} // namespace

std::string_view to_string(Facet f) {
    switch (f) {
        case Facet::title: return "title";
        case Facet::abstract: return "abstract";
        case Facet::body: return "body";
        case Facet::mesh: return "mesh";
        case Facet::concepts: return "concepts";
        case Facet::all: return "all";
    }
    return "all";
}

std::optional<Facet> facet_from_string(std::string_view s) {
    for (Facet f : kFacets) {
        if (to_string(f) == s) {
            return f;
        }
    }
    return std::nullopt;
}

std::vector<std::string> facet_tokens(const Document& doc, Facet f, const AnalyzerConfig& config) {
    switch (f) {
        case Facet::title:
            return analyze(doc.title, config);
        case Facet::abstract:
            return analyze(doc.abstract_text, config);
        case Facet::body:
            return analyze(doc.body, config);
        case Facet::mesh: {
            std::vector<std::string> out;
            for (const auto& kw : doc.mesh_keywords) {
                for (auto& t : analyze(kw, config)) {
                    out.push_back(std::move(t));
                }
            }
            return out;
        }
        case Facet::concepts:
            return doc.concept_ids; // opaque ids, never analyzed
        case Facet::all: {
            auto out = analyze(doc.title, config);
            for (auto& t : analyze(doc.abstract_text, config)) out.push_back(std::move(t));
            for (auto& t : analyze(doc.body, config)) out.push_back(std::move(t));
            return out;
        }
    }
    return {};
}

InvertedIndex InvertedIndex::build(std::span<const Document> docs, AnalyzerConfig analyzer) {
    InvertedIndex index;
    index.analyzer_ = std::move(analyzer);
    index.doc_ids_.reserve(docs.size());
    for (const auto& doc : docs) {
        if (doc.doc_id.empty()) {
            throw FormatError("index build: empty doc id");
        }
        if (!index.ordinal_.emplace(doc.doc_id, static_cast<uint32_t>(index.doc_ids_.size()))
                 .second) {
            throw FormatError("index build: duplicate doc id '" + doc.doc_id + "'");
        }
        index.doc_ids_.push_back(doc.doc_id);
    }
    for (size_t fi = 0; fi < kFacetCount; ++fi) {
        index.facets_[fi].lengths.reserve(docs.size());
    }
    for (uint32_t ord = 0; ord < docs.size(); ++ord) {
        const Document& doc = docs[ord];
        const auto title = analyze(doc.title, index.analyzer_);
        const auto abstract = analyze(doc.abstract_text, index.analyzer_);
        const auto body = analyze(doc.body, index.analyzer_);

        auto add = [&](Facet f, const std::vector<std::string>& tokens) {
            FacetData& fd = index.facets_[static_cast<size_t>(f)];
            fd.lengths.push_back(static_cast<uint32_t>(tokens.size()));
            fd.total_tokens += tokens.size();
            std::map<std::string, uint32_t> tf;
            for (const auto& t : tokens) {
                ++tf[t];
            }
            for (const auto& [term, count] : tf) {
                fd.postings[term].push_back({ord, count});
            }
        };

        add(Facet::title, title);
        add(Facet::abstract, abstract);
        add(Facet::body, body);
        add(Facet::mesh, facet_tokens(doc, Facet::mesh, index.analyzer_));
        add(Facet::concepts, doc.concept_ids);

        std::vector<std::string> all;
        all.reserve(title.size() + abstract.size() + body.size());
        for (const auto* part : {&title, &abstract, &body}) {
            all.insert(all.end(), part->begin(), part->end());
        }
        add(Facet::all, all);
    }
    return index;
}

InvertedIndex InvertedIndex::merge(const InvertedIndex& left, const InvertedIndex& right) {
    if (!(left.analyzer_ == right.analyzer_)) {
        throw ConfigError("index merge: analyzer configurations differ");
    }
    InvertedIndex out;
    out.analyzer_ = left.analyzer_;
    out.doc_ids_ = left.doc_ids_;
    for (const auto& id : right.doc_ids_) {
        out.doc_ids_.push_back(id);
    }
    out.rebuild_ordinals();
    if (out.ordinal_.size() != out.doc_ids_.size()) {
        throw FormatError("index merge: duplicate doc ids across partitions");
    }
    const uint32_t offset = left.doc_count();
    for (size_t fi = 0; fi < kFacetCount; ++fi) {
        FacetData& fd = out.facets_[fi];
        fd = left.facets_[fi];
        fd.lengths.insert(fd.lengths.end(), right.facets_[fi].lengths.begin(),
                          right.facets_[fi].lengths.end());
        fd.total_tokens += right.facets_[fi].total_tokens;
        for (const auto& [term, postings] : right.facets_[fi].postings) {
            auto& dst = fd.postings[term];
            for (const Posting& p : postings) {
                dst.push_back({p.doc + offset, p.tf});
            }
        }
    }
    return out;
}

const std::vector<Posting>& InvertedIndex::postings(Facet f, std::string_view term) const {
    static const std::vector<Posting> empty;
    const auto& map = facets_[static_cast<size_t>(f)].postings;
    const auto it = map.find(term);
    return it == map.end() ? empty : it->second;
}

uint32_t InvertedIndex::df(Facet f, std::string_view term) const {
    return static_cast<uint32_t>(postings(f, term).size());
}

uint32_t InvertedIndex::length(Facet f, uint32_t ordinal) const {
    const auto& lengths = facets_[static_cast<size_t>(f)].lengths;
    if (ordinal >= lengths.size()) {
        throw EvalError("index: ordinal out of range");
    }
    return lengths[ordinal];
}

uint64_t InvertedIndex::total_length(Facet f) const {
    return facets_[static_cast<size_t>(f)].total_tokens;
}

double InvertedIndex::avg_length(Facet f) const {
    if (doc_ids_.empty()) {
        return 0.0;
    }
    return static_cast<double>(facets_[static_cast<size_t>(f)].total_tokens) /
           static_cast<double>(doc_ids_.size());
}

const std::string& InvertedIndex::doc_id(uint32_t ordinal) const {
    if (ordinal >= doc_ids_.size()) {
        throw EvalError("index: ordinal out of range");
    }
    return doc_ids_[ordinal];
}

std::optional<uint32_t> InvertedIndex::ordinal_of(std::string_view doc_id) const {
    const auto it = ordinal_.find(std::string(doc_id));
    if (it == ordinal_.end()) {
        return std::nullopt;
    }
    return it->second;
}

const std::map<std::string, std::vector<Posting>, std::less<>>& InvertedIndex::terms(
    Facet f) const {
    return facets_[static_cast<size_t>(f)].postings;
}

void InvertedIndex::save(std::ostream& out) const {
    out.write(kMagic, sizeof(kMagic));
    put_u8(out, analyzer_.stem ? 1 : 0);
    put_u32(out, static_cast<uint32_t>(analyzer_.stopwords.size()));
    for (const auto& w : analyzer_.stopwords) {
        put_str(out, w);
    }
    put_u32(out, static_cast<uint32_t>(doc_ids_.size()));
    for (const auto& id : doc_ids_) {
        put_str(out, id);
    }
    for (size_t fi = 0; fi < kFacetCount; ++fi) {
        const FacetData& fd = facets_[fi];
        for (uint32_t len : fd.lengths) {
            put_u32(out, len);
        }
        put_u64(out, fd.total_tokens);
        put_u32(out, static_cast<uint32_t>(fd.postings.size()));
        for (const auto& [term, postings] : fd.postings) {
            put_str(out, term);
            put_u32(out, static_cast<uint32_t>(postings.size()));
            for (const Posting& p : postings) {
                put_u32(out, p.doc);
                put_u32(out, p.tf);
            }
        }
    }
    if (!out) {
        throw FormatError("index save: write failed");
    }
}

InvertedIndex InvertedIndex::load(std::istream& in) {
    char magic[8];
    if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw FormatError("index file: bad magic or version");
    }
    InvertedIndex index;
    index.analyzer_.stem = get_u8(in) != 0;
    index.analyzer_.stopwords.clear();
    const uint32_t n_stop = get_u32(in);
    for (uint32_t i = 0; i < n_stop; ++i) {
        index.analyzer_.stopwords.insert(get_str(in));
    }
    const uint32_t n_docs = get_u32(in);
    index.doc_ids_.reserve(n_docs);
    for (uint32_t i = 0; i < n_docs; ++i) {
        index.doc_ids_.push_back(get_str(in));
    }
    index.rebuild_ordinals();
    if (index.ordinal_.size() != index.doc_ids_.size()) {
        throw FormatError("index file: duplicate doc ids");
    }
    for (size_t fi = 0; fi < kFacetCount; ++fi) {
        FacetData& fd = index.facets_[fi];
        fd.lengths.resize(n_docs);
        for (uint32_t i = 0; i < n_docs; ++i) {
            fd.lengths[i] = get_u32(in);
        }
        fd.total_tokens = get_u64(in);
        const uint32_t n_terms = get_u32(in);
        for (uint32_t t = 0; t < n_terms; ++t) {
            std::string term = get_str(in);
            const uint32_t n_post = get_u32(in);
            std::vector<Posting> postings(n_post);
            for (uint32_t p = 0; p < n_post; ++p) {
                postings[p].doc = get_u32(in);
                postings[p].tf = get_u32(in);
                if (postings[p].doc >= n_docs || postings[p].tf == 0) {
                    throw FormatError("index file: corrupt posting");
                }
            }
            fd.postings.emplace(std::move(term), std::move(postings));
        }
    }
    return index;
}

void InvertedIndex::save_file(const std::string& path) const {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) {
            throw ConfigError("cannot write index file '" + path + "'");
        }
        save(out);
    }
    std::filesystem::rename(tmp, path);
}

InvertedIndex InvertedIndex::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open index file '" + path + "'");
    }
    return load(in);
}

bool InvertedIndex::operator==(const InvertedIndex& other) const {
    return facets_ == other.facets_ && doc_ids_ == other.doc_ids_ && analyzer_ == other.analyzer_;
}

void InvertedIndex::rebuild_ordinals() {
    ordinal_.clear();
    for (uint32_t i = 0; i < doc_ids_.size(); ++i) {
        ordinal_.emplace(doc_ids_[i], i);
    }
}

} // namespace clinsearch
