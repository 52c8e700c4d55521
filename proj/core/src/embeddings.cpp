#include "clinsearch/embeddings.hpp"

#include "clinsearch/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <sstream>

namespace clinsearch {

EmbeddingTable EmbeddingTable::parse(std::istream& in) {
    EmbeddingTable table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::istringstream ls(line);
        std::string word;
        ls >> word;
        if (word.empty()) {
            continue;
        }
        for (char& c : word) {
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
        std::vector<double> vec;
        std::string component;
        while (ls >> component) {
            try {
                size_t used = 0;
                vec.push_back(std::stod(component, &used));
                if (used != component.size()) {
                    throw std::invalid_argument(component);
                }
            } catch (const std::exception&) {
                throw FormatError("embedding line " + std::to_string(line_no) +
                                  ": non-numeric component '" + component + "'");
            }
        }
        if (vec.empty()) {
            throw FormatError("embedding line " + std::to_string(line_no) + ": no components");
        }
        if (table.dimension_ == 0) {
            table.dimension_ = vec.size();
        } else if (vec.size() != table.dimension_) {
            throw FormatError("embedding line " + std::to_string(line_no) + ": expected " +
                              std::to_string(table.dimension_) + " components, got " +
                              std::to_string(vec.size()));
        }
        table.vectors_[word] = std::move(vec); // last occurrence wins
    }
    if (table.dimension_ == 0) {
        throw FormatError("embedding table: empty file, dimension undeterminable");
    }
    return table;
}

const std::vector<double>* EmbeddingTable::find(std::string_view word) const {
    const auto it = vectors_.find(std::string(word));
    return it == vectors_.end() ? nullptr : &it->second;
}

void EmbeddingTable::insert(std::string word, std::vector<double> vec) {
    if (dimension_ == 0) {
        dimension_ = vec.size();
    }
    if (vec.empty() || vec.size() != dimension_) {
        throw ConfigError("embedding insert: dimension mismatch");
    }
    vectors_[std::move(word)] = std::move(vec);
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0, na = 0, nb = 0;
    const size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0 || nb == 0) {
        return 0.0;
    }
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<std::pair<std::string, double>>
EmbeddingTable::neighbors(std::string_view word, int max_neighbors, double min_similarity) const {
    std::vector<std::pair<std::string, double>> out;
    const std::vector<double>* v = find(word);
    if (v == nullptr || max_neighbors <= 0) {
        return out;
    }
    for (const auto& [other, vec] : vectors_) {
        if (other == word) {
            continue;
        }
        const double sim = cosine_similarity(*v, vec);
        if (sim >= min_similarity) {
            out.emplace_back(other, sim);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (out.size() > static_cast<size_t>(max_neighbors)) {
        out.resize(static_cast<size_t>(max_neighbors));
    }
    return out;
}

std::optional<std::vector<double>> EmbeddingTable::mean_vector(
    const std::vector<std::string>& words) const {
    std::vector<double> sum(dimension_, 0.0);
    size_t found = 0;
    for (const auto& w : words) {
        if (const auto* v = find(w)) {
            for (size_t i = 0; i < dimension_; ++i) {
                sum[i] += (*v)[i];
            }
            ++found;
        }
    }
    if (found == 0) {
        return std::nullopt;
    }
    for (double& x : sum) {
        x /= static_cast<double>(found);
    }
    return sum;
}

} // namespace clinsearch
