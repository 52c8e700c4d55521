#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace clinsearch {

/// Dense word vectors loaded from `word v1 .. vd` lines with a constant
/// dimension fixed by the first line. Words are lowercased.
class EmbeddingTable {
public:
    EmbeddingTable() = default;

    static EmbeddingTable parse(std::istream& in);

    size_t dimension() const { return dimension_; }
    size_t size() const { return vectors_.size(); }
    const std::vector<double>* find(std::string_view word) const;

    /// Test/fixture convenience; enforces the table dimension.
    void insert(std::string word, std::vector<double> vec);

    /// Cosine neighbours of `word`, highest similarity first, ties broken by
    /// word; the word itself is excluded. Exhaustive scan over the
    /// vocabulary.
    std::vector<std::pair<std::string, double>>
    neighbors(std::string_view word, int max_neighbors, double min_similarity) const;

    /// Mean vector over the in-vocabulary words; nullopt when none are known.
    std::optional<std::vector<double>> mean_vector(const std::vector<std::string>& words) const;

private:
    size_t dimension_ = 0;
    std::unordered_map<std::string, std::vector<double>> vectors_;
};

/// 0 when either vector has zero norm.
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

} // namespace clinsearch
