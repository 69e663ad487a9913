#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vatc/corpus.hpp"

namespace vatc {

enum class WeightingScheme { binary, tf, ntf, tfidf };

/// Config name: binary, tf, ntf, tfidf.
std::string_view to_string(WeightingScheme scheme);
/// Row label used in the rendered results table.
std::string_view display_name(WeightingScheme scheme);
WeightingScheme parse_scheme(std::string_view name);
const std::vector<WeightingScheme>& all_schemes();

struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
};

/// Term index with document frequencies. Immutable once fitted.
class Vocabulary {
public:
    Vocabulary() = default;

    /// Terms are indexed in first-appearance order; df counts documents.
    static Vocabulary fit(std::span<const TokenizedDocument> docs);

    std::size_t size() const { return terms_.size(); }
    std::size_t n_docs() const { return n_docs_; }
    const std::string& term(std::size_t index) const { return terms_.at(index); }
    const std::vector<std::string>& terms() const { return terms_; }
    std::size_t df(std::size_t index) const { return df_.at(index); }
    std::optional<std::size_t> index_of(std::string_view term) const;

    /// ln(n_docs / df).
    double idf(std::size_t index) const;

    /// Restriction to `indices` (in the given order). df and n_docs keep
    /// their original values: they are statistics of the fitting corpus.
    Vocabulary restrict_to(std::span<const std::size_t> indices) const;

    std::string digest() const;

private:
    std::vector<std::string> terms_;
    std::vector<std::size_t> df_;
    std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>> index_;
    std::size_t n_docs_ = 0;
};

Vocabulary fit_vocabulary(std::span<const TokenizedDocument> docs);

/// Throws for a term outside the vocabulary.
double inverse_document_frequency(std::string_view term, const Vocabulary& vocab);

struct SparseEntry {
    std::uint32_t index;
    double value;

    bool operator==(const SparseEntry&) const = default;
};

/// Strictly increasing indices, no stored zeros, finite values.
struct SparseVector {
    std::vector<SparseEntry> entries;

    bool empty() const { return entries.empty(); }
    std::size_t size() const { return entries.size(); }
    /// 0.0 for absent indices.
    double at(std::uint32_t index) const;
    double dot(std::span<const double> dense) const;
    double sum() const;
    /// Throws if an invariant is broken.
    void validate(std::size_t dimension) const;

    bool operator==(const SparseVector&) const = default;
};

SparseVector weigh_document(std::span<const std::string> tokens, const Vocabulary& vocab, WeightingScheme scheme);
inline SparseVector weigh_document(const TokenizedDocument& doc, const Vocabulary& vocab, WeightingScheme scheme) {
    return weigh_document(doc.tokens, vocab, scheme);
}

/// Weighted rows aligned with class labels (indices into `classes`).
struct DocTermMatrix {
    std::vector<SparseVector> rows;
    std::vector<int> labels;
    std::vector<CategoryId> classes;
    Vocabulary vocab;
    WeightingScheme scheme = WeightingScheme::tf;

    std::size_t n_rows() const { return rows.size(); }
    std::size_t n_features() const { return vocab.size(); }
    void validate() const;
};

DocTermMatrix build_matrix(const TokenizedCorpus& corpus, const Vocabulary& vocab, WeightingScheme scheme);

/// Debug dump: `docid<TAB>index:value,...`, one line per row.
void write_matrix_dump(std::ostream& out, const DocTermMatrix& matrix, std::span<const std::string> doc_ids);

}  // namespace vatc
