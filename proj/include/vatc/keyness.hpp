#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vatc/corpus.hpp"
#include "vatc/vectorize.hpp"

namespace vatc {

/// 2x2 token counts for one term: `a` of `n1` target tokens and `b` of `n2`
/// reference tokens.
struct ContingencyCounts {
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    std::uint64_t n1 = 0;
    std::uint64_t n2 = 0;
};

/// Dunning log-likelihood G2 = 2 * (a ln(a/E1) + b ln(b/E2)) with
/// E1 = n1 (a+b) / (n1+n2), E2 = n2 (a+b) / (n1+n2) and 0 ln 0 = 0.
double g2_statistic(const ContingencyCounts& c);

enum class ReferenceMode {
    complement,  // every other category's tokens
    whole,       // the entire corpus, target included
};

std::string_view to_string(ReferenceMode mode);
ReferenceMode parse_reference_mode(std::string_view name);

struct KeyTerm {
    std::string term;
    double g2 = 0.0;
    std::uint64_t target_count = 0;
    std::uint64_t reference_count = 0;
};

/// Positively key terms of one category, G2 descending, ties by term.
struct KeynessRanking {
    CategoryId category;
    std::vector<KeyTerm> ranked;
};

KeynessRanking rank_category_keywords(const TokenizedCorpus& corpus, std::string_view category, ReferenceMode mode);
/// One ranking per class, in class order. Counts tokens once for all classes.
std::vector<KeynessRanking> rank_all_categories(const TokenizedCorpus& corpus, ReferenceMode mode);

/// Number of top-ranked terms kept per category, or every ranked term.
class Threshold {
public:
    static Threshold top(std::size_t k);
    static Threshold all() { return Threshold(); }

    bool is_all() const { return k_ == 0; }
    std::size_t k() const { return k_; }
    std::string to_string() const;

    /// Accepts the values in threshold_levels() only.
    static Threshold parse(std::string_view text);

    /// `all` sorts after every finite k.
    std::strong_ordering operator<=>(const Threshold& other) const;
    bool operator==(const Threshold&) const = default;

private:
    Threshold() = default;
    std::size_t k_ = 0;
};

/// 10, 25, 50, 100, 150, 200, 250, 300, 350, all.
const std::vector<Threshold>& threshold_levels();

/// Union of per-category top-k terms with the categories that chose each.
struct FeatureSet {
    std::map<std::string, std::set<CategoryId>> provenance;

    std::size_t size() const { return provenance.size(); }
    bool contains(std::string_view term) const { return provenance.find(std::string(term)) != provenance.end(); }
    std::vector<std::string> terms() const;
};

FeatureSet select_feature_union(std::span<const KeynessRanking> rankings, Threshold k);

/// Column selection mapping a vocabulary onto a feature subset. Kept terms
/// retain their original relative order.
class FeatureProjection {
public:
    FeatureProjection(const Vocabulary& vocab, const FeatureSet& features);

    const Vocabulary& vocabulary() const { return reduced_; }
    std::size_t ignored_terms() const { return ignored_; }
    SparseVector apply(const SparseVector& row) const;

private:
    std::vector<std::int64_t> remap_;  // original index -> new index or -1
    Vocabulary reduced_;
    std::size_t ignored_ = 0;
};

struct ProjectedMatrix {
    DocTermMatrix matrix;
    /// Selected terms that are not in the matrix vocabulary.
    std::size_t ignored_terms = 0;
};

/// Restricts a matrix to the selected features. Every stored weight depends
/// only on the term's own count, the document's full length and the
/// fitting-corpus df, so surviving values are unchanged.
ProjectedMatrix project_matrix(const DocTermMatrix& matrix, const FeatureSet& features);

/// CSV `category,rank,term,g2,target_count,reference_count`.
void write_rankings_csv(std::ostream& out, std::span<const KeynessRanking> rankings);

std::string rankings_digest(std::span<const KeynessRanking> rankings);

}  // namespace vatc
