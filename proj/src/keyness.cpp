#include "vatc/keyness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <unordered_map>

#include "vatc/digest.hpp"
#include "vatc/error.hpp"

namespace vatc {

double g2_statistic(const ContingencyCounts& c) {
    if (c.n1 == 0 || c.n2 == 0) throw Error("g2_statistic: corpus sizes must be positive");
    if (c.a > c.n1 || c.b > c.n2) throw Error("g2_statistic: term count exceeds corpus size");
    if (c.a + c.b == 0) throw Error("g2_statistic: term absent from both corpora");
    const double a = static_cast<double>(c.a), b = static_cast<double>(c.b);
    const double n1 = static_cast<double>(c.n1), n2 = static_cast<double>(c.n2);
    const double e1 = n1 * (a + b) / (n1 + n2);
    const double e2 = n2 * (a + b) / (n1 + n2);
    double g2 = 0.0;
    if (c.a > 0) g2 += a * std::log(a / e1);
    if (c.b > 0) g2 += b * std::log(b / e2);
    // Rounding can leave a tiny negative value where observed == expected.
    return std::max(0.0, 2.0 * g2);
}

std::string_view to_string(ReferenceMode mode) {
    return mode == ReferenceMode::complement ? "complement" : "whole";
}

ReferenceMode parse_reference_mode(std::string_view name) {
    if (name == "complement") return ReferenceMode::complement;
    if (name == "whole") return ReferenceMode::whole;
    throw ConfigError("unknown keyness reference mode '" + std::string(name) + "' (expected complement or whole)");
}

namespace {

struct TermClassCounts {
    std::vector<std::string> terms;
    std::vector<std::vector<std::uint64_t>> counts;  // per term, per class
    std::vector<std::uint64_t> class_tokens;
};

TermClassCounts count_terms(const TokenizedCorpus& corpus) {
    TermClassCounts tc;
    const std::size_t n_classes = corpus.classes.size();
    tc.class_tokens.assign(n_classes, 0);
    std::unordered_map<std::string_view, std::size_t> index;
    for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
        const auto cls = static_cast<std::size_t>(corpus.labels[d]);
        for (const auto& token : corpus.docs[d].tokens) {
            auto [it, inserted] = index.try_emplace(token, tc.terms.size());
            if (inserted) {
                tc.terms.push_back(token);
                tc.counts.emplace_back(n_classes, 0);
            }
            ++tc.counts[it->second][cls];
            ++tc.class_tokens[cls];
        }
    }
    return tc;
}

KeynessRanking rank_from_counts(const TermClassCounts& tc, std::size_t cls, const CategoryId& name,
                                ReferenceMode mode) {
    std::uint64_t total = 0;
    for (auto n : tc.class_tokens) total += n;
    const std::uint64_t n1 = tc.class_tokens[cls];
    const std::uint64_t n2 = mode == ReferenceMode::complement ? total - n1 : total;
    KeynessRanking ranking{name, {}};
    if (n1 == 0 || n2 == 0) return ranking;
    for (std::size_t t = 0; t < tc.terms.size(); ++t) {
        const std::uint64_t a = tc.counts[t][cls];
        if (a == 0) continue;
        std::uint64_t in_all = 0;
        for (auto n : tc.counts[t]) in_all += n;
        const std::uint64_t b = mode == ReferenceMode::complement ? in_all - a : in_all;
        // Positive keyness: a/n1 > b/n2, compared exactly in integers.
        if (static_cast<unsigned __int128>(a) * n2 <= static_cast<unsigned __int128>(b) * n1) continue;
        ranking.ranked.push_back({tc.terms[t], g2_statistic({a, b, n1, n2}), a, b});
    }
    std::sort(ranking.ranked.begin(), ranking.ranked.end(), [](const KeyTerm& x, const KeyTerm& y) {
        if (x.g2 != y.g2) return x.g2 > y.g2;
        return x.term < y.term;
    });
    return ranking;
}

}  // namespace

KeynessRanking rank_category_keywords(const TokenizedCorpus& corpus, std::string_view category, ReferenceMode mode) {
    auto it = std::find(corpus.classes.begin(), corpus.classes.end(), category);
    if (it == corpus.classes.end()) throw Error("category '" + std::string(category) + "' is not in the corpus");
    if (corpus.classes.size() < 2) throw Error("keyness ranking needs at least 2 categories");
    const auto cls = static_cast<std::size_t>(it - corpus.classes.begin());
    return rank_from_counts(count_terms(corpus), cls, *it, mode);
}

std::vector<KeynessRanking> rank_all_categories(const TokenizedCorpus& corpus, ReferenceMode mode) {
    if (corpus.classes.size() < 2) throw Error("keyness ranking needs at least 2 categories");
    const auto tc = count_terms(corpus);
    std::vector<KeynessRanking> out;
    for (std::size_t c = 0; c < corpus.classes.size(); ++c)
        out.push_back(rank_from_counts(tc, c, corpus.classes[c], mode));
    return out;
}

// --- thresholds and feature union --------------------------------------------

Threshold Threshold::top(std::size_t k) {
    if (k == 0) throw Error("threshold k must be positive");
    Threshold t;
    t.k_ = k;
    return t;
}

std::string Threshold::to_string() const { return is_all() ? "all" : std::to_string(k_); }

Threshold Threshold::parse(std::string_view text) {
    for (const auto& t : threshold_levels())
        if (t.to_string() == text) return t;
    throw ConfigError("invalid threshold '" + std::string(text) +
                      "' (expected one of 10,25,50,100,150,200,250,300,350,all)");
}

std::strong_ordering Threshold::operator<=>(const Threshold& other) const {
    if (is_all() || other.is_all()) return is_all() <=> other.is_all();
    return k_ <=> other.k_;
}

const std::vector<Threshold>& threshold_levels() {
    static const std::vector<Threshold> levels = [] {
        std::vector<Threshold> v;
        for (std::size_t k : {10, 25, 50, 100, 150, 200, 250, 300, 350}) v.push_back(Threshold::top(k));
        v.push_back(Threshold::all());
        return v;
    }();
    return levels;
}

std::vector<std::string> FeatureSet::terms() const {
    std::vector<std::string> out;
    out.reserve(provenance.size());
    for (const auto& [term, _] : provenance) out.push_back(term);
    return out;
}

FeatureSet select_feature_union(std::span<const KeynessRanking> rankings, Threshold k) {
    FeatureSet fs;
    for (const auto& r : rankings) {
        const std::size_t take = k.is_all() ? r.ranked.size() : std::min(k.k(), r.ranked.size());
        for (std::size_t i = 0; i < take; ++i) fs.provenance[r.ranked[i].term].insert(r.category);
    }
    return fs;
}

FeatureProjection::FeatureProjection(const Vocabulary& vocab, const FeatureSet& features)
    : remap_(vocab.size(), -1) {
    std::vector<std::size_t> kept;
    for (const auto& [term, _] : features.provenance) {
        if (auto idx = vocab.index_of(term)) kept.push_back(*idx);
        else ++ignored_;
    }
    if (kept.empty()) throw Error("feature set has no term in common with the vocabulary");
    std::sort(kept.begin(), kept.end());
    for (std::size_t i = 0; i < kept.size(); ++i) remap_[kept[i]] = static_cast<std::int64_t>(i);
    reduced_ = vocab.restrict_to(kept);
}

SparseVector FeatureProjection::apply(const SparseVector& row) const {
    SparseVector out;
    for (const auto& e : row.entries) {
        if (e.index >= remap_.size()) continue;
        if (auto to = remap_[e.index]; to >= 0) out.entries.push_back({static_cast<std::uint32_t>(to), e.value});
    }
    return out;
}

ProjectedMatrix project_matrix(const DocTermMatrix& matrix, const FeatureSet& features) {
    FeatureProjection proj(matrix.vocab, features);
    ProjectedMatrix out;
    out.ignored_terms = proj.ignored_terms();
    out.matrix.vocab = proj.vocabulary();
    out.matrix.scheme = matrix.scheme;
    out.matrix.classes = matrix.classes;
    out.matrix.labels = matrix.labels;
    out.matrix.rows.reserve(matrix.rows.size());
    for (const auto& row : matrix.rows) out.matrix.rows.push_back(proj.apply(row));
    return out;
}

void write_rankings_csv(std::ostream& out, std::span<const KeynessRanking> rankings) {
    out << "category,rank,term,g2,target_count,reference_count\n";
    char buf[64];
    for (const auto& r : rankings) {
        for (std::size_t i = 0; i < r.ranked.size(); ++i) {
            const auto& t = r.ranked[i];
            std::snprintf(buf, sizeof buf, "%.6f", t.g2);
            out << r.category << ',' << (i + 1) << ',' << t.term << ',' << buf << ',' << t.target_count << ','
                << t.reference_count << '\n';
        }
    }
}

std::string rankings_digest(std::span<const KeynessRanking> rankings) {
    Digest d;
    for (const auto& r : rankings) {
        d.update(r.category);
        for (const auto& t : r.ranked)
            d.update(t.term).update(t.g2).update(t.target_count).update(t.reference_count);
    }
    return d.hex();
}

}  // namespace vatc
