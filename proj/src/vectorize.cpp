#include "vatc/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "vatc/digest.hpp"
#include "vatc/error.hpp"

namespace vatc {

std::string_view to_string(WeightingScheme scheme) {
    switch (scheme) {
        case WeightingScheme::binary: return "binary";
        case WeightingScheme::tf: return "tf";
        case WeightingScheme::ntf: return "ntf";
        case WeightingScheme::tfidf: return "tfidf";
    }
    return "?";
}

std::string_view display_name(WeightingScheme scheme) {
    switch (scheme) {
        case WeightingScheme::binary: return "Binary";
        case WeightingScheme::tf: return "Frequency";
        case WeightingScheme::ntf: return "Normalised Frequency";
        case WeightingScheme::tfidf: return "TFIDF";
    }
    return "?";
}

WeightingScheme parse_scheme(std::string_view name) {
    for (auto s : all_schemes())
        if (to_string(s) == name) return s;
    throw ConfigError("unknown weighting scheme '" + std::string(name) + "' (expected binary, tf, ntf or tfidf)");
}

const std::vector<WeightingScheme>& all_schemes() {
    static const std::vector<WeightingScheme> schemes = {WeightingScheme::binary, WeightingScheme::tf,
                                                         WeightingScheme::ntf, WeightingScheme::tfidf};
    return schemes;
}

Vocabulary Vocabulary::fit(std::span<const TokenizedDocument> docs) {
    if (docs.empty()) throw Error("cannot fit a vocabulary on zero documents");
    Vocabulary v;
    v.n_docs_ = docs.size();
    std::vector<std::size_t> last_seen;  // last document index that counted toward df
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (const auto& token : docs[d].tokens) {
            auto [it, inserted] = v.index_.try_emplace(token, v.terms_.size());
            if (inserted) {
                v.terms_.push_back(token);
                v.df_.push_back(0);
                last_seen.push_back(static_cast<std::size_t>(-1));
            }
            const std::size_t idx = it->second;
            if (last_seen[idx] != d) {
                last_seen[idx] = d;
                ++v.df_[idx];
            }
        }
    }
    return v;
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view term) const {
    auto it = index_.find(term);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

double Vocabulary::idf(std::size_t index) const {
    return std::log(static_cast<double>(n_docs_) / static_cast<double>(df_.at(index)));
}

Vocabulary Vocabulary::restrict_to(std::span<const std::size_t> indices) const {
    Vocabulary v;
    v.n_docs_ = n_docs_;
    for (std::size_t i : indices) {
        v.index_.emplace(terms_.at(i), v.terms_.size());
        v.terms_.push_back(terms_[i]);
        v.df_.push_back(df_[i]);
    }
    return v;
}

std::string Vocabulary::digest() const {
    Digest d;
    d.update(static_cast<std::uint64_t>(n_docs_));
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        d.update(terms_[i]).update(static_cast<std::uint64_t>(df_[i]));
    }
    return d.hex();
}

Vocabulary fit_vocabulary(std::span<const TokenizedDocument> docs) { return Vocabulary::fit(docs); }

double inverse_document_frequency(std::string_view term, const Vocabulary& vocab) {
    auto idx = vocab.index_of(term);
    if (!idx) throw Error("term '" + std::string(term) + "' is not in the vocabulary");
    return vocab.idf(*idx);
}

double SparseVector::at(std::uint32_t index) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), index,
                               [](const SparseEntry& e, std::uint32_t i) { return e.index < i; });
    return (it != entries.end() && it->index == index) ? it->value : 0.0;
}

double SparseVector::dot(std::span<const double> dense) const {
    double s = 0.0;
    for (const auto& e : entries) s += e.value * dense[e.index];
    return s;
}

double SparseVector::sum() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.value;
    return s;
}

void SparseVector::validate(std::size_t dimension) const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (i > 0 && entries[i - 1].index >= e.index) throw Error("sparse vector indices not strictly increasing");
        if (e.index >= dimension) throw Error("sparse vector index out of range");
        if (e.value == 0.0) throw Error("sparse vector stores an explicit zero");
        if (!std::isfinite(e.value)) throw Error("sparse vector holds a non-finite value");
    }
}

SparseVector weigh_document(std::span<const std::string> tokens, const Vocabulary& vocab, WeightingScheme scheme) {
    std::vector<std::uint32_t> hits;
    hits.reserve(tokens.size());
    for (const auto& token : tokens)
        if (auto idx = vocab.index_of(token)) hits.push_back(static_cast<std::uint32_t>(*idx));
    std::sort(hits.begin(), hits.end());

    const double length = static_cast<double>(tokens.size());
    SparseVector out;
    for (std::size_t i = 0; i < hits.size();) {
        std::size_t j = i;
        while (j < hits.size() && hits[j] == hits[i]) ++j;
        const double tf = static_cast<double>(j - i);
        double value = 0.0;
        switch (scheme) {
            case WeightingScheme::binary: value = 1.0; break;
            case WeightingScheme::tf: value = tf; break;
            case WeightingScheme::ntf: value = tf / length; break;
            case WeightingScheme::tfidf: value = tf * vocab.idf(hits[i]); break;
        }
        if (value != 0.0) out.entries.push_back({hits[i], value});
        i = j;
    }
    return out;
}

void DocTermMatrix::validate() const {
    if (rows.size() != labels.size()) throw Error("matrix rows and labels differ in length");
    for (const auto& row : rows) row.validate(vocab.size());
    for (int label : labels)
        if (label < 0 || static_cast<std::size_t>(label) >= classes.size()) throw Error("matrix label out of range");
}

DocTermMatrix build_matrix(const TokenizedCorpus& corpus, const Vocabulary& vocab, WeightingScheme scheme) {
    DocTermMatrix m;
    m.vocab = vocab;
    m.scheme = scheme;
    m.classes = corpus.classes;
    m.labels = corpus.labels;
    m.rows.reserve(corpus.docs.size());
    for (const auto& doc : corpus.docs) m.rows.push_back(weigh_document(doc, vocab, scheme));
    return m;
}

void write_matrix_dump(std::ostream& out, const DocTermMatrix& matrix, std::span<const std::string> doc_ids) {
    if (doc_ids.size() != matrix.rows.size()) throw Error("matrix dump: doc id count does not match rows");
    char buf[64];
    for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
        out << doc_ids[r] << '\t';
        bool first = true;
        for (const auto& e : matrix.rows[r].entries) {
            std::snprintf(buf, sizeof buf, "%u:%.17g", e.index, e.value);
            out << (first ? "" : ",") << buf;
            first = false;
        }
        out << '\n';
    }
}

}  // namespace vatc
