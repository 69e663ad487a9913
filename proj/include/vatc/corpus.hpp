#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vatc {

using CategoryId = std::string;

struct Document {
    std::string id;
    std::string text;
    std::optional<CategoryId> label;

    bool operator==(const Document&) const = default;
};

/// Labeled narratives plus their category inventory. Categories are kept
/// sorted, which fixes the class order used for tie-breaking everywhere.
struct Corpus {
    std::vector<Document> documents;
    std::vector<CategoryId> categories;

    /// Validates ids (nonempty, unique) and derives the category set.
    static Corpus from_documents(std::vector<Document> documents);

    /// -1 when absent.
    int category_index(std::string_view category) const;
    std::vector<std::size_t> category_counts() const;
    /// Throws unless every document is labeled, there are >= 2 categories
    /// and each has at least one document.
    void validate_for_training() const;

    bool operator==(const Corpus&) const = default;
};

enum class CorpusFormat { jsonl, csv };

CorpusFormat parse_corpus_format(std::string_view name);
/// Picks the format from the file extension (.csv, otherwise jsonl).
CorpusFormat corpus_format_for_path(std::string_view path);

Corpus read_corpus(std::istream& in, CorpusFormat format);
Corpus load_corpus(const std::string& path, CorpusFormat format);
void write_corpus(std::ostream& out, const Corpus& corpus, CorpusFormat format);
void save_corpus(const std::string& path, const Corpus& corpus, CorpusFormat format);

/// Content digest over (id, label, text) in document order.
std::string corpus_digest(const Corpus& corpus);

// --- tokenization -----------------------------------------------------------

struct TokenizedDocument {
    std::string doc_id;
    std::vector<std::string> tokens;
};

/// Lowercases (ASCII plus common Latin/Greek/Cyrillic ranges), deletes ASCII
/// punctuation in place, then splits on ASCII whitespace. Stop-words and
/// numerals are kept.
std::vector<std::string> tokenize(std::string_view text);

bool is_ascii_punctuation(char c);

/// Labeled, tokenized view of a corpus; labels index into `classes`.
struct TokenizedCorpus {
    std::vector<TokenizedDocument> docs;
    std::vector<int> labels;
    std::vector<CategoryId> classes;

    std::size_t size() const { return docs.size(); }
    TokenizedCorpus subset(std::span<const std::size_t> rows) const;
};

TokenizedCorpus tokenize_corpus(const Corpus& corpus);

}  // namespace vatc
