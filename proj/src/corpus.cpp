#include "vatc/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "vatc/digest.hpp"
#include "vatc/error.hpp"

namespace vatc {

Corpus Corpus::from_documents(std::vector<Document> documents) {
    std::unordered_set<std::string_view> seen;
    std::set<CategoryId> categories;
    for (const auto& doc : documents) {
        if (doc.id.empty()) throw Error("document with empty id");
        if (!seen.insert(doc.id).second) throw Error("duplicate document id '" + doc.id + "'");
        if (doc.label) categories.insert(*doc.label);
    }
    Corpus corpus;
    corpus.documents = std::move(documents);
    corpus.categories.assign(categories.begin(), categories.end());
    return corpus;
}

int Corpus::category_index(std::string_view category) const {
    auto it = std::lower_bound(categories.begin(), categories.end(), category);
    if (it == categories.end() || *it != category) return -1;
    return static_cast<int>(it - categories.begin());
}

std::vector<std::size_t> Corpus::category_counts() const {
    std::vector<std::size_t> counts(categories.size(), 0);
    for (const auto& doc : documents)
        if (doc.label) ++counts[static_cast<std::size_t>(category_index(*doc.label))];
    return counts;
}

void Corpus::validate_for_training() const {
    for (const auto& doc : documents)
        if (!doc.label) throw Error("document '" + doc.id + "' has no label");
    if (categories.size() < 2)
        throw Error("training needs at least 2 categories, corpus has " +
                    std::to_string(categories.size()));
}

CorpusFormat parse_corpus_format(std::string_view name) {
    if (name == "jsonl") return CorpusFormat::jsonl;
    if (name == "csv") return CorpusFormat::csv;
    throw ConfigError("unknown corpus format '" + std::string(name) + "' (expected jsonl or csv)");
}

CorpusFormat corpus_format_for_path(std::string_view path) {
    return path.ends_with(".csv") ? CorpusFormat::csv : CorpusFormat::jsonl;
}

namespace {

using nlohmann::json;

std::vector<Document> read_jsonl(std::istream& in) {
    std::vector<Document> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const std::string where = "line " + std::to_string(line_no);
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            throw Error(where + ": malformed JSON record: " + e.what());
        }
        if (!record.is_object()) throw Error(where + ": record is not a JSON object");
        auto id = record.find("id");
        if (id == record.end() || !id->is_string()) throw Error(where + ": missing string field 'id'");
        auto text = record.find("text");
        if (text == record.end() || !text->is_string())
            throw Error(where + ": missing string field 'text'");
        Document doc{id->get<std::string>(), text->get<std::string>(), std::nullopt};
        if (auto label = record.find("label"); label != record.end() && !label->is_null()) {
            if (!label->is_string()) throw Error(where + ": field 'label' must be a string");
            doc.label = label->get<std::string>();
        }
        if (doc.id.empty()) throw Error(where + ": empty 'id'");
        docs.push_back(std::move(doc));
    }
    if (in.bad()) throw Error("I/O error while reading corpus");
    return docs;
}

// RFC-4180 record reader. Returns false at end of input. `line_no` tracks
// the physical line on which the returned record started.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line_no,
                     std::size_t& next_line) {
    fields.clear();
    int c = in.peek();
    if (c == EOF) return false;
    line_no = next_line;
    std::string field;
    bool quoted = false;
    bool after_quote = false;
    for (;;) {
        c = in.get();
        if (c == EOF) {
            if (quoted) throw Error("line " + std::to_string(line_no) + ": unterminated quoted field");
            fields.push_back(std::move(field));
            return true;
        }
        char ch = static_cast<char>(c);
        if (quoted) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field.push_back('"');
                } else {
                    quoted = false;
                    after_quote = true;
                }
            } else {
                if (ch == '\n') ++next_line;
                field.push_back(ch);
            }
            continue;
        }
        if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
            after_quote = false;
        } else if (ch == '\n' || ch == '\r') {
            if (ch == '\r' && in.peek() == '\n') in.get();
            ++next_line;
            fields.push_back(std::move(field));
            return true;
        } else if (ch == '"' && field.empty() && !after_quote) {
            quoted = true;
        } else {
            if (after_quote)
                throw Error("line " + std::to_string(line_no) + ": characters after closing quote");
            field.push_back(ch);
        }
    }
}

std::vector<Document> read_csv(std::istream& in) {
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    std::size_t next_line = 1;
    if (!read_csv_record(in, fields, line_no, next_line)) throw Error("CSV corpus is empty (header required)");
    int id_col = -1, label_col = -1, text_col = -1;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == "id") id_col = static_cast<int>(i);
        else if (fields[i] == "label") label_col = static_cast<int>(i);
        else if (fields[i] == "text") text_col = static_cast<int>(i);
    }
    if (id_col < 0 || text_col < 0)
        throw Error("line 1: CSV header must name columns id,label,text");

    std::vector<Document> docs;
    while (read_csv_record(in, fields, line_no, next_line)) {
        if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
        const std::string where = "line " + std::to_string(line_no);
        auto need = [&](int col, const char* name) -> std::string& {
            if (static_cast<std::size_t>(col) >= fields.size())
                throw Error(where + ": missing field '" + name + "'");
            return fields[static_cast<std::size_t>(col)];
        };
        Document doc{need(id_col, "id"), need(text_col, "text"), std::nullopt};
        if (doc.id.empty()) throw Error(where + ": empty 'id'");
        if (label_col >= 0 && static_cast<std::size_t>(label_col) < fields.size() &&
            !fields[static_cast<std::size_t>(label_col)].empty())
            doc.label = fields[static_cast<std::size_t>(label_col)];
        docs.push_back(std::move(doc));
    }
    if (in.bad()) throw Error("I/O error while reading corpus");
    return docs;
}

void write_csv_field(std::ostream& out, std::string_view value) {
    if (value.find_first_of(",\"\r\n") == std::string_view::npos) {
        out << value;
        return;
    }
    out << '"';
    for (char c : value) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

}  // namespace

Corpus read_corpus(std::istream& in, CorpusFormat format) {
    return Corpus::from_documents(format == CorpusFormat::jsonl ? read_jsonl(in) : read_csv(in));
}

Corpus load_corpus(const std::string& path, CorpusFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open corpus file '" + path + "'");
    return read_corpus(in, format);
}

void write_corpus(std::ostream& out, const Corpus& corpus, CorpusFormat format) {
    if (format == CorpusFormat::jsonl) {
        for (const auto& doc : corpus.documents) {
            nlohmann::ordered_json record;
            record["id"] = doc.id;
            if (doc.label) record["label"] = *doc.label;
            record["text"] = doc.text;
            out << record.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
        }
    } else {
        out << "id,label,text\n";
        for (const auto& doc : corpus.documents) {
            write_csv_field(out, doc.id);
            out << ',';
            if (doc.label) write_csv_field(out, *doc.label);
            out << ',';
            write_csv_field(out, doc.text);
            out << '\n';
        }
    }
}

void save_corpus(const std::string& path, const Corpus& corpus, CorpusFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write corpus file '" + path + "'");
    write_corpus(out, corpus, format);
    if (!out) throw Error("I/O error while writing '" + path + "'");
}

std::string corpus_digest(const Corpus& corpus) {
    Digest d;
    for (const auto& doc : corpus.documents) {
        d.update(doc.id).update(std::string_view("\x1f"));
        d.update(doc.label.value_or("")).update(std::string_view("\x1f"));
        d.update(doc.text).update(std::string_view("\x1e"));
    }
    return d.hex();
}

// --- tokenization -----------------------------------------------------------

bool is_ascii_punctuation(char c) {
    return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') || (c >= '[' && c <= '`') ||
           (c >= '{' && c <= '~');
}

namespace {

bool is_ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Simple (one-to-one) lowercase mapping for the scripts likely to show up
// in transliterated narratives. Everything else passes through unchanged.
char32_t lower_codepoint(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 32;
    if (cp < 0x80) return cp;
    if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 32;
    if (cp >= 0x0100 && cp <= 0x017F) {
        if (cp == 0x0130) return U'i';
        if (cp == 0x0178) return 0x00FF;
        bool odd_upper = (cp >= 0x0139 && cp <= 0x0148) || (cp >= 0x0179 && cp <= 0x017E);
        bool even_upper = (cp <= 0x012F) || (cp >= 0x0132 && cp <= 0x0137) ||
                          (cp >= 0x014A && cp <= 0x0177);
        if (odd_upper && (cp % 2 == 1)) return cp + 1;
        if (even_upper && (cp % 2 == 0)) return cp + 1;
        return cp;
    }
    if (cp >= 0x0391 && cp <= 0x03A9 && cp != 0x03A2) return cp + 32;
    if (cp == 0x0386) return 0x03AC;
    if (cp >= 0x0388 && cp <= 0x038A) return cp + 37;
    if (cp == 0x038C) return 0x03CC;
    if (cp == 0x038E || cp == 0x038F) return cp + 63;
    if (cp >= 0x0410 && cp <= 0x042F) return cp + 32;
    if (cp >= 0x0400 && cp <= 0x040F) return cp + 80;
    return cp;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Decodes one UTF-8 sequence starting at text[i]; on malformed input returns
// the single byte as-is and sets `valid` false.
char32_t decode_utf8(std::string_view text, std::size_t& i, bool& valid) {
    auto lead = static_cast<unsigned char>(text[i]);
    std::size_t len = lead < 0x80 ? 1 : (lead >> 5) == 0x6 ? 2 : (lead >> 4) == 0xE ? 3 : (lead >> 3) == 0x1E ? 4 : 0;
    valid = len != 0 && i + len <= text.size();
    char32_t cp = len == 1 ? lead : len == 2 ? (lead & 0x1F) : len == 3 ? (lead & 0x0F) : (lead & 0x07);
    for (std::size_t k = 1; valid && k < len; ++k) {
        auto cont = static_cast<unsigned char>(text[i + k]);
        if ((cont & 0xC0) != 0x80) valid = false;
        cp = (cp << 6) | (cont & 0x3F);
    }
    if (!valid) {
        ++i;
        return lead;
    }
    i += len;
    return cp;
}

}  // namespace

namespace {

// Lowercases a punctuation-free fragment; invalid UTF-8 bytes pass through.
std::string lower_fragment(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    std::size_t i = 0;
    while (i < raw.size()) {
        bool valid = true;
        const std::size_t start = i;
        const char32_t cp = decode_utf8(raw, i, valid);
        if (!valid) {
            out.push_back(raw[start]);
            continue;
        }
        append_utf8(out, lower_codepoint(cp));
    }
    return out;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string raw;
    auto flush = [&] {
        if (!raw.empty()) tokens.push_back(lower_fragment(raw));
        raw.clear();
    };
    for (char c : text) {
        if (is_ascii_space(c)) flush();
        else if (!is_ascii_punctuation(c)) raw.push_back(c);
    }
    flush();
    return tokens;
}

TokenizedCorpus TokenizedCorpus::subset(std::span<const std::size_t> rows) const {
    TokenizedCorpus out;
    out.classes = classes;
    out.docs.reserve(rows.size());
    out.labels.reserve(rows.size());
    for (std::size_t r : rows) {
        out.docs.push_back(docs.at(r));
        out.labels.push_back(labels.at(r));
    }
    return out;
}

TokenizedCorpus tokenize_corpus(const Corpus& corpus) {
    corpus.validate_for_training();
    TokenizedCorpus out;
    out.classes = corpus.categories;
    out.docs.reserve(corpus.documents.size());
    out.labels.reserve(corpus.documents.size());
    for (const auto& doc : corpus.documents) {
        out.docs.push_back({doc.id, tokenize(doc.text)});
        out.labels.push_back(corpus.category_index(*doc.label));
    }
    return out;
}

}  // namespace vatc
