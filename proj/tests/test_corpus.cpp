#include <doctest.h>

#include <cctype>
#include <sstream>

#include "vatc/corpus.hpp"
#include "vatc/error.hpp"
#include "vatc/rng.hpp"

using namespace vatc;

namespace {

Corpus parse_jsonl(const std::string& text) {
    std::istringstream in(text);
    return read_corpus(in, CorpusFormat::jsonl);
}

std::string error_of(auto&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("jsonl record maps to one document and category") {
    auto c = parse_jsonl(R"({"id":"d1","label":"Neonatal","text":"baby had fever"})" "\n");
    REQUIRE(c.documents.size() == 1);
    CHECK(c.documents[0].id == "d1");
    CHECK(c.documents[0].label == "Neonatal");
    CHECK(c.documents[0].text == "baby had fever");
    CHECK(c.categories == std::vector<CategoryId>{"Neonatal"});
}

TEST_CASE("duplicate ids are rejected by name") {
    auto msg = error_of([] {
        parse_jsonl("{\"id\":\"d1\",\"label\":\"A\",\"text\":\"x\"}\n{\"id\":\"d1\",\"label\":\"B\",\"text\":\"y\"}\n");
    });
    CHECK(msg.find("d1") != std::string::npos);
    CHECK(msg.find("duplicate") != std::string::npos);
}

TEST_CASE("malformed records name their line") {
    auto msg = error_of([] { parse_jsonl("{\"id\":\"d1\",\"text\":\"x\"}\n{\"label\":\"A\",\"text\":\"y\"}\n"); });
    CHECK(msg.find("line 2") != std::string::npos);
    msg = error_of([] { parse_jsonl("{\"id\":\"d1\"}\n"); });
    CHECK(msg.find("line 1") != std::string::npos);
    CHECK(msg.find("text") != std::string::npos);
    msg = error_of([] { parse_jsonl("not json\n"); });
    CHECK(msg.find("line 1") != std::string::npos);
}

TEST_CASE("unlabeled documents load but fail training validation") {
    auto c = parse_jsonl("{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"b\",\"label\":\"B\",\"text\":\"y\"}\n");
    CHECK_FALSE(c.documents[0].label.has_value());
    CHECK_THROWS_AS(c.validate_for_training(), Error);
}

TEST_CASE("categories are sorted and counted") {
    auto c = Corpus::from_documents({{"1", "", "b"}, {"2", "", "a"}, {"3", "", "b"}});
    CHECK(c.categories == std::vector<CategoryId>{"a", "b"});
    CHECK(c.category_counts() == std::vector<std::size_t>{1, 2});
    CHECK(c.category_index("b") == 1);
    CHECK(c.category_index("zzz") == -1);
    CHECK_NOTHROW(c.validate_for_training());
    CHECK_THROWS_AS(Corpus::from_documents({{"", "x", "a"}}), Error);
}

TEST_CASE("csv reader handles quoting and requires a header") {
    std::istringstream in("id,label,text\nd1,Neonatal,\"said \"\"hello\"\", then\nleft\"\nd2,PostNeonatal,plain\n");
    auto c = read_corpus(in, CorpusFormat::csv);
    REQUIRE(c.documents.size() == 2);
    CHECK(c.documents[0].text == "said \"hello\", then\nleft");
    CHECK(c.documents[1].label == "PostNeonatal");

    std::istringstream headerless("d1,Neonatal,text\n");
    CHECK_THROWS_AS(read_corpus(headerless, CorpusFormat::csv), Error);
}

TEST_CASE("corpus round-trips through both formats") {
    std::vector<Document> docs = {
        {"d1", "Fever, \"quoted\" text\nsecond line", "Neonatal"},
        {"d2", "", "PostNeonatal"},
        {"d3", "caf\xc3\xa9 \xce\x91\xce\x92", std::nullopt},
        {"d,4", "comma id", "Neonatal"},
    };
    const auto corpus = Corpus::from_documents(docs);
    for (auto fmt : {CorpusFormat::jsonl, CorpusFormat::csv}) {
        std::stringstream buf;
        write_corpus(buf, corpus, fmt);
        auto back = read_corpus(buf, fmt);
        CHECK(back == corpus);
        std::stringstream again;
        write_corpus(again, back, fmt);
        std::stringstream first;
        write_corpus(first, corpus, fmt);
        CHECK(again.str() == first.str());
    }
}

TEST_CASE("format is chosen from the extension") {
    CHECK(corpus_format_for_path("x/y.csv") == CorpusFormat::csv);
    CHECK(corpus_format_for_path("x/y.jsonl") == CorpusFormat::jsonl);
    CHECK(parse_corpus_format("csv") == CorpusFormat::csv);
    CHECK_THROWS(parse_corpus_format("xml"));
}

TEST_CASE("tokenize examples") {
    CHECK(tokenize("The Child had fever.") == std::vector<std::string>{"the", "child", "had", "fever"});
    CHECK(tokenize("").empty());
    CHECK(tokenize("baby was weak,weak!!") == std::vector<std::string>{"baby", "was", "weakweak"});
    CHECK(tokenize("  born\t2 days\n\nearly ") == std::vector<std::string>{"born", "2", "days", "early"});
    CHECK(tokenize("... !!! ---").empty());
    CHECK(tokenize("don't re-admit") == std::vector<std::string>{"dont", "readmit"});
    // Non-ASCII letters are lowercased and kept.
    CHECK(tokenize("\xc3\x89T\xc3\x89 \xce\x94\xce\x95 \xd0\x96") ==
          std::vector<std::string>{"\xc3\xa9t\xc3\xa9", "\xce\xb4\xce\xb5", "\xd0\xb6"});
}

TEST_CASE("tokenize output is lowercase, punctuation free and idempotent") {
    const std::string alphabet = "aZ0 .,;:!?'\"()-_/\\\t\n\xc3\x80\xc3\xa0\xce\x91\xd0\x9fxyzQ";
    for (std::uint64_t trial = 0; trial < 500; ++trial) {
        CounterRng rng(derive_seed(17, "tokenize", trial));
        std::string text;
        const auto len = rng.below(60);
        for (std::uint64_t i = 0; i < len; ++i) text += alphabet[rng.below(alphabet.size())];
        const auto tokens = tokenize(text);
        std::string joined;
        for (const auto& t : tokens) {
            CHECK_FALSE(t.empty());
            for (char ch : t) {
                CHECK_FALSE(std::isupper(static_cast<unsigned char>(ch)));
                CHECK_FALSE(is_ascii_punctuation(ch));
                CHECK_FALSE(std::isspace(static_cast<unsigned char>(ch)));
            }
            joined += (joined.empty() ? "" : " ") + t;
        }
        CHECK(tokenize(joined) == tokens);
    }
}

TEST_CASE("tokenized corpus indexes labels into sorted classes") {
    auto c = Corpus::from_documents({{"1", "A b", "y"}, {"2", "c", "x"}});
    auto t = tokenize_corpus(c);
    CHECK(t.classes == std::vector<CategoryId>{"x", "y"});
    CHECK(t.labels == std::vector<int>{1, 0});
    CHECK(t.docs[0].doc_id == "1");
    CHECK(t.docs[0].tokens == std::vector<std::string>{"a", "b"});
    std::vector<std::size_t> rows = {1};
    auto s = t.subset(rows);
    CHECK(s.size() == 1);
    CHECK(s.labels == std::vector<int>{0});
    CHECK(s.classes == t.classes);
}

TEST_CASE("corpus digest tracks content") {
    auto a = Corpus::from_documents({{"1", "x", "a"}, {"2", "y", "b"}});
    auto b = Corpus::from_documents({{"1", "x", "a"}, {"2", "z", "b"}});
    CHECK(corpus_digest(a) == corpus_digest(a));
    CHECK(corpus_digest(a) != corpus_digest(b));
}
