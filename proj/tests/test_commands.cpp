#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "vatc/commands.hpp"

using namespace vatc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("vatc_test_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str(const std::string& child = "") const { return (child.empty() ? path : path / child).string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cli(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int rc = run_cli(args, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return rc;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

}  // namespace

TEST_CASE("generate writes a deterministic corpus and spec echo") {
    TempDir dir("generate");
    CHECK(cli({"generate", "--out", dir.str("a")}) == 0);
    CHECK(cli({"--out", dir.str("b"), "generate"}) == 0);
    const auto a = slurp(dir.path / "a" / "corpus.jsonl");
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(dir.path / "b" / "corpus.jsonl"));
    CHECK(slurp(dir.path / "a" / "corpus.spec") == slurp(dir.path / "b" / "corpus.spec"));
    CHECK(slurp(dir.path / "a" / "corpus.spec").find("config_digest=") != std::string::npos);
    auto corpus = load_corpus(dir.str("a/corpus.jsonl"), CorpusFormat::jsonl);
    CHECK(corpus.documents.size() == 100);
    for (auto n : corpus.category_counts()) CHECK(n == 20);
    CHECK(cli({"generate", "--seed", "2", "--out", dir.str("c")}) == 0);
    CHECK(slurp(dir.path / "c" / "corpus.jsonl") != a);
}

TEST_CASE("run writes the grid report and is byte-stable") {
    TempDir dir("run");
    write(dir.path / "run.cfg", "folds = 5\nexperiment.classifiers = nb, svm\n");
    std::string out;
    CHECK(cli({"--config", dir.str("run.cfg"), "--out", dir.str("a"), "run"}, &out) == 0);
    CHECK(out.find("Naive Bayes") != std::string::npos);
    CHECK(cli({"run", "--config", dir.str("run.cfg"), "--out", dir.str("b"), "--threads", "3"}) == 0);
    for (const char* name : {"grid.csv", "grid.txt", "grid_folds.csv"}) {
        CHECK(slurp(dir.path / "a" / name) == slurp(dir.path / "b" / name));
        CHECK(slurp(dir.path / "a" / name).find("seed=1 config_digest=") != std::string::npos);
    }
    const auto csv = slurp(dir.path / "a" / "grid.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2 + 8);
    CHECK(slurp(dir.path / "a" / "grid.meta.json").find("\"started_at\"") != std::string::npos);
}

TEST_CASE("run on a corpus file") {
    TempDir dir("file");
    CHECK(cli({"generate", "--out", dir.str()}) == 0);
    write(dir.path / "f.cfg", "corpus.path = " + dir.str("corpus.jsonl") +
                                  "\nfolds = 3\nexperiment.classifiers = nb\nexperiment.schemes = tf\n");
    CHECK(cli({"--config", dir.str("f.cfg"), "--out", dir.str("r"), "run"}) == 0);
    CHECK(fs::exists(dir.path / "r" / "grid.csv"));
}

TEST_CASE("dry run prints the plan without writing files") {
    TempDir dir("dry");
    std::string out;
    CHECK(cli({"--dry-run", "--out", dir.str("o"), "run"}, &out) == 0);
    CHECK(out.find("cells (12)") != std::string::npos);
    CHECK(out.find("fold seed") != std::string::npos);
    CHECK(out.find("svm x tfidf") != std::string::npos);
    CHECK_FALSE(fs::exists(dir.path / "o"));
    CHECK(cli({"sweep", "--dry-run", "--out", dir.str("o")}, &out) == 0);
    CHECK(out.find("cells (10)") != std::string::npos);
}

TEST_CASE("sweep emits one row per threshold and records leakage") {
    TempDir dir("sweep");
    write(dir.path / "s.cfg", "folds = 3\nkeyness.thresholds = all\n");
    CHECK(cli({"--config", dir.str("s.cfg"), "--out", dir.str(), "sweep", "--keyness-on-full-corpus"}) == 0);
    const auto csv = slurp(dir.path / "sweep.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    CHECK(csv.find("leaky=true") != std::string::npos);
    CHECK(slurp(dir.path / "sweep.meta.json").find("\"leaky\": true") != std::string::npos);

    write(dir.path / "s2.cfg", "folds = 3\nsweep.classifier = nb\n");
    CHECK(cli({"--config", dir.str("s2.cfg"), "--out", dir.str("full"), "sweep"}) == 0);
    const auto full = slurp(dir.path / "full" / "sweep.csv");
    CHECK(std::count(full.begin(), full.end(), '\n') == 12);
    CHECK(full.find("leaky=false") != std::string::npos);
}

TEST_CASE("keywords for one category or all") {
    TempDir dir("keywords");
    CHECK(cli({"--out", dir.str(), "keywords", "--category", "Neonatal"}) == 0);
    const auto one = slurp(dir.path / "keywords.csv");
    CHECK(one.find("\ncategory,rank,term,g2,target_count,reference_count\nNeonatal,1,") != std::string::npos);
    CHECK(one.find("PostNeonatal,") == std::string::npos);
    CHECK(cli({"--out", dir.str(), "keywords"}) == 0);
    CHECK(slurp(dir.path / "keywords.csv").find("PostNeonatal,1,") != std::string::npos);

    std::string err;
    CHECK(cli({"--out", dir.str(), "keywords", "--category", "Stillborn"}, nullptr, &err) == 1);
    for (const char* known : {"Antepartum_stillbirth", "Intrapartum_still_birth", "Neonatal",
                              "Non_stillbirth_unknown_cause", "PostNeonatal"})
        CHECK(err.find(known) != std::string::npos);
}

TEST_CASE("exit codes") {
    TempDir dir("codes");
    std::string err;
    CHECK(cli({}, nullptr, &err) == 1);
    CHECK(cli({"train"}) == 1);
    CHECK(cli({"run", "--threads", "0"}) == 1);
    write(dir.path / "bad.cfg", "experiment.schemes = tf-idf2\n");
    CHECK(cli({"--config", dir.str("bad.cfg"), "run"}, nullptr, &err) == 1);
    CHECK(err.find("experiment.schemes") != std::string::npos);
    CHECK(cli({"--config", dir.str("missing.cfg"), "run"}) == 1);
    write(dir.path / "nofile.cfg", "corpus.path = " + dir.str("absent.jsonl") + "\n");
    CHECK(cli({"--config", dir.str("nofile.cfg"), "--out", dir.str(), "run"}) == 2);
    write(dir.path / "broken.cfg", "rf.n_trees = 1\nfolds = 2\nexperiment.classifiers = rf\nexperiment.schemes = tf\n"
                                   "rf.max_depth = 1\n");
    CHECK(cli({"--config", dir.str("broken.cfg"), "--out", dir.str(), "run"}) == 0);
    CHECK(cli({"--help"}) == 0);
}
