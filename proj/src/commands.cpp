#include "vatc/commands.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "vatc/error.hpp"
#include "vatc/report.hpp"
#include "vatc/rng.hpp"

namespace vatc {

namespace fs = std::filesystem;

namespace {

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string hex_seed(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

fs::path output_path(const ExperimentConfig& config, const std::string& name) {
    const fs::path dir(config.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
    return dir / name;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
    out.close();
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string corpus_source(const ExperimentConfig& config) {
    if (!config.corpus_path.empty()) return "file " + config.corpus_path;
    const auto spec = config.synthetic_spec();
    return "synthetic preset '" + config.preset + "' (" + std::to_string(spec.total_docs) + " documents, seed " +
           hex_seed(spec.seed) + ")";
}

void print_plan(std::ostream& log, const ExperimentConfig& config, const std::string& command,
                const std::vector<std::string>& cells, const std::vector<std::string>& outputs) {
    log << "command: " << command << '\n'
        << "config_digest: " << config_digest(config) << '\n'
        << "seed: " << config.seed << '\n'
        << "corpus: " << corpus_source(config) << '\n';
    if (command == "run" || command == "sweep") {
        log << "folds: " << config.folds << " (fold seed " << hex_seed(derive_seed(config.seed, "folds")) << ")\n";
        for (std::size_t f = 0; f < config.folds; ++f)
            log << "  fold " << f << " classifier seed " << hex_seed(derive_seed(config.seed, "classifier", f)) << '\n';
        log << "keyness: reference=" << to_string(config.reference_mode)
            << (config.keyness_full_corpus ? " full-corpus (leaky)" : " per training fold") << '\n';
        log << "threads: " << config.threads << '\n';
    }
    if (!cells.empty()) {
        log << "cells (" << cells.size() << "):\n";
        for (const auto& c : cells) log << "  " << c << '\n';
    }
    log << "outputs:\n";
    for (const auto& o : outputs) log << "  " << (fs::path(config.output_dir) / o).string() << '\n';
}

void finish_report(Report& report, const ExperimentConfig& config, const Corpus& corpus, const std::string& started) {
    report.metadata.config_digest = config_digest(config);
    report.metadata.corpus_digest = corpus_digest(corpus);
    report.metadata.started_at = started;
    report.metadata.finished_at = utc_now();
}

int report_status(const Report& report, std::ostream& log) {
    for (const auto* rows : {&report.grid, &report.sweep})
        for (const auto& row : *rows)
            if (!row.ok())
                log << "error: " << to_string(row.cell.classifier.kind) << '/' << to_string(row.cell.scheme) << '/'
                    << row.cell.features.threshold.to_string() << ": " << row.error << '\n';
    return report.all_ok() ? 0 : 2;
}

}  // namespace

Corpus resolve_corpus(const ExperimentConfig& config) {
    if (!config.corpus_path.empty())
        return load_corpus(config.corpus_path,
                           config.corpus_format ? *config.corpus_format : corpus_format_for_path(config.corpus_path));
    return generate_synthetic_corpus(config.synthetic_spec());
}

int cmd_generate(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log) {
    const auto spec = config.synthetic_spec();
    if (options.dry_run) {
        print_plan(log, config, "generate", {}, {"corpus.jsonl", "corpus.spec"});
        return 0;
    }
    const Corpus corpus = generate_synthetic_corpus(spec);
    std::ostringstream jsonl;
    write_corpus(jsonl, corpus, CorpusFormat::jsonl);
    std::ostringstream echo;
    echo << "# seed=" << config.seed << " config_digest=" << config_digest(config)
         << " corpus_digest=" << corpus_digest(corpus) << '\n'
         << "preset = " << config.preset << '\n'
         << describe(spec);
    write_file(output_path(config, "corpus.jsonl"), jsonl.str());
    write_file(output_path(config, "corpus.spec"), echo.str());
    const auto counts = corpus.category_counts();
    log << "wrote " << corpus.documents.size() << " documents to "
        << (fs::path(config.output_dir) / "corpus.jsonl").string() << '\n';
    for (std::size_t i = 0; i < corpus.categories.size(); ++i)
        log << "  " << corpus.categories[i] << ": " << counts[i] << '\n';
    return 0;
}

int cmd_run(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log) {
    if (options.dry_run) {
        std::vector<std::string> cells;
        for (auto s : config.schemes)
            for (auto c : config.classifiers) cells.push_back(std::string(to_string(c)) + " x " + std::string(to_string(s)));
        print_plan(log, config, "run", cells, {"grid.csv", "grid.txt", "grid_folds.csv", "grid.meta.json"});
        return 0;
    }
    const std::string started = utc_now();
    const Corpus corpus = resolve_corpus(config);
    const auto tokenized = tokenize_corpus(corpus);
    std::vector<ClassifierConfig> classifiers;
    for (auto kind : config.classifiers) classifiers.push_back(config.classifier_config(kind));
    RunOptions run_options;
    run_options.threads = config.threads;
    run_options.features.reference_mode = config.reference_mode;
    Report report = run_experiment_grid(tokenized, classifiers, config.schemes, config.folds, config.seed, run_options);
    finish_report(report, config, corpus, started);

    std::ostringstream csv, folds;
    write_results_csv(csv, report.metadata, report.grid);
    write_folds_csv(folds, report.metadata, report.grid);
    const std::string table = render_grid_table(report);
    write_file(output_path(config, "grid.csv"), csv.str());
    write_file(output_path(config, "grid_folds.csv"), folds.str());
    write_file(output_path(config, "grid.txt"), table);
    write_file(output_path(config, "grid.meta.json"), metadata_json(report.metadata));
    log << table;
    return report_status(report, log);
}

int cmd_sweep(const ExperimentConfig& base, const CommandOptions& options, std::ostream& log) {
    ExperimentConfig config = base;
    if (options.keyness_full_corpus) config.keyness_full_corpus = true;
    if (options.dry_run) {
        std::vector<std::string> cells;
        for (const auto& t : config.thresholds)
            cells.push_back(std::string(to_string(config.sweep_classifier)) + " x " +
                            std::string(to_string(config.sweep_scheme)) + " top " + t.to_string());
        print_plan(log, config, "sweep", cells, {"sweep.csv", "sweep.txt", "sweep_folds.csv", "sweep.meta.json"});
        return 0;
    }
    const std::string started = utc_now();
    const Corpus corpus = resolve_corpus(config);
    const auto tokenized = tokenize_corpus(corpus);
    RunOptions run_options;
    run_options.threads = config.threads;
    run_options.features.reference_mode = config.reference_mode;
    run_options.features.full_corpus = config.keyness_full_corpus;
    Report report = run_feature_sweep(tokenized, config.sweep_scheme, config.classifier_config(config.sweep_classifier),
                                      config.thresholds, config.folds, config.seed, run_options);
    finish_report(report, config, corpus, started);

    std::ostringstream csv, folds;
    write_results_csv(csv, report.metadata, report.sweep);
    write_folds_csv(folds, report.metadata, report.sweep);
    const std::string table = render_sweep_table(report);
    write_file(output_path(config, "sweep.csv"), csv.str());
    write_file(output_path(config, "sweep_folds.csv"), folds.str());
    write_file(output_path(config, "sweep.txt"), table);
    write_file(output_path(config, "sweep.meta.json"), metadata_json(report.metadata));
    log << table;
    return report_status(report, log);
}

int cmd_keywords(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log) {
    const std::string category = options.category.empty() ? config.keywords_category : options.category;
    if (options.dry_run) {
        print_plan(log, config, "keywords", {category.empty() ? "all categories" : "category " + category},
                   {"keywords.csv"});
        return 0;
    }
    const Corpus corpus = resolve_corpus(config);
    const auto tokenized = tokenize_corpus(corpus);
    std::vector<KeynessRanking> rankings;
    if (category.empty()) {
        rankings = rank_all_categories(tokenized, config.reference_mode);
    } else {
        if (std::find(tokenized.classes.begin(), tokenized.classes.end(), category) == tokenized.classes.end()) {
            std::string known;
            for (const auto& c : tokenized.classes) known += (known.empty() ? "" : ", ") + c;
            throw ConfigError("unknown category '" + category + "'; known categories: " + known);
        }
        rankings.push_back(rank_category_keywords(tokenized, category, config.reference_mode));
    }
    std::ostringstream csv;
    csv << "# command=keywords seed=" << config.seed << " config_digest=" << config_digest(config)
        << " corpus_digest=" << corpus_digest(corpus) << " reference_mode=" << to_string(config.reference_mode)
        << '\n';
    write_rankings_csv(csv, rankings);
    const auto path = output_path(config, "keywords.csv");
    write_file(path, csv.str());
    for (const auto& r : rankings) {
        log << r.category << ':';
        for (std::size_t i = 0; i < std::min<std::size_t>(10, r.ranked.size()); ++i) log << ' ' << r.ranked[i].term;
        log << '\n';
    }
    log << "wrote " << path.string() << '\n';
    return 0;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Text classification experiments: weighting schemes, classifiers, keyness feature reduction"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<unsigned> threads;
    CommandOptions options;
    app.add_option("--config", config_path, "Config file (key = value lines)");
    app.add_option("--seed", seed, "Override the config seed");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--dry-run", options.dry_run, "Print the resolved plan and exit");

    auto* generate = app.add_subcommand("generate", "Write a synthetic corpus");
    auto* run = app.add_subcommand("run", "Cross-validate the classifier x scheme grid");
    auto* sweep = app.add_subcommand("sweep", "Cross-validate one cell across keyness thresholds");
    sweep->add_flag("--keyness-on-full-corpus", options.keyness_full_corpus,
                    "Rank keywords once on the whole corpus (leaks test folds)");
    auto* keywords = app.add_subcommand("keywords", "Write keyness rankings");
    keywords->add_option("--category", options.category, "Rank one category only");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    ExperimentConfig config;
    try {
        if (!config_path.empty()) config = load_config(config_path);
        if (seed) config.seed = *seed;
        if (out_dir) config.output_dir = *out_dir;
        if (threads) config.threads = *threads;
        if (!config.corpus_path.empty() && *generate) throw ConfigError("generate needs a synthetic corpus, but corpus.path is set");
        config.synthetic_spec();
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (*generate) return cmd_generate(config, options, out);
        if (*run) return cmd_run(config, options, out);
        if (*sweep) return cmd_sweep(config, options, out);
        return cmd_keywords(config, options, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace vatc
