#include "vatc/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace vatc {

namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string threshold_label(const ReportRow& row) { return row.cell.features.threshold.to_string(); }

std::string csv_escape(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

std::string provenance_line(const ReportMetadata& md) {
    std::ostringstream out;
    out << "# command=" << md.command << " seed=" << md.seed << " config_digest=" << md.config_digest
        << " corpus_digest=" << md.corpus_digest << " fold_plan_digest=" << md.fold_plan_digest << " k=" << md.k
        << " reference_mode=" << to_string(md.reference_mode) << " leaky=" << (md.leaky ? "true" : "false");
    return out.str();
}

void write_results_csv(std::ostream& out, const ReportMetadata& md, std::span<const ReportRow> rows) {
    out << provenance_line(md) << '\n';
    out << "classifier,scheme,threshold,macro_f1,micro_f1,accuracy";
    for (const auto& c : md.classes) out << ',' << csv_escape("f1_" + c);
    out << ",fold_macro_f1_mean,fold_macro_f1_std,mean_features,status\n";
    for (const auto& row : rows) {
        out << to_string(row.cell.classifier.kind) << ',' << to_string(row.cell.scheme) << ',' << threshold_label(row);
        if (row.ok()) {
            const auto& r = *row.result;
            out << ',' << fixed(r.metrics.macro_f1, 10) << ',' << fixed(r.metrics.micro_f1, 10) << ','
                << fixed(r.metrics.accuracy, 10);
            for (double f : r.metrics.f1) out << ',' << fixed(f, 10);
            out << ',' << fixed(r.fold_macro_f1_mean, 10) << ',' << fixed(r.fold_macro_f1_std, 10) << ','
                << fixed(r.mean_features, 1) << ",ok\n";
        } else {
            out << ",,,";
            for (std::size_t i = 0; i < md.classes.size(); ++i) out << ',';
            out << ",,," << csv_escape("failed: " + row.error) << '\n';
        }
    }
}

void write_folds_csv(std::ostream& out, const ReportMetadata& md, std::span<const ReportRow> rows) {
    out << provenance_line(md) << '\n';
    out << "classifier,scheme,threshold,fold,n_test,n_features,macro_f1,accuracy\n";
    for (const auto& row : rows) {
        if (!row.ok()) continue;
        for (const auto& f : row.result->folds) {
            out << to_string(row.cell.classifier.kind) << ',' << to_string(row.cell.scheme) << ','
                << threshold_label(row) << ',' << f.fold << ',' << f.test_rows.size() << ',' << f.n_features << ','
                << fixed(f.evaluation.metrics.macro_f1, 10) << ',' << fixed(f.evaluation.metrics.accuracy, 10)
                << '\n';
        }
    }
}

std::string render_grid_table(const Report& report) {
    std::vector<WeightingScheme> schemes;
    std::vector<ClassifierKind> classifiers;
    for (const auto& row : report.grid) {
        if (std::find(schemes.begin(), schemes.end(), row.cell.scheme) == schemes.end())
            schemes.push_back(row.cell.scheme);
        if (std::find(classifiers.begin(), classifiers.end(), row.cell.classifier.kind) == classifiers.end())
            classifiers.push_back(row.cell.classifier.kind);
    }
    const std::string head = "Feature Value Representation";
    std::size_t first_width = head.size();
    for (auto s : schemes) first_width = std::max(first_width, display_name(s).size());
    std::vector<std::size_t> widths;
    for (auto c : classifiers) widths.push_back(std::max<std::size_t>(display_name(c).size(), 6));

    std::ostringstream out;
    out << provenance_line(report.metadata) << '\n';
    out << "Macro-F1 (pooled over " << report.metadata.k << "-fold stratified cross-validation)\n\n";
    auto pad = [](std::string s, std::size_t w) {
        s.resize(std::max(s.size(), w), ' ');
        return s;
    };
    out << pad(head, first_width);
    for (std::size_t i = 0; i < classifiers.size(); ++i) out << "  " << pad(std::string(display_name(classifiers[i])), widths[i]);
    out << '\n' << std::string(first_width, '-');
    for (auto w : widths) out << "  " << std::string(w, '-');
    out << '\n';
    for (auto s : schemes) {
        out << pad(std::string(display_name(s)), first_width);
        for (std::size_t i = 0; i < classifiers.size(); ++i) {
            std::string cell = "-";
            for (const auto& row : report.grid)
                if (row.cell.scheme == s && row.cell.classifier.kind == classifiers[i])
                    cell = row.ok() ? fixed(row.result->metrics.macro_f1, 3) : "FAILED";
            out << "  " << pad(cell, widths[i]);
        }
        out << '\n';
    }
    std::string text = out.str();
    std::string trimmed;
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);) {
        line.erase(line.find_last_not_of(' ') + 1);
        trimmed += line + '\n';
    }
    return trimmed;
}

std::string render_sweep_table(const Report& report) {
    std::ostringstream out;
    out << provenance_line(report.metadata) << '\n';
    if (!report.sweep.empty()) {
        const auto& cell = report.sweep.front().cell;
        out << "Keyness feature reduction: " << display_name(cell.classifier.kind) << ", "
            << display_name(cell.scheme) << ", reference=" << to_string(report.metadata.reference_mode)
            << (report.metadata.leaky ? ", rankings on full corpus" : ", rankings per training fold") << "\n\n";
    }
    out << "threshold  features  macro_f1  accuracy\n";
    out << "---------  --------  --------  --------\n";
    for (const auto& row : report.sweep) {
        std::string t = threshold_label(row);
        t.resize(std::max<std::size_t>(t.size(), 9), ' ');
        out << t << "  ";
        if (!row.ok()) {
            out << "FAILED: " << row.error << '\n';
            continue;
        }
        const auto& r = *row.result;
        std::string features = fixed(r.mean_features, 0);
        out << std::string(features.size() < 8 ? 8 - features.size() : 0, ' ') << features << "  "
            << fixed(r.metrics.macro_f1, 4) << "    " << fixed(r.metrics.accuracy, 4) << "  "
            << std::string(static_cast<std::size_t>(r.metrics.macro_f1 * 40.0 + 0.5), '#') << '\n';
    }
    return out.str();
}

std::string metadata_json(const ReportMetadata& md) {
    nlohmann::ordered_json j;
    j["command"] = md.command;
    j["seed"] = md.seed;
    j["config_digest"] = md.config_digest;
    j["corpus_digest"] = md.corpus_digest;
    j["fold_plan_digest"] = md.fold_plan_digest;
    j["k"] = md.k;
    j["n_docs"] = md.n_docs;
    nlohmann::ordered_json classes = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < md.classes.size(); ++i)
        classes.push_back({{"name", md.classes[i]}, {"documents", i < md.class_counts.size() ? md.class_counts[i] : 0}});
    j["classes"] = classes;
    j["keyness_reference_mode"] = std::string(to_string(md.reference_mode));
    j["leaky"] = md.leaky;
    j["started_at"] = md.started_at;
    j["finished_at"] = md.finished_at;
    return j.dump(2) + "\n";
}

}  // namespace vatc
