#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "vatc/eval.hpp"

namespace vatc {

/// One CSV row per grid cell or sweep row:
/// classifier,scheme,threshold,macro_f1,micro_f1,accuracy,f1_<class>...,
/// fold_macro_f1_mean,fold_macro_f1_std,mean_features,status
/// preceded by a `#` provenance line (seed and digests).
void write_results_csv(std::ostream& out, const ReportMetadata& md, std::span<const ReportRow> rows);

/// Per-fold detail: classifier,scheme,threshold,fold,n_test,n_features,macro_f1,accuracy.
void write_folds_csv(std::ostream& out, const ReportMetadata& md, std::span<const ReportRow> rows);

/// Schemes down, classifiers across, pooled macro-F1 in each cell.
std::string render_grid_table(const Report& report);

/// Threshold rows with macro-F1, accuracy and a text bar.
std::string render_sweep_table(const Report& report);

/// JSON sidecar: seed, digests, class counts, keyness provenance, timestamps.
std::string metadata_json(const ReportMetadata& md);

std::string provenance_line(const ReportMetadata& md);

}  // namespace vatc
