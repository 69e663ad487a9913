#pragma once

#include <iosfwd>
#include <string>

#include "vatc/classifier.hpp"

namespace vatc {

/// Versioned text dump; every double is written as a C99 hex-float so a
/// save/load round trip reproduces predictions bit for bit. See
/// docs/model_format.md.
void write_model(std::ostream& out, const Model& model);
Model read_model(std::istream& in);

void save_model(const std::string& path, const Model& model);
Model load_model(const std::string& path);

}  // namespace vatc
