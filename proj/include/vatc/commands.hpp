#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vatc/config.hpp"
#include "vatc/eval.hpp"

namespace vatc {

struct CommandOptions {
    bool dry_run = false;
    bool keyness_full_corpus = false;  // sweep only
    std::string category;              // keywords only; empty means the config value
};

/// Loads corpus.path, or generates the configured synthetic corpus.
Corpus resolve_corpus(const ExperimentConfig& config);

// Each command writes into config.output_dir and returns a process exit code.
int cmd_generate(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log);
int cmd_run(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log);
int cmd_sweep(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log);
int cmd_keywords(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log);

/// Exit codes: 0 success, 1 usage or config error, 2 runtime error
/// (including any failed grid cell).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace vatc
