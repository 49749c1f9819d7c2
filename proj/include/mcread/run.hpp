#pragma once

#include <string>

#include "mcread/config.hpp"

namespace mcread {

inline constexpr const char* kVersion = "0.1.0";

/// One CLI invocation. fit_kind/input apply to the fit subcommand only.
struct CommandRequest {
    std::string subcommand;         // simulate | analytic | shots | sweep-phase | reset | fit
    std::string fit_kind;           // two-gaussian | rb
    std::string input_path;         // fit input CSV ("-" = stdin)
    std::string interleaved_path;   // optional second decay curve for fit rb
    std::string out_dir_override;   // overrides run.output_dir when non-empty
};

/// Exit code for a domain error category.
int exit_code_for(Error::Code code);

/// Dispatches a subcommand, writes its artifacts and a manifest JSON
/// ({config_hash, seed, artifacts[], version}) into the output directory,
/// and returns the process exit code. Failures produce a machine-readable
/// error JSON on stderr (and error.json in the output directory when
/// possible) instead of throwing.
int run_command(const ExperimentConfig& cfg, const CommandRequest& req);

}  // namespace mcread
