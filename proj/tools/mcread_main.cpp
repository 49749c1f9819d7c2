#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcread/io.hpp"
#include "mcread/run.hpp"

using namespace mcread;

int main(int argc, char** argv) {
    CLI::App app{
        "mcread - driven transmon-resonator readout simulator: Lindblad time evolution, "
        "closed-form dispersive trajectories, and single-shot measurement statistics"};
    app.require_subcommand(1);

    std::string config_path, protocol, out_dir, seed_str;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "experiment config JSON file");
    app.add_option("--protocol", protocol,
                   "protocol preset (conventional, qubit-only, multichannel, "
                   "multichannel-imprecise, vacuum-lock, reset)");
    app.add_option("--seed", seed_str, "RNG seed");
    app.add_option("--out", out_dir, "output directory (overrides run.output_dir)");
    app.add_option("--override", overrides,
                   "config override as section.key=value (repeatable)")
        ->take_all();

    CommandRequest req;
    app.add_subcommand("simulate", "run the protocol for both preparations, write "
                                   "trajectory CSVs and diagnostics");
    app.add_subcommand("analytic", "closed-form dispersive trajectories on the same CSV "
                                   "schema");
    app.add_subcommand("shots", "single-shot campaign: matched filter, assignment, "
                                "histogram, optional error-vs-time curve");
    app.add_subcommand("sweep-phase", "steady-state locus versus the qubit-drive phase");
    app.add_subcommand("reset", "tune and evaluate the unconditional reset sequence");
    auto* fit = app.add_subcommand("fit", "calibration fits on CSV inputs");
    fit->add_option("kind", req.fit_kind, "two-gaussian | rb")->required();
    fit->add_option("--input", req.input_path, "input CSV ('-' for stdin)")
        ->default_val("-");
    fit->add_option("--interleaved", req.interleaved_path,
                    "interleaved decay CSV (rb only; enables the gate-error report)");

    CLI11_PARSE(app, argc, argv);

    try {
        std::string text = config_path.empty() ? "{}" : read_text_file(config_path);
        if (!protocol.empty()) text = apply_override(text, "protocol.preset=" + protocol);
        if (!seed_str.empty()) text = apply_override(text, "run.seed=" + seed_str);
        for (const auto& ov : overrides) text = apply_override(text, ov);
        ExperimentConfig cfg = parse_config_text(text);

        req.subcommand = app.get_subcommands().front()->get_name();
        req.out_dir_override = out_dir;
        return run_command(cfg, req);
    } catch (const Error& e) {
        std::cerr << "{\"error\": \"cli\", \"message\": \"" << e.what() << "\"}\n";
        return exit_code_for(e.code());
    }
}
