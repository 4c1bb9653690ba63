#pragma once

#include "trapmodes_app/config.hpp"
#include "trapmodes_app/manifest.hpp"
#include "trapmodes_app/report.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace trapmodes::app {

enum ExitCode : int {
    exit_ok = 0,
    exit_config = 2,
    exit_solve = 3,
    exit_fit = 4,
    exit_io = 5,
    exit_validation = 6,
};

// Maps a library exception to the documented exit status.
int exit_code_for(const std::exception& e);

struct RunOptions {
    std::string out_dir;       // overrides output.dir when non-empty
    bool verbose = false;
    bool plots = false;        // SVG output in addition to output.plots
    bool explain = false;      // condition runs: integrand samples
    std::ostream* log = nullptr;
};

// What an experiment produces before anything touches the disk.
struct Artifacts {
    Json summary;                                     // result.json
    std::vector<std::pair<std::string, Table>> tables;  // file name -> CSV
    std::vector<std::pair<std::string, Plot>> plots;    // file name -> SVG
    std::vector<std::pair<std::string, std::string>> raw;  // file name -> bytes, written verbatim
    int exit_code = exit_ok;                          // nonzero for partial results
    std::string failure;
};

struct Formats {
    bool csv = true;
    bool json = true;
    bool svg = false;
};

// Writes the artifacts through `writer`. A table without rows is a
// precondition error.
void emit_report(OutputWriter& writer, const Artifacts& artifacts, const Formats& formats);

Table sweep_table(const std::vector<asymptotics::SweepRecord>& records);
Plot sweep_plot(const std::vector<asymptotics::SweepRecord>& records, const std::string& title);

struct ValidationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Built-in oracle suite: dense vs Lanczos, rectangle spectrum, fit recovery,
// analytic cross-section and the Fourier condition.
std::vector<ValidationCheck> run_validation();

Artifacts run_experiment(const ExperimentConfig& config, const RunOptions& options,
                         std::vector<StepStatus>* steps = nullptr);

// Full run: upfront writability check, experiment, artifacts, manifest.
// Library errors are caught and turned into the exit status.
struct RunOutcome {
    RunManifest manifest;
    int exit_code = exit_ok;
    std::string error;
};

RunOutcome run_config(const ExperimentConfig& config, const RunOptions& options);

}  // namespace trapmodes::app
