#pragma once

#include <trapmodes/asymptotics.hpp>

#include <boost/property_tree/ptree.hpp>

#include <optional>
#include <string>
#include <vector>

namespace trapmodes::app {

enum class ExperimentKind {
    cross_section,
    condition,
    semicylinder,
    thin_sweep,
    trapezoid,
    splitting,
    dumbbell,
    neumann_half,
    validate,
    export_mesh,
};

const char* to_string(ExperimentKind k);
ExperimentKind parse_kind(const std::string& s);
std::vector<std::string> kind_names();

// Everything a run needs, with the documented defaults filled in. See
// docs/config.md for the file layout.
struct ExperimentConfig {
    int schema = 1;
    ExperimentKind kind = ExperimentKind::validate;
    std::string name;

    mesh::ProfileSpec H_plus = mesh::ProfileSpec::zero();
    mesh::ProfileSpec H_minus = mesh::ProfileSpec::zero();
    problems::CrossSectionSpec cross_section;
    int cross_section_refinements = 5;
    std::optional<mesh::DomainSpec> domain;  // export-mesh only
    mesh::Resolution resolution{16, 96};      // export-mesh only

    problems::SolveOptions solve;
    problems::ThinBc thin_bc = problems::ThinBc::mixed;
    problems::SemiBc semi_bc = problems::SemiBc::mixed;

    std::vector<double> hs;
    std::vector<double> Ls;
    asymptotics::ResolutionPolicy policy;
    asymptotics::PrecisionOptions precision;
    std::optional<std::pair<double, double>> truncation;

    asymptotics::TrapezoidPolicy trapezoid;
    std::vector<int> js{0, 1};

    mesh::HeadSpec head_plus{2.0, 2.0};
    mesh::HeadSpec head_minus{1.5, 1.5};

    std::vector<double> epsilon_grid = conditions::default_epsilon_grid();

    std::string out_dir = "out";
    bool plots = false;

    std::string text;    // normalized config text the digest is taken from
};

// Parse sectioned key-value text. Throws ConfigError naming the offending key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Normalized round-trip form (stable key order).
std::string config_to_text(const ExperimentConfig& config);

}  // namespace trapmodes::app
