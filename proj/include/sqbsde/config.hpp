// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sqbsde/forward_model.hpp"
#include "sqbsde/generators.hpp"
#include "sqbsde/hj_solver.hpp"
#include "sqbsde/terminal_data.hpp"

namespace sqbsde {

enum class Command { Solve, Dual, Checks, Regularize, Counterexample, Oracle };

std::string to_string(Command c);
Command parse_command(const std::string& s);

struct GeneratorSpec {
    std::string kind = "power";  // power | quadratic | sampled
    double q = 3.0;
    double gamma = 0.5;
    std::string file;
    std::optional<double> truncation;
};

struct TerminalSpec {
    std::string kind = "cos";  // cos | lorentzian | gaussian | tanh | step | constant | table
    double amplitude = 1.0;
    double frequency = 1.0;
    double center = 0.0;
    double width = 1.0;
    double jump = 0.0;
    double low = 0.0;
    double high = 1.0;
    std::string jump_value = "lower";
    double value = 0.0;  // constant
    std::string file;
    std::optional<double> regularize_m;
    std::string regularize_side = "lower";
};

struct ModelSpec {
    std::string drift = "zero";  // zero | linear | tanh | sine
    double drift_param = 0.0;
    double sigma = 1.0;
    std::optional<double> lambda;
};

struct McSpec {
    std::size_t n_paths = 10000;
    std::size_t n_steps = 200;
    std::uint64_t seed = 1;
};

struct DualSpec {
    std::vector<double> constants{-0.5, 0.5};
    double scheme_tol = 1e-2;
};

struct RegularizeSpec {
    std::vector<double> m_list{1.0, 2.0, 4.0, 8.0};
    std::string side = "both";  // lower | upper | both
};

struct CounterexampleSpec {
    std::string which = "3.4";
    double q = 3.0;
    std::optional<std::size_t> K;  // default 10000 / 8 / 6 by construction
    double T = 1.0;
    int n = 2;
    double theta = 0.5;
    double epsilon = 0.5;
    bool full_simulation = false;
    std::size_t n_paths = 10000;
    std::optional<std::size_t> n_steps;  // default 900 for 3.3, 1000 for 3.4
    std::size_t sim_cap = 3;
};

struct RunConfig {
    Command command = Command::Solve;
    GeneratorSpec generator;
    TerminalSpec terminal;
    ModelSpec model;
    double T = 1.0;
    double x0 = 0.0;
    double t0 = 0.0;
    GridSpec grid;
    McSpec mc;
    DualSpec dual;
    RegularizeSpec regularize;
    CounterexampleSpec counterexample;
    std::string out_dir = "out";
    bool dump_paths = false;
    std::vector<std::string> warnings;
};

/// Parse and validate a JSON config. Unknown keys, type mismatches and invalid values throw
/// ConfigError naming the field path; syntax errors report line and column.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);

/// Re-run the cross-field validation, e.g. after command-line overrides.
void validate(RunConfig& cfg);

Generator make_generator(const GeneratorSpec& s);
TerminalCondition make_terminal(const TerminalSpec& s);
ForwardModel make_model(const RunConfig& cfg);

/// Reference of every key and its default, printed by --help.
std::string config_schema();

}  // namespace sqbsde
