// SPDX-License-Identifier: MIT
#pragma once

#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "sqbsde/config.hpp"
#include "sqbsde/forward_model.hpp"
#include "sqbsde/hj_solver.hpp"
#include "sqbsde/report.hpp"

namespace sqbsde {

struct RunResults {
    Command command = Command::Solve;
    std::string label;  // "solve", "counterexample 3.4", ...
    std::vector<CheckOutcome> checks;
    std::vector<std::string> summary;
    std::shared_ptr<const PdeSolution> solution;
    std::vector<std::pair<std::string, std::string>> tables;  // file name, CSV text
    std::optional<PathBundle> paths;
};

/// Execute the configured pipeline. Module errors propagate.
RunResults run(const RunConfig& cfg);

/// Write checks.csv, summary.txt, solution.csv (when a PDE was solved) and command tables.
void emit_report(const RunResults& results, const RunConfig& cfg, const std::string& out_dir);

/// run + emit_report. Returns 0 iff every hard check passed, 1 on failed checks and 2 on
/// errors; messages go to err.
int execute(const RunConfig& cfg, std::ostream& err);

}  // namespace sqbsde
