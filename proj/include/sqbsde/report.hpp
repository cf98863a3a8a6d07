// SPDX-License-Identifier: MIT
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sqbsde {

/// One line of checks.csv. Soft checks are reported but never fail a run.
struct CheckOutcome {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
    bool hard = true;
    std::string note;
};

/// "pass", "fail", "soft-pass" or "soft-fail".
std::string pass_label(const CheckOutcome& c);

bool all_hard_pass(const std::vector<CheckOutcome>& checks);

/// Header check,statistic,threshold,pass.
void write_checks_csv(const std::vector<CheckOutcome>& checks, std::ostream& os);

struct CounterexampleReport {
    std::string construction;  // "3.1", "3.3", "3.4"
    std::vector<CheckOutcome> checks;
    std::vector<std::string> summary;
};

/// Header construction,check,value,threshold,pass.
void write_counterexample_csv(const CounterexampleReport& r, std::ostream& os);

}  // namespace sqbsde
