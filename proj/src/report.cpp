// SPDX-License-Identifier: MIT
#include "sqbsde/report.hpp"

#include "sqbsde/csv.hpp"

namespace sqbsde {

std::string pass_label(const CheckOutcome& c) {
    if (c.hard) return c.pass ? "pass" : "fail";
    return c.pass ? "soft-pass" : "soft-fail";
}

bool all_hard_pass(const std::vector<CheckOutcome>& checks) {
    for (const auto& c : checks)
        if (c.hard && !c.pass) return false;
    return true;
}

void write_checks_csv(const std::vector<CheckOutcome>& checks, std::ostream& os) {
    CsvWriter w(os);
    w.header({"check", "statistic", "threshold", "pass"});
    for (const auto& c : checks) w.cell(c.name).cell(c.statistic).cell(c.threshold).cell(pass_label(c)).end_row();
}

void write_counterexample_csv(const CounterexampleReport& r, std::ostream& os) {
    CsvWriter w(os);
    w.header({"construction", "check", "value", "threshold", "pass"});
    for (const auto& c : r.checks)
        w.cell(r.construction).cell(c.name).cell(c.statistic).cell(c.threshold).cell(pass_label(c)).end_row();
}

}  // namespace sqbsde
