// SPDX-License-Identifier: MIT
#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sqbsde {

/// Shortest round-trip decimal form; identical bytes for identical doubles.
std::string format_double(double v);

/// Reads (a, b) rows from a CSV with exactly one header line.
std::vector<std::pair<double, double>> read_two_column_csv(const std::string& path);

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void header(std::initializer_list<std::string_view> cols);
    CsvWriter& cell(std::string_view s);
    CsvWriter& cell(double v);
    CsvWriter& cell(long long v);
    CsvWriter& cell(std::size_t v) { return cell(static_cast<long long>(v)); }
    CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
    void end_row();

private:
    void sep();
    std::ostream& os_;
    bool fresh_ = true;
};

}  // namespace sqbsde
