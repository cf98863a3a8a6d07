// SPDX-License-Identifier: MIT
#include "sqbsde/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sqbsde {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;  // fold -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<std::pair<double, double>> read_two_column_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::vector<std::pair<double, double>> rows;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1) continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected two columns");
        try {
            std::size_t used = 0;
            double a = std::stod(line.substr(0, comma), &used);
            double b = std::stod(line.substr(comma + 1), &used);
            rows.emplace_back(a, b);
        } catch (const std::logic_error&) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": not a number");
        }
    }
    return rows;
}

void CsvWriter::header(std::initializer_list<std::string_view> cols) {
    for (auto c : cols) cell(c);
    end_row();
}

void CsvWriter::sep() {
    if (!fresh_) os_ << ',';
    fresh_ = false;
}

CsvWriter& CsvWriter::cell(std::string_view s) {
    sep();
    os_ << s;
    return *this;
}

CsvWriter& CsvWriter::cell(double v) {
    sep();
    os_ << format_double(v);
    return *this;
}

CsvWriter& CsvWriter::cell(long long v) {
    sep();
    os_ << v;
    return *this;
}

void CsvWriter::end_row() {
    os_ << '\n';
    fresh_ = true;
}

}  // namespace sqbsde
