// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sqbsde/config.hpp"
#include "sqbsde/csv.hpp"
#include "sqbsde/errors.hpp"
#include "sqbsde/pipeline.hpp"
#include "sqbsde/report.hpp"

using namespace sqbsde;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("minimal config takes defaults") {
    const auto c = parse_config(R"({"generator": "power:q=3", "terminal": "cos", "T": 1})");
    CHECK(c.command == Command::Solve);
    CHECK(c.generator.kind == "power");
    CHECK(c.generator.q == 3.0);
    CHECK(c.terminal.kind == "cos");
    CHECK(c.grid.n_x == 1601);
    CHECK(c.grid.dissipation == Dissipation::Adaptive);
    CHECK(c.model.sigma == 1.0);
    CHECK(c.model.drift == "zero");
    CHECK(c.warnings.empty());
}

TEST_CASE("unknown keys are named") {
    CHECK(error_of(R"({"model": {"sigma_x": 1}})").find("model.sigma_x") != std::string::npos);
    CHECK(error_of(R"({"sigma_x": 1})").find("sigma_x") != std::string::npos);
    CHECK(error_of(R"({"generator": "power:q=3,p=2"})").find("generator.p") != std::string::npos);
}

TEST_CASE("syntax errors carry a line") {
    const auto e = error_of("{\n  \"T\": 1,\n  \"x0\": oops\n}");
    CHECK(e.find("line 3") != std::string::npos);
}

TEST_CASE("validation names the field") {
    CHECK(error_of(R"({"generator": "power:q=1.5"})").find("generator") != std::string::npos);
    CHECK(error_of(R"({"T": -1})").find("T") != std::string::npos);
    CHECK(error_of(R"({"grid": {"n_x": 10}})").find("grid.n_x") != std::string::npos);
    CHECK(error_of(R"({"mc": {"n_paths": 1.5}})").find("mc.n_paths") != std::string::npos);
    CHECK(error_of(R"({"command": "fly"})").find("command") != std::string::npos);
    CHECK(error_of(R"({"regularize": {"m_list": [2, 1]}})").find("regularize.m_list") != std::string::npos);
    CHECK(error_of(R"({"command": "counterexample", "counterexample": {"which": "3.2"}})")
              .find("counterexample.which") != std::string::npos);
}

TEST_CASE("comb simulation cap warning") {
    const auto c = parse_config(
        R"({"command": "counterexample:3.4", "counterexample": {"K": 10, "full_simulation": true}})");
    CHECK(c.command == Command::Counterexample);
    CHECK(c.counterexample.which == "3.4");
    REQUIRE(c.warnings.size() == 1);
    CHECK(c.warnings[0].find("k<=3") != std::string::npos);
}

TEST_CASE("shorthand and object forms agree") {
    const auto a = parse_config(R"({"terminal": "lorentzian:amplitude=0.5,width=2", "model": {"drift": "tanh:a=0.3"}})");
    const auto b = parse_config(
        R"({"terminal": {"kind": "lorentzian", "amplitude": 0.5, "width": 2}, "model": {"drift": {"kind": "tanh", "a": 0.3}}})");
    CHECK(a.terminal.amplitude == b.terminal.amplitude);
    CHECK(a.terminal.width == b.terminal.width);
    CHECK(a.model.drift_param == b.model.drift_param);
    CHECK(make_model(a).lambda() == doctest::Approx(0.3));
}

TEST_CASE("grid spacing shorthand") {
    const auto c = parse_config(R"({"grid": {"dx": 0.01}})");
    CHECK(c.grid.n_x == 1601);
}

TEST_CASE("pipeline runs without touching disk") {
    const auto c = parse_config(R"({"command": "counterexample:3.1"})");
    const auto r = run(c);
    CHECK(all_hard_pass(r.checks));
    CHECK(r.label == "counterexample 3.1");
}

TEST_CASE("csv formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5})
        CHECK(std::stod(format_double(v)) == v);
    CHECK(format_double(-0.0) == "0");
    CHECK(format_double(NAN) == "nan");
    CheckOutcome soft;
    soft.hard = false;
    soft.pass = false;
    CHECK(pass_label(soft) == "soft-fail");
    CHECK(all_hard_pass({soft}));
}
