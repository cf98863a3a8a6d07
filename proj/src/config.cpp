// SPDX-License-Identifier: MIT
#include "sqbsde/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sqbsde/errors.hpp"

namespace sqbsde {

using json = nlohmann::json;

std::string to_string(Command c) {
    switch (c) {
        case Command::Solve: return "solve";
        case Command::Dual: return "dual";
        case Command::Checks: return "checks";
        case Command::Regularize: return "regularize";
        case Command::Counterexample: return "counterexample";
        case Command::Oracle: return "oracle";
    }
    return "solve";
}

Command parse_command(const std::string& s) {
    for (Command c : {Command::Solve, Command::Dual, Command::Checks, Command::Regularize,
                      Command::Counterexample, Command::Oracle})
        if (s == to_string(c)) return c;
    throw ConfigError("command: unknown command '" + s +
                      "' (expected solve, dual, checks, regularize, counterexample, oracle)");
}

namespace {

// "power:q=3,dim=1" -> {"kind": "power", "q": 3, "dim": 1}
json expand_shorthand(const std::string& s, const std::string& path) {
    json j = json::object();
    const auto colon = s.find(':');
    j["kind"] = s.substr(0, colon);
    if (colon == std::string::npos) return j;
    std::stringstream rest(s.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError(path + ": malformed shorthand entry '" + item + "' in '" + s + "'");
        const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
        if (val == "true" || val == "false") {
            j[key] = val == "true";
            continue;
        }
        try {
            std::size_t used = 0;
            const double d = std::stod(val, &used);
            if (used == val.size()) {
                j[key] = d;
                continue;
            }
        } catch (const std::exception&) {
        }
        j[key] = val;
    }
    return j;
}

class Obj {
public:
    Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key) {
        used_.insert(key);
        return j_.at(key);
    }

    void number(const std::string& key, double& out) {
        if (!has(key)) return;
        const json& v = raw(key);
        if (!v.is_number()) throw ConfigError(field(key) + ": expected a number");
        out = v.get<double>();
        if (!std::isfinite(out)) throw ConfigError(field(key) + ": must be finite");
    }

    void number(const std::string& key, std::optional<double>& out) {
        if (!has(key)) return;
        double d = 0.0;
        number(key, d);
        out = d;
    }

    template <class Int>
    void integer(const std::string& key, Int& out) {
        if (!has(key)) return;
        const json& v = raw(key);
        double d = 0.0;
        if (v.is_number_integer() || v.is_number_unsigned()) {
            if (v.is_number_integer() && v.get<long long>() < 0 && std::is_unsigned_v<Int>)
                throw ConfigError(field(key) + ": must be nonnegative");
            out = v.get<Int>();
            return;
        }
        if (v.is_number_float()) d = v.get<double>();
        else throw ConfigError(field(key) + ": expected an integer");
        if (d != std::floor(d) || (std::is_unsigned_v<Int> && d < 0.0))
            throw ConfigError(field(key) + ": expected a nonnegative integer");
        out = static_cast<Int>(d);
    }

    template <class Int>
    void integer(const std::string& key, std::optional<Int>& out) {
        if (!has(key)) return;
        Int i{};
        integer(key, i);
        out = i;
    }

    void boolean(const std::string& key, bool& out) {
        if (!has(key)) return;
        const json& v = raw(key);
        if (!v.is_boolean()) throw ConfigError(field(key) + ": expected true or false");
        out = v.get<bool>();
    }

    void string(const std::string& key, std::string& out) {
        if (!has(key)) return;
        const json& v = raw(key);
        if (v.is_number()) {
            // "which": 3.4 is accepted as a number too.
            std::ostringstream os;
            os << v.get<double>();
            out = os.str();
            return;
        }
        if (!v.is_string()) throw ConfigError(field(key) + ": expected a string");
        out = v.get<std::string>();
    }

    void numbers(const std::string& key, std::vector<double>& out) {
        if (!has(key)) return;
        const json& v = raw(key);
        if (!v.is_array()) throw ConfigError(field(key) + ": expected an array of numbers");
        out.clear();
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number())
                throw ConfigError(field(key) + "[" + std::to_string(i) + "]: expected a number");
            out.push_back(v[i].get<double>());
        }
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key())) throw ConfigError("unknown key '" + field(it.key()) + "'");
    }

private:
    std::string where() const { return path_.empty() ? "config" : path_; }
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

json as_object(const json& v, const std::string& path) {
    if (v.is_string()) return expand_shorthand(v.get<std::string>(), path);
    if (!v.is_object()) throw ConfigError(path + ": expected a shorthand string or an object");
    return v;
}

void read_generator(const json& v, GeneratorSpec& g) {
    const json j = as_object(v, "generator");
    Obj o(j, "generator");
    o.string("kind", g.kind);
    o.number("q", g.q);
    o.number("gamma", g.gamma);
    o.string("file", g.file);
    o.number("truncation", g.truncation);
    o.finish();
}

void read_terminal(const json& v, TerminalSpec& t) {
    const json j = as_object(v, "terminal");
    Obj o(j, "terminal");
    o.string("kind", t.kind);
    o.number("amplitude", t.amplitude);
    o.number("frequency", t.frequency);
    o.number("center", t.center);
    o.number("width", t.width);
    o.number("jump", t.jump);
    o.number("low", t.low);
    o.number("high", t.high);
    o.string("jump_value", t.jump_value);
    o.number("value", t.value);
    o.string("file", t.file);
    o.number("regularize_m", t.regularize_m);
    o.string("regularize_side", t.regularize_side);
    o.finish();
}

void read_model(const json& v, ModelSpec& m) {
    Obj o(v, "model");
    if (o.has("drift")) {
        const json d = as_object(o.raw("drift"), "model.drift");
        Obj od(d, "model.drift");
        od.string("kind", m.drift);
        od.number("a", m.drift_param);
        od.number("beta", m.drift_param);
        od.finish();
    }
    o.number("sigma", m.sigma);
    o.number("lambda", m.lambda);
    o.finish();
}

void read_grid(const json& v, GridSpec& g, std::optional<double>& dx) {
    Obj o(v, "grid");
    o.number("x_lo", g.x_lo);
    o.number("x_hi", g.x_hi);
    o.integer("n_x", g.n_x);
    o.number("dx", dx);
    o.integer("n_t", g.n_t);
    o.number("window", g.window);
    o.boolean("domain_check", g.domain_check);
    o.number("domain_tol", g.domain_tol);
    o.number("cap_safety", g.cap_safety);
    o.number("cfl", g.cfl);
    o.integer("max_substeps", g.max_substeps);
    if (o.has("dissipation")) {
        std::string s;
        o.string("dissipation", s);
        if (s == "adaptive") g.dissipation = Dissipation::Adaptive;
        else if (s == "envelope") g.dissipation = Dissipation::Envelope;
        else throw ConfigError("grid.dissipation: expected 'adaptive' or 'envelope', got '" + s + "'");
    }
    if (o.has("dx") && o.has("n_x")) throw ConfigError("grid: give either n_x or dx, not both");
    o.finish();
}

std::string line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

template <class F>
auto wrap(const std::string& field, F f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(field + ": " + e.what());
    }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error at " + line_col(text, e.byte) + ": " + e.what());
    }
    RunConfig cfg;
    Obj o(j, "");
    std::optional<double> dx;
    if (o.has("command")) {
        std::string c;
        o.string("command", c);
        const auto sep = c.find_first_of(": ");
        if (sep != std::string::npos) {
            cfg.counterexample.which = c.substr(sep + 1);
            c = c.substr(0, sep);
        }
        cfg.command = parse_command(c);
    }
    if (o.has("generator")) read_generator(o.raw("generator"), cfg.generator);
    if (o.has("terminal")) read_terminal(o.raw("terminal"), cfg.terminal);
    if (o.has("model")) read_model(o.raw("model"), cfg.model);
    o.number("T", cfg.T);
    o.number("x0", cfg.x0);
    o.number("t0", cfg.t0);
    if (o.has("grid")) read_grid(o.raw("grid"), cfg.grid, dx);
    if (o.has("mc")) {
        Obj m(o.raw("mc"), "mc");
        m.integer("n_paths", cfg.mc.n_paths);
        m.integer("n_steps", cfg.mc.n_steps);
        m.integer("seed", cfg.mc.seed);
        m.finish();
    }
    if (o.has("dual")) {
        Obj d(o.raw("dual"), "dual");
        d.numbers("constants", cfg.dual.constants);
        d.number("scheme_tol", cfg.dual.scheme_tol);
        d.finish();
    }
    if (o.has("regularize")) {
        Obj r(o.raw("regularize"), "regularize");
        r.numbers("m_list", cfg.regularize.m_list);
        r.string("side", cfg.regularize.side);
        r.finish();
    }
    if (o.has("counterexample")) {
        Obj c(o.raw("counterexample"), "counterexample");
        auto& ce = cfg.counterexample;
        c.string("which", ce.which);
        c.number("q", ce.q);
        c.integer("K", ce.K);
        c.number("T", ce.T);
        c.integer("n", ce.n);
        c.number("theta", ce.theta);
        c.number("epsilon", ce.epsilon);
        c.boolean("full_simulation", ce.full_simulation);
        c.integer("n_paths", ce.n_paths);
        c.integer("n_steps", ce.n_steps);
        c.integer("sim_cap", ce.sim_cap);
        c.finish();
    }
    o.string("output", cfg.out_dir);
    o.boolean("dump_paths", cfg.dump_paths);
    o.finish();
    if (dx) {
        if (!(*dx > 0.0)) throw ConfigError("grid.dx: must be positive");
        cfg.grid.n_x = static_cast<std::size_t>(std::llround((cfg.grid.x_hi - cfg.grid.x_lo) / *dx)) + 1;
    }
    validate(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

Generator make_generator(const GeneratorSpec& s) {
    Generator g = [&] {
        if (s.kind == "power") return Generator::power(s.q);
        if (s.kind == "quadratic") return Generator::quadratic(s.gamma);
        if (s.kind == "sampled") {
            if (s.file.empty()) throw ConfigError("generator.file: required for sampled generators");
            return load_sampled_generator(s.file);
        }
        throw ConfigError("generator.kind: unknown kind '" + s.kind +
                          "' (expected power, quadratic, sampled)");
    }();
    if (s.truncation) g = g.truncated(*s.truncation);
    return g;
}

namespace {

Side parse_side(const std::string& s, const std::string& field) {
    if (s == "lower") return Side::Lower;
    if (s == "upper") return Side::Upper;
    throw ConfigError(field + ": expected 'lower' or 'upper', got '" + s + "'");
}

}  // namespace

TerminalCondition make_terminal(const TerminalSpec& s) {
    TerminalCondition tc = [&] {
        if (s.kind == "cos" || s.kind == "cosine") return TerminalCondition::cosine(s.amplitude, s.frequency);
        if (s.kind == "lorentzian") return TerminalCondition::lorentzian(s.amplitude, s.center, s.width);
        if (s.kind == "gaussian") return TerminalCondition::gaussian(s.amplitude, s.center, s.width);
        if (s.kind == "tanh") return TerminalCondition::tanh_profile(s.amplitude, s.width);
        if (s.kind == "constant") return TerminalCondition::constant(s.value);
        if (s.kind == "step") {
            JumpValue jv;
            if (s.jump_value == "lower") jv = JumpValue::Lower;
            else if (s.jump_value == "upper") jv = JumpValue::Upper;
            else throw ConfigError("terminal.jump_value: expected 'lower' or 'upper'");
            return TerminalCondition::step(s.jump, s.low, s.high, jv);
        }
        if (s.kind == "table") {
            if (s.file.empty()) throw ConfigError("terminal.file: required for tabulated terminal data");
            return load_tabulated_terminal(s.file);
        }
        throw ConfigError("terminal.kind: unknown kind '" + s.kind +
                          "' (expected cos, lorentzian, gaussian, tanh, step, constant, table)");
    }();
    if (s.regularize_m) tc = tc.regularized(*s.regularize_m, parse_side(s.regularize_side, "terminal.regularize_side"));
    return tc;
}

ForwardModel make_model(const RunConfig& cfg) {
    const ModelSpec& m = cfg.model;
    Drift d = [&] {
        if (m.drift == "zero") return Drift::zero();
        if (m.drift == "linear") return Drift::linear(m.drift_param);
        if (m.drift == "tanh") return Drift::tanh(m.drift_param);
        if (m.drift == "sine") return Drift::sine(m.drift_param);
        throw ConfigError("model.drift.kind: unknown drift '" + m.drift +
                          "' (expected zero, linear, tanh, sine)");
    }();
    return ForwardModel(d, m.sigma, cfg.T, m.lambda);
}

void validate(RunConfig& cfg) {
    if (!(cfg.T > 0.0)) throw ConfigError("T: must be positive");
    if (!(cfg.t0 >= 0.0 && cfg.t0 < cfg.T)) throw ConfigError("t0: must lie in [0, T)");
    auto& g = cfg.grid;
    if (!(g.x_lo < g.x_hi)) throw ConfigError("grid: x_lo must be below x_hi");
    if (g.n_x < 64) throw ConfigError("grid.n_x: need at least 64 points");
    if (g.n_t < 1) throw ConfigError("grid.n_t: need at least one interval");
    if (!(g.window > 0.0)) throw ConfigError("grid.window: must be positive");
    if (!(g.cfl > 0.0 && g.cfl <= 1.0)) throw ConfigError("grid.cfl: must lie in (0, 1]");
    if (!(g.cap_safety >= 1.0)) throw ConfigError("grid.cap_safety: must be at least 1");
    g.x0 = cfg.x0;
    if (cfg.mc.n_paths < 2) throw ConfigError("mc.n_paths: need at least 2 paths");
    if (cfg.mc.n_steps < 1) throw ConfigError("mc.n_steps: need at least 1 step");
    if (!(cfg.dual.scheme_tol >= 0.0)) throw ConfigError("dual.scheme_tol: must be nonnegative");

    const auto& r = cfg.regularize;
    if (r.side != "lower" && r.side != "upper" && r.side != "both")
        throw ConfigError("regularize.side: expected 'lower', 'upper' or 'both'");
    if (r.m_list.empty()) throw ConfigError("regularize.m_list: must not be empty");
    for (std::size_t i = 0; i < r.m_list.size(); ++i) {
        if (!(r.m_list[i] > 0.0)) throw ConfigError("regularize.m_list: entries must be positive");
        if (i > 0 && !(r.m_list[i] > r.m_list[i - 1]))
            throw ConfigError("regularize.m_list: entries must be strictly increasing");
    }

    auto& ce = cfg.counterexample;
    if (cfg.command == Command::Counterexample) {
        if (ce.which != "3.1" && ce.which != "3.3" && ce.which != "3.4")
            throw ConfigError("counterexample.which: expected 3.1, 3.3 or 3.4, got '" + ce.which + "'");
        if (!(ce.q > 2.0)) throw ConfigError("counterexample.q: must exceed 2");
        if (!(ce.T > 0.0)) throw ConfigError("counterexample.T: must be positive");
        if (ce.n_paths < 2) throw ConfigError("counterexample.n_paths: need at least 2 paths");
        if (ce.which == "3.1" && ce.K && *ce.K < 10) throw ConfigError("counterexample.K: need K >= 10");
        if (ce.which == "3.3") {
            if (ce.n < 0) throw ConfigError("counterexample.n: must be nonnegative");
            if (!(ce.theta > 0.0 && ce.theta < 1.0)) throw ConfigError("counterexample.theta: must lie in (0, 1)");
            if (!(ce.epsilon > 0.0 && ce.epsilon < 1.0))
                throw ConfigError("counterexample.epsilon: must lie in (0, 1)");
        }
        if (ce.which == "3.4") {
            if (ce.K && *ce.K < 1) throw ConfigError("counterexample.K: need K >= 1");
            if (ce.sim_cap < 1) throw ConfigError("counterexample.sim_cap: need at least 1");
            const std::size_t K = ce.K.value_or(6);
            if (ce.full_simulation && K > ce.sim_cap)
                cfg.warnings.push_back("counterexample.full_simulation: simulation capped at k<=" +
                                       std::to_string(ce.sim_cap) + "; combs k>" +
                                       std::to_string(ce.sim_cap) +
                                       " get deterministic checks only");
        }
        return;
    }

    if (cfg.model.sigma == 0.0 || !std::isfinite(cfg.model.sigma))
        throw ConfigError("model.sigma: must be finite and nonzero");
    if (cfg.model.lambda && *cfg.model.lambda < 0.0) throw ConfigError("model.lambda: must be nonnegative");
    wrap("generator", [&] { return make_generator(cfg.generator); });
    wrap("terminal", [&] { return make_terminal(cfg.terminal); });
    wrap("model", [&] { return make_model(cfg); });
    if (cfg.x0 < g.x_lo || cfg.x0 > g.x_hi) throw ConfigError("x0: outside the spatial grid");
}

std::string config_schema() {
    return R"(Config file: JSON object. Unknown keys are errors. Defaults in brackets.
  command      solve | dual | checks | regularize | counterexample | oracle   [solve]
               "counterexample:3.4" selects the construction as well
  generator    "power:q=3" | "quadratic:gamma=0.5" | "sampled:file=g.csv"    [power:q=3]
               or {kind, q, gamma, file, truncation}
  terminal     "cos" | "lorentzian" | "gaussian" | "tanh" | "step" | "constant" | "table"  [cos]
               or {kind, amplitude[1], frequency[1], center[0], width[1], jump[0], low[0],
                   high[1], jump_value[lower], value[0], file, regularize_m, regularize_side[lower]}
  model        {drift["zero"] | "tanh:a=0.3" | "linear:beta=1" | "sine:a=1",
                sigma[1], lambda[sup |b_x|]}
  T [1]  x0 [0]  t0 [0]
  grid         {x_lo[-8], x_hi[8], n_x[1601] or dx, n_t[100], window[3], domain_check[false],
                domain_tol[1e-3], cap_safety[1.5], cfl[0.9], dissipation[adaptive|envelope],
                max_substeps[20000000]}
  mc           {n_paths[10000], n_steps[200], seed[1]}
  dual         {constants[[-0.5, 0.5]], scheme_tol[0.01]}
  regularize   {m_list[[1, 2, 4, 8]], side[both|lower|upper]}
  counterexample {which[3.4], q[3], K[3.1: 10000, 3.3: 8, 3.4: 6], T[1], n[2], theta[0.5],
                epsilon[0.5], full_simulation[false], n_paths[10000],
                n_steps[3.3: 900, 3.4: 1000], sim_cap[3]}
  output [out]  dump_paths [false]
)";
}

}  // namespace sqbsde
