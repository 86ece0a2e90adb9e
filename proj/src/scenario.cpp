#include "jcipa/scenario.hpp"

#include "jcipa/dynamics.hpp"
#include "jcipa/error.hpp"
#include "jcipa/inversion.hpp"
#include "jcipa/kappa.hpp"
#include "jcipa/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace jcipa::cli {

namespace {

struct NamedScenario {
    Scenario id;
    std::string_view name;
    GridDefaults grid;
};

constexpr NamedScenario kScenarios[] = {
    {Scenario::fig1_sqrt_coupling, "fig1_sqrt_coupling", {6.0, 1201}},
    {Scenario::fig2_vacuum_ipa_coherent, "fig2_vacuum_ipa_coherent", {25.0, 2001}},
    {Scenario::fig3_deformed_deltas, "fig3_deformed_deltas", {25.0, 2001}},
    {Scenario::fig4_cos_squared_fock, "fig4_cos_squared_fock", {10.0, 2001}},
    {Scenario::fig5_roundtrip_demo, "fig5_roundtrip_demo", {25.0, 2001}},
    {Scenario::fig6_thermal, "fig6_thermal", {25.0, 2001}},
    {Scenario::sweep, "sweep", {25.0, 2001}},
};

const NamedScenario& lookup(Scenario s) {
    for (const auto& e : kScenarios) {
        if (e.id == s) return e;
    }
    throw ConfigError("unknown scenario id");
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void field_error(std::string_view key, std::string_view value, std::string_view why) {
    std::ostringstream os;
    os << "field '" << key << "': " << why << " (got '" << value << "')";
    throw ConfigError(os.str());
}

double parse_double(std::string_view key, std::string_view text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        field_error(key, text, "expected a finite number");
    }
    return v;
}

long long parse_integer(std::string_view key, std::string_view text) {
    long long v = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) field_error(key, text, "expected an integer");
    return v;
}

std::string shortest(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : path_(path), out_(path, std::ios::binary) {
        if (!out_) throw Error("cannot open output file '" + path + "' for writing");
    }

    void meta(std::string_view key, std::string_view value) {
        out_ << "# " << key << '=' << value << '\n';
    }
    void meta(std::string_view key, double value) { meta(key, format_number(value)); }

    void header(std::initializer_list<std::string_view> columns) {
        bool first = true;
        for (auto c : columns) {
            if (!first) out_ << ',';
            out_ << c;
            first = false;
        }
        out_ << '\n';
    }

    void row(std::initializer_list<double> values) {
        bool first = true;
        for (double v : values) {
            if (!first) out_ << ',';
            out_ << format_number(v);
            first = false;
        }
        out_ << '\n';
    }

    void close() {
        out_.flush();
        if (!out_) throw Error("failed writing output file '" + path_ + "'");
    }

private:
    std::string path_;
    std::ofstream out_;
};

std::string join_indices(const std::vector<std::size_t>& idx) {
    std::ostringstream os;
    for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? ";" : "") << idx[i];
    return os.str();
}

void write_common_meta(CsvWriter& w, const ScenarioConfig& c, const TimeGrid& g) {
    w.meta("tool", kToolVersion);
    w.meta("scenario", to_string(c.scenario));
    w.meta("lambda0", c.params.lambda0);
    w.meta("zeta", c.params.zeta);
    w.meta("mean_n", c.params.mean_n);
    w.meta("epsilon", c.params.epsilon);
    w.meta("t_start", g.t_start());
    w.meta("t_end", g.t_end());
    w.meta("samples", std::to_string(g.size()));
    w.meta("tail_tol", c.tail_tol);
    w.meta("eta", c.eta);
    if (c.scenario == Scenario::fig4_cos_squared_fock) w.meta("fock_n", std::to_string(c.fock_n));
}

void write_result_meta(CsvWriter& w, const ScenarioResult& r) {
    w.meta("sectors", std::to_string(r.sector_count));
    w.meta("coupling_sector", std::to_string(r.coupling_sector));
    w.meta("max_norm_drift", r.max_norm_drift);
    w.meta("max_residual_outside_windows", r.max_residual_outside());
    w.meta("regularized_points", join_indices(r.regularized_points));
}

void write_standard(const std::string& path, const ScenarioConfig& c, const ScenarioResult& r) {
    CsvWriter w(path);
    write_common_meta(w, c, r.grid);
    write_result_meta(w, r);
    w.header({"t", "target_w", "coupling", "reproduced_w", "residual"});
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
        w.row({r.grid[i], r.target_w[i], r.coupling_values[i], r.reproduced_w[i], r.residuals[i]});
    }
    w.close();
}

int status_for(double residual, const ScenarioConfig& c) {
    return residual > c.max_residual ? 2 : 0;
}

}  // namespace

std::string_view to_string(Scenario s) { return lookup(s).name; }

Scenario parse_scenario(std::string_view name) {
    for (const auto& e : kScenarios) {
        if (e.name == name) return e.id;
    }
    std::ostringstream os;
    os << "unknown scenario '" << name << "'; valid names:";
    for (const auto& e : kScenarios) os << ' ' << e.name;
    throw ConfigError(os.str());
}

const std::vector<Scenario>& all_scenarios() {
    static const std::vector<Scenario> all = [] {
        std::vector<Scenario> v;
        for (const auto& e : kScenarios) v.push_back(e.id);
        return v;
    }();
    return all;
}

GridDefaults default_grid(Scenario s) { return lookup(s).grid; }

TimeGrid ScenarioConfig::grid() const {
    const GridDefaults d = default_grid(scenario);
    return TimeGrid(t_start, t_end.value_or(d.t_end), samples.value_or(d.samples));
}

std::vector<std::string> ScenarioConfig::validate() const {
    std::vector<std::string> warnings;
    try {
        warnings = params.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (params.detuning != 0.0) throw ConfigError("field 'detuning': synthesis requires resonance");
    if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw ConfigError("field 'tail_tol': must lie in (0, 1)");
    if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("field 'eta': must lie in (0, 1)");
    if (!(max_residual > 0.0)) throw ConfigError("field 'max_residual': must be positive");
    if (fock_n < 0) throw ConfigError("field 'fock_n': must be nonnegative");
    if (sweep_points < 2) throw ConfigError("field 'sweep_points': need at least 2");
    if (t_start < 0.0) throw ConfigError("field 't_start': must be nonnegative");
    try {
        (void)grid();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("fields 't_end'/'samples': ") + e.what());
    }
    return warnings;
}

void assign(ScenarioConfig& c, std::string_view key, std::string_view value) {
    if (key == "scenario") {
        try {
            c.scenario = parse_scenario(value);
        } catch (const ConfigError& e) {
            throw ConfigError(std::string("field 'scenario': ") + e.what());
        }
    } else if (key == "lambda0") {
        c.params.lambda0 = parse_double(key, value);
    } else if (key == "zeta") {
        c.params.zeta = parse_double(key, value);
    } else if (key == "mean_n") {
        c.params.mean_n = parse_double(key, value);
    } else if (key == "epsilon") {
        c.params.epsilon = parse_double(key, value);
    } else if (key == "detuning") {
        c.params.detuning = parse_double(key, value);
    } else if (key == "t_start") {
        c.t_start = parse_double(key, value);
    } else if (key == "t_end") {
        c.t_end = parse_double(key, value);
    } else if (key == "samples") {
        const long long n = parse_integer(key, value);
        if (n < 2) field_error(key, value, "need at least 2 samples");
        c.samples = static_cast<std::size_t>(n);
    } else if (key == "out") {
        if (value.empty()) field_error(key, value, "empty path");
        c.output_path = std::string(value);
    } else if (key == "tail_tol") {
        c.tail_tol = parse_double(key, value);
    } else if (key == "eta") {
        c.eta = parse_double(key, value);
    } else if (key == "max_residual") {
        c.max_residual = parse_double(key, value);
    } else if (key == "fock_n") {
        const long long n = parse_integer(key, value);
        if (n < 0 || n > 100000) field_error(key, value, "out of range");
        c.fock_n = static_cast<int>(n);
    } else if (key == "sweep_points") {
        const long long n = parse_integer(key, value);
        if (n < 2 || n > 10000) field_error(key, value, "out of range");
        c.sweep_points = static_cast<std::size_t>(n);
    } else if (key == "threads") {
        const long long n = parse_integer(key, value);
        if (n < 0 || n > 4096) field_error(key, value, "out of range");
        c.threads = static_cast<unsigned>(n);
    } else {
        std::ostringstream os;
        os << "unknown field '" << key << "'";
        throw ConfigError(os.str());
    }
}

ScenarioConfig parse_config(std::istream& in, const std::string& source_name, ScenarioConfig base) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const std::string body = trim(std::string_view(line).substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        try {
            if (eq == std::string::npos) throw ConfigError("expected 'key = value'");
            const std::string key = trim(std::string_view(body).substr(0, eq));
            const std::string value = trim(std::string_view(body).substr(eq + 1));
            if (key.empty()) throw ConfigError("missing key before '='");
            assign(base, key, value);
        } catch (const ConfigError& e) {
            std::ostringstream os;
            os << source_name << ':' << line_no << ": " << e.what();
            throw ConfigError(os.str());
        }
    }
    return base;
}

ScenarioConfig load_config(const std::string& path, ScenarioConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, path, std::move(base));
}

void print_effective(std::ostream& os, const ScenarioConfig& c) {
    const TimeGrid g = c.grid();
    os << "scenario = " << to_string(c.scenario) << '\n'
       << "lambda0 = " << shortest(c.params.lambda0) << '\n'
       << "zeta = " << shortest(c.params.zeta) << '\n'
       << "mean_n = " << shortest(c.params.mean_n) << '\n'
       << "epsilon = " << shortest(c.params.epsilon) << '\n'
       << "t_start = " << shortest(g.t_start()) << '\n'
       << "t_end = " << shortest(g.t_end()) << '\n'
       << "samples = " << g.size() << '\n'
       << "tail_tol = " << shortest(c.tail_tol) << '\n'
       << "eta = " << shortest(c.eta) << '\n'
       << "max_residual = " << shortest(c.max_residual) << '\n'
       << "fock_n = " << c.fock_n << '\n'
       << "sweep_points = " << c.sweep_points << '\n'
       << "threads = " << c.threads << '\n'
       << "out = " << c.output_path << '\n';
}

std::string format_number(double x) {
    if (x == 0.0) x = 0.0;  // drop the sign of negative zero
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

RunOutcome run(const ScenarioConfig& c) {
    (void)c.validate();
    const TimeGrid grid = c.grid();
    const PhysicalParams& p = c.params;
    PropagationOptions prop;
    prop.threads = c.threads;
    RunOutcome out;
    out.files.push_back(c.output_path);

    switch (c.scenario) {
    case Scenario::fig1_sqrt_coupling: {
        const ScenarioResult r =
            run_single_sector(InversionTarget(target::SqrtTime{}, p, c.tail_tol), 0, grid, c.eta);
        write_standard(c.output_path, c, r);
        out.max_residual_outside = r.max_residual_outside();
        break;
    }
    case Scenario::fig2_vacuum_ipa_coherent: {
        PhysicalParams flat = p;
        flat.epsilon = 0.0;
        const ScenarioResult r = run_single_sector(
            InversionTarget(target::CoherentSeries{}, flat, c.tail_tol), 0, grid, c.eta);
        write_standard(c.output_path, c, r);
        out.max_residual_outside = r.max_residual_outside();
        break;
    }
    case Scenario::fig3_deformed_deltas: {
        const DeformedScenario d = deformed_scenario(p, grid, c.tail_tol, c.eta, prop);
        const ScenarioResult& r = d.deformed;
        CsvWriter w(c.output_path);
        write_common_meta(w, c, grid);
        write_result_meta(w, r);
        w.meta("undeformed_max_residual_outside_windows", d.undeformed.max_residual_outside());
        w.meta("coherent_gipa_max_residual", max_abs(d.coherent_gipa.residuals));
        w.meta("max_abs_delta_w", max_abs(d.delta_w));
        w.meta("max_abs_delta_lambda", max_abs(d.delta_lambda));
        w.header({"t", "target_w", "coupling", "reproduced_w", "residual", "delta_w",
                  "delta_lambda"});
        for (std::size_t i = 0; i < grid.size(); ++i) {
            w.row({grid[i], r.target_w[i], r.coupling_values[i], r.reproduced_w[i],
                   r.residuals[i], d.delta_w[i], d.delta_lambda[i]});
        }
        w.close();
        out.max_residual_outside =
            std::max({r.max_residual_outside(), d.undeformed.max_residual_outside(),
                      max_abs(d.coherent_gipa.residuals)});
        break;
    }
    case Scenario::fig4_cos_squared_fock: {
        PhysicalParams flat = p;
        flat.epsilon = 0.0;
        const ScenarioResult r = run_gipa_pipeline(
            [&](int n) { return InversionTarget(target::CosSquared{n}, flat, c.tail_tol); },
            Fock{c.fock_n}, flat, grid, c.tail_tol, c.eta, prop);
        write_standard(c.output_path, c, r);
        out.max_residual_outside = r.max_residual_outside();
        break;
    }
    case Scenario::fig5_roundtrip_demo: {
        PhysicalParams flat = p;
        flat.epsilon = 0.0;
        const ScenarioResult r = run_gipa_pipeline(
            [&](int n) { return InversionTarget(target::ConstantCoupling{n}, flat, c.tail_tol); },
            Poisson{p.mean_n}, flat, grid, c.tail_tol, c.eta, prop);
        write_standard(c.output_path, c, r);
        out.max_residual_outside = r.max_residual_outside();
        break;
    }
    case Scenario::fig6_thermal: {
        PhysicalParams flat = p;
        flat.epsilon = 0.0;
        const BoseEinstein thermal{p.mean_n};
        const ScenarioResult r = run_gipa_pipeline(
            [&](int n) { return InversionTarget(target::CosSquared{n}, flat, c.tail_tol); },
            thermal, flat, grid, c.tail_tol, c.eta, prop);
        const ScenarioResult constant = run_sector_pipeline(
            [&](int n) { return InversionTarget(target::ConstantCoupling{n}, flat, c.tail_tol); },
            [&](int) { return CouplingProfile(coupling::Constant{flat.lambda0}, flat, c.eta); },
            thermal, grid, c.tail_tol, prop);
        CsvWriter w(c.output_path);
        write_common_meta(w, c, grid);
        write_result_meta(w, r);
        w.header({"t", "target_w", "coupling", "reproduced_w", "residual", "constant_coupling_w"});
        for (std::size_t i = 0; i < grid.size(); ++i) {
            w.row({grid[i], r.target_w[i], r.coupling_values[i], r.reproduced_w[i],
                   r.residuals[i], constant.reproduced_w[i]});
        }
        w.close();
        out.max_residual_outside =
            std::max(r.max_residual_outside(), max_abs(constant.residuals));
        break;
    }
    case Scenario::sweep: {
        CsvWriter w(c.output_path);
        write_common_meta(w, c, grid);
        w.meta("sweep_points", std::to_string(c.sweep_points));
        w.header({"epsilon", "max_abs_delta_w", "max_abs_delta_lambda", "max_residual"});
        double worst = 0.0;
        for (std::size_t k = 0; k < c.sweep_points; ++k) {
            PhysicalParams q = p;
            q.epsilon = p.epsilon * static_cast<double>(k) / static_cast<double>(c.sweep_points - 1);
            const DeformedScenario d = deformed_scenario(q, grid, c.tail_tol, c.eta, prop);
            const double residual = std::max(d.deformed.max_residual_outside(),
                                             d.undeformed.max_residual_outside());
            worst = std::max(worst, residual);
            w.row({q.epsilon, max_abs(d.delta_w), max_abs(d.delta_lambda), residual});
        }
        w.close();
        out.max_residual_outside = worst;
        break;
    }
    }
    out.exit_status = status_for(out.max_residual_outside, c);
    return out;
}

}  // namespace jcipa::cli
