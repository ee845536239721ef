// predlab: command-line front end for the prediction-error laboratory.
//
//   predlab tau --arcset '{"pattern":"gamma","beta":"2*pi/3"}' --n-max 40
//   predlab sigma --density '{"type":"trigpoly","cos":[1.25,-1]}' --n-max 50 --format csv
//   predlab ratio --f '{"type":"rosenblatt","a":1}' --g '{"type":"constant","c":3}'
//   predlab suite run scenarios/examples.json --out report.json
//
// JSON arguments may name a file with a leading '@'.

#include "predlab/error.hpp"
#include "predlab/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace predlab;

namespace {

struct Common {
    int precision_bits = 256;
    int n_max = 64;
    std::string out = "-";
    std::string format = "json";
    std::uint64_t seed = 0x5eed;
    bool seed_given = false;
    int panels = 32;
    int starts = 8;
    bool no_escalate = false;
    bool double_check = false;
    std::vector<int> window;
    std::vector<std::string> expect;
    bool no_timing = false;
};

Expectation parse_expect(const std::string& text)
{
    // quantity=value:tol or quantity=label
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw SchemaError("--expect wants quantity=value:tol or quantity=label");
    Expectation e;
    e.quantity = text.substr(0, eq);
    const std::string rhs = text.substr(eq + 1);
    const auto colon = rhs.find(':');
    if (colon == std::string::npos) {
        e.equals = rhs;
        return e;
    }
    try {
        e.value = std::stod(rhs.substr(0, colon));
        e.tol = std::stod(rhs.substr(colon + 1));
    } catch (const std::exception&) {
        throw SchemaError("cannot read --expect " + text);
    }
    if (!(e.tol > 0.0)) throw SchemaError("--expect tolerance must be positive");
    return e;
}

Scenario base_scenario(const std::string& name, ScenarioKind kind, const Common& c)
{
    Scenario s;
    s.name = name;
    s.kind = kind;
    s.policy.precision_bits = c.precision_bits;
    s.policy.n_max = c.n_max;
    s.policy.panels = c.panels;
    s.policy.starts = c.starts;
    s.policy.seed = c.seed;
    s.policy.auto_escalate = !c.no_escalate;
    s.policy.double_check = c.double_check;
    if (!c.window.empty()) {
        if (c.window.size() != 2) throw SchemaError("--window wants two integers");
        s.policy.window = std::pair{c.window[0], c.window[1]};
    }
    for (const auto& e : c.expect) s.expect.push_back(parse_expect(e));
    return s;
}

/// Round-trips through the scenario schema so CLI runs get the same validation as suite files.
int run_single(const Scenario& s, const Common& c)
{
    const Scenario checked = scenario_from_json(scenario_to_json(s));
    RunReport r = run_scenario(checked);
    if (r.error) std::cerr << "predlab: " << *r.error << '\n';
    const Format f = format_from_string(c.format);
    if (f == Format::Json && c.no_timing) {
        const std::string text = report_to_json(r, false).dump(2) + "\n";
        if (c.out == "-" || c.out.empty()) std::cout << text;
        else {
            std::ofstream o(c.out);
            if (!(o << text)) throw IoError("cannot write " + c.out);
        }
    } else {
        emit(r, f, c.out);
    }
    if (r.error) return 2;
    return r.pass ? 0 : 1;
}

int run_suite_file(const std::string& path, const Common& c)
{
    const Suite suite = suite_from_json(parse_json_argument("@" + path));
    const SuiteReport rep = run_suite(suite, c.seed_given ? std::optional<std::uint64_t>(c.seed) : std::nullopt);
    std::string text;
    if (format_from_string(c.format) == Format::Json) {
        text = suite_report_to_json(rep, !c.no_timing).dump(2) + "\n";
    } else {
        text = "scenario,kind,pass\n";
        for (const auto& r : rep.reports) text += r.scenario + "," + r.kind + "," + (r.pass ? "true" : "false") + "\n";
    }
    if (c.out == "-" || c.out.empty()) std::cout << text;
    else {
        std::ofstream o(c.out);
        if (!(o << text)) throw IoError("cannot write " + c.out);
    }
    for (const auto& r : rep.reports) {
        std::cerr << (r.pass ? "PASS " : "FAIL ") << r.scenario;
        if (r.error) std::cerr << "  (" << *r.error << ")";
        std::cerr << '\n';
    }
    return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Finite prediction errors of singular spectral densities"};
    app.require_subcommand(1);
    app.fallthrough();
    Common c;

    app.add_option("--precision-bits", c.precision_bits, "Working precision in bits")
        ->envname("PREDLAB_PRECISION_BITS")
        ->check(CLI::Range(64, 1 << 20));
    app.add_option("--n-max", c.n_max, "Largest order n")->envname("PREDLAB_N_MAX")->check(CLI::PositiveNumber);
    app.add_option("--out", c.out, "Output path, '-' for stdout")->envname("PREDLAB_OUT");
    app.add_option("--format", c.format, "csv or json")
        ->envname("PREDLAB_FORMAT")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", c.seed, "Optimizer seed")->envname("PREDLAB_SEED");
    app.add_option("--panels", c.panels, "Minimum quadrature panels per period")->envname("PREDLAB_PANELS");
    app.add_option("--starts", c.starts, "Fekete optimizer starts")->envname("PREDLAB_STARTS");
    app.add_flag("--no-escalate", c.no_escalate, "Keep --precision-bits for spectra with gaps");
    app.add_flag("--double-check", c.double_check, "Recompute at +64 bits and report the change");
    app.add_option("--window", c.window, "Analysis window lo hi")->expected(2);
    app.add_option("--expect", c.expect, "quantity=value:tol or quantity=label (repeatable)");
    app.add_flag("--no-timing", c.no_timing, "Omit wall-time fields from JSON");

    std::string arcset, density, f_text, g_text, trig, suite_file;
    auto* tau = app.add_subcommand("tau", "Transfinite diameter of an arc set");
    tau->add_option("--arcset", arcset, "Arc set JSON")->required();
    auto* sigma = app.add_subcommand("sigma", "Table of sigma_n^2");
    sigma->add_option("--density", density, "Density JSON")->required();
    auto* rate = app.add_subcommand("rate", "Root limit, power law and classification");
    rate->add_option("--density", density, "Density JSON")->required();
    auto* ratio = app.add_subcommand("ratio", "sigma_n^2(fg) / sigma_n^2(f)");
    ratio->add_option("--f", f_text, "Density JSON for f")->required();
    ratio->add_option("--g", g_text, "Density JSON for g")->required();
    auto* fact = app.add_subcommand("factorize", "Fejer-Riesz factor of a trigonometric polynomial");
    fact->add_option("--trig", trig, "Trigonometric polynomial JSON")->required();
    auto* suite = app.add_subcommand("suite", "Scenario suites");
    suite->require_subcommand(1);
    auto* suite_run = suite->add_subcommand("run", "Run every scenario of a suite file");
    suite_run->add_option("file", suite_file, "Suite JSON file")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);
    c.seed_given = app.count("--seed") > 0 || std::getenv("PREDLAB_SEED") != nullptr;

    try {
        if (*tau) {
            Scenario s = base_scenario("tau", ScenarioKind::Tau, c);
            s.arcset = parse_json_argument(arcset);
            return run_single(s, c);
        }
        if (*sigma || *rate) {
            Scenario s = base_scenario(*sigma ? "sigma" : "rate", *sigma ? ScenarioKind::Sigma : ScenarioKind::Rate, c);
            s.density = parse_json_argument(density);
            return run_single(s, c);
        }
        if (*ratio) {
            Scenario s = base_scenario("ratio", ScenarioKind::Ratio, c);
            s.density = parse_json_argument(f_text);
            s.g = parse_json_argument(g_text);
            return run_single(s, c);
        }
        if (*fact) {
            Scenario s = base_scenario("factorize", ScenarioKind::Factorize, c);
            s.trig = parse_json_argument(trig);
            return run_single(s, c);
        }
        if (*suite_run) return run_suite_file(suite_file, c);
    } catch (const Error& e) {
        std::cerr << "predlab: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
