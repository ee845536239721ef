#ifndef PREDLAB_SCENARIO_HPP
#define PREDLAB_SCENARIO_HPP

/** @file
 * Named experiments over the library and their reports.
 *
 * A scenario names one kind of run (tau, sigma, rate, ratio, factorize,
 * property_suite), carries its JSON payloads and numeric policy, and lists
 * expectations. run_scenario never throws for module failures; the error is
 * recorded in the report and every expectation fails.
 */

#include "predlab/json_io.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace predlab {

inline constexpr const char* kToolVersion = "predlab 0.1.0";

enum class ScenarioKind { Tau, Sigma, Rate, Ratio, Factorize, PropertySuite };
const char* to_string(ScenarioKind k);
ScenarioKind scenario_kind_from_string(const std::string& s);

struct NumericPolicy {
    int precision_bits = 256;
    int n_max = 64;
    int panels = 32;
    int starts = 8;
    std::uint64_t seed = 0x5eed;
    /// Raise the precision for spectra with gaps (see escalated_precision).
    bool auto_escalate = true;
    /// Recompute at precision + 64 bits and report the largest relative change of sigma_n^2.
    bool double_check = false;
    /// Overrides the default analysis window when set.
    std::optional<std::pair<int, int>> window;
};

struct Expectation {
    std::string quantity;
    /// Numeric target with absolute tolerance, or relative tolerance when rel_tol > 0.
    std::optional<double> value;
    double tol = 0.0;
    double rel_tol = 0.0;
    /// Text target, compared with a label of the report.
    std::optional<std::string> equals;
};

struct Scenario {
    std::string name;
    ScenarioKind kind = ScenarioKind::Sigma;
    std::optional<json> density;
    std::optional<json> g;
    std::optional<json> arcset;
    std::optional<json> trig;
    std::vector<std::string> properties;
    NumericPolicy policy;
    std::vector<Expectation> expect;
};

struct SigmaRow {
    int n = 0;
    std::string sigma2;
    std::string sigma;
    /// (sigma_n^2)^{1/(2n)}; empty at n = 0.
    std::string root_nth;
    /// sigma_n^2 / sigma_{n-1}^2; empty at n = 0.
    std::string ratio_to_prev;

    friend bool operator==(const SigmaRow&, const SigmaRow&) = default;
};

struct ExpectationResult {
    Expectation expected;
    std::optional<double> actual;
    std::optional<std::string> actual_label;
    bool pass = false;
    std::string note;
};

struct RunReport {
    std::string scenario;
    std::string kind;
    std::vector<SigmaRow> table;
    std::map<std::string, double> estimates;
    std::map<std::string, std::string> labels;
    std::vector<ExpectationResult> expectations;
    std::vector<std::string> interpretation_tags;
    std::map<std::string, std::string> provenance;
    std::optional<std::string> error;
    double wall_time_s = 0.0;
    bool pass = false;
};

bool operator==(const Expectation& a, const Expectation& b);
bool operator==(const ExpectationResult& a, const ExpectationResult& b);
bool operator==(const RunReport& a, const RunReport& b);

/// Validates kind/payload consistency and tolerances; throws SchemaError.
Scenario scenario_from_json(const json& j);
json scenario_to_json(const Scenario& s);

RunReport run_scenario(const Scenario& s);

json report_to_json(const RunReport& r, bool include_timing = true);
RunReport report_from_json(const json& j);

enum class Format { Csv, Json };
Format format_from_string(const std::string& s);

/// Sigma and rate reports write the sigma table; other kinds write quantity,value rows.
void emit(const RunReport& r, Format format, std::ostream& out);
/// Writes to path, or to stdout when path is empty or "-". Throws IoError.
void emit(const RunReport& r, Format format, const std::string& path);

struct SuiteReport {
    std::string suite;
    /// Ordered by scenario name.
    std::vector<RunReport> reports;
    bool pass = false;
};

struct Suite {
    std::string name;
    std::vector<Scenario> scenarios;
};

Suite suite_from_json(const json& j);
/// seed, when given, replaces every scenario's policy seed.
SuiteReport run_suite(const Suite& suite, std::optional<std::uint64_t> seed = std::nullopt);
json suite_report_to_json(const SuiteReport& r, bool include_timing = true);

}  // namespace predlab

#endif
