#include "predlab/scenario.hpp"

#include "predlab/asymptotics.hpp"
#include "predlab/error.hpp"
#include "predlab/fejer_riesz.hpp"
#include "predlab/potential.hpp"
#include "predlab/toeplitz.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace predlab {

const char* to_string(ScenarioKind k)
{
    switch (k) {
    case ScenarioKind::Tau: return "tau";
    case ScenarioKind::Sigma: return "sigma";
    case ScenarioKind::Rate: return "rate";
    case ScenarioKind::Ratio: return "ratio";
    case ScenarioKind::Factorize: return "factorize";
    case ScenarioKind::PropertySuite: return "property_suite";
    }
    return "?";
}

ScenarioKind scenario_kind_from_string(const std::string& s)
{
    for (auto k : {ScenarioKind::Tau, ScenarioKind::Sigma, ScenarioKind::Rate, ScenarioKind::Ratio,
                   ScenarioKind::Factorize, ScenarioKind::PropertySuite})
        if (s == to_string(k)) return k;
    throw SchemaError("unknown scenario kind \"" + s + "\"");
}

Format format_from_string(const std::string& s)
{
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    throw SchemaError("unknown format \"" + s + "\" (csv or json)");
}

bool operator==(const Expectation& a, const Expectation& b)
{
    return a.quantity == b.quantity && a.value == b.value && a.tol == b.tol && a.rel_tol == b.rel_tol &&
           a.equals == b.equals;
}

bool operator==(const ExpectationResult& a, const ExpectationResult& b)
{
    return a.expected == b.expected && a.actual == b.actual && a.actual_label == b.actual_label &&
           a.pass == b.pass && a.note == b.note;
}

bool operator==(const RunReport& a, const RunReport& b)
{
    return a.scenario == b.scenario && a.kind == b.kind && a.table == b.table && a.estimates == b.estimates &&
           a.labels == b.labels && a.expectations == b.expectations &&
           a.interpretation_tags == b.interpretation_tags && a.provenance == b.provenance && a.error == b.error &&
           a.wall_time_s == b.wall_time_s && a.pass == b.pass;
}

namespace {

// Properties and the payload each one reads.
const std::map<std::string, const char*>& property_payloads()
{
    static const std::map<std::string, const char*> m{
        {"rotation_invariance", "arcset"}, {"power_map", "arcset"},       {"robinson", "arcset"},
        {"fekete_szego", "arcset"},        {"dn_monotone", "arcset"},     {"inclusion", "arcset"},
        {"sigma_monotone", "density"},     {"levinson_cholesky", "density"}, {"scaling", "density"},
        {"szego_limit", "density"},
    };
    return m;
}

void check_keys(const json& j, const std::string& what, std::initializer_list<const char*> allowed)
{
    if (!j.is_object()) throw SchemaError(what + " must be an object");
    for (const auto& [key, value] : j.items())
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw SchemaError(what + ": unknown key \"" + key + "\"");
}

int positive_int(const json& j, const std::string& what, int min)
{
    if (!j.is_number_integer() || j.get<long long>() < min)
        throw SchemaError(what + " must be an integer >= " + std::to_string(min));
    return j.get<int>();
}

double positive_number(const json& j, const std::string& what)
{
    if (!j.is_number() || !(j.get<double>() > 0.0) || !std::isfinite(j.get<double>()))
        throw SchemaError(what + " must be a positive number");
    return j.get<double>();
}

NumericPolicy policy_from_json(const json& j, const std::string& what)
{
    check_keys(j, what, {"precision_bits", "n_max", "panels", "starts", "seed", "auto_escalate", "double_check", "window"});
    NumericPolicy p;
    if (j.contains("precision_bits")) p.precision_bits = positive_int(j["precision_bits"], what + ".precision_bits", 64);
    if (j.contains("n_max")) p.n_max = positive_int(j["n_max"], what + ".n_max", 1);
    if (j.contains("panels")) p.panels = positive_int(j["panels"], what + ".panels", 1);
    if (j.contains("starts")) p.starts = positive_int(j["starts"], what + ".starts", 1);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw SchemaError(what + ".seed must be a nonnegative integer");
        p.seed = j["seed"].get<std::uint64_t>();
    }
    for (const char* key : {"auto_escalate", "double_check"}) {
        if (!j.contains(key)) continue;
        if (!j[key].is_boolean()) throw SchemaError(what + "." + key + " must be a boolean");
        (std::string(key) == "auto_escalate" ? p.auto_escalate : p.double_check) = j[key].get<bool>();
    }
    if (j.contains("window")) {
        const json& w = j["window"];
        if (!w.is_array() || w.size() != 2 || !w[0].is_number_integer() || !w[1].is_number_integer())
            throw SchemaError(what + ".window must be [lo, hi]");
        const int lo = w[0].get<int>(), hi = w[1].get<int>();
        if (lo < 0 || hi <= lo || hi > p.n_max) throw SchemaError(what + ".window must satisfy 0 <= lo < hi <= n_max");
        p.window = std::pair{lo, hi};
    }
    return p;
}

json policy_to_json(const NumericPolicy& p)
{
    json j{{"precision_bits", p.precision_bits}, {"n_max", p.n_max},           {"panels", p.panels},
           {"starts", p.starts},                 {"seed", p.seed},             {"auto_escalate", p.auto_escalate},
           {"double_check", p.double_check}};
    if (p.window) j["window"] = {p.window->first, p.window->second};
    return j;
}

Expectation expectation_from_json(const json& j, const std::string& what)
{
    check_keys(j, what, {"quantity", "value", "tol", "rel_tol", "equals"});
    Expectation e;
    if (!j.contains("quantity") || !j["quantity"].is_string()) throw SchemaError(what + ".quantity must be a string");
    e.quantity = j["quantity"].get<std::string>();
    if (j.contains("equals") == j.contains("value")) throw SchemaError(what + ": needs exactly one of value, equals");
    if (j.contains("equals")) {
        if (!j["equals"].is_string()) throw SchemaError(what + ".equals must be a string");
        if (j.contains("tol") || j.contains("rel_tol")) throw SchemaError(what + ": equals takes no tolerance");
        e.equals = j["equals"].get<std::string>();
        return e;
    }
    if (!j["value"].is_number()) throw SchemaError(what + ".value must be a number");
    e.value = j["value"].get<double>();
    if (j.contains("tol")) e.tol = positive_number(j["tol"], what + ".tol");
    if (j.contains("rel_tol")) e.rel_tol = positive_number(j["rel_tol"], what + ".rel_tol");
    if (e.tol == 0.0 && e.rel_tol == 0.0) throw SchemaError(what + ": a numeric expectation needs tol or rel_tol");
    return e;
}

json expectation_to_json(const Expectation& e)
{
    json j{{"quantity", e.quantity}};
    if (e.equals) j["equals"] = *e.equals;
    if (e.value) j["value"] = *e.value;
    if (e.tol > 0.0) j["tol"] = e.tol;
    if (e.rel_tol > 0.0) j["rel_tol"] = e.rel_tol;
    return j;
}

// ---------------------------------------------------------------------------

using Clock = std::chrono::steady_clock;

struct Context {
    const Scenario& s;
    RunReport& r;

    void estimate(const std::string& name, double v)
    {
        if (std::isfinite(v)) r.estimates[name] = v;
        else r.labels[name] = std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    }
    void label(const std::string& name, std::string v) { r.labels[name] = std::move(v); }

    [[nodiscard]] Window window_or(Window fallback) const
    {
        if (s.policy.window) return {s.policy.window->first, s.policy.window->second};
        return fallback;
    }
};

mpfr_prec_t working_precision(const NumericPolicy& p, const SpectralDensity& f)
{
    mpfr_prec_t bits = p.precision_bits;
    if (!p.auto_escalate) return bits;
    const ArcSet support = support_arcs(f);
    if (support.is_full_circle() || support.empty()) return bits;
    // Without a closed form, an arc of the same total length has the smallest capacity.
    const double tau = closed_form_tau(support).value_or(std::sin(support.total_length() / 4.0));
    return std::max(bits, escalated_precision(p.n_max, tau));
}

QuadratureConfig quad_for(const NumericPolicy& p, mpfr_prec_t bits)
{
    QuadratureConfig q;
    q.precision_bits = bits;
    q.min_panels = p.panels;
    return q;
}

PredictionErrorSeries series_at(const SpectralDensity& f, const NumericPolicy& p, mpfr_prec_t bits)
{
    return levinson_truncated(autocovariances(f, p.n_max, quad_for(p, bits)));
}

std::vector<SigmaRow> sigma_table(const PredictionErrorSeries& s)
{
    std::vector<SigmaRow> rows;
    for (std::size_t n = 0; n < s.sigma2.size(); ++n) {
        const Real& v = s.sigma2[n];
        const int digits = v.round_trip_digits();
        SigmaRow row{static_cast<int>(n), v.to_string(digits), sqrt(v).to_string(digits), "", ""};
        if (n > 0) {
            row.root_nth = exp(log(v) / Real(2.0 * static_cast<double>(n), v.bits())).to_string(digits);
            row.ratio_to_prev = (v / s.sigma2[n - 1]).to_string(digits);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void record_series(Context& cx, const SpectralDensity& f, const PredictionErrorSeries& s)
{
    cx.r.table = sigma_table(s);
    if (s.lost_positivity_at) cx.label("lost_positivity_at", std::to_string(*s.lost_positivity_at));
    cx.estimate("n_computed", static_cast<double>(s.size()) - 1.0);
    if (!s.sigma2.empty()) cx.estimate("sigma2_last", s.sigma2.back().to_double());
    try {
        const SzegoClass sc = szego_class(f);
        cx.label("szego_class", sc.regular() ? "regular" : "singular");
        if (sc.regular()) {
            const Real G = geometric_mean(f, quad_for(cx.s.policy, static_cast<mpfr_prec_t>(s.precision_bits)));
            cx.estimate("geometric_mean", G.to_double());
            cx.estimate("szego_limit", (G * Real::pi(G.bits()) * 2.0).to_double());
        }
    } catch (const Unclassifiable& e) {
        cx.label("szego_class", "unclassifiable");
    }
}

void double_check(Context& cx, const SpectralDensity& f, const PredictionErrorSeries& s)
{
    const auto hi = series_at(f, cx.s.policy, static_cast<mpfr_prec_t>(s.precision_bits) + 64);
    double worst = 0.0;
    const std::size_t m = std::min(hi.size(), s.size());
    for (std::size_t n = 0; n < m; ++n)
        worst = std::max(worst, abs((s.sigma2[n] - hi.sigma2[n]) / hi.sigma2[n]).to_double());
    cx.estimate("double_check_rel_diff", worst);
    cx.r.provenance["double_check_bits"] = std::to_string(s.precision_bits + 64);
}

PredictionErrorSeries density_series(Context& cx, const SpectralDensity& f)
{
    const mpfr_prec_t bits = working_precision(cx.s.policy, f);
    cx.r.provenance["precision_bits"] = std::to_string(bits);
    cx.r.provenance["density_hash"] = fnv1a_hex(describe(f));
    for (auto& t : interpretation_tags(f)) cx.r.interpretation_tags.push_back(std::move(t));
    PredictionErrorSeries s = series_at(f, cx.s.policy, bits);
    record_series(cx, f, s);
    if (cx.s.policy.double_check) double_check(cx, f, s);
    return s;
}

void run_tau(Context& cx)
{
    const ArcSet F = arcset_from_json(*cx.s.arcset);
    OptimizerConfig opt;
    opt.starts = cx.s.policy.starts;
    opt.seed = cx.s.policy.seed;
    const TauEstimate t = tau_estimate(F, cx.s.policy.n_max, opt);
    cx.estimate("tau_hat", t.tau_hat);
    cx.estimate("uncertainty", t.uncertainty);
    cx.estimate("chebyshev_root", t.chebyshev_root);
    cx.estimate("n_used", t.n_used);
    for (const auto& [n, d] : t.d) cx.estimate("d_" + std::to_string(n), d);
    cx.label("method", to_string(t.method));
    if (const auto cf = closed_form_tau(F)) cx.estimate("closed_form_tau", *cf);
}

void run_rate(Context& cx, const PredictionErrorSeries& s)
{
    const auto logs = s.log_sigma2();
    const RateReport root = root_limit(logs, cx.window_or(root_window(s.size())));
    cx.estimate("root_limit", root.estimate);
    cx.estimate("root_last", root.secondary);
    cx.estimate("root_richardson", root.richardson);
    cx.estimate("root_spread", root.spread);
    cx.estimate("root_residual", root.residual);
    const Window pw = cx.window_or(power_window(s.size()));
    if (pw.count() >= 8) {
        const RateReport pl = power_law_fit(logs, pw);
        cx.estimate("power_exponent", pl.estimate);
        cx.estimate("power_constant", pl.secondary);
        cx.estimate("power_residual", pl.residual);
        cx.estimate("power_trend", pl.trend);
    }
    const Window cw = cx.window_or(root_window(s.size()));
    if (cw.count() >= 8) {
        const SequenceClass c = classify(logs, cw);
        cx.label("exponentially_neutral", to_string(c.exponentially_neutral));
        cx.label("exponentially_decreasing", to_string(c.exponentially_decreasing));
        cx.label("weakly_varying", to_string(c.weakly_varying));
    }
}

void run_ratio(Context& cx)
{
    const SpectralDensity f = density_from_json(*cx.s.density);
    const SpectralDensity g = density_from_json(*cx.s.g);
    const SpectralDensity fg = f * g;
    const mpfr_prec_t bits = std::max(working_precision(cx.s.policy, f), working_precision(cx.s.policy, fg));
    cx.r.provenance["precision_bits"] = std::to_string(bits);
    cx.r.provenance["density_hash"] = fnv1a_hex(describe(f));
    cx.r.provenance["g_hash"] = fnv1a_hex(describe(g));
    for (auto& t : interpretation_tags(fg)) cx.r.interpretation_tags.push_back(std::move(t));
    const auto sf = series_at(f, cx.s.policy, bits);
    const auto sfg = series_at(fg, cx.s.policy, bits);
    const std::size_t size = std::min(sf.size(), sfg.size());
    const RateReport r = ratio_limit(sfg, sf, cx.window_or(power_window(size)));
    cx.estimate("ratio_last", r.estimate);
    cx.estimate("ratio_mean", r.secondary);
    cx.estimate("ratio_spread", r.spread);
    cx.estimate("ratio_trend", r.trend);
    cx.estimate("ratio_extrapolated", r.extrapolated);
    cx.estimate("ratio_decay_exponent", r.decay_exponent);
    try {
        cx.estimate("geometric_mean_g", geometric_mean(g, quad_for(cx.s.policy, bits)).to_double());
    } catch (const Unclassifiable&) {
        cx.label("geometric_mean_g", "unclassifiable");
    }
}

void run_factorize(Context& cx)
{
    const TrigPolynomial t = trig_from_json(*cx.s.trig);
    const Bits bits{cx.s.policy.precision_bits};
    const SpectralFactor sf = factorize(t, 1e-10, bits);
    cx.estimate("geometric_mean", sf.geometric_mean.to_double());
    cx.estimate("reconstruction_error", sf.reconstruction_error);
    cx.estimate("degree", sf.degree());
    double min_root = 1e300;
    for (const auto& z : sf.roots) min_root = std::min(min_root, std::abs(z));
    if (!sf.roots.empty()) cx.estimate("min_root_modulus", min_root);
    for (std::size_t k = 0; k < sf.coeffs.size(); ++k) {
        cx.estimate("s_" + std::to_string(k) + ".re", sf.coeffs[k].re.to_double());
        cx.estimate("s_" + std::to_string(k) + ".im", sf.coeffs[k].im.to_double());
    }
}

void property(Context& cx, const std::string& name, double deviation, bool ok)
{
    cx.estimate(name, deviation);
    cx.label(name, ok ? "pass" : "fail");
}

void run_arcset_property(Context& cx, const std::string& name, const ArcSet& F)
{
    OptimizerConfig opt;
    opt.starts = cx.s.policy.starts;
    opt.seed = cx.s.policy.seed;
    const int n_max = std::max(8, cx.s.policy.n_max);
    if (name == "robinson") {
        const auto cf = closed_form_tau(F);
        if (!cf) throw UnsupportedShape("robinson needs a closed-form pattern");
        const double dev = std::abs(*cf - std::sqrt(2.0 * segment_tau(project_real(F))));
        property(cx, name, dev, dev <= 1e-12);
        return;
    }
    if (name == "dn_monotone") {
        double worst = 0.0, prev = 0.0;
        for (int n = 2; n <= std::min(n_max, 24); ++n) {
            const double d = fekete_points(F, n, opt).d_n;
            if (n > 2) worst = std::max(worst, d - prev);
            prev = d;
        }
        property(cx, name, worst, worst <= 1e-8);
        return;
    }
    const TauEstimate t = tau_estimate(F, n_max, opt);
    if (name == "fekete_szego") {
        const double dev = std::abs(t.tau_hat - t.chebyshev_root);
        property(cx, name, dev, dev <= 0.05);
    } else if (name == "rotation_invariance") {
        const TauEstimate u = tau_estimate(rotate(F, 0.7), n_max, opt);
        const double dev = std::abs(u.tau_hat - t.tau_hat);
        property(cx, name, dev, dev <= 2.0 * std::max(t.uncertainty, u.uncertainty) + 1e-12);
    } else if (name == "power_map") {
        const TauEstimate u = tau_estimate(preimage_power(F, 2), n_max, opt);
        const double dev = std::abs(u.tau_hat - std::sqrt(t.tau_hat));
        property(cx, name, dev, dev <= 0.03);
    } else if (name == "inclusion") {
        std::vector<Arc> wider;
        const double grow = std::min(1.1, kTwoPi / F.total_length());
        for (const auto& a : F.arcs()) wider.push_back(Arc::centered(a.center, a.length * grow));
        const TauEstimate u = tau_estimate(ArcSet(std::move(wider)), n_max, opt);
        const double excess = t.tau_hat - u.tau_hat;
        property(cx, name, std::max(0.0, excess), excess <= 2.0 * std::max(t.uncertainty, u.uncertainty) + 1e-12);
    }
}

void run_density_property(Context& cx, const std::string& name, const SpectralDensity& f,
                          const PredictionErrorSeries& s, const AutocovarianceSequence& acov)
{
    if (name == "sigma_monotone") {
        int violations = 0;
        for (std::size_t n = 1; n < s.size(); ++n) violations += s.sigma2[n] > s.sigma2[n - 1];
        property(cx, name, violations, violations == 0);
    } else if (name == "levinson_cholesky") {
        double worst = 0.0;
        const int top = std::min<int>(64, static_cast<int>(s.size()) - 1);
        for (int n = 0; n <= top; ++n) {
            const Real c = cholesky_sigma(acov, n);
            worst = std::max(worst, abs((c - s.sigma2[static_cast<std::size_t>(n)]) / c).to_double());
        }
        property(cx, name, worst, worst <= 1e-20);
    } else if (name == "scaling") {
        const auto s3 = series_at(SpectralDensity::constant(3.0) * f, cx.s.policy, acov.precision_bits);
        double worst = 0.0;
        for (std::size_t n = 0; n < std::min(s.size(), s3.size()); ++n)
            worst = std::max(worst, abs(s3.sigma2[n] / s.sigma2[n] - 3.0).to_double());
        property(cx, name, worst, worst <= 1e-9);
    } else if (name == "szego_limit") {
        const SzegoClass sc = szego_class(f);
        if (!sc.regular()) throw UnsupportedShape("szego_limit needs a regular density");
        const Real G = geometric_mean(f, quad_for(cx.s.policy, acov.precision_bits));
        const double dev = abs(s.sigma2.back() / (G * Real::pi(G.bits()) * 2.0) - 1.0).to_double();
        property(cx, name, dev, dev <= 1e-3);
    }
}

void run_properties(Context& cx)
{
    std::optional<ArcSet> F;
    if (cx.s.arcset) F = arcset_from_json(*cx.s.arcset);
    std::optional<SpectralDensity> f;
    std::optional<PredictionErrorSeries> s;
    std::optional<AutocovarianceSequence> acov;
    if (cx.s.density) {
        f = density_from_json(*cx.s.density);
        const mpfr_prec_t bits = working_precision(cx.s.policy, *f);
        cx.r.provenance["precision_bits"] = std::to_string(bits);
        cx.r.provenance["density_hash"] = fnv1a_hex(describe(*f));
        for (auto& t : interpretation_tags(*f)) cx.r.interpretation_tags.push_back(std::move(t));
        acov = autocovariances(*f, cx.s.policy.n_max, quad_for(cx.s.policy, bits));
        s = levinson_truncated(*acov);
    }
    for (const auto& name : cx.s.properties) {
        try {
            if (std::string(property_payloads().at(name)) == "arcset") run_arcset_property(cx, name, *F);
            else run_density_property(cx, name, *f, *s, *acov);
        } catch (const Error& e) {
            cx.label(name, "fail");
            cx.label(name + ".error", e.what());
        }
    }
}

void evaluate_expectations(RunReport& r, const std::vector<Expectation>& expect)
{
    for (const auto& e : expect) {
        ExpectationResult res{e, std::nullopt, std::nullopt, false, ""};
        if (r.error) {
            res.note = "scenario failed";
        } else if (e.equals) {
            const auto it = r.labels.find(e.quantity);
            if (it == r.labels.end()) {
                res.note = "quantity not produced";
            } else {
                res.actual_label = it->second;
                res.pass = it->second == *e.equals;
            }
        } else {
            const auto it = r.estimates.find(e.quantity);
            if (it == r.estimates.end()) {
                res.note = "quantity not produced";
            } else {
                res.actual = it->second;
                const double err = std::abs(it->second - *e.value);
                const double allowed = std::max(e.tol, e.rel_tol * std::abs(*e.value));
                res.pass = err <= allowed;
                std::ostringstream ss;
                ss.precision(3);
                ss << "|error| " << err << " vs allowed " << allowed;
                res.note = ss.str();
            }
        }
        r.expectations.push_back(std::move(res));
    }
}

}  // namespace

Scenario scenario_from_json(const json& j)
{
    check_keys(j, "scenario", {"name", "kind", "density", "g", "arcset", "trig", "properties", "policy", "expect"});
    Scenario s;
    if (!j.contains("name") || !j["name"].is_string() || j["name"].get<std::string>().empty())
        throw SchemaError("scenario.name must be a non-empty string");
    s.name = j["name"].get<std::string>();
    const std::string what = "scenario \"" + s.name + "\"";
    if (!j.contains("kind") || !j["kind"].is_string()) throw SchemaError(what + ": kind must be a string");
    s.kind = scenario_kind_from_string(j["kind"].get<std::string>());
    for (const char* key : {"density", "g", "arcset", "trig"})
        if (j.contains(key)) {
            std::optional<json>& slot = std::string(key) == "density" ? s.density
                                        : std::string(key) == "g"     ? s.g
                                        : std::string(key) == "arcset" ? s.arcset
                                                                        : s.trig;
            slot = j[key];
        }
    if (j.contains("properties")) {
        const json& p = j["properties"];
        if (!p.is_array()) throw SchemaError(what + ": properties must be an array");
        for (const auto& x : p) {
            if (!x.is_string() || !property_payloads().count(x.get<std::string>()))
                throw SchemaError(what + ": unknown property " + x.dump());
            s.properties.push_back(x.get<std::string>());
        }
    }
    if (j.contains("policy")) s.policy = policy_from_json(j["policy"], what + ".policy");
    if (j.contains("expect")) {
        if (!j["expect"].is_array()) throw SchemaError(what + ": expect must be an array");
        for (std::size_t i = 0; i < j["expect"].size(); ++i)
            s.expect.push_back(expectation_from_json(j["expect"][i], what + ".expect[" + std::to_string(i) + "]"));
    }

    // Payloads each kind needs; anything else is rejected.
    std::set<std::string> need;
    switch (s.kind) {
    case ScenarioKind::Tau: need = {"arcset"}; break;
    case ScenarioKind::Sigma:
    case ScenarioKind::Rate: need = {"density"}; break;
    case ScenarioKind::Ratio: need = {"density", "g"}; break;
    case ScenarioKind::Factorize: need = {"trig"}; break;
    case ScenarioKind::PropertySuite:
        if (s.properties.empty()) throw SchemaError(what + ": property_suite needs properties");
        for (const auto& p : s.properties) need.insert(property_payloads().at(p));
        break;
    }
    if (s.kind != ScenarioKind::PropertySuite && !s.properties.empty())
        throw SchemaError(what + ": properties only apply to property_suite");
    const std::pair<const char*, const std::optional<json>*> slots[] = {
        {"density", &s.density}, {"g", &s.g}, {"arcset", &s.arcset}, {"trig", &s.trig}};
    for (const auto& [key, slot] : slots) {
        if (need.count(key) && !slot->has_value()) throw SchemaError(what + ": kind " + to_string(s.kind) + " needs " + key);
        if (!need.count(key) && slot->has_value()) throw SchemaError(what + ": kind " + to_string(s.kind) + " takes no " + key);
    }
    if (s.density) density_from_json(*s.density);
    if (s.g) density_from_json(*s.g);
    if (s.arcset) arcset_from_json(*s.arcset);
    if (s.trig) trig_from_json(*s.trig);
    if ((s.kind == ScenarioKind::Tau || s.kind == ScenarioKind::PropertySuite) && s.arcset && s.policy.n_max < 8)
        throw SchemaError(what + ": potential-theory runs need n_max >= 8");
    return s;
}

json scenario_to_json(const Scenario& s)
{
    json j{{"name", s.name}, {"kind", to_string(s.kind)}, {"policy", policy_to_json(s.policy)}};
    if (s.density) j["density"] = *s.density;
    if (s.g) j["g"] = *s.g;
    if (s.arcset) j["arcset"] = *s.arcset;
    if (s.trig) j["trig"] = *s.trig;
    if (!s.properties.empty()) j["properties"] = s.properties;
    json ex = json::array();
    for (const auto& e : s.expect) ex.push_back(expectation_to_json(e));
    j["expect"] = ex;
    return j;
}

RunReport run_scenario(const Scenario& s)
{
    RunReport r;
    r.scenario = s.name;
    r.kind = to_string(s.kind);
    r.provenance = {{"tool", kToolVersion},
                    {"precision_bits", std::to_string(s.policy.precision_bits)},
                    {"n_max", std::to_string(s.policy.n_max)},
                    {"panels", std::to_string(s.policy.panels)},
                    {"starts", std::to_string(s.policy.starts)},
                    {"seed", std::to_string(s.policy.seed)}};
    const auto t0 = Clock::now();
    Context cx{s, r};
    try {
        switch (s.kind) {
        case ScenarioKind::Tau: run_tau(cx); break;
        case ScenarioKind::Sigma: density_series(cx, density_from_json(*s.density)); break;
        case ScenarioKind::Rate: run_rate(cx, density_series(cx, density_from_json(*s.density))); break;
        case ScenarioKind::Ratio: run_ratio(cx); break;
        case ScenarioKind::Factorize: run_factorize(cx); break;
        case ScenarioKind::PropertySuite: run_properties(cx); break;
        }
    } catch (const std::exception& e) {
        r.error = s.name + ": " + e.what();
    }
    std::sort(r.interpretation_tags.begin(), r.interpretation_tags.end());
    r.interpretation_tags.erase(std::unique(r.interpretation_tags.begin(), r.interpretation_tags.end()),
                                r.interpretation_tags.end());
    evaluate_expectations(r, s.expect);
    r.pass = !r.error && std::all_of(r.expectations.begin(), r.expectations.end(),
                                     [](const ExpectationResult& e) { return e.pass; });
    r.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
}

json report_to_json(const RunReport& r, bool include_timing)
{
    json table = json::array();
    for (const auto& row : r.table)
        table.push_back({{"n", row.n},
                         {"sigma2", row.sigma2},
                         {"sigma", row.sigma},
                         {"root_nth", row.root_nth},
                         {"ratio_to_prev", row.ratio_to_prev}});
    json ex = json::array();
    for (const auto& e : r.expectations) {
        json x = expectation_to_json(e.expected);
        x["pass"] = e.pass;
        x["note"] = e.note;
        if (e.actual) x["actual"] = *e.actual;
        if (e.actual_label) x["actual_label"] = *e.actual_label;
        ex.push_back(std::move(x));
    }
    json j{{"scenario", r.scenario},
           {"kind", r.kind},
           {"pass", r.pass},
           {"table", table},
           {"estimates", r.estimates},
           {"labels", r.labels},
           {"expectations", ex},
           {"interpretation_tags", r.interpretation_tags},
           {"provenance", r.provenance}};
    j["error"] = r.error ? json(*r.error) : json(nullptr);
    if (include_timing) j["wall_time_s"] = r.wall_time_s;
    return j;
}

RunReport report_from_json(const json& j)
{
    try {
        RunReport r;
        r.scenario = j.at("scenario").get<std::string>();
        r.kind = j.at("kind").get<std::string>();
        r.pass = j.at("pass").get<bool>();
        for (const auto& row : j.at("table"))
            r.table.push_back({row.at("n").get<int>(), row.at("sigma2").get<std::string>(),
                               row.at("sigma").get<std::string>(), row.at("root_nth").get<std::string>(),
                               row.at("ratio_to_prev").get<std::string>()});
        r.estimates = j.at("estimates").get<std::map<std::string, double>>();
        r.labels = j.at("labels").get<std::map<std::string, std::string>>();
        for (const auto& x : j.at("expectations")) {
            ExpectationResult e;
            e.expected.quantity = x.at("quantity").get<std::string>();
            if (x.contains("value")) e.expected.value = x["value"].get<double>();
            if (x.contains("tol")) e.expected.tol = x["tol"].get<double>();
            if (x.contains("rel_tol")) e.expected.rel_tol = x["rel_tol"].get<double>();
            if (x.contains("equals")) e.expected.equals = x["equals"].get<std::string>();
            if (x.contains("actual")) e.actual = x["actual"].get<double>();
            if (x.contains("actual_label")) e.actual_label = x["actual_label"].get<std::string>();
            e.pass = x.at("pass").get<bool>();
            e.note = x.at("note").get<std::string>();
            r.expectations.push_back(std::move(e));
        }
        r.interpretation_tags = j.at("interpretation_tags").get<std::vector<std::string>>();
        r.provenance = j.at("provenance").get<std::map<std::string, std::string>>();
        if (!j.at("error").is_null()) r.error = j["error"].get<std::string>();
        if (j.contains("wall_time_s")) r.wall_time_s = j["wall_time_s"].get<double>();
        return r;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed report: ") + e.what());
    }
}

void emit(const RunReport& r, Format format, std::ostream& out)
{
    if (format == Format::Json) {
        out << report_to_json(r).dump(2) << '\n';
    } else if (r.kind == "sigma" || r.kind == "rate") {
        out << "n,sigma2,sigma,root_nth,ratio_to_prev\n";
        for (const auto& row : r.table)
            out << row.n << ',' << row.sigma2 << ',' << row.sigma << ',' << row.root_nth << ',' << row.ratio_to_prev
                << '\n';
    } else {
        out << "quantity,value\n";
        std::ostringstream ss;
        ss.precision(17);
        for (const auto& [k, v] : r.estimates) ss << k << ',' << v << '\n';
        for (const auto& [k, v] : r.labels) ss << k << ",\"" << v << "\"\n";
        out << ss.str();
    }
    if (!out) throw IoError("write failed");
}

void emit(const RunReport& r, Format format, const std::string& path)
{
    if (path.empty() || path == "-") {
        emit(r, format, std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    emit(r, format, out);
}

Suite suite_from_json(const json& j)
{
    if (!j.is_object()) throw SchemaError("suite must be an object");
    check_keys(j, "suite", {"suite", "scenarios"});
    Suite s;
    if (!j.contains("suite") || !j["suite"].is_string()) throw SchemaError("suite.suite must be a string");
    s.name = j["suite"].get<std::string>();
    if (!j.contains("scenarios") || !j["scenarios"].is_array()) throw SchemaError("suite.scenarios must be an array");
    std::set<std::string> names;
    for (const auto& x : j["scenarios"]) {
        s.scenarios.push_back(scenario_from_json(x));
        if (!names.insert(s.scenarios.back().name).second)
            throw SchemaError("duplicate scenario name \"" + s.scenarios.back().name + "\"");
    }
    return s;
}

SuiteReport run_suite(const Suite& suite, std::optional<std::uint64_t> seed)
{
    SuiteReport out{suite.name, {}, true};
    for (Scenario s : suite.scenarios) {
        if (seed) s.policy.seed = *seed;
        out.reports.push_back(run_scenario(s));
        out.pass = out.pass && out.reports.back().pass;
    }
    std::sort(out.reports.begin(), out.reports.end(),
              [](const RunReport& a, const RunReport& b) { return a.scenario < b.scenario; });
    return out;
}

json suite_report_to_json(const SuiteReport& r, bool include_timing)
{
    json reports = json::array();
    for (const auto& x : r.reports) reports.push_back(report_to_json(x, include_timing));
    return json{{"suite", r.suite}, {"pass", r.pass}, {"reports", reports}};
}

}  // namespace predlab
