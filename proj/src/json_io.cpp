#include "predlab/json_io.hpp"

#include "predlab/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <regex>
#include <sstream>

namespace predlab {

namespace {

void require_object(const json& j, const std::string& what, std::initializer_list<const char*> allowed)
{
    if (!j.is_object()) throw SchemaError(what + " must be an object");
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw SchemaError(what + ": unknown key \"" + key + "\"");
    }
}

const json& field(const json& j, const char* key, const std::string& what)
{
    const auto it = j.find(key);
    if (it == j.end()) throw SchemaError(what + ": missing \"" + key + "\"");
    return *it;
}

double number(const json& j, const std::string& what)
{
    if (!j.is_number()) throw SchemaError(what + " must be a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) throw SchemaError(what + " must be finite");
    return x;
}

int integer(const json& j, const std::string& what)
{
    if (!j.is_number_integer()) throw SchemaError(what + " must be an integer");
    return j.get<int>();
}

std::vector<double> numbers(const json& j, const std::string& what)
{
    if (!j.is_array()) throw SchemaError(what + " must be an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], what + "[" + std::to_string(i) + "]"));
    return out;
}

double angle_field(const json& j, const char* key, const std::string& what, double fallback)
{
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    try {
        return parse_angle(*it);
    } catch (const SchemaError& e) {
        throw SchemaError(what + "." + key + ": " + e.what());
    }
}

TrigPolynomial::Factor trig_factor(const json& j, const std::string& what)
{
    require_object(j, what, {"cos", "sin", "sin2_shift", "power"});
    if (j.contains("sin2_shift")) {
        if (j.contains("cos") || j.contains("sin")) throw SchemaError(what + ": sin2_shift excludes cos/sin");
        const int p = j.contains("power") ? integer(j["power"], what + ".power") : 1;
        if (p < 1) throw SchemaError(what + ".power must be at least 1");
        return TrigPolynomial::ShiftedSine{parse_angle(j["sin2_shift"]), p};
    }
    if (j.contains("power")) throw SchemaError(what + ": power needs sin2_shift");
    TrigPolynomial::Explicit e;
    e.cos = j.contains("cos") ? numbers(j["cos"], what + ".cos") : std::vector<double>{};
    e.sin = j.contains("sin") ? numbers(j["sin"], what + ".sin") : std::vector<double>{};
    if (e.cos.empty() && e.sin.empty()) throw SchemaError(what + ": needs cos, sin or sin2_shift");
    return e;
}

TrigPolynomial trig_at(const json& j, const std::string& what)
{
    if (j.contains("factors")) {
        const json& fs = j["factors"];
        if (!fs.is_array() || fs.empty()) throw SchemaError(what + ".factors must be a non-empty array");
        std::vector<TrigPolynomial::Factor> out;
        for (std::size_t i = 0; i < fs.size(); ++i)
            out.push_back(trig_factor(fs[i], what + ".factors[" + std::to_string(i) + "]"));
        return TrigPolynomial(std::move(out));
    }
    json rest = j;
    rest.erase("type");
    rest.erase("bounds");
    return TrigPolynomial({trig_factor(rest, what)});
}

SpectralDensity density_at(const json& j, const std::string& what)
{
    if (!j.is_object()) throw SchemaError(what + " must be an object");
    const json& type = field(j, "type", what);
    if (!type.is_string()) throw SchemaError(what + ".type must be a string");
    const std::string t = type.get<std::string>();
    const std::string at = what + " (" + t + ")";

    auto build = [&]() -> SpectralDensity {
        if (t == "constant") {
            require_object(j, at, {"type", "c", "bounds"});
            return SpectralDensity::constant(number(field(j, "c", at), at + ".c"));
        }
        if (t == "rosenblatt") {
            require_object(j, at, {"type", "a", "form", "bounds"});
            RosenblattForm form = RosenblattForm::Cosh;
            if (j.contains("form")) {
                if (!j["form"].is_string()) throw SchemaError(at + ".form must be a string");
                try {
                    form = rosenblatt_form_from_string(j["form"].get<std::string>());
                } catch (const InvalidArgument& e) {
                    throw SchemaError(at + ".form: " + e.what());
                }
            }
            return SpectralDensity::rosenblatt(number(field(j, "a", at), at + ".a"), form);
        }
        if (t == "arc_indicator") {
            require_object(j, at, {"type", "arcset", "bounds"});
            return SpectralDensity::arc_indicator(arcset_from_json(field(j, "arcset", at)));
        }
        if (t == "trigpoly" || t == "reciprocal_trigpoly") {
            require_object(j, at, {"type", "cos", "sin", "sin2_shift", "power", "factors", "bounds"});
            if (j.contains("factors") && (j.contains("cos") || j.contains("sin") || j.contains("sin2_shift")))
                throw SchemaError(at + ": factors excludes cos/sin/sin2_shift");
            TrigPolynomial p = trig_at(j, at);
            return t == "trigpoly" ? SpectralDensity::trig_poly(std::move(p))
                                   : SpectralDensity::reciprocal_trig_poly(std::move(p));
        }
        if (t == "even_poly") {
            require_object(j, at, {"type", "coeffs", "bounds"});
            auto c = numbers(field(j, "coeffs", at), at + ".coeffs");
            if (c.empty()) throw SchemaError(at + ".coeffs must be non-empty");
            return SpectralDensity::even_poly(std::move(c));
        }
        if (t == "exp_odd") {
            require_object(j, at, {"type", "sine_coeffs", "bounds"});
            return SpectralDensity::exp_odd(numbers(field(j, "sine_coeffs", at), at + ".sine_coeffs"));
        }
        if (t == "product") {
            require_object(j, at, {"type", "factors", "bounds"});
            const json& fs = field(j, "factors", at);
            if (!fs.is_array() || fs.empty()) throw SchemaError(at + ".factors must be a non-empty array");
            std::vector<SpectralDensity> out;
            for (std::size_t i = 0; i < fs.size(); ++i)
                out.push_back(density_at(fs[i], at + ".factors[" + std::to_string(i) + "]"));
            return SpectralDensity::product(std::move(out));
        }
        throw SchemaError(what + ": unknown density type \"" + t + "\"");
    };

    SpectralDensity f = build();
    if (j.contains("bounds")) {
        const json& b = j["bounds"];
        require_object(b, at + ".bounds", {"lower", "upper"});
        DensityBounds db;
        if (b.contains("lower")) db.lower = number(b["lower"], at + ".bounds.lower");
        if (b.contains("upper")) db.upper = number(b["upper"], at + ".bounds.upper");
        if (db.lower < 0.0 || db.upper < db.lower) throw SchemaError(at + ".bounds must satisfy 0 <= lower <= upper");
        f.with_bounds(db);
    }
    return f;
}

json trig_factor_to_json(const TrigPolynomial::Factor& f)
{
    if (const auto* e = std::get_if<TrigPolynomial::Explicit>(&f)) {
        json j;
        j["cos"] = e->cos;
        if (!e->sin.empty()) j["sin"] = e->sin;
        return j;
    }
    const auto& s = std::get<TrigPolynomial::ShiftedSine>(f);
    return json{{"sin2_shift", s.shift}, {"power", s.power}};
}

}  // namespace

double parse_angle(const json& j)
{
    if (j.is_number()) {
        const double x = j.get<double>();
        if (!std::isfinite(x)) throw SchemaError("angle must be finite");
        return x;
    }
    if (!j.is_string()) throw SchemaError("angle must be a number or a string");
    std::string s = j.get<std::string>();
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    static const std::regex pi_form(R"(^([+-]?)(([0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?)\*?)?pi(/([0-9]*\.?[0-9]+))?$)");
    static const std::regex plain(R"(^[+-]?[0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?$)");
    std::smatch m;
    if (std::regex_match(s, m, pi_form)) {
        double v = kPi;
        if (m[3].matched) v *= std::stod(m[3].str());
        if (m[5].matched) {
            const double d = std::stod(m[5].str());
            if (d == 0.0) throw SchemaError("angle \"" + s + "\" divides by zero");
            v /= d;
        }
        return m[1].str() == "-" ? -v : v;
    }
    if (std::regex_match(s, plain)) return std::stod(s);
    throw SchemaError("cannot read angle \"" + s + "\"");
}

ArcSet arcset_from_json(const json& j)
{
    const std::string what = "arcset";
    if (!j.is_object()) throw SchemaError(what + " must be an object");
    if (j.contains("full_circle")) {
        require_object(j, what, {"full_circle"});
        if (!j["full_circle"].is_boolean() || !j["full_circle"].get<bool>())
            throw SchemaError(what + ".full_circle must be true");
        return ArcSet::full_circle();
    }
    if (j.contains("arcs")) {
        require_object(j, what, {"arcs"});
        const json& arcs = j["arcs"];
        if (!arcs.is_array() || arcs.empty()) throw SchemaError(what + ".arcs must be a non-empty array");
        std::vector<Arc> out;
        double total = 0.0;
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            const std::string at = what + ".arcs[" + std::to_string(i) + "]";
            require_object(arcs[i], at, {"center", "length"});
            const double c = angle_field(arcs[i], "center", at, 0.0);
            const double len = angle_field(arcs[i], "length", at, -1.0);
            if (!(len > 0.0) || len > kTwoPi + kArcTolerance) throw SchemaError(at + ".length must be in (0, 2pi]");
            total += len;
            out.push_back(Arc::centered(c, len));
        }
        if (total > kTwoPi + kArcTolerance) throw SchemaError(what + ": total length exceeds 2pi");
        return ArcSet(std::move(out));
    }
    if (!j.contains("pattern")) throw SchemaError(what + " needs one of \"arcs\", \"full_circle\", \"pattern\"");
    if (!j["pattern"].is_string()) throw SchemaError(what + ".pattern must be a string");
    const std::string p = j["pattern"].get<std::string>();
    const std::string at = what + " (" + p + ")";
    const double theta0 = angle_field(j, "theta0", at, 0.0);
    if (p == "gamma") {
        require_object(j, at, {"pattern", "beta", "theta0"});
        return gamma_arc(angle_field(j, "beta", at, -1.0), theta0);
    }
    if (p == "equidistant") {
        require_object(j, at, {"pattern", "k", "alpha", "theta0"});
        return equidistant_arcs(integer(field(j, "k", at), at + ".k"), angle_field(j, "alpha", at, -1.0), theta0);
    }
    if (p == "symmetric_pair" || p == "four_arc") {
        require_object(j, at, {"pattern", "alpha", "delta", "theta0"});
        const double a = angle_field(j, "alpha", at, -1.0);
        const double d = angle_field(j, "delta", at, -1.0);
        return p == "four_arc" ? four_arc(a, d, theta0) : symmetric_pair(a, d, theta0);
    }
    throw SchemaError(what + ": unknown pattern \"" + p + "\"");
}

json arcset_to_json(const ArcSet& F)
{
    if (F.is_full_circle()) return json{{"full_circle", true}};
    json arcs = json::array();
    for (const auto& a : F.arcs()) arcs.push_back(json{{"center", a.center}, {"length", a.length}});
    return json{{"arcs", arcs}};
}

TrigPolynomial trig_from_json(const json& j)
{
    if (!j.is_object()) throw SchemaError("trigpoly must be an object");
    require_object(j, "trigpoly", {"cos", "sin", "sin2_shift", "power", "factors"});
    return trig_at(j, "trigpoly");
}

json trig_to_json(const TrigPolynomial& t)
{
    if (t.factors().size() == 1) return trig_factor_to_json(t.factors().front());
    json fs = json::array();
    for (const auto& f : t.factors()) fs.push_back(trig_factor_to_json(f));
    return json{{"factors", fs}};
}

SpectralDensity density_from_json(const json& j)
{
    return density_at(j, "density");
}

json density_to_json(const SpectralDensity& f)
{
    using D = SpectralDensity;
    json j;
    const auto& n = f.node();
    if (const auto* c = std::get_if<D::Constant>(&n)) {
        j = {{"type", "constant"}, {"c", c->c}};
    } else if (const auto* r = std::get_if<D::Rosenblatt>(&n)) {
        j = {{"type", "rosenblatt"}, {"a", r->a}, {"form", to_string(r->form)}};
    } else if (const auto* a = std::get_if<D::ArcIndicator>(&n)) {
        j = {{"type", "arc_indicator"}, {"arcset", arcset_to_json(a->arcs)}};
    } else if (const auto* t = std::get_if<D::TrigPoly>(&n)) {
        j = trig_to_json(t->t);
        j["type"] = "trigpoly";
    } else if (const auto* t = std::get_if<D::ReciprocalTrigPoly>(&n)) {
        j = trig_to_json(t->t);
        j["type"] = "reciprocal_trigpoly";
    } else if (const auto* p = std::get_if<D::EvenPoly>(&n)) {
        j = {{"type", "even_poly"}, {"coeffs", p->coeffs}};
    } else if (const auto* e = std::get_if<D::ExpOdd>(&n)) {
        j = {{"type", "exp_odd"}, {"sine_coeffs", e->sine_coeffs}};
    } else {
        json fs = json::array();
        for (const auto& g : std::get<D::Product>(n).factors) fs.push_back(density_to_json(g));
        j = {{"type", "product"}, {"factors", fs}};
    }
    if (const auto& b = f.bounds()) {
        j["bounds"] = {{"lower", b->lower}};
        if (std::isfinite(b->upper)) j["bounds"]["upper"] = b->upper;
    }
    return j;
}

json parse_json_argument(const std::string& text)
{
    std::string body = text;
    if (!text.empty() && text.front() == '@') {
        std::ifstream in(text.substr(1));
        if (!in) throw IoError("cannot open " + text.substr(1));
        std::ostringstream ss;
        ss << in.rdbuf();
        body = ss.str();
    }
    try {
        return json::parse(body);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace predlab
