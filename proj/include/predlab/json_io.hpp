#ifndef PREDLAB_JSON_IO_HPP
#define PREDLAB_JSON_IO_HPP

/** @file
 * JSON forms of arc sets, trigonometric polynomials and density trees.
 *
 * Angles may be given as numbers or as short expressions in pi such as
 * "pi/3", "-2*pi/3" or "0.25*pi". Unknown keys are rejected so that typos
 * surface as SchemaError instead of silently falling back to defaults.
 */

#include "predlab/arcset.hpp"
#include "predlab/density.hpp"
#include "predlab/trig_polynomial.hpp"

#include <json.hpp>

#include <string>

namespace predlab {

using json = nlohmann::json;

/// A number, or "[sign][c*]pi[/d]", or a numeric string.
double parse_angle(const json& j);

ArcSet arcset_from_json(const json& j);
/// Always the explicit form: {"arcs": [...]} or {"full_circle": true}.
json arcset_to_json(const ArcSet& F);

TrigPolynomial trig_from_json(const json& j);
json trig_to_json(const TrigPolynomial& t);

SpectralDensity density_from_json(const json& j);
json density_to_json(const SpectralDensity& f);

/// Parses text, or the contents of a file when text starts with '@'.
json parse_json_argument(const std::string& text);

}  // namespace predlab

#endif
