#include "dprime/spec_io.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

#include "dprime/error.hpp"

namespace dprime {

namespace {

using nlohmann::json;

double number(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key))
    throw SpecError(std::string("potential spec: missing field \"") + key + "\"");
  const auto& v = obj.at(key);
  if (!v.is_number())
    throw SpecError(std::string("potential spec: field \"") + key + "\" must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const char* key, double fallback) {
  return obj.is_object() && obj.contains(key) ? number(obj, key) : fallback;
}

std::vector<double> numbers(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_array())
    throw SpecError(std::string("potential spec: field \"") + key + "\" must be an array");
  std::vector<double> out;
  for (const auto& v : obj.at(key)) {
    if (!v.is_number())
      throw SpecError(std::string("potential spec: \"") + key + "\" holds a non-number");
    out.push_back(v.get<double>());
  }
  return out;
}

Potential build(const json& doc) {
  if (!doc.is_object()) throw SpecError("potential spec: top level must be an object");
  if (!doc.contains("kind") || !doc.at("kind").is_string())
    throw SpecError("potential spec: missing string field \"kind\"");
  const auto kind = doc.at("kind").get<std::string>();
  const json params = doc.value("params", json::object());

  Potential p = Potential::zero();
  if (kind == "square") {
    p = Potential::square(number(params, "left"), number(params, "right"),
                          number(params, "height"));
  } else if (kind == "piecewise") {
    const json& list = params.is_object() && params.contains("pieces") ? params.at("pieces")
                                                                       : params;
    if (!list.is_array()) throw SpecError("potential spec: piecewise params must be an array");
    std::vector<Step> pieces;
    for (const auto& item : list)
      pieces.push_back({number(item, "left"), number(item, "right"), number(item, "height")});
    p = Potential::piecewise(std::move(pieces));
  } else if (kind == "table") {
    p = Potential::table(numbers(params, "x"), numbers(params, "v"));
  } else if (kind == "exp_decay") {
    p = Potential::exp_decay(number_or(params, "amplitude", 1.0), number_or(params, "rate", 1.0));
  } else if (kind != "zero") {
    throw SpecError("potential spec: unknown kind \"" + kind + "\"");
  }
  return p.times(number_or(doc, "coupling", 1.0));
}

}  // namespace

Potential parse_potential_spec(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("potential spec: invalid JSON: ") + e.what());
  }
  try {
    return build(doc);
  } catch (const std::invalid_argument& e) {
    throw SpecError(std::string("potential spec: ") + e.what());
  }
}

}  // namespace dprime
