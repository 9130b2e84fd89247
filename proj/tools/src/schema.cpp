#include "schema.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lorentz::cli {
namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw UsageError("schema violation at " + (where.empty() ? std::string("/") : where) + ": " + what);
}

bool is_number(const Json& v) { return v.is_number() && std::isfinite(v.get<double>()); }

void check_number(const Json& v, FieldType type, const std::string& where) {
  if (!is_number(v)) fail(where, "expected a finite number");
  const double x = v.get<double>();
  if (type == FieldType::positive && !(x > 0.0)) fail(where, "expected a positive number");
  if (type == FieldType::nonnegative && !(x >= 0.0)) fail(where, "expected a nonnegative number");
}

void check_numbers(const Json& v, const std::string& where, int length) {
  if (!v.is_array()) fail(where, "expected an array of numbers");
  if (length > 0 && static_cast<int>(v.size()) != length)
    fail(where, "expected " + std::to_string(length) + " coordinates");
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!is_number(v[i])) fail(where + "/" + std::to_string(i), "expected a finite number");
}

int space_dim(const Json& cfg) {
  if (cfg.contains("space") && cfg["space"].is_object() && cfg["space"].contains("dim"))
    return cfg["space"]["dim"].get<int>();
  if (cfg.contains("dim") && cfg["dim"].is_number_integer()) return cfg["dim"].get<int>();
  return 0;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(where, "'" + s + "' is not a number");
  }
  if (used != s.size()) fail(where, "'" + s + "' is not a number");
  return x;
}

Json read_json_text(const std::string& text, const std::string& where) {
  std::string body = text;
  if (text.empty() || text.front() != '{') {
    std::ifstream in(text);
    if (!in) fail(where, "cannot open '" + text + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  try {
    return Json::parse(body);
  } catch (const Json::parse_error& e) {
    fail(where, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

Json validate_space(const Json& space, const std::string& where) {
  if (!space.is_object()) fail(where, "expected a space descriptor object");
  static const std::vector<std::string> known{"space", "K", "dim", "fiber", "radius", "axes", "tol_chron"};
  for (const auto& [key, value] : space.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) fail(where + "/" + key, "unknown key");
  Json out = space;
  if (!out.contains("space")) fail(where + "/space", "required");
  if (!out["space"].is_string()) fail(where + "/space", "expected a string");
  const std::string kind = out["space"];
  static const std::vector<std::string> kinds{"minkowski", "model_k", "product", "euclidean"};
  if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
    fail(where + "/space", "expected one of minkowski, model_k, product, euclidean");

  if (out.contains("dim") && !(out["dim"].is_number_integer()))
    fail(where + "/dim", "expected an integer");
  if (out.contains("tol_chron")) check_number(out["tol_chron"], FieldType::positive, where + "/tol_chron");
  if (!out.contains("tol_chron")) out["tol_chron"] = 1e-12;

  if (kind == "model_k") {
    if (!out.contains("K")) fail(where + "/K", "required for model_k");
    check_number(out["K"], FieldType::number, where + "/K");
  } else if (out.contains("K")) {
    check_number(out["K"], FieldType::number, where + "/K");
    if (out["K"].get<double>() != 0.0) fail(where + "/K", "only model_k spaces take a curvature");
  }
  if (kind == "minkowski") out["K"] = 0.0;

  if (kind == "product") {
    if (!out.contains("fiber")) out["fiber"] = "sphere";
    if (!out["fiber"].is_string()) fail(where + "/fiber", "expected a string");
    const std::string fiber = out["fiber"];
    if (fiber != "sphere" && fiber != "ellipsoid" && fiber != "flat")
      fail(where + "/fiber", "expected one of sphere, ellipsoid, flat");
    if (fiber == "flat") {
      if (!out.contains("dim")) out["dim"] = 2;
    } else {
      if (out.contains("dim") && out["dim"].get<int>() != 3) fail(where + "/dim", "curved fibers give dim 3");
      out["dim"] = 3;
    }
    if (out.contains("radius")) check_number(out["radius"], FieldType::positive, where + "/radius");
    if (!out.contains("radius")) out["radius"] = 1.0;
    if (out.contains("axes")) {
      check_numbers(out["axes"], where + "/axes", 3);
      for (std::size_t i = 0; i < 3; ++i) check_number(out["axes"][i], FieldType::positive, where + "/axes/" + std::to_string(i));
    } else {
      out["axes"] = Json::array({1.0, 1.0, 1.0});
    }
  } else {
    for (const char* k : {"fiber", "radius", "axes"})
      if (out.contains(k)) fail(where + "/" + k, "only product spaces take this key");
    if (!out.contains("dim")) out["dim"] = 2;
  }

  const int dim = out["dim"].get<int>();
  const int lo = kind == "euclidean" ? 1 : 2;
  if (dim < lo || dim > 4) fail(where + "/dim", "expected " + std::to_string(lo) + " <= dim <= 4");
  if (kind == "model_k" && out["K"].get<double>() > 0.0 && dim != 2)
    fail(where + "/dim", "de Sitter spaces are two-dimensional");
  return out;
}

Json parse_flag(const std::string& text, FieldType type, const std::string& where) {
  switch (type) {
    case FieldType::number:
    case FieldType::positive:
    case FieldType::nonnegative:
      return parse_double(text, where);
    case FieldType::integer: {
      const double x = parse_double(text, where);
      if (x != std::floor(x)) fail(where, "expected an integer");
      return static_cast<long long>(x);
    }
    case FieldType::boolean:
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
      fail(where, "expected true or false");
    case FieldType::numbers:
    case FieldType::event: {
      Json arr = Json::array();
      if (text.empty()) return arr;
      for (const auto& item : split(text, ',')) arr.push_back(parse_double(item, where));
      return arr;
    }
    case FieldType::events: {
      Json arr = Json::array();
      for (const auto& item : split(text, ';')) arr.push_back(parse_flag(item, FieldType::event, where));
      return arr;
    }
    case FieldType::space:
    case FieldType::geodesic:
      return read_json_text(text, where);
    case FieldType::string:
    case FieldType::path:
      return text;
  }
  return text;
}

Json validate(const Json& config, const std::vector<Field>& fields) {
  if (!config.is_object()) fail("", "expected a JSON object");
  Json out = config;
  for (const auto& [key, value] : config.items()) {
    const bool known = std::any_of(fields.begin(), fields.end(), [&](const Field& f) { return f.key == key; });
    if (!known) fail("/" + key, "unknown key");
  }
  for (const Field& f : fields) {
    if (!out.contains(f.key)) {
      if (f.required) fail("/" + f.key, "required");
      if (!f.fallback.is_null()) out[f.key] = f.fallback;
    }
  }
  // The space comes first so that event lengths can be checked against it.
  for (const Field& f : fields)
    if (f.type == FieldType::space && out.contains(f.key)) out[f.key] = validate_space(out[f.key], "/" + f.key);
  const int dim = space_dim(out);

  for (const Field& f : fields) {
    if (!out.contains(f.key)) continue;
    const Json& v = out[f.key];
    const std::string where = "/" + f.key;
    switch (f.type) {
      case FieldType::number:
      case FieldType::positive:
      case FieldType::nonnegative:
        check_number(v, f.type, where);
        break;
      case FieldType::integer:
        if (!v.is_number_integer() || v.get<long long>() < 1) fail(where, "expected an integer >= 1");
        break;
      case FieldType::boolean:
        if (!v.is_boolean()) fail(where, "expected true or false");
        break;
      case FieldType::string:
        if (!v.is_string()) fail(where, "expected a string");
        if (!f.choices.empty() && std::find(f.choices.begin(), f.choices.end(), v.get<std::string>()) == f.choices.end()) {
          std::string list;
          for (const auto& c : f.choices) list += (list.empty() ? "" : ", ") + c;
          fail(where, "expected one of " + list);
        }
        break;
      case FieldType::path: {
        if (!v.is_string()) fail(where, "expected a file path");
        std::ifstream in(v.get<std::string>());
        if (!in) fail(where, "cannot open '" + v.get<std::string>() + "'");
        break;
      }
      case FieldType::numbers:
        check_numbers(v, where, 0);
        if (v.empty()) fail(where, "expected at least one value");
        break;
      case FieldType::event:
        check_numbers(v, where, dim);
        break;
      case FieldType::events:
        if (!v.is_array() || v.empty()) fail(where, "expected a non-empty array of events");
        for (std::size_t i = 0; i < v.size(); ++i) check_numbers(v[i], where + "/" + std::to_string(i), dim);
        break;
      case FieldType::space:
        break;
      case FieldType::geodesic: {
        if (!v.is_object()) fail(where, "expected an object with p, v and t_max");
        for (const auto& [key, value] : v.items())
          if (key != "p" && key != "v" && key != "t_max") fail(where + "/" + key, "unknown key");
        for (const char* k : {"p", "v"}) {
          if (!v.contains(k)) fail(where + "/" + k, "required");
          check_numbers(v[k], where + "/" + k, dim);
        }
        Json g = v;
        if (!g.contains("t_max")) g["t_max"] = 1.0;
        check_number(g["t_max"], FieldType::positive, where + "/t_max");
        out[f.key] = g;
        break;
      }
    }
  }
  return out;
}

}  // namespace lorentz::cli
