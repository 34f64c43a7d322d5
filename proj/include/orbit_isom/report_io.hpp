#pragma once

// Report serialization (JSON is the contract; text is a rendering of it),
// schema validation of a parsed report, and spec loading by path or id.

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "orbit_isom/isom_quotient.hpp"

namespace orbit_isom {

inline nlohmann::json report_to_json(const QuotientIsometryReport& r) {
  using nlohmann::json;
  json factors = json::array();
  json components = json::array();
  for (const auto& f : r.compactFactors) {
    factors.push_back({{"name", f.name}, {"type", f.type}, {"multiplicity", f.multiplicity}});
    components.push_back({{"dimension", f.dimension},
                          {"irreducibleDim", f.irreducibleDim},
                          {"fsSum", f.fsSum},
                          {"inKernel", f.inKernel}});
  }
  json out = {
      {"euclideanFactorDim", r.euclideanFactorDim},
      {"compactFactors", factors},
      {"kernel",
       {{"finiteOrder", r.kernelFiniteOrder},
        {"circleDirections", r.kernelCircleDirections},
        {"containsCenterOfG", r.kernelContainsCenterOfG},
        {"wholeFactors", r.kernelWholeFactors},
        {"central", r.kernelCentral}}},
      {"boundary", r.boundary},
      {"formulaApplied", to_string(r.formulaApplied)},
      {"rank", r.rank},
      {"theoremB", to_string(r.theoremB)},
      {"theoremC", to_string(r.theoremC)},
      {"seed", r.seed},
      {"input", r.input},
      {"dimension", r.dimension},
      {"irreducible", r.irreducible},
      {"equivariantDim", r.equivariantDim},
      {"equivariantRank", r.equivariantRank},
      {"quotientDim", r.quotientDim},
      {"quotientGroup", r.quotientGroup},
      {"identifiedAs", r.identifiedAs},
      {"irreducibleClass", to_string(classify_irreducible(r))},
      {"components", components},
      {"method", "commutant-center split"},
      {"rng", kRngName},
      {"notes", r.notes},
  };
  if (r.density > 0) out["catalog"] = {{"density", r.density}, {"gridStep", r.distanceStep}};
  return out;
}

/// Empty string when `doc` has every contract field with the right type and
/// value range; otherwise the first problem found.
inline std::string validate_report_json(const nlohmann::json& doc) {
  auto need = [&](const nlohmann::json& obj, const char* key, auto check, const char* what) -> std::string {
    if (!obj.is_object() || !obj.contains(key)) return std::string("missing field '") + key + "'";
    if (!check(obj.at(key))) return std::string("field '") + key + "' is not " + what;
    return {};
  };
  auto is_int = [](const nlohmann::json& j) { return j.is_number_integer(); };
  auto is_nonneg = [](const nlohmann::json& j) { return j.is_number_integer() && j.get<long long>() >= 0; };
  auto is_bool = [](const nlohmann::json& j) { return j.is_boolean(); };
  auto is_str = [](const nlohmann::json& j) { return j.is_string(); };
  std::string e;
  if (!(e = need(doc, "euclideanFactorDim", is_nonneg, "a nonnegative integer")).empty()) return e;
  if (!(e = need(doc, "compactFactors", [](const auto& j) { return j.is_array(); }, "an array")).empty()) return e;
  for (const auto& f : doc["compactFactors"]) {
    if (!(e = need(f, "name", is_str, "a string")).empty()) return e;
    if (!(e = need(f, "type", [](const auto& j) {
            return j.is_string() && (j == "real" || j == "complex" || j == "quaternionic");
          }, "a Schur type")).empty())
      return e;
    if (!(e = need(f, "multiplicity", is_nonneg, "a nonnegative integer")).empty()) return e;
  }
  if (!(e = need(doc, "kernel", [](const auto& j) { return j.is_object(); }, "an object")).empty()) return e;
  const auto& k = doc["kernel"];
  if (!(e = need(k, "finiteOrder", [](const auto& j) { return j.is_number_integer() && j.template get<long long>() >= 1; },
                 "a positive integer")).empty())
    return e;
  if (!(e = need(k, "circleDirections", is_nonneg, "a nonnegative integer")).empty()) return e;
  if (!(e = need(k, "containsCenterOfG", is_bool, "a boolean")).empty()) return e;
  if (!(e = need(doc, "boundary", is_bool, "a boolean")).empty()) return e;
  if (!(e = need(doc, "formulaApplied", [](const auto& j) {
          return j.is_string() && (j == "proposition-4.1b" || j == "central-kernel-search");
        }, "a known formula tag")).empty())
    return e;
  if (!(e = need(doc, "rank", is_nonneg, "a nonnegative integer")).empty()) return e;
  if (!(e = need(doc, "theoremB", [](const auto& j) { return j.is_string() && (j == "pass" || j == "fail"); },
                 "pass/fail")).empty())
    return e;
  if (!(e = need(doc, "theoremC", [](const auto& j) {
          return j.is_string() && (j == "pass" || j == "fail" || j == "n/a");
        }, "pass/fail/n/a")).empty())
    return e;
  if (!(e = need(doc, "seed", is_int, "an integer")).empty()) return e;
  return {};
}

inline std::string report_to_text(const QuotientIsometryReport& r) {
  std::ostringstream out;
  out << "Isom(V/G)_0 for " << (r.input.empty() ? "input" : r.input) << " (dim V = " << r.dimension << ")\n";
  out << "  Euclidean factor: Isom(R^" << r.euclideanFactorDim << ")_0\n";
  out << "  Isom_G(V)_0 compact part:";
  if (r.compactFactors.empty()) out << " trivial";
  for (std::size_t i = 0; i < r.compactFactors.size(); ++i) {
    const auto& f = r.compactFactors[i];
    out << (i ? " ×" : "") << " " << f.name << " [" << f.type << ", fs " << f.fsSum << "]" << (f.inKernel ? " (in kernel)" : "");
  }
  out << "\n  equivariant dim " << r.equivariantDim << ", rank " << r.equivariantRank << "\n";
  out << "  kernel: finite order " << r.kernelFiniteOrder << ", circle directions " << r.kernelCircleDirections
      << ", contains Z(G)∩Isom_G(V)_0: " << (r.kernelContainsCenterOfG ? "yes" : "no") << "\n";
  out << "  boundary: " << (r.boundary ? "yes" : "no") << "; formula: " << to_string(r.formulaApplied) << "\n";
  out << "  quotient: " << r.quotientGroup << " ≅ " << r.identifiedAs << ", rank " << r.rank << "\n";
  out << "  irreducible: " << (r.irreducible ? "yes" : "no") << " (" << to_string(classify_irreducible(r)) << ")\n";
  out << "  theorem B: " << to_string(r.theoremB) << "; theorem C: " << to_string(r.theoremC) << "\n";
  out << "  seed " << r.seed << " (" << kRngName << ")\n";
  for (const auto& n : r.notes) out << "  note: " << n << "\n";
  return out.str();
}

/// Spec from a JSON file path, or from a catalog id written "catalog:<id>" or
/// bare "<id>". `fallbackSeed` applies when the document carries no seed.
inline RepresentationSpec load_spec(const std::string& input, std::uint64_t fallbackSeed = kDefaultSeed) {
  std::string id = input;
  if (id.rfind("catalog:", 0) == 0) id = id.substr(8);
  if (find_catalog_action(id)) return make_catalog_spec(id, fallbackSeed);
  std::ifstream in(input);
  if (!in) fail(ErrorKind::Validation, "parse_spec", "cannot open '" + input + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Validation, "parse_spec", std::string("malformed document: ") + e.what());
  }
  if (doc.is_object() && !doc.contains("seed")) doc["seed"] = fallbackSeed;
  return parse_spec(doc);
}

}  // namespace orbit_isom
