#pragma once

// JSON encoding of rationals and laws:
//   {"k": 2, "atoms": [{"point": ["0/1", "2/3"], "weight": "1/4"}, ...]}
// Atoms are written sorted lexicographically by point.

#include "coherent/law.hpp"
#include "coherent/rational.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace coherent {

inline nlohmann::json rational_to_json(const Rational& r) { return r.to_string(); }

inline Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw std::invalid_argument("expected a rational string, got " + j.dump());
}

inline nlohmann::json rationals_to_json(const std::vector<Rational>& v) {
  auto out = nlohmann::json::array();
  for (const auto& r : v) out.push_back(r.to_string());
  return out;
}

inline std::vector<Rational> rationals_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected an array of rationals");
  std::vector<Rational> out;
  for (const auto& e : j) out.push_back(rational_from_json(e));
  return out;
}

inline nlohmann::json law_to_json(const DiscreteJointLaw& law) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : law.atoms())
    atoms.push_back({{"point", rationals_to_json(a.point)}, {"weight", a.weight.to_string()}});
  return {{"k", law.k()}, {"atoms", std::move(atoms)}};
}

inline DiscreteJointLaw law_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("atoms")) throw std::invalid_argument("law JSON: missing 'atoms'");
  std::vector<Atom> atoms;
  for (const auto& a : j.at("atoms")) {
    if (!a.contains("point") || !a.contains("weight"))
      throw std::invalid_argument("law JSON: atom needs 'point' and 'weight'");
    atoms.push_back({rationals_from_json(a.at("point")), rational_from_json(a.at("weight"))});
  }
  auto law = make_law(std::move(atoms));
  if (j.contains("k") && j.at("k").get<std::size_t>() != law.k())
    throw std::invalid_argument("law JSON: 'k' does not match point length");
  return law;
}

inline nlohmann::json witness_to_json(const DiscreteJointLaw& law, const EventSplitWitness& w) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < law.size(); ++i)
    out.push_back({{"point", rationals_to_json(law[i].point)},
                   {"mass_on_A", w.splits[i].on_a.to_string()},
                   {"mass_on_Ac", w.splits[i].on_complement.to_string()},
                   {"phi", w.phi(i).to_string()}});
  return out;
}

}  // namespace coherent
