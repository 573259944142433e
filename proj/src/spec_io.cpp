#include "cforge/errors.hpp"
#include "cforge/io.hpp"

namespace cforge {

using nlohmann::json;

template <>
json scalar_to_json(const double& x) {
  return x;
}

template <>
json scalar_to_json(const Rational& x) {
  return x.get_str();
}

template <Scalar T>
T scalar_from_json(const json& j) {
  if (j.is_string()) return scalar_from_string<T>(j.get<std::string>());
  if (j.is_number_integer()) return T(j.get<long>());
  if (j.is_number()) {
    if constexpr (ScalarTraits<T>::exact) {
      // The shortest round-trip text of a double is what the user typed.
      return parse_rational(j.dump());
    } else {
      return j.get<double>();
    }
  }
  throw Error(ErrorCode::ParseError, "expected a number, got " + j.dump());
}

template <Scalar T>
GameSpec<T> game_spec_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "spec must be a JSON object");
  try {
    if (!j.contains("beta") || !j.contains("degrees"))
      throw Error(ErrorCode::ParseError, "spec needs \"beta\" and \"degrees\"");
    GameSpec<T> spec = GameSpec<T>::uniform(OutDegreeProfile(j.at("degrees").get<std::vector<int>>()),
                                            scalar_from_json<T>(j.at("beta")));
    if (j.contains("eta")) {
      const json& e = j.at("eta");
      if (e.is_string()) {
        if (e.get<std::string>() != "uniform")
          throw Error(ErrorCode::ParseError, "eta must be \"uniform\" or a list");
      } else {
        spec.eta.clear();
        for (const auto& v : e) spec.eta.push_back(scalar_from_json<T>(v));
      }
    }
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

template <Scalar T>
json game_spec_to_json(const GameSpec<T>& spec) {
  json eta = json::array();
  for (const auto& e : spec.eta) eta.push_back(scalar_to_json(e));
  return json{{"beta", scalar_to_json(spec.beta)}, {"eta", eta}, {"degrees", spec.degrees.degrees()}};
}

template double scalar_from_json<double>(const json&);
template Rational scalar_from_json<Rational>(const json&);
template GameSpec<double> game_spec_from_json<double>(const json&);
template GameSpec<Rational> game_spec_from_json<Rational>(const json&);
template json game_spec_to_json(const GameSpec<double>&);
template json game_spec_to_json(const GameSpec<Rational>&);

}  // namespace cforge
