#pragma once

// Graph, game-spec and catalog serialization.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>
#include "cforge/centrality.hpp"
#include "cforge/graph.hpp"

namespace cforge {

// {"n": int, "out": [[...], ...]}
nlohmann::json configuration_to_json(const Configuration& cfg);
Configuration configuration_from_json(const nlohmann::json& j);

// Whitespace-separated "i j" pairs, one link per line; '#' starts a comment.
// Labels are remapped to 0..n-1: numerically if all labels are integers,
// lexicographically otherwise.
Configuration configuration_from_edge_list(std::istream& in);
std::string configuration_to_edge_list(const Configuration& cfg);

// Reads either format, deciding by the first non-space character.
Configuration read_configuration(const std::string& path);
Configuration parse_configuration(const std::string& text);

// {"beta": "1/2" | 0.5, "eta": "uniform" | [...], "degrees": [...]}
// Numbers given as strings are parsed exactly in rational mode.
template <Scalar T>
GameSpec<T> game_spec_from_json(const nlohmann::json& j);

template <Scalar T>
nlohmann::json game_spec_to_json(const GameSpec<T>& spec);

template <Scalar T>
nlohmann::json scalar_to_json(const T& x);

template <Scalar T>
T scalar_from_json(const nlohmann::json& j);

std::string read_text_file(const std::string& path);

}  // namespace cforge
