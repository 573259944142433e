#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "cforge/errors.hpp"
#include "cforge/io.hpp"

namespace cforge {

using nlohmann::json;

json configuration_to_json(const Configuration& cfg) {
  json out = json::array();
  for (Node i = 0; i < cfg.size(); ++i) out.push_back(cfg.out(i));
  return json{{"n", cfg.size()}, {"out", out}};
}

Configuration configuration_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("out")) throw Error(ErrorCode::ParseError, "graph JSON needs an \"out\" array");
    auto out = j.at("out").get<std::vector<NodeSet>>();
    int n = j.contains("n") ? j.at("n").get<int>() : static_cast<int>(out.size());
    return make_configuration(n, std::move(out));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

Configuration configuration_from_edge_list(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> links;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a)) continue;
    if (!(ls >> b) || (ls >> extra))
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected \"i j\"");
    links.emplace_back(a, b);
  }
  if (links.empty()) throw Error(ErrorCode::ParseError, "edge list is empty");

  std::vector<std::string> labels;
  for (auto& [a, b] : links) {
    labels.push_back(a);
    labels.push_back(b);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  bool numeric = std::all_of(labels.begin(), labels.end(), [](const std::string& s) {
    std::size_t k = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    return k < s.size() && std::all_of(s.begin() + static_cast<long>(k), s.end(), ::isdigit);
  });
  if (numeric)
    std::sort(labels.begin(), labels.end(),
              [](const std::string& x, const std::string& y) { return std::stoll(x) < std::stoll(y); });
  std::map<std::string, int> id;
  for (std::size_t k = 0; k < labels.size(); ++k) id[labels[k]] = static_cast<int>(k);

  const int n = static_cast<int>(labels.size());
  std::vector<NodeSet> out(static_cast<std::size_t>(n));
  for (auto& [a, b] : links) out[id[a]].push_back(id[b]);
  return make_configuration(n, std::move(out));
}

std::string configuration_to_edge_list(const Configuration& cfg) {
  std::ostringstream os;
  for (Node i = 0; i < cfg.size(); ++i)
    for (Node j : cfg.out(i)) os << i << ' ' << j << '\n';
  return os.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Configuration parse_configuration(const std::string& text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return configuration_from_json(json::parse(text));
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::ParseError, e.what());
    }
  }
  std::istringstream in(text);
  return configuration_from_edge_list(in);
}

Configuration read_configuration(const std::string& path) {
  return parse_configuration(read_text_file(path));
}

}  // namespace cforge
