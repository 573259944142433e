#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cforge/errors.hpp"
#include "cforge/io.hpp"

using namespace cforge;
using nlohmann::json;

TEST_SUITE("io") {
  TEST_CASE("json round trip") {
    auto x = make_configuration(4, {{1, 2}, {0}, {3}, {0}});
    json j = configuration_to_json(x);
    CHECK(j["n"] == 4);
    CHECK(j["out"][0] == json::array({1, 2}));
    CHECK(configuration_from_json(j) == x);
    CHECK_THROWS_AS(configuration_from_json(json{{"n", 2}, {"out", {{0}, {0}}}}), Error);
    CHECK_THROWS_AS(configuration_from_json(json{{"n", 3}, {"out", {{1}, {0}}}}), Error);
  }

  TEST_CASE("edge list round trip and comments") {
    auto x = make_configuration(3, {{1, 2}, {0}, {1}});
    std::istringstream in(configuration_to_edge_list(x));
    CHECK(configuration_from_edge_list(in) == x);

    std::istringstream commented("# a pair\n0 1 # trailing\n\n1 0\n");
    CHECK(configuration_from_edge_list(commented) == make_configuration(2, {{1}, {0}}));
  }

  TEST_CASE("edge list labels are remapped") {
    // integer labels keep numeric order even when sparse
    std::istringstream numeric("10 2\n2 10\n7 2\n");
    CHECK(configuration_from_edge_list(numeric) == make_configuration(3, {{2}, {0}, {0}}));
    // non-integer labels sort as strings
    std::istringstream named("b a\na b\nc a\n");
    CHECK(configuration_from_edge_list(named) == make_configuration(3, {{1}, {0}, {0}}));
  }

  TEST_CASE("edge list errors") {
    std::istringstream self("0 0\n");
    CHECK_THROWS_AS(configuration_from_edge_list(self), Error);
    std::istringstream dangling("0 1\n");  // node 1 has no out-link
    CHECK_THROWS_AS(configuration_from_edge_list(dangling), Error);
    std::istringstream odd("0 1 2\n");
    CHECK_THROWS_AS(configuration_from_edge_list(odd), Error);
  }

  TEST_CASE("parse_configuration detects the format") {
    auto x = make_configuration(2, {{1}, {0}});
    CHECK(parse_configuration(R"({"n":2,"out":[[1],[0]]})") == x);
    CHECK(parse_configuration("0 1\n1 0\n") == x);
    const std::string path = "cforge_io_test_graph.txt";
    {
      std::ofstream f(path);
      f << "0 1\n1 0\n";
    }
    CHECK(read_configuration(path) == x);
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_configuration("does/not/exist.txt"), Error);
  }

  TEST_CASE("game spec json, exact in rational mode") {
    json j = json::parse(R"({"beta": "1/2", "eta": "uniform", "degrees": [2, 1, 1]})");
    auto q = game_spec_from_json<Rational>(j);
    CHECK(q.beta == Rational(1, 2));
    CHECK(q.eta[0] == Rational(1, 3));

    json k = json::parse(R"({"beta": 0.3, "eta": ["1/2", "1/4", "1/4"], "degrees": [1, 1, 1]})");
    auto r = game_spec_from_json<Rational>(k);
    CHECK(r.beta == Rational(3, 10));
    CHECK(r.eta[1] == Rational(1, 4));
    auto d = game_spec_from_json<double>(k);
    CHECK(d.beta == 0.3);

    auto back = game_spec_from_json<Rational>(game_spec_to_json(r));
    CHECK(back.beta == r.beta);
    CHECK(back.eta == r.eta);
    CHECK(back.degrees == r.degrees);

    CHECK_THROWS_AS(game_spec_from_json<double>(json::parse(R"({"beta": 1.5, "degrees": [1, 1]})")), Error);
    CHECK_THROWS_AS(
        game_spec_from_json<Rational>(json::parse(R"({"beta": "1/2", "eta": ["1/2", "1/4"], "degrees": [1, 1]})")),
        Error);
  }
}
