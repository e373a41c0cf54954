#include <doctest.h>

#include <string>

#include <json.hpp>

#include "fixture_values.hpp"
#include "gcpt/errors.hpp"
#include "gcpt/scenario_io.hpp"

using namespace gcpt;
using nlohmann::json;

namespace {

json fixture_agent_json() { return agent_to_json(fixture::agent()); }

json base_scenario() {
  return json{{"population", {{"individuals", {{0.5}, {-0.5}, {2.0}}}}},
              {"parameter_map",
               {{"name", "affine"}, {"alpha0", 0.0}, {"A", {{1.0}}}, {"beta0", 0.0}, {"B", {{0.0}}},
                {"agent", fixture_agent_json()}}},
              {"program", {{"lower", {0.0}}, {"upper", {2.0}}}}};
}

std::string path_of(const json& doc) {
  try {
    parse_scenario(doc);
  } catch (const ScenarioError& e) {
    return std::string(e.path());
  }
  return "<no error>";
}

std::string constraint_of(const json& j) {
  try {
    parse_agent(j);
  } catch (const InvalidParameter& e) {
    return std::string(e.constraint());
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("agent round trip") {
  const CptAgent a = parse_agent(fixture_agent_json());
  CHECK(agent_to_json(a) == fixture_agent_json());
  CHECK(cpt_value(a, fixture::gamble()).total == cpt_value(fixture::agent(), fixture::gamble()).total);
}

TEST_CASE("agent errors name the constraint") {
  json j = fixture_agent_json();
  j.erase("a_plus");
  CHECK(constraint_of(j) == "a_plus present");
  j = fixture_agent_json();
  j["m_plus"] = "one";
  CHECK(constraint_of(j) == "m_plus is a number");
  j = fixture_agent_json();
  j["lambda"] = 2.0;
  CHECK(constraint_of(j) == "known agent key");
  j = fixture_agent_json();
  j["m_plus"] = 3.0;
  CHECK(constraint_of(j) == "m_minus >= m_plus");
  j = fixture_agent_json();
  j["gamma_plus"] = 0.0;
  CHECK(constraint_of(j) == "gamma > 0");
  CHECK(constraint_of(json::array()) == "agent is an object");
}

TEST_CASE("scenario parsing") {
  const auto scn = parse_scenario(base_scenario());
  CHECK(scn.individuals.size() == 3);
  CHECK(scn.gain.name == "adoption");
  CHECK_FALSE(scn.social.has_value());
  CHECK(scn.bounds.dim() == 1);
  CHECK_FALSE(scn.program.has_value());

  json doc = base_scenario();
  doc["gain"] = {{"name", "quadratic_cost"}, {"c", 0.25}};
  doc["social"] = {{"name", "power"}, {"kappa", 2.0}, {"beta", 0.5}};
  doc["program"]["value"] = {1.5};
  const auto full = parse_scenario(doc);
  CHECK(full.gain.name == "quadratic_cost");
  REQUIRE(full.social.has_value());
  CHECK(full.social->u(0.25) == doctest::Approx(1.0));
  CHECK((*full.program)(0) == 1.5);

  doc["social"] = {{"name", "none"}};
  CHECK_FALSE(parse_scenario(doc).social.has_value());
}

TEST_CASE("sampler population is materialized deterministically") {
  json doc = base_scenario();
  doc["population"] = {{"sampler", {{"name", "gaussian"}, {"mean", {0.5}}, {"stddev", {1.0}}}},
                       {"samples", 50},
                       {"seed", 3}};
  const auto a = parse_scenario(doc);
  const auto b = parse_scenario(doc);
  REQUIRE(a.individuals.size() == 50);
  for (std::size_t i = 0; i < 50; ++i) CHECK(a.individuals[i] == b.individuals[i]);
  CHECK(a.sampler.has_value());
}

TEST_CASE("agents carried in personality features") {
  json doc = base_scenario();
  doc["parameter_map"].erase("agent");
  json row = json::array({0.5});
  for (const char* key : kAgentKeys) row.push_back(fixture_agent_json()[key]);
  doc["population"]["individuals"] = json::array({row, row});
  CHECK(parse_scenario(doc).individuals.size() == 2);

  doc["population"]["individuals"][1][2] = 1.7;  // gamma_minus
  CHECK(path_of(doc) == "/population/individuals/1");
}

TEST_CASE("scenario errors point into the document") {
  json doc = base_scenario();
  doc["program"]["upper"] = {-1.0};
  CHECK(path_of(doc) == "/program/upper");

  doc = base_scenario();
  doc["parameter_map"]["A"] = {{1.0, 2.0}, {3.0}};
  CHECK(path_of(doc) == "/parameter_map/A/1");

  doc = base_scenario();
  doc["parameter_map"]["agent"]["gamma_minus"] = 2.0;
  CHECK(path_of(doc) == "/parameter_map/agent");

  doc = base_scenario();
  doc["population"]["individuals"][2] = {1.0, 2.0};
  CHECK(path_of(doc) == "/population/individuals/2");

  doc = base_scenario();
  doc["population"]["individuals"][0][0] = "x";
  CHECK(path_of(doc) == "/population/individuals/0/0");

  doc = base_scenario();
  doc["gain"] = {{"name", "profit"}};
  CHECK(path_of(doc) == "/gain/name");

  doc = base_scenario();
  doc["social"] = {{"name", "linear"}, {"kappa", -1.0}};
  CHECK(path_of(doc) == "/social");

  doc = base_scenario();
  doc.erase("parameter_map");
  CHECK(path_of(doc) == "/parameter_map");

  doc = base_scenario();
  doc["program"]["value"] = {5.0};
  CHECK(path_of(doc) == "/program/value");

  doc = base_scenario();
  doc["population"] = {{"sampler", {{"name", "gaussian"}, {"mean", {0.5}}, {"stddev", {1.0, 2.0}}}},
                       {"samples", 5}};
  CHECK(path_of(doc) == "/population/sampler/stddev");

  CHECK(path_of(json::array()) == "/");
  CHECK_THROWS_AS(load_scenario_file("/nonexistent/scenario.json"), ScenarioError);
}
