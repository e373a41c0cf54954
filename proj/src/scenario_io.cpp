#include "gcpt/scenario_io.hpp"

#include <algorithm>
#include <fstream>

#include "gcpt/errors.hpp"

namespace gcpt {

using nlohmann::json;

CptAgent parse_agent(const json& j) {
  if (!j.is_object()) throw InvalidParameter("agent is an object", j.type_name());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find_if(std::begin(kAgentKeys), std::end(kAgentKeys),
                     [&](const char* k) { return it.key() == k; }) == std::end(kAgentKeys))
      throw InvalidParameter("known agent key", "unexpected key '" + it.key() + "'");
  }
  Eigen::VectorXd v(10);
  for (int i = 0; i < 10; ++i) {
    const char* key = kAgentKeys[i];
    if (!j.contains(key)) throw InvalidParameter(std::string(key) + " present", "missing key");
    if (!j.at(key).is_number())
      throw InvalidParameter(std::string(key) + " is a number", j.at(key).dump());
    v(i) = j.at(key).get<double>();
  }
  return agent_from_spec_vector(v);
}

json agent_to_json(const CptAgent& a) {
  return json{{"p0_minus", a.w_minus.p0()},     {"gamma_minus", a.w_minus.gamma()},
              {"p0_plus", a.w_plus.p0()},       {"gamma_plus", a.w_plus.gamma()},
              {"m_minus", a.value.m_minus()},   {"V_minus", a.value.V_minus()},
              {"a_minus", a.value.a_minus()},   {"m_plus", a.value.m_plus()},
              {"V_plus", a.value.V_plus()},     {"a_plus", a.value.a_plus()}};
}

namespace {

// A JSON value paired with its pointer inside the document.
struct Node {
  const json& j;
  std::string path;

  [[noreturn]] void fail(const std::string& why) const { throw ScenarioError(path.empty() ? "/" : path, why); }

  bool has(const char* key) const { return j.is_object() && j.contains(key); }

  Node at(const char* key) const {
    if (!j.is_object()) fail("expected an object");
    if (!j.contains(key)) Node{j, path + "/" + key}.fail("missing");
    return {j.at(key), path + "/" + key};
  }

  Node at(std::size_t i) const { return {j.at(i), path + "/" + std::to_string(i)}; }

  double number() const {
    if (!j.is_number()) fail("expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) fail("expected a finite number");
    return x;
  }

  std::uint64_t count() const {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
      fail("expected a nonnegative integer");
    return j.get<std::uint64_t>();
  }

  std::string string() const {
    if (!j.is_string()) fail("expected a string");
    return j.get<std::string>();
  }

  Eigen::VectorXd vector() const {
    if (!j.is_array()) fail("expected an array of numbers");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = at(i).number();
    return v;
  }

  Eigen::MatrixXd matrix() const {
    if (!j.is_array() || j.empty()) fail("expected a nonempty array of rows");
    const std::size_t cols = at(std::size_t{0}).vector().size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
      const Eigen::VectorXd row = at(r).vector();
      if (static_cast<std::size_t>(row.size()) != cols) at(r).fail("ragged matrix row");
      m.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    return m;
  }
};

ParameterMap parse_parameter_map(const Node& n) {
  const std::string name = n.at("name").string();
  if (name != "affine") n.at("name").fail("unknown parameter map '" + name + "'");
  AffineMapSpec spec;
  spec.alpha0 = n.has("alpha0") ? n.at("alpha0").number() : 0.0;
  spec.beta0 = n.has("beta0") ? n.at("beta0").number() : 0.0;
  spec.A = n.at("A").matrix();
  spec.B = n.at("B").matrix();
  if (spec.B.rows() != spec.A.rows() || spec.B.cols() != spec.A.cols())
    n.at("B").fail("shape must match A");
  if (n.has("agent")) {
    const Node a = n.at("agent");
    try {
      spec.agent = parse_agent(a.j);
    } catch (const InvalidParameter& ex) {
      a.fail(ex.what());
    }
  }
  return make_affine_map(std::move(spec));
}

GainFunction parse_gain(const Node& n) {
  const std::string name = n.at("name").string();
  try {
    if (name == "adoption") return adoption_gain();
    if (name == "quadratic_cost") return quadratic_cost_gain(n.at("c").number());
    if (name == "revenue") {
      return revenue_gain(static_cast<Eigen::Index>(n.at("price_index").count()));
    }
  } catch (const InvalidParameter& ex) {
    n.fail(ex.what());
  }
  n.at("name").fail("unknown gain function '" + name + "'");
}

std::optional<SocialUtility> parse_social(const Node& n) {
  const std::string name = n.at("name").string();
  SocialUtility s;
  try {
    if (name == "none") return std::nullopt;
    if (name == "linear") {
      s = linear_social(n.at("kappa").number());
    } else if (name == "power") {
      s = power_social(n.at("kappa").number(), n.at("beta").number());
    } else {
      n.at("name").fail("unknown social utility '" + name + "'");
    }
    check_nondecreasing(s);
  } catch (const InvalidParameter& ex) {
    n.fail(ex.what());
  }
  return s;
}

PersonalitySampler parse_sampler(const Node& n) {
  const std::string name = n.at("name").string();
  try {
    if (name == "gaussian") {
      const Eigen::VectorXd mean = n.at("mean").vector();
      const Eigen::VectorXd sd = n.at("stddev").vector();
      if (sd.size() != mean.size()) n.at("stddev").fail("length must match mean");
      return gaussian_sampler(mean, sd);
    }
    if (name == "point") return point_sampler(n.at("at").vector());
  } catch (const InvalidParameter& ex) {
    n.fail(ex.what());
  }
  n.at("name").fail("unknown sampler '" + name + "'");
}

}  // namespace

PopulationScenario parse_scenario(const json& doc) {
  const Node root{doc, ""};
  if (!doc.is_object()) root.fail("scenario must be a JSON object");

  PopulationScenario scn;
  scn.parameter_map = parse_parameter_map(root.at("parameter_map"));
  if (root.has("gain")) scn.gain = parse_gain(root.at("gain"));
  if (root.has("social")) scn.social = parse_social(root.at("social"));

  const Node prog = root.at("program");
  scn.bounds.lower = prog.at("lower").vector();
  scn.bounds.upper = prog.at("upper").vector();
  if (scn.bounds.lower.size() == 0) prog.at("lower").fail("program must have at least one control");
  if (scn.bounds.upper.size() != scn.bounds.lower.size()) prog.at("upper").fail("length must match lower");
  if (!(scn.bounds.upper.array() >= scn.bounds.lower.array()).all())
    prog.at("upper").fail("upper bound below lower bound");
  if (prog.has("value")) {
    const Program p = prog.at("value").vector();
    if (!scn.bounds.contains(p)) prog.at("value").fail("program outside bounds");
    scn.program = p;
  }

  const Node pop = root.at("population");
  if (pop.has("individuals")) {
    const Node list = pop.at("individuals");
    if (!list.j.is_array() || list.j.empty()) list.fail("expected a nonempty array");
    for (std::size_t i = 0; i < list.j.size(); ++i) scn.individuals.push_back(list.at(i).vector());
  } else if (pop.has("sampler")) {
    scn.sampler = parse_sampler(pop.at("sampler"));
    scn.sample_count = pop.at("samples").count();
    if (scn.sample_count == 0) pop.at("samples").fail("must be positive");
    scn.sample_seed = pop.has("seed") ? pop.at("seed").count() : 0;
    scn = materialize(scn, scn.sample_count, scn.sample_seed);
  } else {
    pop.fail("expected 'individuals' or 'sampler'");
  }

  // Evaluate the map once per individual at the reference program so that
  // invalid perceptions are reported at load time with their index.
  const Program ref = scn.program.value_or(scn.bounds.center());
  for (std::size_t i = 0; i < scn.individuals.size(); ++i) {
    try {
      scn.parameter_map.evaluate(scn.individuals[i], ref);
    } catch (const std::exception& ex) {
      throw ScenarioError("/population/individuals/" + std::to_string(i), ex.what());
    }
  }
  return scn;
}

PopulationScenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("", "cannot open scenario file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& ex) {
    throw ScenarioError("", std::string("malformed JSON: ") + ex.what());
  }
  return parse_scenario(doc);
}

}  // namespace gcpt
