#include "cantor/io.hpp"

#include <fstream>

namespace cantor {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw SchemaError(msg); }

const json& field(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) bad(std::string(what) + ": missing field '" + key + "'");
  return j.at(key);
}

std::string kind_of(const json& j, const char* fallback) {
  if (!j.is_object()) bad("expected an object");
  if (!j.contains("kind")) return fallback;
  if (!j["kind"].is_string()) bad("'kind' must be a string");
  return j["kind"].get<std::string>();
}

unsigned natural(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) bad(std::string(what) + " must be a nonnegative integer");
  return static_cast<unsigned>(j.get<long long>());
}

std::map<BitString, Rational> value_map(const json& j, const char* what) {
  if (!j.is_object()) bad(std::string(what) + " must be an object of string -> rational");
  std::map<BitString, Rational> m;
  for (auto it = j.begin(); it != j.end(); ++it) {
    BitString s;
    try {
      s = BitString::parse(it.key());
    } catch (const Error& e) {
      bad(std::string(what) + ": " + e.what());
    }
    m[s] = rational_from_json(it.value(), what);
  }
  return m;
}

std::optional<unsigned> optional_depth(const json& j) {
  if (!j.contains("depth") || j["depth"].is_null()) return std::nullopt;
  return natural(j["depth"], "depth");
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    bad("'" + path + "' is not valid JSON: " + e.what());
  }
}

Rational rational_from_json(const json& j, const char* what) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
  } catch (const Error& e) {
    bad(std::string(what) + ": " + e.what());
  }
  bad(std::string(what) + ": rationals are written as \"p/q\" strings or integers");
}

BitString bitstring_from_json(const json& j) {
  if (!j.is_string()) bad("bit strings are JSON strings over {0,1}");
  try {
    return BitString::parse(j.get<std::string>());
  } catch (const Error& e) {
    bad(e.what());
  }
}

std::vector<BitString> strings_from_json(const json& j) {
  if (!j.is_array()) bad("expected an array of bit strings");
  std::vector<BitString> out;
  for (const auto& x : j) out.push_back(bitstring_from_json(x));
  return out;
}

TreeModel tree_from_json(const json& j) {
  std::string kind = j.is_array() ? "explicit" : kind_of(j, "explicit");
  std::optional<unsigned> depth = j.is_array() ? std::nullopt : optional_depth(j);
  try {
    if (j.is_array()) return TreeModel::explicit_nodes(strings_from_json(j));
    if (kind == "explicit") return TreeModel::explicit_nodes(strings_from_json(field(j, "nodes", "tree")), depth);
    if (kind == "full") return TreeModel::full();
    if (kind == "every-other") return TreeModel::every_other();
    if (kind == "single-path") return TreeModel::single_path();
    if (kind == "periodic") return TreeModel::periodic_branching(natural(field(j, "period", "tree"), "period"));
    if (kind == "automaton") {
      Automaton a;
      a.start = j.contains("start") ? static_cast<int>(natural(j["start"], "start")) : 0;
      const json& tr = field(j, "transitions", "automaton");
      if (!tr.is_array()) bad("automaton transitions must be an array of [next0, next1]");
      for (const auto& row : tr) {
        if (!row.is_array() || row.size() != 2) bad("automaton transitions must be pairs");
        std::array<int, 2> nx{-1, -1};
        for (int b = 0; b < 2; ++b)
          if (!row[b].is_null()) nx[b] = static_cast<int>(natural(row[b], "transition target"));
        a.next.push_back(nx);
      }
      if (j.contains("accept")) {
        const json& acc = j["accept"];
        if (!acc.is_array()) bad("automaton accept must be an array of booleans");
        for (const auto& x : acc) {
          if (!x.is_boolean()) bad("automaton accept must be an array of booleans");
          a.accept.push_back(x.get<bool>());
        }
      } else {
        a.accept.assign(a.next.size(), true);
      }
      return TreeModel::automaton(std::move(a), depth);
    }
  } catch (const DomainError& e) {
    bad(std::string("tree: ") + e.what());
  }
  bad("unknown tree kind '" + kind + "'");
}

Order order_from_json(const json& j) {
  std::string kind = kind_of(j, "linear");
  try {
    if (kind == "linear" || kind == "ceil") {
      const json& s = j.contains("s") ? j["s"] : field(j, "slope", "order");
      Rational slope = rational_from_json(s, "order slope");
      return kind == "linear" ? Order::linear(slope) : Order::ceil(slope);
    }
    if (kind == "table") {
      const json& vals = field(j, "values", "order");
      if (!vals.is_array()) bad("order values must be an array");
      std::vector<Rational> v;
      for (const auto& x : vals) v.push_back(rational_from_json(x, "order value"));
      std::optional<Rational> tail;
      if (j.contains("tailSlope") && !j["tailSlope"].is_null()) tail = rational_from_json(j["tailSlope"], "tailSlope");
      return Order::table(std::move(v), tail);
    }
  } catch (const DomainError& e) {
    bad(std::string("order: ") + e.what());
  }
  bad("unknown order kind '" + kind + "'");
}

CylinderMeasure measure_from_json(const json& j) {
  std::string kind = kind_of(j, j.is_object() && j.contains("support") ? "dyadic" : "table");
  try {
    if (kind == "table") {
      MassTable t;
      t.depth = natural(field(j, "depth", "measure"), "measure depth");
      t.mass = value_map(field(j, "mass", "measure"), "measure mass");
      for (const auto& [s, v] : t.mass)
        if (s.length() > t.depth) bad("measure mass listed below its depth at '" + s.str() + "'");
      t = complete_table(std::move(t));
      if (auto v = validate_probability(t)) bad("measure table at '" + v->at.str() + "': " + v->clause);
      return measure_from_table(t);
    }
    if (kind == "dyadic") return dyadic_from_json(j).to_measure();
    if (kind == "chain") {
      std::vector<SplitState> states;
      const json& st = field(j, "states", "chain measure");
      if (!st.is_array()) bad("chain states must be an array");
      for (const auto& x : st) {
        SplitState s;
        const json& nx = field(x, "next", "chain state");
        const json& w = field(x, "w", "chain state");
        if (!nx.is_array() || nx.size() != 2 || !w.is_array() || w.size() != 2)
          bad("chain state needs next and w pairs");
        for (int b = 0; b < 2; ++b) {
          s.next[b] = nx[b].is_null() ? -1 : static_cast<int>(natural(nx[b], "chain next"));
          s.w[b] = rational_from_json(w[b], "chain weight");
        }
        states.push_back(std::move(s));
      }
      int start = j.contains("start") ? static_cast<int>(natural(j["start"], "start")) : 0;
      std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "chain";
      CylinderMeasure m = CylinderMeasure::from_states(std::move(states), start,
                                                       optional_depth(j).value_or(kUnbounded), name);
      if (j.contains("bound") && j["bound"].is_object())
        m = m.with_bound({rational_from_json(field(j["bound"], "s", "bound"), "bound s"),
                          rational_from_json(field(j["bound"], "gamma", "bound"), "bound gamma")});
      return m;
    }
  } catch (const DomainError& e) {
    bad(std::string("measure: ") + e.what());
  }
  bad("unknown measure kind '" + kind + "'");
}

DyadicMeasure dyadic_from_json(const json& j) {
  DyadicMeasure d;
  d.support = strings_from_json(field(j, "support", "dyadic measure"));
  const json& w = field(j, "weights", "dyadic measure");
  if (!w.is_array()) bad("dyadic weights must be an array");
  for (const auto& x : w) d.weights.push_back(rational_from_json(x, "dyadic weight"));
  try {
    d.validate();
  } catch (const DomainError& e) {
    bad(std::string("dyadic measure: ") + e.what());
  }
  return d;
}

MonotoneMachine machine_from_json(const json& j) {
  const json& p = field(j, "pairs", "machine");
  if (!p.is_array()) bad("machine pairs must be an array");
  std::vector<std::pair<BitString, BitString>> pairs;
  for (const auto& x : p) {
    if (!x.is_array() || x.size() != 2) bad("machine pairs are [input, output]");
    pairs.emplace_back(bitstring_from_json(x[0]), bitstring_from_json(x[1]));
  }
  return MonotoneMachine::from_pairs(std::move(pairs));
}

TestObject test_from_json(const json& j) {
  const json& lv = field(j, "levels", "test");
  if (!lv.is_array()) bad("test levels must be an array of string arrays");
  TestObject W;
  for (const auto& x : lv) W.levels.push_back(strings_from_json(x));
  return W;
}

Semimeasure semimeasure_from_json(const json& j) {
  std::string kind = kind_of(j, "table");
  if (kind == "zero") return Semimeasure::zero();
  if (kind == "geometric")
    return Semimeasure::geometric(rational_from_json(field(j, "a", "semimeasure"), "a"),
                                  rational_from_json(field(j, "r", "semimeasure"), "r"));
  if (kind == "table") return Semimeasure::table(value_map(field(j, "values", "semimeasure"), "semimeasure values"));
  if (kind == "measure") return Semimeasure::measure(measure_from_json(field(j, "measure", "semimeasure")));
  if (kind == "machine") return Semimeasure::machine(machine_from_json(j));
  bad("unknown semimeasure kind '" + kind + "'");
}

Premeasure premeasure_from_json(const json& j) {
  std::string kind = kind_of(j, "hausdorff");
  if (kind == "hausdorff") {
    Rational gamma = j.contains("gamma") ? rational_from_json(j["gamma"], "gamma") : Rational(1);
    if (sgn(gamma) <= 0) bad("gamma must be positive");
    return Premeasure::hausdorff(order_from_json(field(j, "order", "premeasure")), gamma);
  }
  if (kind == "probability") return Premeasure::probability(measure_from_json(field(j, "measure", "premeasure")));
  if (kind == "table") return Premeasure::table(value_map(field(j, "values", "premeasure"), "premeasure values"));
  bad("unknown premeasure kind '" + kind + "'");
}

json to_json(const Rational& r) { return to_string(r); }

json to_json(const Value& v) {
  if (v.exact()) return to_string(v.lo());
  return json{{"lo", to_string(v.lo())}, {"hi", to_string(v.hi())}, {"approx", v.to_double()}};
}

json to_json(const BitString& s) { return s.str(); }

json to_json(const std::vector<BitString>& v) {
  json a = json::array();
  for (const auto& s : v) a.push_back(s.str());
  return a;
}

json to_json(Tri t) {
  if (t == Tri::Undecided) return "undecided";
  return t == Tri::True;
}

json to_json(const Order& h) {
  switch (h.kind()) {
    case Order::Kind::Linear:
      return json{{"kind", "linear"}, {"s", to_string(h.slope())}};
    case Order::Kind::Ceil:
      return json{{"kind", "ceil"}, {"s", to_string(h.slope())}};
    case Order::Kind::Table: {
      json v = json::array();
      for (const auto& x : h.values()) v.push_back(to_string(x));
      json out{{"kind", "table"}, {"values", v}};
      if (h.tail_slope()) out["tailSlope"] = to_string(*h.tail_slope());
      return out;
    }
  }
  return {};
}

json to_json(const TreeModel& T) {
  json out;
  if (T.is_automaton()) {
    const Automaton& a = T.automaton_generator();
    json tr = json::array();
    for (const auto& n : a.next) {
      json row = json::array();
      for (int b = 0; b < 2; ++b) row.push_back(n[b] < 0 ? json(nullptr) : json(n[b]));
      tr.push_back(row);
    }
    json acc = json::array();
    for (bool x : a.accept) acc.push_back(x);
    out = json{{"kind", "automaton"}, {"start", a.start}, {"transitions", tr}, {"accept", acc}};
  } else {
    out = json{{"kind", "explicit"}, {"nodes", to_json(T.explicit_list())}};
  }
  if (T.max_depth_hint()) out["depth"] = *T.max_depth_hint();
  return out;
}

json to_json(const ExpandedTree& t) {
  json levels = json::array();
  for (const auto& lv : t.levels()) levels.push_back(to_json(lv));
  return json{{"depth", t.depth()}, {"size", t.size()}, {"levels", levels}};
}

json to_json(const MassTable& t) {
  json mass = json::object();
  for (const auto& [s, v] : t.mass) mass[s.str()] = to_string(v);
  return json{{"depth", t.depth}, {"mass", mass}};
}

json to_json(const DyadicMeasure& d) {
  json w = json::array();
  for (const auto& x : d.weights) w.push_back(to_string(x));
  return json{{"support", to_json(d.support)}, {"weights", w}};
}

json to_json(const CylinderMeasure& m, std::optional<unsigned> table_depth) {
  json states = json::array();
  for (const auto& s : m.states()) {
    json nx = json::array(), w = json::array();
    for (int b = 0; b < 2; ++b) {
      nx.push_back(s.next[b] < 0 ? json(nullptr) : json(s.next[b]));
      w.push_back(to_string(s.w[b]));
    }
    states.push_back(json{{"next", nx}, {"w", w}});
  }
  json out{{"kind", "chain"}, {"name", m.name()}, {"start", m.start()}, {"states", states}};
  out["depth"] = m.depth() == kUnbounded ? json(nullptr) : json(m.depth());
  if (m.bound()) out["bound"] = json{{"s", to_string(m.bound()->s)}, {"gamma", to_string(m.bound()->gamma)}};
  if (table_depth) out["table"] = to_json(table_of(m, *table_depth));
  return out;
}

json to_json(const TestObject& W) {
  json lv = json::array();
  for (const auto& l : W.levels) lv.push_back(to_json(l));
  return json{{"levels", lv}};
}

json to_json(const Violation& v) { return json{{"at", v.at.str()}, {"clause", v.clause}}; }

json to_json(const CutCertificate& c) {
  return json{{"cut", to_json(c.antichain)},
              {"size", c.size.get_str()},
              {"truncated", c.truncated},
              {"weight", to_json(c.weight)}};
}

json to_json(const Method1Result& r) {
  json out{{"value", to_json(r.value)}};
  out.update(to_json(r.certificate));
  return out;
}

json to_json(const DimensionEstimate& e) {
  json probes = json::array();
  for (const auto& p : e.probes)
    probes.push_back(json{{"s", to_string(p.s)}, {"above", p.above}, {"value", to_json(p.value)}});
  return json{{"lo", to_string(e.lo)},
              {"hi", to_string(e.hi)},
              {"threshold", to_string(e.threshold)},
              {"slack", to_string(e.slack)},
              {"probes", probes}};
}

json to_json(const FrostmanAudit& a) {
  json out{{"ok", a.ok()},
           {"additive", a.additive},
           {"bounded", a.bounded},
           {"dominates", a.dominates},
           {"clamps", a.clamps},
           {"log", a.log}};
  out["failure"] = a.failure ? to_json(*a.failure) : json(nullptr);
  return out;
}

json to_json(const FlowResult& r) {
  json out{{"value", to_json(r.value)}, {"cut", to_json(r.cut)}, {"feasible", r.measure.has_value()}};
  if (r.measure) out["measure"] = to_json(*r.measure);
  return out;
}

json to_json(const EnergyReport& e) {
  json coeff = json::array();
  for (const auto& q : e.level_coefficients) coeff.push_back(to_string(q));
  json out{{"t", to_string(e.t)},
           {"depth", e.depth},
           {"partial", to_json(e.value)},
           {"tailKind", to_string(e.tail_kind)},
           {"tailRule", e.tail_rule},
           {"divergent", e.tail_kind == TailKind::Divergent}};
  out["tailBound"] = e.finite() ? to_json(e.tail) : json(nullptr);
  if (e.finite()) {
    out["value"] = e.upper() == e.lower() ? json(to_string(e.upper()))
                                          : json{{"lo", to_string(e.lower())}, {"hi", to_string(e.upper())}};
    out["approx"] = (Value::interval(e.lower(), e.upper())).to_double();
  } else {
    out["value"] = nullptr;
    out["lowerBound"] = to_json(e.value);
  }
  out["levelCoefficients"] = coeff;
  return out;
}

json to_json(const LevelVerdict& v) {
  json out{{"level", v.level},
           {"pass", to_json(v.pass)},
           {"weight", to_json(v.weight)},
           {"bound", to_string(v.bound)},
           {"bits", v.bits}};
  if (!v.witness.empty() || v.witness_truncated) {
    out["witness"] = to_json(v.witness);
    out["witnessTruncated"] = v.witness_truncated;
  }
  return out;
}

json to_json(const TestVerdict& v) {
  json lv = json::array();
  for (const auto& l : v.levels) lv.push_back(to_json(l));
  json out{{"notion", v.notion}, {"pass", v.pass}, {"levels", lv}};
  if (v.horizon) out["horizon"] = *v.horizon;
  if (!v.reason.empty()) out["reason"] = v.reason;
  return out;
}

json to_json(const ConversionResult& r) {
  json cert = json::array();
  for (const auto& c : r.certificate) {
    json parts = json::array();
    for (const auto& p : c.by_length)
      parts.push_back(json{{"length", p.length}, {"sum", to_json(p.sum)}, {"bound", to_json(p.bound)}});
    cert.push_back(json{{"outputLevel", c.output_level},
                        {"inputLevel", c.input_level},
                        {"byLength", parts},
                        {"total", to_json(c.total)},
                        {"bound", to_json(c.bound)},
                        {"within", to_json(c.within)}});
  }
  return json{{"shift", r.shift},
              {"factor", to_json(r.factor)},
              {"output", to_json(r.output)},
              {"certificate", cert},
              {"openSetsEqual", r.open_sets_equal},
              {"ml", to_json(r.ml)}};
}

json to_json(const GeometricalReport& g) {
  json out{{"ok", g.ok}, {"p", to_json(g.p)}, {"q", to_json(g.q)}};
  out["violation"] = g.violation ? to_json(*g.violation) : json(nullptr);
  return out;
}

}  // namespace cantor
