#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include "cantor/io.hpp"

using namespace cantor;

namespace {

constexpr const char* kSchema = "cantor-toolkit/1";

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Request {
  std::string command;
  std::map<std::string, std::string> opts;
  Precision prec;

  bool has(const std::string& k) const { return opts.count(k) > 0; }
  const std::string& get(const std::string& k) const {
    auto it = opts.find(k);
    if (it == opts.end()) throw UsageError(command + ": missing --" + k);
    return it->second;
  }
};

unsigned natural_opt(const Request& r, const std::string& k, std::optional<unsigned> def = {}) {
  if (!r.has(k)) {
    if (def) return *def;
    r.get(k);
  }
  const std::string& v = r.get(k);
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos || v.size() > 9)
    throw UsageError("--" + k + " must be a nonnegative integer, got '" + v + "'");
  return static_cast<unsigned>(std::stoul(v));
}

Rational rational_opt(const Request& r, const std::string& k, std::optional<Rational> def = {}) {
  if (!r.has(k)) {
    if (def) return *def;
    r.get(k);
  }
  try {
    return parse_rational(r.get(k));
  } catch (const Error& e) {
    throw UsageError("--" + k + ": " + e.what());
  }
}

bool is_file(const std::string& s) {
  std::error_code ec;
  return std::filesystem::is_regular_file(s, ec);
}

// Builtin name or JSON file; "every-other.json" falls back to the builtin
// when no such file exists.
std::string builtin_name(const std::string& s) {
  if (s.size() <= 5 || s.substr(s.size() - 5) != ".json") return s;
  std::string stem = std::filesystem::path(s).filename().string();
  stem.resize(stem.size() - 5);
  return stem;
}

TreeModel tree_opt(const Request& r, const std::string& k = "tree") {
  const std::string& v = r.get(k);
  if (is_file(v)) return tree_from_json(load_json_file(v));
  std::string b = builtin_name(v);
  if (b == "full") return TreeModel::full();
  if (b == "every-other") return TreeModel::every_other();
  if (b == "single-path") return TreeModel::single_path();
  if (b.rfind("periodic:", 0) == 0) {
    Request sub{r.command, {{"period", b.substr(9)}}, r.prec};
    return TreeModel::periodic_branching(natural_opt(sub, "period"));
  }
  throw UsageError("--" + k + ": no such file or builtin tree '" + v + "'");
}

Order order_text(const std::string& v) {
  if (is_file(v)) return order_from_json(load_json_file(v));
  try {
    return parse_order_flag(v);
  } catch (const Error& e) {
    throw UsageError(std::string("--order: ") + e.what());
  }
}

// --order, or --s as shorthand for a linear order.
Order order_opt(const Request& r) {
  if (r.has("order")) return order_text(r.get("order"));
  if (r.has("s")) {
    Rational s = rational_opt(r, "s");
    try {
      return Order::linear(s);
    } catch (const DomainError& e) {
      throw UsageError(std::string("--s: ") + e.what());
    }
  }
  throw UsageError(r.command + ": missing --order");
}

CylinderMeasure measure_text(const std::string& v, const std::string& k) {
  if (is_file(v)) return measure_from_json(load_json_file(v));
  std::string b = builtin_name(v);
  if (b == "lebesgue") return CylinderMeasure::lebesgue();
  if (b == "dirac0") return CylinderMeasure::dirac(0);
  if (b == "dirac1") return CylinderMeasure::dirac(1);
  if (b == "natural-every-other") return CylinderMeasure::natural_every_other();
  if (b.rfind("bernoulli:", 0) == 0) {
    try {
      return CylinderMeasure::bernoulli(parse_rational(b.substr(10)));
    } catch (const Error& e) {
      throw UsageError("--" + k + ": " + e.what());
    }
  }
  throw UsageError("--" + k + ": no such file or builtin measure '" + v + "'");
}

CylinderMeasure measure_opt(const Request& r, const std::string& k = "measure") { return measure_text(r.get(k), k); }

Premeasure premeasure_opt(const Request& r) {
  if (r.has("premeasure")) {
    const std::string& v = r.get("premeasure");
    if (is_file(v)) return premeasure_from_json(load_json_file(v));
    if (builtin_name(v) == "lebesgue") return Premeasure::lebesgue();
    throw UsageError("--premeasure: no such file or builtin '" + v + "'");
  }
  if (r.has("measure")) return Premeasure::probability(measure_opt(r));
  if (r.has("order") || r.has("s")) {
    Rational gamma = rational_opt(r, "gamma", Rational(1));
    if (sgn(gamma) <= 0) throw UsageError("--gamma must be positive");
    return Premeasure::hausdorff(order_opt(r), gamma);
  }
  throw UsageError(r.command + ": needs --premeasure, --measure or --order");
}

MonotoneMachine machine_opt(const Request& r) {
  const std::string& v = r.get("machine");
  if (is_file(v)) return machine_from_json(load_json_file(v));
  std::string b = builtin_name(v);
  auto length = [&](std::size_t at, unsigned def) {
    if (b.size() <= at) return def;
    Request sub{r.command, {{"machine-length", b.substr(at)}}, r.prec};
    return natural_opt(sub, "machine-length");
  };
  if (b.rfind("identity", 0) == 0 && (b.size() == 8 || b[8] == ':')) return MonotoneMachine::identity(length(9, 12));
  if (b.rfind("doubling", 0) == 0 && (b.size() == 8 || b[8] == ':')) return MonotoneMachine::bit_doubling(length(9, 8));
  throw UsageError("--machine: no such file or builtin machine '" + v + "'");
}

Semimeasure semimeasure_opt(const Request& r) {
  if (!r.has("semimeasure")) return Semimeasure::zero();
  const std::string& v = r.get("semimeasure");
  if (is_file(v)) return semimeasure_from_json(load_json_file(v));
  if (v == "zero") return Semimeasure::zero();
  throw UsageError("--semimeasure: no such file '" + v + "'");
}

TestObject test_opt(const Request& r) {
  const std::string& v = r.get("test");
  if (!is_file(v)) throw UsageError("--test: no such file '" + v + "'");
  return test_from_json(load_json_file(v));
}

BitString string_text(const std::string& v, const std::string& k) {
  if (v == "e" || v == "ε") return BitString();
  try {
    return BitString::parse(v);
  } catch (const Error& e) {
    throw UsageError("--" + k + ": " + e.what());
  }
}

std::vector<BitString> string_list(const std::string& v, const std::string& k) {
  std::vector<BitString> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(string_text(item, k));
  if (!v.empty() && v.back() == ',') out.push_back(BitString());
  return out;
}

std::optional<unsigned> table_depth(unsigned N) { return N <= 10 ? std::optional<unsigned>(N) : std::nullopt; }

// ---- subcommands ----

json cmd_tree_expand(const Request& r) {
  return to_json(tree_expand(tree_opt(r), natural_opt(r, "depth")));
}

json cmd_validate_premeasure(const Request& r) {
  unsigned N = natural_opt(r, "depth", 10u);
  json out;
  if (r.has("semimeasure")) {
    auto v = semimeasure_validate(semimeasure_opt(r), N);
    out["semimeasure"] = json{{"ok", !v}, {"violation", v ? to_json(*v) : json(nullptr)}};
  }
  if (r.has("measure")) {
    CylinderMeasure m = measure_opt(r);
    auto v = validate_probability(m);
    out["probability"] = json{{"ok", !v}, {"violation", v ? to_json(*v) : json(nullptr)}};
  }
  if (r.has("premeasure") || r.has("measure") || r.has("order") || r.has("s")) {
    Premeasure rho = premeasure_opt(r);
    out["premeasure"] = rho.describe();
    out["geometrical"] = to_json(check_geometrical(rho, N, r.prec));
    if (r.has("order") || r.has("s")) out["convex"] = check_convex(order_opt(r), std::max(N, 1u));
  }
  if (out.is_null()) throw UsageError("validate-premeasure: nothing to validate");
  out["depth"] = N;
  return out;
}

json cmd_hmeasure(const Request& r) {
  unsigned N = natural_opt(r, "depth");
  auto res = method1_value(tree_opt(r), premeasure_opt(r), N, r.prec, Exec::Parallel,
                           natural_opt(r, "cap", static_cast<unsigned>(kDefaultCertificateCap)));
  json out = to_json(res);
  out["depth"] = N;
  return out;
}

json cmd_hdim(const Request& r) {
  unsigned N = natural_opt(r, "depth");
  json out = to_json(hdim_estimate(tree_opt(r), N, rational_opt(r, "tol", Rational(1, 10)), r.prec));
  out["depth"] = N;
  return out;
}

json cmd_capdim(const Request& r) {
  unsigned N = natural_opt(r, "depth");
  json out = to_json(capdim_estimate(tree_opt(r), N, rational_opt(r, "tol", Rational(1, 10)), r.prec,
                                     rational_opt(r, "gamma", Rational(1))));
  out.erase("threshold");
  out.erase("slack");
  out["depth"] = N;
  return out;
}

json cmd_frostman_build(const Request& r) {
  unsigned N = natural_opt(r, "depth");
  FrostmanResult f = build_measure_along_tree(tree_opt(r), semimeasure_opt(r), order_opt(r),
                                              rational_opt(r, "gamma", Rational(1)), N, r.prec);
  return json{{"measure", to_json(f.measure, table_depth(N))},
              {"gamma", to_string(f.gamma)},
              {"order", to_json(f.order)},
              {"audit", to_json(f.audit)},
              {"depth", N}};
}

json cmd_maxflow(const Request& r) {
  unsigned N = natural_opt(r, "depth");
  FlowResult f = maxflow_measure(tree_opt(r), order_opt(r), rational_opt(r, "gamma", Rational(1)), N, r.prec);
  json out = to_json(f);
  if (f.measure) out["measure"] = to_json(*f.measure, table_depth(N));
  out["depth"] = N;
  return out;
}

json cmd_preimage(const Request& r) {
  MonotoneMachine M = machine_opt(r);
  BitString s = string_text(r.get("string"), "string");
  return json{{"string", s.str()},
              {"preimage", to_json(M.preimage(s))},
              {"lambda", to_string(machine_preimage_semimeasure(M, s))}};
}

json cmd_complexity_tree(const Request& r) {
  unsigned N = natural_opt(r, "depth");
  TreeModel T = complexity_tree(machine_opt(r), order_opt(r), rational_opt(r, "c", Rational(1)), N, r.prec);
  std::vector<BitString> nodes = T.explicit_list();
  std::sort(nodes.begin(), nodes.end());
  return json{{"nodes", to_json(nodes)}, {"size", nodes.size()}, {"empty", T.is_empty()}, {"depth", N}};
}

json cmd_massdist(const Request& r) {
  unsigned N = natural_opt(r, "depth");
  auto res = mass_distribution_bound(measure_opt(r), tree_opt(r), rational_opt(r, "s"),
                                     rational_opt(r, "c", Rational(1)), N, r.prec);
  return json{{"bound", to_string(res.bound)}, {"dpValue", to_json(res.dp_value)}, {"holds", res.holds}, {"depth", N}};
}

json cmd_energy(const Request& r) {
  return to_json(energy(measure_opt(r), rational_opt(r, "t"), natural_opt(r, "depth"), r.prec));
}

json cmd_potential(const Request& r) {
  json out = to_json(potential(measure_opt(r), string_text(r.get("x"), "x"), rational_opt(r, "t"),
                               natural_opt(r, "depth"), r.prec));
  out["x"] = r.get("x");
  return out;
}

json cmd_minimize_energy(const Request& r) {
  unsigned N = natural_opt(r, "depth");
  MinimizeResult res = minimize_energy(tree_opt(r), rational_opt(r, "s"), N, natural_opt(r, "iters", 200u),
                                       rational_opt(r, "tol", Rational(1, 1000000)));
  json log = json::array();
  for (const auto& e : res.log)
    log.push_back(json{{"iteration", e.iteration}, {"energy", e.energy}, {"gap", e.gap}, {"step", e.step},
                       {"vertex", e.vertex}});
  if (r.has("log-csv")) {
    std::ofstream f(r.get("log-csv"));
    if (!f) throw UsageError("--log-csv: cannot write '" + r.get("log-csv") + "'");
    f << iterate_log_csv(res.log);
  }
  json out{{"converged", res.converged},
           {"iterations", res.log.size()},
           {"finalEnergy", res.log.empty() ? json(nullptr) : json(res.log.back().energy)},
           {"energy", to_json(res.energy)},
           {"measure", to_json(res.measure, table_depth(N))},
           {"log", log}};
  return out;
}

json cmd_dmeas(const Request& r) {
  DmeasResult d = dmeas_distance(measure_opt(r), measure_opt(r, "other"), natural_opt(r, "depth"));
  return json{{"value", to_string(d.value)}, {"tail", to_string(d.tail)}, {"exact", d.exact}, {"depth", d.depth},
              {"approx", d.value.get_d()}};
}

json cmd_cauchy(const Request& r) {
  CylinderMeasure m = measure_opt(r);
  unsigned n = natural_opt(r, "depth");
  DyadicMeasure nu = cauchy_approximate(m, n);
  DmeasResult d = dmeas_distance(m, nu.to_measure(), n + 24);
  Rational bound = pow2_exact(-static_cast<long>(n));
  return json{{"dyadic", to_json(nu)},
              {"distance", json{{"value", to_string(d.value)}, {"tail", to_string(d.tail)}, {"exact", d.exact}}},
              {"bound", to_string(bound)},
              {"withinBound", d.value + d.tail <= bound},
              {"depth", n}};
}

json cmd_check_test(const Request& r) {
  TestObject W = test_opt(r);
  Premeasure rho = premeasure_opt(r);
  std::string notion = r.has("notion") ? r.get("notion") : "all";
  auto vehement = [&] { return to_json(check_vehement(W, rho, natural_opt(r, "depth", W.max_length()), r.prec)); };
  if (notion == "ml") return to_json(check_ml(W, rho, r.prec));
  if (notion == "solovay") return to_json(check_solovay(W, rho, r.prec));
  if (notion == "strong") return to_json(check_strong(W, rho, r.prec));
  if (notion == "vehement") return vehement();
  if (notion != "all") throw UsageError("--notion must be ml, solovay, strong, vehement or all");
  return json{{"ml", to_json(check_ml(W, rho, r.prec))},
              {"solovay", to_json(check_solovay(W, rho, r.prec))},
              {"strong", to_json(check_strong(W, rho, r.prec))},
              {"vehement", vehement()}};
}

json cmd_convert_test(const Request& r) {
  TestObject W = test_opt(r);
  std::string kind = r.has("kind") ? r.get("kind") : "strong-ml";
  if (kind == "strong-ml")
    return to_json(convert_strong_to_ml(W, rational_opt(r, "s"), rational_opt(r, "t"), r.prec));
  if (kind == "vehement-ml")
    return to_json(vehement_to_ml_probability(W, premeasure_opt(r), natural_opt(r, "depth", W.max_length()), r.prec));
  throw UsageError("--kind must be strong-ml or vehement-ml");
}

json cmd_prefixfree(const Request& r) {
  auto one = [](const std::vector<BitString>& in) {
    auto out = prefix_free_generators(in);
    return json{{"input", to_json(in)},
                {"generators", to_json(out)},
                {"prefixFree", prefix_free(out)},
                {"sameOpenSet", same_open_set(in, out)}};
  };
  if (r.has("strings")) return one(string_list(r.get("strings"), "strings"));
  TestObject W = test_opt(r);
  json levels = json::array();
  for (const auto& lv : W.levels) levels.push_back(one(lv));
  return json{{"levels", levels}};
}

json cmd_capacity(const Request& r) {
  unsigned N = natural_opt(r, "depth");
  CapacityResult c = capacity_lower(tree_opt(r), rational_opt(r, "s"), N, r.prec);
  json out{{"lower", to_string(c.lower)}, {"approx", c.lower.get_d()}, {"candidate", c.candidate}, {"depth", N}};
  out["energy"] = c.energy ? to_json(*c.energy) : json(nullptr);
  if (c.measure) out["measure"] = to_json(*c.measure, table_depth(N));
  return out;
}

json cmd_rational_rep(const Request& r) {
  BitString s = string_text(r.get("string"), "string");
  Rational q1 = rational_opt(r, "q1"), q2 = rational_opt(r, "q2");
  if (!(q1 < q2)) throw UsageError("rational-rep needs q1 < q2");
  return json{{"string", s.str()},
              {"q1", to_string(q1)},
              {"q2", to_string(q2)},
              {"accepted", rational_rep_query(premeasure_opt(r), s, q1, q2, r.prec)}};
}

json cmd_restrict(const Request& r) {
  std::optional<unsigned> D;
  if (r.has("depth")) D = natural_opt(r, "depth");
  CylinderMeasure m = restrict_normalize(measure_opt(r), tree_opt(r), D);
  return json{{"measure", to_json(m, D ? table_depth(*D) : std::nullopt)}};
}

struct Command {
  const char* name;
  const char* help;
  std::vector<const char*> flags;
  json (*run)(const Request&);
};

const std::vector<Command>& commands() {
  static const std::vector<Command> cmds = {
      {"tree-expand", "Expand a tree to depth N", {"tree", "depth"}, cmd_tree_expand},
      {"validate-premeasure", "Check probability additivity, (G1)-(G3) geometry and superadditivity",
       {"measure", "order", "s", "gamma", "premeasure", "semimeasure", "depth"}, cmd_validate_premeasure},
      {"hmeasure", "Method-I value on a tree with an optimal cut",
       {"tree", "order", "s", "gamma", "premeasure", "measure", "depth", "cap"}, cmd_hmeasure},
      {"hdim", "Hausdorff dimension interval", {"tree", "depth", "tol"}, cmd_hdim},
      {"frostman-build", "Build an h-bounded measure along a tree",
       {"tree", "order", "s", "gamma", "semimeasure", "depth"}, cmd_frostman_build},
      {"maxflow", "Unit flow under capacities gamma*2^-h(n)", {"tree", "order", "s", "gamma", "depth"}, cmd_maxflow},
      {"preimage", "Minimal machine inputs whose output extends a string", {"machine", "string"}, cmd_preimage},
      {"complexity-tree", "Strings whose preimage mass stays below c*2^-h(n)",
       {"machine", "order", "s", "c", "depth"}, cmd_complexity_tree},
      {"massdist", "Mass distribution lower bound", {"measure", "tree", "s", "c", "depth"}, cmd_massdist},
      {"energy", "t-energy with tail bound", {"measure", "t", "depth"}, cmd_energy},
      {"potential", "t-potential at a point prefix", {"measure", "x", "t", "depth"}, cmd_potential},
      {"capdim", "Capacitary dimension interval", {"tree", "depth", "tol", "gamma"}, cmd_capdim},
      {"minimize-energy", "Conditional-gradient energy minimisation",
       {"tree", "s", "depth", "iters", "tol", "log-csv"}, cmd_minimize_energy},
      {"dmeas", "Distance between two measures", {"measure", "other", "depth"}, cmd_dmeas},
      {"cauchy", "Dyadic approximant at depth n", {"measure", "depth"}, cmd_cauchy},
      {"check-test", "Check a test object for correctness",
       {"test", "notion", "premeasure", "measure", "order", "s", "gamma", "depth"}, cmd_check_test},
      {"convert-test", "Convert a strong or vehement test to an ML test",
       {"test", "kind", "s", "t", "premeasure", "measure", "depth"}, cmd_convert_test},
      {"prefixfree", "Prefix-free generators of a string list", {"strings", "test"}, cmd_prefixfree},
      {"capacity", "Certified lower bound for the s-capacity", {"tree", "s", "depth"}, cmd_capacity},
      {"rational-rep", "Query q1 < rho(sigma) < q2",
       {"premeasure", "measure", "order", "s", "gamma", "string", "q1", "q2"}, cmd_rational_rep},
      {"restrict", "Restrict a measure to a tree and renormalise", {"measure", "tree", "depth"}, cmd_restrict},
  };
  return cmds;
}

std::string csv_cell(const json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

// Top-level scalars, with one level of object flattening ("value.lo").
std::vector<std::pair<std::string, json>> scalar_fields(const json& result) {
  std::vector<std::pair<std::string, json>> out;
  for (auto it = result.begin(); it != result.end(); ++it) {
    if (it->is_object()) {
      for (auto jt = it->begin(); jt != it->end(); ++jt)
        if (jt->is_primitive()) out.emplace_back(it.key() + "." + jt.key(), *jt);
    } else if (it->is_primitive()) {
      out.emplace_back(it.key(), *it);
    }
  }
  return out;
}

std::string timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<Rational> sweep_values(const std::string& spec, std::string& param) {
  auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw UsageError("--sweep expects param=a:b:step");
  param = spec.substr(0, eq);
  std::vector<Rational> parts;
  std::stringstream ss(spec.substr(eq + 1));
  std::string item;
  try {
    while (std::getline(ss, item, ':')) parts.push_back(parse_rational(item));
  } catch (const Error& e) {
    throw UsageError(std::string("--sweep: ") + e.what());
  }
  if (parts.size() != 3 || sgn(parts[2]) <= 0 || parts[1] < parts[0])
    throw UsageError("--sweep expects param=a:b:step with a <= b and step > 0");
  std::vector<Rational> v;
  for (Rational x = parts[0]; x <= parts[1]; x += parts[2]) {
    v.push_back(x);
    if (v.size() > 100000) throw UsageError("--sweep: too many points");
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations on tree-coded subsets of Cantor space"};
  app.require_subcommand(1);
  Request req;
  std::string precision, format = "json", sweep;
  bool no_timestamp = false;
  app.add_option("--precision", precision, "Interval precision in bits (>= 64)");
  app.add_option("--format", format, "Output format: json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--sweep", sweep, "Sweep a numeric flag: param=a:b:step (CSV output)");
  app.add_flag("--no-timestamp", no_timestamp, "Omit the timestamp field");
  app.fallthrough();

  const Command* chosen = nullptr;
  for (const auto& c : commands()) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    for (const char* f : c.flags) {
      std::string key = f;
      sub->add_option_function<std::string>(
          "--" + key, [&req, key](const std::string& v) { req.opts[key] = v; }, key);
    }
    sub->callback([&chosen, &c] { chosen = &c; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (const char* env = std::getenv("FRACTAL_PRECISION"); env && !precision.size()) precision = env;
    if (!precision.empty()) {
      Request p{"", {{"precision", precision}}, {}};
      unsigned bits = natural_opt(p, "precision");
      if (bits < 64) throw UsageError("precision must be at least 64 bits");
      req.prec.bits = bits;
      req.prec.max_bits = std::max(req.prec.max_bits, bits);
    }
    req.command = chosen->name;
    json inputs = json::object();
    for (const auto& [k, v] : req.opts) inputs[k] = v;
    if (!precision.empty()) inputs["precision"] = precision;

    if (!sweep.empty()) {
      std::string param;
      auto values = sweep_values(sweep, param);
      std::vector<std::string> header;
      std::vector<std::vector<std::pair<std::string, json>>> rows;
      for (const auto& x : values) {
        Request r = req;
        r.opts[param] = to_string(x);
        std::vector<std::pair<std::string, json>> fields;
        try {
          fields = scalar_fields(chosen->run(r));
        } catch (const SchemaError&) {
          throw;
        } catch (const Error& e) {
          fields = {{"error", e.what()}};
        }
        for (const auto& [k, v] : fields)
          if (std::find(header.begin(), header.end(), k) == header.end()) header.push_back(k);
        rows.push_back(std::move(fields));
      }
      std::cout << param;
      for (const auto& h : header) std::cout << ',' << csv_cell(h);
      std::cout << '\n';
      for (std::size_t i = 0; i < rows.size(); ++i) {
        std::cout << csv_cell(to_string(values[i]));
        for (const auto& h : header) {
          auto it = std::find_if(rows[i].begin(), rows[i].end(), [&](const auto& p) { return p.first == h; });
          std::cout << ',' << (it == rows[i].end() ? std::string() : csv_cell(it->second));
        }
        std::cout << '\n';
      }
      return 0;
    }

    json result = chosen->run(req);
    if (format == "csv") {
      if (req.command == std::string("minimize-energy")) {
        std::vector<IterateLog> log;
        for (const auto& e : result["log"])
          log.push_back({e["iteration"].get<unsigned>(), e["energy"].get<double>(), e["gap"].get<double>(),
                         e["step"].get<double>(), e["vertex"].get<std::size_t>()});
        std::cout << iterate_log_csv(log);
        return 0;
      }
      auto fields = scalar_fields(result);
      for (std::size_t i = 0; i < fields.size(); ++i) std::cout << (i ? "," : "") << csv_cell(fields[i].first);
      std::cout << '\n';
      for (std::size_t i = 0; i < fields.size(); ++i) std::cout << (i ? "," : "") << csv_cell(fields[i].second);
      std::cout << '\n';
      return 0;
    }
    json doc{{"schema", kSchema}, {"command", req.command}, {"inputs", inputs}, {"result", result}};
    if (!no_timestamp) doc["timestamp"] = timestamp();
    std::cout << doc.dump(2) << '\n';
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return 2;
  } catch (const UndecidedError& e) {
    std::cerr << "undecided: " << e.what() << '\n';
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
