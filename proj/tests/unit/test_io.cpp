#include "cantor/io.hpp"

#include "common.hpp"

namespace {

void same_tree(const TreeModel& a, const TreeModel& b, unsigned N) {
  CHECK(a.expand(N).nodes() == b.expand(N).nodes());
}

void same_measure(const CylinderMeasure& a, const CylinderMeasure& b, unsigned N) {
  for (const auto& s : oracle::all_strings_upto(N)) CHECK(a.mass(s) == b.mass(s));
}

}  // namespace

TEST_CASE("rationals and strings round trip") {
  for (Q r : {Q(0), Q(-3), Q(7, 9), Q(-1, 1024)}) {
    r.canonicalize();
    CHECK(rational_from_json(to_json(r), "r") == r);
  }
  CHECK(rational_from_json(json(5), "r") == 5);
  CHECK_THROWS_AS(rational_from_json(json(0.5), "r"), SchemaError);
  CHECK_THROWS_AS(rational_from_json(json("1/0"), "r"), SchemaError);
  auto v = strs({"", "0", "0110", "111"});
  CHECK(strings_from_json(to_json(v)) == v);
  CHECK_THROWS_AS(bitstring_from_json(json("012")), SchemaError);
  CHECK_THROWS_AS(strings_from_json(json("0")), SchemaError);
  CHECK(to_json(Value::interval(Q(1, 3), Q(1, 2)))["hi"] == "1/2");
  CHECK(to_json(Tri::Undecided) == "undecided");
  CHECK(to_json(Tri::True) == true);
}

TEST_CASE("orders round trip") {
  for (const auto& h : {Order::linear(Q(1, 2)), Order::ceil(Q(2, 3)), Order::table({Q(0), Q(1), Q(1), Q(3)}, Q(1)),
                        Order::table({Q(0), Q(2)}, {})}) {
    auto g = order_from_json(to_json(h));
    CHECK(g.kind() == h.kind());
    for (unsigned n = 0; n < (h.tail_slope() || h.kind() != Order::Kind::Table ? 12 : h.values().size()); ++n)
      CHECK(g(n) == h(n));
  }
  CHECK(order_from_json(json{{"kind", "linear"}, {"slope", "1/3"}})(3) == 1);
  CHECK_THROWS_AS(order_from_json(json{{"kind", "cubic"}}), SchemaError);
  CHECK_THROWS_AS(order_from_json(json{{"kind", "table"}, {"values", {"0", "2", "1"}}}), SchemaError);
}

TEST_CASE("trees round trip") {
  oracle::Rng rng(307);
  for (int i = 0; i < 20; ++i) {
    auto T = TreeModel::explicit_nodes(oracle::random_tree_nodes(rng, 6));
    same_tree(tree_from_json(to_json(T)), T, 6);
  }
  for (const auto& T : {TreeModel::full(), TreeModel::every_other(), TreeModel::single_path(),
                        TreeModel::periodic_branching(3)})
    same_tree(tree_from_json(to_json(T)), T, 10);
  same_tree(tree_from_json(json::parse(R"(["", "1", "10"])")), TreeModel::explicit_nodes(strs({"", "1", "10"})), 4);
  CHECK_THROWS_AS(tree_from_json(json::parse(R"(["", "10"])")), SchemaError);
  CHECK_THROWS_AS(tree_from_json(json{{"kind", "automaton"}, {"transitions", {{0, 7}}}}), SchemaError);
  CHECK_THROWS_AS(tree_from_json(json{{"kind", "bush"}}), SchemaError);
}

TEST_CASE("measures round trip") {
  oracle::Rng rng(311);
  for (int i = 0; i < 20; ++i) {
    auto m = measure_from_table(oracle::random_probability_table(rng, 5));
    same_measure(measure_from_json(to_json(m)), m, 7);
    auto j = to_json(m, 5);
    same_measure(measure_from_json(j["table"]), m, 5);
  }
  for (const auto& m : {CylinderMeasure::lebesgue(), CylinderMeasure::natural_every_other(),
                        CylinderMeasure::bernoulli(Q(1, 3)), CylinderMeasure::dirac(1)}) {
    auto back = measure_from_json(to_json(m));
    same_measure(back, m, 8);
    CHECK(back.name() == m.name());
    CHECK(back.bound().has_value() == m.bound().has_value());
  }
  for (int i = 0; i < 20; ++i) {
    auto d = oracle::random_dyadic(rng);
    auto back = dyadic_from_json(to_json(d));
    CHECK(back.support == d.support);
    CHECK(back.weights == d.weights);
    same_measure(measure_from_json(to_json(d)), d.to_measure(), 6);
  }
  CHECK_THROWS_AS(measure_from_json(json::parse(R"({"depth": 1, "mass": {"0": "1/2", "1": "1/3"}})")), SchemaError);
  CHECK_THROWS_AS(measure_from_json(json::parse(R"({"depth": 1, "mass": {"00": "1"}})")), SchemaError);
  CHECK_THROWS_AS(dyadic_from_json(json::parse(R"({"support": ["0"], "weights": ["1/2"]})")), SchemaError);
}

TEST_CASE("tests and premeasures parse") {
  TestObject W{{strs({"0", "10"}), {}, strs({"000"})}};
  CHECK(test_from_json(to_json(W)).levels == W.levels);
  CHECK_THROWS_AS(test_from_json(json{{"levels", "0"}}), SchemaError);
  auto rho = premeasure_from_json(json{{"kind", "hausdorff"}, {"order", {{"kind", "ceil"}, {"s", "1/2"}}}});
  CHECK(rho.eval(bs("00"), 64).lo() == Q(1, 2));
  auto p = premeasure_from_json(json{{"kind", "probability"}, {"measure", {{"kind", "table"}, {"depth", 1},
                                                                          {"mass", {{"0", "1/4"}}}}}});
  CHECK(p.is_probability());
  CHECK(p.eval(bs("1"), 64).lo() == Q(3, 4));
  CHECK(semimeasure_from_json(json::parse(R"({"kind": "machine", "pairs": [["0", "1"], ["01", "10"]]})"))
            .eval(bs("1")) == Q(1, 2));
  CHECK_THROWS_AS(machine_from_json(json::parse(R"({"pairs": [["0"]]})")), SchemaError);
}
