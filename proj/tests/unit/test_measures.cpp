#include "common.hpp"

namespace {

CylinderMeasure from_masses(unsigned depth, std::map<BitString, Rational> mass) {
  return measure_from_table(complete_table(MassTable{depth, std::move(mass)}));
}

}  // namespace

TEST_CASE("validate_probability examples") {
  CHECK_FALSE(validate_probability(table_of(CylinderMeasure::lebesgue(), 4)));
  MassTable bad{1, {{bs(""), Q(1)}, {bs("0"), Q(3, 5)}, {bs("1"), Q(1, 2)}}};
  auto v = validate_probability(bad);
  REQUIRE(v);
  CHECK(v->at == BitString());
  CHECK_FALSE(validate_probability(CylinderMeasure::dirac(0)));
  CHECK_FALSE(validate_probability(table_of(CylinderMeasure::dirac(0), 6)));
  MassTable root{0, {{bs(""), Q(1, 2)}}};
  CHECK(validate_probability(root));
}

TEST_CASE("measures evaluate cylinders") {
  CylinderMeasure leb;
  CHECK(leb.mass(bs("0101")) == Q(1, 16));
  CHECK(CylinderMeasure::dirac(0).mass(bs("000")) == 1);
  CHECK(CylinderMeasure::dirac(0).mass(bs("001")) == 0);
  auto ne = CylinderMeasure::natural_every_other();
  CHECK(ne.mass(bs("0")) == Q(1, 2));
  CHECK(ne.mass(bs("00")) == Q(1, 2));
  CHECK(ne.mass(bs("01")) == 0);
  auto t = from_masses(1, {{bs("0"), Q(1, 3)}, {bs("1"), Q(2, 3)}});
  CHECK(t.mass(bs("0")) == Q(1, 3));
  CHECK(t.mass(bs("01")) == Q(1, 6));  // uniform below the table depth
  CHECK(table_of(t, 3).mass.at(bs("111")) == Q(1, 6));
}

TEST_CASE("table round trip") {
  oracle::Rng rng(3);
  for (int i = 0; i < 30; ++i) {
    MassTable t = oracle::random_probability_table(rng, 5);
    CylinderMeasure m = measure_from_table(t);
    MassTable back = table_of(m, 5);
    for (const auto& [s, v] : t.mass) CHECK(back.mass.at(s) == v);
    CHECK_FALSE(validate_probability(m));
  }
}

TEST_CASE("dyadic measures") {
  DyadicMeasure d{strs({"00", "1"}), {Q(1, 4), Q(3, 4)}};
  auto m = d.to_measure();
  CHECK(m.mass(bs("0")) == Q(1, 4));
  CHECK(m.mass(bs("000")) == Q(1, 4));
  CHECK(m.mass(bs("001")) == 0);
  CHECK(m.mass(bs("100")) == Q(3, 4));
  DyadicMeasure bad{strs({"0", "0"}), {Q(1, 2), Q(1, 2)}};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  DyadicMeasure bad2{strs({"0"}), {Q(1, 2)}};
  CHECK_THROWS_AS(bad2.validate(), DomainError);
}

TEST_CASE("dmeas_distance examples") {
  auto d01 = dmeas_distance(CylinderMeasure::dirac(0), CylinderMeasure::dirac(1), 30);
  CHECK(abs(Q(d01.value - 1)) + d01.tail <= pow2_exact(-30));
  auto same = dmeas_distance(CylinderMeasure::natural_every_other(), CylinderMeasure::natural_every_other(), 7);
  CHECK(same.value == 0);
  CHECK(same.exact);
  auto ld = dmeas_distance(CylinderMeasure::lebesgue(), CylinderMeasure::dirac(0), 30);
  CHECK(abs(Q(ld.value - Q(2, 3))) <= pow2_exact(-30));
  CHECK(ld.value <= Q(2, 3));
  CHECK(Q(2, 3) <= ld.value + ld.tail);
}

TEST_CASE("dmeas agrees with direct enumeration") {
  oracle::Rng rng(11);
  for (int i = 0; i < 40; ++i) {
    auto a = oracle::random_dyadic(rng, 4).to_measure();
    auto b = measure_from_table(oracle::random_probability_table(rng, 3));
    const unsigned K = 9;
    auto d = dmeas_distance(a, b, K);
    Rational direct = oracle::direct_dmeas(a, b, K);
    CHECK(direct <= d.value + d.tail);
    CHECK(d.value <= direct + pow2_exact(-static_cast<long>(K)));
    auto e = dmeas_distance(b, a, K);
    CHECK(e.value == d.value);
    CHECK(e.tail == d.tail);
  }
}

TEST_CASE("dmeas on dyadic measures is exact and a metric") {
  oracle::Rng rng(5);
  for (int i = 0; i < 60; ++i) {
    auto a = oracle::random_dyadic(rng).to_measure();
    auto b = oracle::random_dyadic(rng).to_measure();
    auto c = oracle::random_dyadic(rng).to_measure();
    auto ab = dmeas_distance(a, b, 8), bc = dmeas_distance(b, c, 8), ac = dmeas_distance(a, c, 8);
    REQUIRE(ab.exact);
    REQUIRE(bc.exact);
    REQUIRE(ac.exact);
    CHECK(ac.value <= ab.value + bc.value);
    CHECK(dmeas_distance(b, a, 8).value == ab.value);
    CHECK(oracle::direct_dmeas(a, b, 14) <= ab.value);
  }
}

TEST_CASE("cauchy_approximate examples") {
  auto leb = cauchy_approximate(CylinderMeasure::lebesgue(), 3);
  CHECK(leb.support.size() == 8);
  for (const auto& w : leb.weights) CHECK(w == Q(1, 8));
  auto d = dmeas_distance(CylinderMeasure::lebesgue(), leb.to_measure(), 30);
  CHECK(d.value + d.tail <= Q(1, 8));

  auto dirac = cauchy_approximate(CylinderMeasure::dirac(0), 5);
  REQUIRE(dirac.support.size() == 1);
  CHECK(dmeas_distance(CylinderMeasure::dirac(0), dirac.to_measure(), 20).value == 0);

  auto bern = cauchy_approximate(from_masses(1, {{bs("0"), Q(1, 3)}, {bs("1"), Q(2, 3)}}), 1);
  CHECK(bern.support == strs({"0", "1"}));
  CHECK(bern.weights == std::vector<Rational>{Q(1, 3), Q(2, 3)});
}

TEST_CASE("rational_rep_query examples") {
  CHECK(rational_rep_query(Premeasure::lebesgue(), bs("01"), Q(1, 5), Q(3, 10)));
  CHECK_FALSE(rational_rep_query(Premeasure::lebesgue(), bs("01"), Q(1, 4), Q(1, 2)));
  CHECK(rational_rep_query(Premeasure::hausdorff(Order::linear(Q(1, 2))), bs("1"), Q(7, 10), Q(8, 11)));
  CHECK_FALSE(rational_rep_query(Premeasure::hausdorff(Order::linear(Q(1, 2))), bs("1"), Q(71, 100), Q(8, 11)));
  CHECK_THROWS_AS(rational_rep_query(Premeasure::lebesgue(), bs("0"), Q(1), Q(1, 2)), DomainError);
}

TEST_CASE("restrict_normalize examples") {
  auto below0 = TreeModel::explicit_nodes(strs({"", "0", "00", "01", "000", "001", "010", "011"}));
  auto nu = restrict_normalize(CylinderMeasure::lebesgue(), below0, 3);
  CHECK(nu.mass(bs("0")) == 1);
  CHECK(nu.mass(bs("1")) == 0);
  for (const auto& s : strs({"00", "011", "0101"})) CHECK(nu.mass(s) == 2 * pow2_exact(-static_cast<long>(s.length())));
  CHECK_FALSE(validate_probability(nu));

  auto same = restrict_normalize(CylinderMeasure::lebesgue(), TreeModel::full(), 6);
  for (const auto& s : strings_of_length(6)) CHECK(same.mass(s) == Q(1, 64));

  auto ones = TreeModel::explicit_nodes(strs({"", "1", "11", "111"}));
  CHECK_THROWS_WITH_AS(restrict_normalize(CylinderMeasure::dirac(0), ones, 3),
                       "measure gives no mass to closed set approximation", DomainError);
}

TEST_CASE("restrict_normalize output is a probability measure vanishing off the tree") {
  oracle::Rng rng(19);
  for (int i = 0; i < 30; ++i) {
    auto nodes = oracle::random_tree_nodes(rng, 5);
    auto T = TreeModel::explicit_nodes(nodes, 5);
    auto m = measure_from_table(oracle::random_probability_table(rng, 5, false));
    if (std::none_of(nodes.begin(), nodes.end(), [](const BitString& s) { return s.length() == 5; })) {
      CHECK_THROWS_AS(restrict_normalize(m, T, 5), DomainError);
      continue;
    }
    auto nu = restrict_normalize(m, T, 5);
    CHECK_FALSE(validate_probability(nu));
    auto tree = oracle::tree_set(T, 5);
    Rational on(0);
    for (const auto& s : strings_of_length(5)) {
      if (!tree.count(s)) CHECK(nu.mass(s) == 0);
      else on += nu.mass(s);
    }
    CHECK(on == 1);
  }
}

TEST_CASE("max_cylinder_mass examples") {
  CHECK(max_cylinder_mass(CylinderMeasure::lebesgue(), 5).value == Q(1, 32));
  CHECK(max_cylinder_mass(CylinderMeasure::dirac(0), 5).value == 1);
  CHECK(max_cylinder_mass(CylinderMeasure::natural_every_other(), 4).value == Q(1, 4));
  auto lv = level_max_masses(CylinderMeasure::natural_every_other(), 6);
  for (unsigned k = 0; k <= 3; ++k) CHECK(lv[2 * k].value == pow2_exact(-static_cast<long>(k)));
}

TEST_CASE("natural measure splits evenly among live children") {
  auto m = natural_measure(TreeModel::every_other(), 8);
  for (const auto& s : strs({"00", "10", "0010"})) CHECK(m.mass(s) == max_cylinder_mass(m, s.length()).value);
  CHECK(m.mass(bs("0000")) == Q(1, 4));
  CHECK(tree_mass(m, TreeModel::every_other(), 8) == 1);
}
