#include "common.hpp"

namespace {

// Exact re-check of the three conclusions with integer-valued h.
void audit_by_hand(const CylinderMeasure& mu, const TreeModel& T, const Semimeasure& eta, const Order& h,
                   const Rational& gamma, unsigned N) {
  auto t = table_of(mu, N);
  CHECK(t.mass.at(BitString()) == 1);
  for (const auto& [s, m] : t.mass) {
    CHECK(sgn(m) >= 0);
    CHECK(m <= oracle::cap(gamma, h, s.length()));
    if (s.length() < N) CHECK(m == t.mass.at(s.child(0)) + t.mass.at(s.child(1)));
  }
  for (const auto& s : T.expand(N).nodes()) CHECK(eta.eval(s) <= t.mass.at(s));
}

}  // namespace

TEST_CASE("build_measure_along_tree examples") {
  auto leb = build_measure_along_tree(TreeModel::full(), Semimeasure::zero(), Order::linear(Q(1)), Q(1), 6);
  CHECK(leb.audit.ok());
  for (const auto& [s, m] : table_of(leb.measure, 6).mass) CHECK(m == pow2_exact(-static_cast<long>(s.length())));

  auto nat = build_measure_along_tree(TreeModel::every_other(), Semimeasure::zero(), Order::ceil(Q(1, 2)), Q(1), 8);
  CHECK(nat.audit.ok());
  for (const auto& s : tree_expand(TreeModel::every_other(), 8).nodes())
    if (s.length() % 2 == 0) CHECK(nat.measure.mass(s) == pow2_exact(-static_cast<long>(s.length() / 2)));

  auto half = Semimeasure::geometric(Q(1, 2), Q(1, 2));
  auto r = build_measure_along_tree(TreeModel::full(), half, Order::linear(Q(1)), Q(1), 6);
  CHECK(r.audit.ok());
  for (const auto& s : oracle::all_strings_upto(6)) {
    CHECK(half.eval(s) <= r.measure.mass(s));
    CHECK(r.measure.mass(s) <= pow2_exact(-static_cast<long>(s.length())));
  }
}

TEST_CASE("build_measure_along_tree rejects broken preconditions") {
  auto steep = Order::table({Q(0), Q(2), Q(3)}, Q(1));
  CHECK_THROWS_WITH_AS(build_measure_along_tree(TreeModel::full(), Semimeasure::zero(), steep, Q(1), 3),
                       doctest::Contains("not convex"), DomainError);
  CHECK_THROWS_AS(build_measure_along_tree(TreeModel::full(), Semimeasure::geometric(Q(1), Q(1, 2)),
                                           Order::linear(Q(1)), Q(1, 2), 3),
                  DomainError);
  CHECK_THROWS_WITH_AS(build_measure_along_tree(TreeModel::full(), Semimeasure::geometric(Q(1), Q(3, 4)),
                                                Order::linear(Q(1)), Q(1), 3),
                       doctest::Contains("not a semimeasure"), DomainError);
  CHECK_THROWS_WITH_AS(build_measure_along_tree(TreeModel::full(), Semimeasure::table({{bs(""), Q(1)}, {bs("0"), Q(3, 4)}}),
                                                Order::linear(Q(1)), Q(1), 3),
                       doctest::Contains("exceeds"), DomainError);
}

TEST_CASE("the construction satisfies its conclusions on random instances") {
  oracle::Rng rng(41);
  std::uniform_int_distribution<int> depth(1, 6), g(0, 3);
  const Rational gammas[] = {Q(1), Q(3, 2), Q(2), Q(4)};
  int built = 0;
  for (int i = 0; i < 1000; ++i) {
    unsigned N = depth(rng);
    auto T = TreeModel::explicit_nodes(oracle::random_tree_nodes(rng, N, 0.6, 0.1));
    Order h = oracle::random_convex_order(rng, N);
    Rational gamma = gammas[g(rng)];
    auto eta = oracle::random_eta(rng, T, h, gamma, N);
    auto r = build_measure_along_tree(T, eta, h, gamma, N);
    REQUIRE(r.audit.ok());
    audit_by_hand(r.measure, T, eta, h, gamma, N);
    ++built;
  }
  CHECK(built == 1000);
}

TEST_CASE("audit_frostman catches a measure that breaks the cap") {
  auto a = audit_frostman(CylinderMeasure::dirac(0), TreeModel::full(), Semimeasure::zero(), Order::linear(Q(1)), Q(1), 4);
  CHECK_FALSE(a.ok());
  CHECK_FALSE(a.bounded);
  REQUIRE(a.failure);
  auto b = audit_frostman(CylinderMeasure::lebesgue(), TreeModel::full(), Semimeasure::geometric(Q(1), Q(1, 2)),
                          Order::linear(Q(1)), Q(1), 4);
  CHECK(b.ok());
  auto c = audit_frostman(CylinderMeasure::lebesgue(), TreeModel::full(), Semimeasure::table({{bs("0"), Q(3, 4)}}),
                          Order::linear(Q(1)), Q(1), 4);
  CHECK_FALSE(c.dominates);
}

TEST_CASE("maxflow_measure examples") {
  auto full = maxflow_measure(TreeModel::full(), Order::linear(Q(1)), Q(1), 6);
  CHECK(full.value.lo() == 1);
  REQUIRE(full.measure);
  for (const auto& s : strings_of_length(6)) CHECK(full.measure->mass(s) == Q(1, 64));

  auto eo = maxflow_measure(TreeModel::every_other(), Order::linear(Q(1)), Q(1), 4);
  CHECK(eo.value.lo() == Q(1, 4));
  CHECK_FALSE(eo.measure);

  auto nat = maxflow_measure(TreeModel::every_other(), Order::ceil(Q(1, 2)), Q(1), 6);
  CHECK(nat.value.lo() == 1);
  REQUIRE(nat.measure);
  auto want = natural_measure(TreeModel::every_other(), 6);
  for (const auto& s : oracle::all_strings_upto(6)) CHECK(nat.measure->mass(s) == want.mass(s));
}

TEST_CASE("flow value equals the exhaustive min-cut") {
  oracle::Rng rng(43);
  const Rational gammas[] = {Q(1), Q(2), Q(5, 2)};
  for (int i = 0; i < 80; ++i) {
    unsigned N = 1 + i % 5;
    auto T = TreeModel::explicit_nodes(oracle::random_tree_nodes(rng, N, 0.7, 0.05));
    if (T.expand(N).level(N).empty()) continue;
    for (const auto& h : {Order::linear(Q(1)), Order::ceil(Q(1, 2)), Order::ceil(Q(2, 3))}) {
      const Rational& gamma = gammas[i % 3];
      Rational cut = oracle::brute_method1(T, N, [&](unsigned n) { return oracle::cap(gamma, h, n); });
      for (Exec e : {Exec::Serial, Exec::Parallel}) {
        auto f = maxflow_measure(T, h, gamma, N, {}, e);
        CHECK(f.cut.lo() == cut);
        CHECK(f.value.lo() == (cut < 1 ? cut : Q(1)));
        CHECK(f.measure.has_value() == (cut >= 1));
        if (!f.measure) continue;
        auto tree = oracle::tree_set(T, N);
        CHECK_FALSE(validate_probability(table_of(*f.measure, N)));
        for (const auto& s : oracle::all_strings_upto(N)) {
          Rational m = f.measure->mass(s);
          CHECK(m <= oracle::cap(gamma, h, s.length()));
          if (!tree.count(s)) CHECK(m == 0);
        }
      }
    }
  }
}

TEST_CASE("flow cut matches the Method-I certificate on deeper trees") {
  oracle::Rng rng(47);
  for (int i = 0; i < 20; ++i) {
    auto T = TreeModel::explicit_nodes(oracle::random_tree_nodes(rng, 12, 0.72, 0.0));
    auto f = maxflow_measure(T, Order::linear(Q(1, 2)), Q(1), 12);
    auto m = method1_value(T, Premeasure::hausdorff(Order::linear(Q(1, 2))), 12);
    CHECK(less_equal(f.cut, m.value) != Tri::False);
    CHECK(less_equal(m.value, f.cut) != Tri::False);
    CHECK(less_equal(m.certificate.weight, f.cut) != Tri::False);
    if (f.measure) {
      Rational through(0);
      for (const auto& a : m.certificate.antichain) through += f.measure->mass(a);
      CHECK(through == 1);
    }
  }
}

TEST_CASE("semimeasure_validate examples") {
  CHECK_FALSE(semimeasure_validate(Semimeasure::geometric(Q(1), Q(1, 4)), 10));
  oracle::Rng rng(53);
  for (int i = 0; i < 10; ++i)
    CHECK_FALSE(semimeasure_validate(Semimeasure::measure(measure_from_table(oracle::random_probability_table(rng, 6))), 10));
  auto bad = semimeasure_validate(Semimeasure::table({{bs(""), Q(1, 2)}, {bs("0"), Q(1, 2)}, {bs("1"), Q(1, 2)}}), 3);
  REQUIRE(bad);
  CHECK(bad->at == BitString());
  CHECK(semimeasure_validate(Semimeasure::geometric(Q(2), Q(1, 4)), 3));
  CHECK(semimeasure_validate(Semimeasure::geometric(Q(1), Q(3, 5)), 3));
}

TEST_CASE("machine preimage examples") {
  for (const auto& s : strs({"", "0", "011", "10101"}))
    CHECK(machine_preimage_semimeasure(MonotoneMachine::identity(8), s) == pow2_exact(-static_cast<long>(s.length())));
  CHECK(machine_preimage_semimeasure(MonotoneMachine::bit_doubling(4), bs("00")) == Q(1, 2));
  CHECK(MonotoneMachine::bit_doubling(4).preimage(bs("00")) == strs({"0"}));
  CHECK(machine_preimage_semimeasure(MonotoneMachine::bit_doubling(4), bs("01")) == 0);
  CHECK(machine_preimage_semimeasure(MonotoneMachine(), bs("0")) == 0);
  CHECK_THROWS_WITH_AS(MonotoneMachine::from_pairs({{bs("0"), bs("00")}, {bs("01"), bs("1")}}),
                       doctest::Contains("inconsistent machine table"), DomainError);
  CHECK_THROWS_AS(MonotoneMachine::from_pairs({{bs("0"), bs("00")}, {bs("01"), bs("0")}}), DomainError);
}

TEST_CASE("machine preimages agree with input enumeration and form semimeasures") {
  oracle::Rng rng(59);
  for (int i = 0; i < 60; ++i) {
    auto pairs = oracle::random_machine(rng, 5);
    auto M = MonotoneMachine::from_pairs(pairs);
    for (const auto& s : oracle::all_strings_upto(5)) {
      CHECK(machine_preimage_semimeasure(M, s) == oracle::brute_preimage(pairs, s, 5));
      CHECK(oracle::is_prefix_free(M.preimage(s)));
    }
    CHECK_FALSE(semimeasure_validate(Semimeasure::machine(M), 8));
  }
}

TEST_CASE("complexity_tree examples") {
  auto full = tree_expand(TreeModel::full(), 5);
  CHECK(tree_expand(complexity_tree(MonotoneMachine::identity(8), Order::linear(Q(1)), Q(1), 5), 5) == full);
  CHECK(tree_expand(complexity_tree(MonotoneMachine::identity(8), Order::linear(Q(1, 2)), Q(1), 5), 5) == full);
  auto d = tree_expand(complexity_tree(MonotoneMachine::bit_doubling(4), Order::linear(Q(1)), Q(1), 2), 2).nodes();
  CHECK(std::set<BitString>(d.begin(), d.end()) == std::set<BitString>{bs(""), bs("0"), bs("1"), bs("01"), bs("10")});
}

TEST_CASE("complexity_tree is the set cut out by the preimage bound") {
  oracle::Rng rng(61);
  for (int i = 0; i < 30; ++i) {
    auto pairs = oracle::random_machine(rng, 5);
    auto M = MonotoneMachine::from_pairs(pairs);
    Order h = i % 2 ? Order::linear(Q(1)) : Order::ceil(Q(1, 2));
    Rational c = i % 3 ? Q(1) : Q(2);
    auto T = complexity_tree(M, h, c, 5);
    std::set<BitString> want;
    for (const auto& s : oracle::all_strings_upto(5)) {
      bool ok = true;
      for (unsigned n = 0; n <= s.length(); ++n)
        ok = ok && oracle::brute_preimage(pairs, s.prefix(n), 5) <= oracle::cap(c, h, n);
      if (ok) want.insert(s);
    }
    if (want.empty()) continue;
    CHECK(oracle::tree_set(T, 5) == want);
  }
}

TEST_CASE("mass_distribution_bound examples") {
  auto a = mass_distribution_bound(CylinderMeasure::lebesgue(), TreeModel::full(), Q(1), Q(1), 8);
  CHECK(a.bound == 1);
  CHECK(a.dp_value.lo() == 1);
  CHECK(a.holds);
  auto b = mass_distribution_bound(CylinderMeasure::natural_every_other(), TreeModel::every_other(), Q(1, 2), Q(1), 8);
  CHECK(b.bound == 1);
  CHECK(b.dp_value.lo() == 1);
  auto c = mass_distribution_bound(CylinderMeasure::lebesgue(), TreeModel::full(), Q(1), Q(2), 8);
  CHECK(c.bound == Q(1, 2));
  CHECK(less_equal(Value(c.bound), c.dp_value) == Tri::True);
  CHECK_THROWS_WITH_AS(mass_distribution_bound(CylinderMeasure::dirac(0), TreeModel::full(), Q(1), Q(1), 4),
                       doctest::Contains("mass bound violated"), DomainError);
}

TEST_CASE("mass distribution holds whenever its audit passes") {
  oracle::Rng rng(67);
  int passed = 0;
  for (int i = 0; i < 100; ++i) {
    auto T = TreeModel::explicit_nodes(oracle::random_tree_nodes(rng, 6, 0.75, 0.0));
    auto m = natural_measure(T, 6);
    for (Q s : {Q(1, 4), Q(1, 2), Q(1)})
      for (Q c : {Q(1), Q(2), Q(4)}) {
        try {
          auto r = mass_distribution_bound(m, T, s, c, 6);
          CHECK(r.holds);
          CHECK(less_equal(Value(Rational(1 / c)), r.dp_value) == Tri::True);
          ++passed;
        } catch (const DomainError&) {
        }
      }
  }
  CHECK(passed > 50);
}
