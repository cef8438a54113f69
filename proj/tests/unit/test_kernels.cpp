#include "common.hpp"

namespace {

std::vector<std::vector<Value>> random_weights(oracle::Rng& rng, const LayeredTree& L, bool intervals) {
  std::uniform_int_distribution<int> num(0, 12);
  std::vector<std::vector<Value>> w(L.depth + 1);
  for (unsigned d = 0; d <= L.depth; ++d)
    for (std::size_t i = 0; i < L.level_size(d); ++i) {
      Q lo(num(rng), 8 << (d % 4));
      lo.canonicalize();
      if (intervals && num(rng) % 3 == 0) {
        Q hi = lo + Q(1, 1024);
        w[d].push_back(Value::interval(lo, hi));
      } else {
        w[d].push_back(lo);
      }
    }
  return w;
}

void same_table(const CutTable& a, const CutTable& b) {
  REQUIRE(a.best.size() == b.best.size());
  for (std::size_t d = 0; d < a.best.size(); ++d) {
    REQUIRE(a.best[d].size() == b.best[d].size());
    for (std::size_t i = 0; i < a.best[d].size(); ++i) CHECK(a.best[d][i].same_as(b.best[d][i]));
  }
  CHECK(a.cut == b.cut);
  CHECK(a.undecided == b.undecided);
}

}  // namespace

TEST_CASE("mincut_levels gives the same table serially and in parallel") {
  oracle::Rng rng(211);
  for (int i = 0; i < 60; ++i) {
    unsigned N = 3 + i % 9;
    auto T = TreeModel::explicit_nodes(oracle::random_tree_nodes(rng, N, 0.8, 0.05));
    auto L = T.layered(N, false);
    auto w = random_weights(rng, L, i % 2 == 1);
    same_table(mincut_levels(L, w, Exec::Serial), mincut_levels(L, w, Exec::Parallel));
  }
  for (const auto& T : {TreeModel::full(), TreeModel::every_other(), TreeModel::periodic_branching(3)}) {
    auto L = T.layered(16, false);
    auto w = random_weights(rng, L, true);
    same_table(mincut_levels(L, w, Exec::Serial), mincut_levels(L, w, Exec::Parallel));
  }
}

TEST_CASE("mincut_levels follows its recurrence") {
  auto T = TreeModel::explicit_nodes(strs({"", "0", "1", "00", "01", "10"}));
  auto L = T.layered(2, false);
  REQUIRE(L.level_size(2) == 3);
  std::vector<std::vector<Value>> w{{Q(1)}, {Q(1, 2), Q(1, 8)}, {Q(1, 8), Q(1, 8), Q(1, 4)}};
  auto c = mincut_levels(L, w, Exec::Serial);
  CHECK(c.best[1][0].lo() == Q(1, 4));
  CHECK(c.best[1][1].lo() == Q(1, 8));
  CHECK(c.best[0][0].lo() == Q(3, 8));
  CHECK_FALSE(c.cut[0][0]);
  CHECK_FALSE(c.undecided);
  // a tie cuts at the shallower node
  w[1][0] = Q(1, 4);
  c = mincut_levels(L, w, Exec::Serial);
  CHECK(c.cut[1][0]);
}

TEST_CASE("split_products matches direct sibling sums") {
  oracle::Rng rng(223);
  for (int i = 0; i < 40; ++i) {
    auto m = measure_from_table(oracle::random_probability_table(rng, 6));
    auto s = split_products(m, 6, Exec::Serial), p = split_products(m, 6, Exec::Parallel);
    CHECK(s.Q == p.Q);
    CHECK(s.active == p.active);
    CHECK(s.squares == p.squares);
    REQUIRE(s.Q.size() == 6);
    for (unsigned n = 0; n < 6; ++n) {
      Q direct(0);
      for (const auto& x : strings_of_length(n)) direct += 2 * m.mass(x.child(0)) * m.mass(x.child(1));
      CHECK(s.Q[n] == direct);
    }
    Q sq(0), act(0);
    for (const auto& x : strings_of_length(6)) sq += m.mass(x) * m.mass(x);
    for (const auto& v : s.squares) act += v;
    CHECK(act == sq);
  }
  for (const auto& m : {CylinderMeasure::lebesgue(), CylinderMeasure::natural_every_other(),
                        CylinderMeasure::bernoulli(Q(1, 3))}) {
    auto s = split_products(m, 40, Exec::Serial), p = split_products(m, 40, Exec::Parallel);
    CHECK(s.Q == p.Q);
    CHECK(s.squares == p.squares);
  }
  auto leb = split_products(CylinderMeasure::lebesgue(), 5, Exec::Parallel);
  for (unsigned n = 0; n < 5; ++n) CHECK(leb.Q[n] == pow2_exact(-static_cast<long>(n) - 1));
}
