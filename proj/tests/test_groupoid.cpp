#include "fellcheck/groupoid.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace fellcheck;

TEST_CASE("finite groups") {
  const FiniteGroup z3 = cyclic_group(3);
  CHECK(z3.order() == 3);
  CHECK(z3.mul(2, 2) == 1);
  CHECK(z3.inv(1) == 2);
  CHECK(z3.is_abelian());
  const FiniteGroup s3 = symmetric_group3();
  CHECK(s3.order() == 6);
  CHECK_FALSE(s3.is_abelian());
  for (int a = 0; a < 6; ++a) CHECK(s3.mul(a, s3.inv(a)) == 0);
  const FiniteGroup k = klein_group();
  for (int a = 0; a < 4; ++a) CHECK(k.mul(a, a) == 0);
  const FiniteGroup p = direct_product(cyclic_group(2), cyclic_group(3));
  CHECK(p.order() == 6);
  CHECK(p.mul(1 * 3 + 1, 1 * 3 + 2) == 0 * 3 + 0);
  CHECK(FiniteGroup::modular(3) == 1.0);
}

TEST_CASE("invalid Cayley tables are rejected") {
  CHECK_THROWS_AS(FiniteGroup({{0, 1}, {1, 1}}), GroupoidError);       // not a Latin square
  CHECK_THROWS_AS(FiniteGroup({{1, 0}, {0, 1}}), GroupoidError);       // 0 is not the identity
  CHECK_THROWS_AS(FiniteGroup({{0, 1, 2}, {1, 0, 2}}), GroupoidError); // not square
  // Latin square with identity 0 that is not associative.
  CHECK_THROWS_AS(FiniteGroup({{0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}}),
                  GroupoidError);
}

TEST_CASE("transformation groupoid of G") {
  const FiniteGroup g = symmetric_group3();
  const FiniteGroupoid t = transformation_groupoid(g);
  const int n = g.order();
  CHECK(t.arrow_count() == n * n);
  CHECK(t.unit_count() == n);
  for (int s = 0; s < n; ++s)
    for (int u = 0; u < n; ++u) {
      const int x = transformation_arrow(n, s, u);
      CHECK(t.range(x) == transformation_arrow(n, 0, g.mul(s, u)));
      CHECK(t.source(x) == transformation_arrow(n, 0, u));
      CHECK(t.inverse(x) == transformation_arrow(n, g.inv(s), g.mul(s, u)));
      for (int r = 0; r < n; ++r) {
        const int y = transformation_arrow(n, r, g.mul(s, u));
        CHECK(t.compose(y, x) == transformation_arrow(n, g.mul(r, s), u));
      }
    }
  CHECK(check_left_invariance(t));
}

TEST_CASE("pair and product groupoids") {
  const FiniteGroupoid e = pair_groupoid(3);
  CHECK(e.arrow_count() == 9);
  CHECK(e.unit_count() == 3);
  CHECK(e.compose(0 * 3 + 1, 1 * 3 + 2) == 0 * 3 + 2);
  CHECK(e.compose(0 * 3 + 1, 0 * 3 + 2) == kNoArrow);
  const FiniteGroupoid g = group_as_groupoid(cyclic_group(2));
  const FiniteGroupoid p = product_groupoid(g, e);
  CHECK(p.arrow_count() == 18);
  CHECK(p.unit_count() == 3);
  CHECK(p.compose(1 * 9 + 1, 1 * 9 + 5) == 0 * 9 + 2);
  CHECK(check_left_invariance(p));
  CHECK(groupoid_group(g).order() == 2);
  CHECK_THROWS_AS(groupoid_group(e), GroupoidError);
}

TEST_CASE("groupoid axioms are enforced") {
  // Two units with a single arrow between them and no inverse.
  CHECK_THROWS_AS(FiniteGroupoid({0, 1, 0}, {0, 1, 1}, {0, 1, 2}, std::vector<int>(9, kNoArrow)), GroupoidError);
}

TEST_CASE("right translation is an action with invariant Haar system") {
  for (int n : {2, 3}) {
    const FiniteGroup g = cyclic_group(n);
    const FiniteGroupoid t = transformation_groupoid(g);
    const GroupoidAction rt = rt_action(g);
    CHECK_FALSE(action_defect(t, rt).has_value());
    CHECK(check_haar_invariance(t, rt));
    CHECK(oracle::haar_invariant_by_counting(t, rt));
  }
  const FiniteGroup s3 = symmetric_group3();
  const FiniteGroupoid t = transformation_groupoid(s3);
  const GroupoidAction rt = rt_action(s3);
  CHECK_FALSE(action_defect(t, rt).has_value());
  for (int r = 0; r < 6; ++r)
    for (int s = 0; s < 6; ++s)
      for (int u = 0; u < 6; ++u) CHECK(rt.apply(r, s * 6 + u) == s * 6 + s3.mul(u, s3.inv(r)));
}

TEST_CASE("non-automorphisms are rejected and fail the Haar check") {
  const FiniteGroup g = cyclic_group(2);
  const FiniteGroupoid t = transformation_groupoid(g);
  // Swap the arrow (1,0) with the unit (0,0).
  GroupoidAction bad{g, {{0, 1, 2, 3}, {2, 1, 0, 3}}};
  CHECK(action_defect(t, bad).has_value());
  CHECK_THROWS_AS(make_action(t, g, bad.beta), GroupoidError);
  CHECK_FALSE(check_haar_invariance(t, bad));
  CHECK_FALSE(oracle::haar_invariant_by_counting(t, bad));
}

TEST_CASE("semidirect groupoid multiplication") {
  const FiniteGroup g = cyclic_group(3);
  const FiniteGroupoid t = transformation_groupoid(g);
  const GroupoidAction rt = rt_action(g);
  const FiniteGroupoid sd = semidirect_groupoid(t, rt);
  const int nk = 3;
  CHECK(sd.arrow_count() == 27);
  CHECK(sd.unit_count() == 3);
  CHECK(check_left_invariance(sd));
  for (int x = 0; x < t.arrow_count(); ++x)
    for (int a = 0; a < nk; ++a)
      for (int y = 0; y < t.arrow_count(); ++y)
        for (int b = 0; b < nk; ++b) {
          const int bx = rt.apply(a, y);
          const int want = t.composable(x, bx) ? t.compose(x, bx) * nk + g.mul(a, b) : kNoArrow;
          CHECK(sd.compose(x * nk + a, y * nk + b) == want);
        }
  for (int x = 0; x < t.arrow_count(); ++x)
    for (int a = 0; a < nk; ++a)
      CHECK(sd.inverse(x * nk + a) == rt.apply(g.inv(a), t.inverse(x)) * nk + g.inv(a));
}

TEST_CASE("groupoid homomorphisms") {
  const FiniteGroup g = cyclic_group(3);
  const FiniteGroupoid t = transformation_groupoid(g);
  const FiniteGroupoid gg = group_as_groupoid(g);
  std::vector<int> proj(9);
  for (int x = 0; x < 9; ++x) proj[x] = x / 3;
  CHECK_FALSE(groupoid_hom_defect(t, gg, {proj}).has_value());
  std::vector<int> bad(9);
  for (int x = 0; x < 9; ++x) bad[x] = x % 3;
  CHECK(groupoid_hom_defect(t, gg, {bad}).has_value());
  CHECK_THROWS_AS(make_hom(t, gg, bad), GroupoidError);
}

TEST_CASE("Z/3 as a groupoid is left invariant") {
  CHECK(check_left_invariance(group_as_groupoid(cyclic_group(3))));
  CHECK(check_left_invariance(transformation_groupoid(cyclic_group(3))));
}

TEST_CASE("transformation groupoid of Z/2: (g,g)(g,e) = (e,e)") {
  const FiniteGroupoid t = transformation_groupoid(cyclic_group(2));
  CHECK(t.arrow_count() == 4);
  CHECK(t.unit_count() == 2);
  CHECK(t.compose(transformation_arrow(2, 1, 1), transformation_arrow(2, 1, 0)) == transformation_arrow(2, 0, 0));
}

TEST_CASE("all composable triples associate on small constructions") {
  const FiniteGroup z3 = cyclic_group(3);
  for (const FiniteGroupoid& g : {transformation_groupoid(z3), product_groupoid(group_as_groupoid(z3), pair_groupoid(2)),
                                  semidirect_groupoid(transformation_groupoid(cyclic_group(2)), rt_action(cyclic_group(2)))}) {
    int triples = 0;
    for (int x = 0; x < g.arrow_count(); ++x)
      for (int y = 0; y < g.arrow_count(); ++y)
        for (int z = 0; z < g.arrow_count(); ++z) {
          if (!g.composable(x, y) || !g.composable(y, z)) continue;
          ++triples;
          CHECK(g.compose(g.compose(x, y), z) == g.compose(x, g.compose(y, z)));
        }
    CHECK(triples == g.arrow_count() * static_cast<int>(g.range_fiber(g.units()[0]).size()) *
                         static_cast<int>(g.range_fiber(g.units()[0]).size()));
  }
}

TEST_CASE("right translation on Z/2 x Z/2 gives 8 arrows and 2 units") {
  const FiniteGroup z2 = cyclic_group(2);
  const FiniteGroupoid sd = semidirect_groupoid(transformation_groupoid(z2), rt_action(z2));
  CHECK(sd.arrow_count() == 8);
  CHECK(sd.unit_count() == 2);
  CHECK(check_left_invariance(sd));
}

TEST_CASE("pair groupoid on 3 points is transitive with trivial isotropy") {
  const FiniteGroupoid e = pair_groupoid(3);
  for (int u : e.units()) CHECK(e.range_fiber(u).size() == 3);
  for (int u : e.units())
    for (int v : e.units()) {
      int between = 0, loops = 0;
      for (int x = 0; x < e.arrow_count(); ++x) {
        between += e.range(x) == u && e.source(x) == v;
        loops += e.range(x) == u && e.source(x) == u;
      }
      CHECK(between == 1);
      CHECK(loops == 1);
    }
}
