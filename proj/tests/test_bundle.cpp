#include "fellcheck/bundle.hpp"
#include "fellcheck/demos.hpp"

#include <doctest.h>

using namespace fellcheck;

namespace {

Mat unit(int n, int i, int j) {
  Mat e = Mat::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

const InvariantCheck& check_named(const BundleReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  FAIL("no check named " << name);
  return r.checks.front();
}

// Z/2 with A_e = diagonal of M_2 and A_1 = C e_11: graded and *-closed,
// but A_1 A_1^* = C e_11 is a proper ideal of A_e.
RealizedFellBundle saturation_broken() {
  return make_bundle(group_as_groupoid(cyclic_group(2)), {2}, {{unit(2, 0, 0), unit(2, 1, 1)}, {unit(2, 1, 1)}});
}

}  // namespace

TEST_CASE("every demo bundle is a valid Fell bundle") {
  for (const auto& name : demo_names()) {
    CAPTURE(name);
    const RealizedFellBundle b = demo_bundle(name);
    const BundleReport r = validate_bundle(b);
    CHECK(r.ok());
    CHECK(r.first_failure() == nullptr);
  }
  CHECK(demo_bundle("cyclic3").total_dim() == 9);
  CHECK(demo_bundle("swap").total_dim() == 4);
  CHECK(demo_bundle("pauli").total_dim() == 4);
  CHECK(demo_bundle("z2line").total_dim() == 2);
  CHECK(demo_bundle("trivial").total_dim() == 1);
  CHECK_THROWS(demo_bundle("nonesuch"));
}

TEST_CASE("broken saturation is caught and nothing else is") {
  const BundleReport r = validate_bundle(saturation_broken());
  CHECK_FALSE(r.ok());
  REQUIRE(r.first_failure() != nullptr);
  CHECK(r.first_failure()->name == "saturation");
  for (const auto& c : r.checks)
    if (c.name != "saturation") CHECK(c.passed);
  CHECK_THROWS_AS(require_valid(saturation_broken(), "broken"), BundleError);
}

TEST_CASE("grading, involution and support failures") {
  const FiniteGroupoid z2 = group_as_groupoid(cyclic_group(2));
  SUBCASE("grading") {
    // A_1 = C a with a self-adjoint, but a^2 is not a scalar.
    const Mat a = unit(2, 0, 1) + unit(2, 1, 0) + unit(2, 0, 0);
    const BundleReport r = validate_bundle(make_bundle(z2, {2}, {{Mat::Identity(2, 2)}, {a}}));
    CHECK_FALSE(check_named(r, "grading").passed);
  }
  SUBCASE("involution") {
    const BundleReport r = validate_bundle(make_bundle(z2, {2}, {{Mat::Identity(2, 2)}, {unit(2, 0, 1)}}));
    CHECK_FALSE(check_named(r, "involution").passed);
  }
  SUBCASE("block support") {
    const FiniteGroupoid e = pair_groupoid(2);
    std::vector<std::vector<Mat>> sets{{unit(2, 0, 0)}, {unit(2, 1, 0)}, {unit(2, 1, 0)}, {unit(2, 1, 1)}};
    const BundleReport r = validate_bundle(make_bundle(e, {1, 1}, sets));
    CHECK_FALSE(check_named(r, "block support").passed);
  }
  SUBCASE("size mismatch is a construction error") {
    CHECK_THROWS_AS(make_bundle(z2, {2}, {{Mat::Identity(3, 3)}, {}}), BundleError);
    CHECK_THROWS_AS(make_bundle(z2, {2, 1}, {{Mat::Identity(3, 3)}, {}}), BundleError);
  }
}

TEST_CASE("cocycle line bundles") {
  const FiniteGroup k = klein_group();
  CHECK(cocycle_defect(k, pauli_cocycle) < 1e-15);
  CHECK(cocycle_defect(k, [](int x, int y) { return x == 1 && y == 2 ? cplx(-1.0) : cplx(1.0); }) > 0.5);
  CHECK_THROWS_AS(cocycle_line_bundle(k, [](int x, int y) { return x == 1 && y == 2 ? cplx(-1.0) : cplx(1.0); }),
                  BundleError);
  const RealizedFellBundle p = cocycle_line_bundle(k, pauli_cocycle);
  for (int s = 0; s < 4; ++s) {
    const Mat u = 2.0 * p.fibers[s].basis(0);
    CHECK((u * u.adjoint() - Mat::Identity(4, 4)).norm() < 1e-12);
  }
}

TEST_CASE("transformation bundle fibers") {
  const RealizedFellBundle a = demo_bundle("swap");
  const RealizedFellBundle t = transformation_bundle(a);
  const int n = 2, na = a.ambient_dim();
  const FiniteGroup g = cyclic_group(2);
  CHECK(validate_bundle(t).ok());
  CHECK(t.ambient_dim() == n * na);
  CHECK(t.total_dim() == n * a.total_dim());
  for (int s = 0; s < n; ++s)
    for (int u = 0; u < n; ++u)
      for (int p = 0; p < a.fiber_dim(s); ++p)
        CHECK(t.fibers[transformation_arrow(n, s, u)].contains(kron(unit(n, g.mul(s, u), u), a.fibers[s].basis(p))));
}

TEST_CASE("right translation on the transformation bundle is a unitary action") {
  for (const char* name : {"z2line", "cyclic3", "pauli"}) {
    CAPTURE(name);
    const RealizedFellBundle a = demo_bundle(name);
    const RealizedFellBundle t = transformation_bundle(a);
    const UnitaryAction w = rt_action_on_transformation_bundle(a);
    CHECK(validate_unitary_action(t, w).ok());
    const RealizedFellBundle sd = groupoid_semidirect_bundle(t, w);
    CHECK(validate_bundle(sd).ok());
    const int n = w.group().order();
    CHECK(sd.total_dim() == n * n * a.total_dim());
  }
}

TEST_CASE("a wrong implementing unitary is rejected") {
  const RealizedFellBundle a = demo_bundle("cyclic3");
  const RealizedFellBundle t = transformation_bundle(a);
  UnitaryAction w = rt_action_on_transformation_bundle(a);
  std::swap(w.w[1], w.w[2]);
  CHECK_FALSE(validate_unitary_action(t, w).ok());
  CHECK_THROWS(groupoid_semidirect_bundle(t, w));
}

TEST_CASE("iterated and product bundles share fibers") {
  // ((r,s),t) of (G x G) x_rt G and (r, (rs, st)) of G x E carry the same
  // fiber E_{rs,st} (x) A_r.
  const RealizedFellBundle a = demo_bundle("pauli");
  const FiniteGroup g = klein_group();
  const int n = 4;
  const RealizedFellBundle sd =
      groupoid_semidirect_bundle(transformation_bundle(a), rt_action_on_transformation_bundle(a));
  const RealizedFellBundle pr = product_bundle(a, pair_groupoid(n));
  CHECK(validate_bundle(pr).ok());
  REQUIRE(sd.ambient_dim() == pr.ambient_dim());
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) {
        const int x = transformation_arrow(n, r, s) * n + t;
        const int y = r * (n * n) + g.mul(r, s) * n + g.mul(s, t);
        CHECK(same_subspace(sd.fibers[x], pr.fibers[y]));
        CHECK(sd.fibers[x].contains(kron(unit(n, g.mul(r, s), g.mul(s, t)), a.fibers[r].basis(0))));
      }
}

TEST_CASE("pair flip example") {
  const SemidirectExample ex = pair_flip_example();
  CHECK(validate_bundle(ex.bundle).ok());
  CHECK(validate_unitary_action(ex.bundle, ex.action).ok());
  CHECK(ex.action.beta.apply(1, 0) == 3);  // unit (0,0) goes to (1,1)
  const RealizedFellBundle sd = groupoid_semidirect_bundle(ex.bundle, ex.action);
  CHECK(validate_bundle(sd).ok());
  CHECK(sd.total_dim() == 8);
}

TEST_CASE("pullback needs a base group") {
  const SemidirectExample ex = pair_flip_example();
  CHECK_THROWS(transformation_bundle(ex.bundle));
}

TEST_CASE("swap bundle fibers: diagonal over e, antidiagonal over g") {
  const RealizedFellBundle b = demo_bundle("swap");
  const Mat rho_g = cyclic_shift_unitaries(2)[1];  // right translation on l^2(Z/2)
  CHECK(b.fibers[0].dim() == 2);
  CHECK(b.fibers[1].dim() == 2);
  for (int i = 0; i < 2; ++i) {
    CHECK(b.fibers[0].contains(kron(unit(2, i, i), Mat::Identity(2, 2))));
    CHECK(b.fibers[1].contains(kron(unit(2, 1 - i, i), rho_g)));
  }
}

TEST_CASE("pullback along the constant map to the unit") {
  const RealizedFellBundle a = demo_bundle("swap");
  const FiniteGroupoid e = pair_groupoid(2);
  const RealizedFellBundle p = pullback_bundle(a, e, make_hom(e, a.base, {0, 0, 0, 0}));
  CHECK(validate_bundle(p).ok());
  for (int x = 0; x < 4; ++x) {
    std::vector<Mat> want;
    for (int i = 0; i < a.fibers[0].dim(); ++i) want.push_back(kron(unit(2, x / 2, x % 2), a.fibers[0].basis(i)));
    CHECK(same_subspace(p.fibers[x], orthonormalize(p.ambient_dim(), want)));
  }
}

TEST_CASE("transformation bundle involution: fiber(g,e)^* = fiber(g,g)") {
  const RealizedFellBundle t = transformation_bundle(demo_bundle("z2line"));
  const Subspace& ge = t.fibers[transformation_arrow(2, 1, 0)];
  std::vector<Mat> adj;
  for (int i = 0; i < ge.dim(); ++i) adj.push_back(ge.basis(i).adjoint());
  CHECK(same_subspace(orthonormalize(t.ambient_dim(), adj), t.fibers[transformation_arrow(2, 1, 1)]));
}

TEST_CASE("right translation moves fiber (s,e) onto (s,g) over Z/2") {
  const RealizedFellBundle a = demo_bundle("z2line");
  const RealizedFellBundle t = transformation_bundle(a);
  const UnitaryAction w = rt_action_on_transformation_bundle(a);
  CHECK((w.w[1] * w.w[1] - Mat::Identity(t.ambient_dim(), t.ambient_dim())).norm() < 1e-14);
  CHECK((w.w[0] - Mat::Identity(t.ambient_dim(), t.ambient_dim())).norm() == 0.0);
  for (int s = 0; s < 2; ++s) {
    std::vector<Mat> img;
    const Subspace& f = t.fibers[transformation_arrow(2, s, 0)];
    for (int i = 0; i < f.dim(); ++i) img.push_back(w.alpha(1, f.basis(i)));
    CHECK(projector_distance(orthonormalize(t.ambient_dim(), img), t.fibers[transformation_arrow(2, s, 1)]) < 1e-12);
  }
}

TEST_CASE("iterated bundle over Z/2: 8 fibers, involution on a sample fiber") {
  const RealizedFellBundle a = demo_bundle("z2line");
  const RealizedFellBundle sd =
      groupoid_semidirect_bundle(transformation_bundle(a), rt_action_on_transformation_bundle(a));
  CHECK(sd.base.arrow_count() == 8);
  CHECK(sd.total_dim() == 8);
  const int x = transformation_arrow(2, 1, 0) * 2 + 1;
  const Subspace& f = sd.fibers[x];
  for (int i = 0; i < f.dim(); ++i) CHECK(sd.fibers[sd.base.inverse(x)].contains(f.basis(i).adjoint()));
}

TEST_CASE("constructions preserve the total fiber dimension") {
  const RealizedFellBundle a = demo_bundle("cyclic3");
  const FiniteGroupoid g = a.base;
  std::vector<int> id(static_cast<size_t>(g.arrow_count()));
  for (int x = 0; x < g.arrow_count(); ++x) id[x] = x;
  CHECK(pullback_bundle(a, g, make_hom(g, g, id)).total_dim() == a.total_dim());
  const RealizedFellBundle t = transformation_bundle(a);
  for (int s = 0; s < 3; ++s)
    for (int u = 0; u < 3; ++u) CHECK(t.fiber_dim(transformation_arrow(3, s, u)) == a.fiber_dim(s));
}
