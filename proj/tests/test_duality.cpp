#include "fellcheck/demos.hpp"
#include "fellcheck/duality.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace fellcheck;

namespace {

Mat unit(int n, int i, int j) {
  Mat e = Mat::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

Mat point_image(const SectionAlgebra& a, const Envelope& env, int x, const Mat& v) {
  Section f = zero_section(a.bundle());
  f.values[x] = v;
  return env.image(a.coordinates(f));
}

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

void check_pipeline(const RealizedFellBundle& a, const std::string& name) {
  const DualityReport r = verify_duality_pipeline(a, name);
  INFO(r.summary());
  CHECK(r.error.empty());
  CHECK(r.verdict);
  const int n = r.group_order, d = r.fiber_total;
  REQUIRE(r.ladder.size() == 8);
  const std::vector<int> want{d, n * d, n * d, n * n * d, n * n * d, n * n * d, n * n * d, n * n * d};
  for (size_t k = 0; k < want.size(); ++k) CHECK(r.ladder[k].dim == want[k]);
  for (const auto& m : r.maps) {
    CAPTURE(m.name);
    CHECK(m.certified);
    CHECK(m.rank == m.domain_dim);
    CHECK(m.rank == m.codomain_dim);
  }
  for (const auto& c : r.checks) {
    CAPTURE(c.name);
    CHECK(c.passed);
  }
}

}  // namespace

TEST_CASE("pipeline certifies small bundles") {
  for (const char* name : {"trivial", "z2line", "swap"}) check_pipeline(demo_bundle(name), name);
  check_pipeline(cyclic_line_bundle(3), "z3line");
}

TEST_CASE("lambda_r M_s rho_t is the matrix unit E_{rs,st}") {
  const FiniteGroup g = symmetric_group3();
  const GroupCStar c = group_cstar(g);
  for (int r = 0; r < 6; ++r)
    for (int s = 0; s < 6; ++s)
      for (int t = 0; t < 6; ++t)
        CHECK((c.lambda[r] * c.point_mass(s) * c.right_regular(t) - unit(6, g.mul(r, s), g.mul(s, t))).norm() < 1e-14);
}

TEST_CASE("double crossed product dimension from word expansion") {
  const CoactionStage c = make_coaction_stage(demo_bundle("z2line"));
  const auto shape = oracle::shape(c.dcp.generators);
  CHECK(shape.dim == 8);
  CHECK(c.dcp.carrier->dim() == 8);
  // (C^2 x| Z/2) x| Z/2 = M_2 (x) C^2 = M_2 + M_2.
  CHECK(shape.center == 2);
  CHECK(wedderburn_blocks(*c.dcp.carrier) == std::vector<int>{2, 2});
}

TEST_CASE("a theta built on (r, s^{-1}) is rejected") {
  // On Z/3 the inversion is visible; on groups of exponent 2 it would not be.
  const RealizedFellBundle a = cyclic_line_bundle(3);
  const CoactionStage c = make_coaction_stage(a);
  const SemidirectStage rt = make_rt_stage(a);
  const StarMap good = theta_iso(c, rt);
  CHECK(verify_isomorphism(good).is_isomorphism());
  CHECK(theta_equivariance_residual(c, rt, good) < 1e-12);

  const FiniteGroup& g = c.group;
  const int n = g.order();
  std::vector<std::pair<Mat, Mat>> pairs;
  for (size_t k = 0; k < c.ccp.labels.size(); ++k) {
    const int i = c.ccp.labels[k][0], s = g.inv(c.ccp.labels[k][1]);
    const int r = c.sections->arrow_of(i), p = c.sections->fiber_index(i);
    const Mat v = kron(unit(n, g.mul(r, s), s), a.fibers[r].basis(p));
    pairs.emplace_back(c.ccp.generators[k], point_image(*rt.base, rt.base_env, transformation_arrow(n, r, s), v));
  }
  const StarMap bad = define_map_on_span(c.ccp.carrier, rt.base_env.realization, pairs);
  const IsoReport rep = verify_isomorphism(bad);
  const bool equivariant = theta_equivariance_residual(c, rt, bad) <= kTol;
  CHECK_FALSE((rep.is_isomorphism() && equivariant));
}

TEST_CASE("Phi with s and t exchanged breaks the diagram") {
  const RealizedFellBundle a = cyclic_line_bundle(3);
  const CoactionStage c = make_coaction_stage(a);
  const SemidirectStage rt = make_rt_stage(a);
  const ProductStage p = make_product_stage(c);
  const StarMap big = big_theta_iso(c, rt);
  const StarMap psi = psi_iso(rt, p);
  const StarMap ups = upsilon_iso(c, p, omega_iso(c, p));
  const Mat lhs = compose(ups, compose(psi, big)).matrix;
  CHECK(max_abs(lhs - phi_canonical(c, p).matrix) < 1e-10);

  const GroupCStar& cg = c.coaction.group;
  std::vector<std::pair<Mat, Mat>> pairs;
  for (size_t m = 0; m < c.dcp.labels.size(); ++m) {
    const int i = c.dcp.labels[m][0], s = c.dcp.labels[m][1], t = c.dcp.labels[m][2];
    const int r = c.sections->arrow_of(i);
    pairs.emplace_back(c.dcp.generators[m], kron(c.env.generators[i], cg.lambda[r] * cg.point_mass(t) * cg.right_regular(s)));
  }
  const StarMap swapped = define_map_on_span(c.dcp.carrier, p.target, pairs);
  CHECK(max_abs(lhs - swapped.matrix) > 0.1);
}

TEST_CASE("sigma and tau for the pair-groupoid flip") {
  const SemidirectExample ex = pair_flip_example();
  const SemidirectStage s = make_semidirect_stage(ex.bundle, ex.action);
  CHECK(s.acp.carrier->dim() == 8);
  CHECK(s.sd_env.realization->dim() == 8);
  const StarMap sigma = sigma_iso(s), tau = tau_map(s);
  CHECK(verify_isomorphism(sigma).is_isomorphism());
  CHECK(verify_isomorphism(tau).is_isomorphism());
  CHECK(max_abs(compose(tau, sigma).matrix - Mat::Identity(8, 8)) < 1e-9);
  CHECK(max_abs(compose(sigma, tau).matrix - Mat::Identity(8, 8)) < 1e-9);
  // M_2 x| Z/2 with an inner flip is M_2 (x) C^2.
  CHECK(wedderburn_blocks(*s.acp.carrier) == std::vector<int>{2, 2});
  CHECK(oracle::shape(s.acp.generators).center == 2);
}

TEST_CASE("pipeline reports invalid input instead of throwing") {
  SUBCASE("not over a group") {
    const DualityReport r = verify_duality_pipeline(pair_flip_example().bundle, "pair");
    CHECK_FALSE(r.verdict);
    CHECK_FALSE(r.error.empty());
  }
  SUBCASE("saturation broken") {
    const RealizedFellBundle b =
        make_bundle(group_as_groupoid(cyclic_group(2)), {2}, {{unit(2, 0, 0), unit(2, 1, 1)}, {unit(2, 1, 1)}});
    const DualityReport r = verify_duality_pipeline(b, "broken");
    CHECK_FALSE(r.verdict);
    REQUIRE(r.check("bundle invariants") != nullptr);
    CHECK_FALSE(r.check("bundle invariants")->passed);
    CHECK(r.error.find("saturation") != std::string::npos);
  }
}

TEST_CASE("report lookup and summary") {
  const DualityReport r = verify_duality_pipeline(demo_bundle("z2line"), "z2line");
  REQUIRE(r.map("theta") != nullptr);
  CHECK(r.map("nonesuch") == nullptr);
  REQUIRE(r.check("theta equivariance") != nullptr);
  const std::string s = r.summary();
  CHECK(s.find("verdict: PASS") != std::string::npos);
  CHECK(s.find("ms)") == std::string::npos);
  CHECK(r.summary(true).find("ms)") != std::string::npos);
}

TEST_CASE("stage dimensions and canonical maps on the Z/2 line bundle") {
  const RealizedFellBundle a = demo_bundle("z2line");
  const CoactionStage c = make_coaction_stage(a);
  const SemidirectStage rt = make_rt_stage(a);
  const ProductStage p = make_product_stage(c);

  const StarMap theta = theta_iso(c, rt);
  CHECK(theta.domain->dim() == 4);
  CHECK(theta.codomain->dim() == 4);
  CHECK(theta.hom_residual <= 1e-9);
  // A x| Z/2 = C(Z/2) x| Z/2 = M_2.
  CHECK(wedderburn_blocks(*c.ccp.carrier) == std::vector<int>{2});
  CHECK(theta_equivariance_residual(c, rt, theta) <= 1e-9);

  const StarMap sigma = sigma_iso(rt);
  CHECK(sigma.domain->dim() == 8);
  CHECK(sigma.codomain->dim() == 8);
  CHECK(sigma.hom_residual <= 1e-9);

  const StarMap big = big_theta_iso(c, rt);
  CHECK(verify_isomorphism(big).is_isomorphism());
  CHECK(c.dcp.labels.size() == 8);  // generator triples (i, s, t): D |G|^2
  CHECK(max_abs(compose(sigma, theta_cross(c, rt, theta)).matrix - big.matrix) < 1e-9);

  double defect = 1.0;
  const StarMap psi = psi_iso(rt, p, &defect);
  CHECK(defect < 1e-12);
  CHECK(verify_isomorphism(psi).is_isomorphism());
  CHECK(psi.domain->dim() == 8);

  const StarMap te = tau_pair(p);
  CHECK(verify_isomorphism(te).is_isomorphism());
  CHECK(center_dimension(*p.pair_env.realization) == 1);
  const StarMap omega = omega_iso(c, p);
  CHECK(omega.domain->dim() == 8);
  CHECK(omega.codomain->dim() == 2 * 4);
  CHECK(verify_isomorphism(omega).is_isomorphism());
  CHECK(p.target->dim() == 8);
  CHECK(wedderburn_blocks(*p.target) == std::vector<int>{2, 2});
  CHECK(upsilon_formula_residual(c, p, upsilon_iso(c, p, omega)) < 1e-9);

  const StarMap phi = phi_canonical(c, p);
  const IsoReport pr = verify_isomorphism(phi);
  CHECK(pr.rank == 8);
  CHECK(pr.is_isomorphism());
  // Phi(k_A(e_i)) = (id (x) lambda) delta(e_i), with k_A(e_i) = sum_s (i, s, e).
  for (int i = 0; i < c.sections->dim(); ++i) {
    Mat k = Mat::Zero(c.dcp.carrier->ambient_dim(), c.dcp.carrier->ambient_dim());
    for (int s = 0; s < 2; ++s) k += c.dcp.generators[c.dcp.find({i, s, 0})];
    CHECK((phi.apply(k) - c.coaction.j_a[i]).norm() < 1e-10);
  }
}

TEST_CASE("dual action fixes the image of A") {
  const CoactionStage c = make_coaction_stage(cyclic_line_bundle(3));
  for (int i = 0; i < c.sections->dim(); ++i) {
    Mat ja = Mat::Zero(c.ccp.carrier->ambient_dim(), c.ccp.carrier->ambient_dim());
    for (int t = 0; t < 3; ++t) ja += c.ccp.generators[c.ccp.find({i, t})];
    CHECK((ja - c.coaction.j_a[i]).norm() < 1e-12);
    for (int s = 0; s < 3; ++s) CHECK((c.dual[s].apply(ja) - ja).norm() < 1e-10);
  }
}

TEST_CASE("Pauli target is M_2 (x) M_4") {
  const CoactionStage c = make_coaction_stage(demo_bundle("pauli"));
  const ProductStage p = make_product_stage(c);
  CHECK(p.target->dim() == 64);
  CHECK(center_dimension(*p.target) == 1);
  CHECK(wedderburn_blocks(*p.target) == std::vector<int>{8});
}
