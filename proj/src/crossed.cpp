#include "fellcheck/crossed.hpp"

#include <algorithm>
#include <cmath>

namespace fellcheck {

namespace {

Mat left_shift(const FiniteGroup& g, int s) {
  const int n = g.order();
  Mat l = Mat::Zero(n, n);
  for (int u = 0; u < n; ++u) l(g.mul(s, u), u) = 1.0;
  return l;
}

double max_col_norm(const Mat& m) {
  double r = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) r = std::max(r, m.col(j).norm());
  return r;
}

}  // namespace

Mat GroupCStar::point_mass(int t) const {
  Mat m = Mat::Zero(group.order(), group.order());
  m(t, t) = 1.0;
  return m;
}

Mat GroupCStar::right_regular(int t) const {
  const int n = group.order();
  Mat r = Mat::Zero(n, n);
  for (int u = 0; u < n; ++u) r(group.mul(u, group.inv(t)), u) = 1.0;
  return r;
}

GroupCStar group_cstar(const FiniteGroup& g) {
  const SectionAlgebra sa(trivial_line_bundle(group_as_groupoid(g)));
  Envelope env = enveloping_cstar(sa);
  // One basis section per group element, in group order.
  return GroupCStar{g, env.realization, env.generators};
}

Coaction coaction_delta(const SectionAlgebra& a, const Envelope& env) {
  const FiniteGroup g = groupoid_group(a.bundle().base);
  Coaction c;
  c.algebra = env.realization;
  c.group = group_cstar(g);
  c.target = tensor_realization(c.algebra, c.group.realization);
  std::vector<std::pair<Mat, Mat>> pairs;
  for (int i = 0; i < a.dim(); ++i) {
    c.j_a.push_back(kron(env.generators[i], c.group.lambda[a.arrow_of(i)]));
    pairs.emplace_back(env.generators[i], c.j_a.back());
  }
  c.delta = define_map_on_span(c.algebra, c.target, pairs);

  const Realization gg = tensor_realization(c.group.realization, c.group.realization);
  std::vector<std::pair<Mat, Mat>> gpairs;
  for (int s = 0; s < g.order(); ++s) gpairs.emplace_back(c.group.lambda[s], kron(c.group.lambda[s], c.group.lambda[s]));
  c.delta_group = define_map_on_span(c.group.realization, gg, gpairs);

  // Both sides land in the same ambient matrices since kron is associative.
  const Realization left3 = tensor_realization(c.target, c.group.realization);
  const Realization right3 = tensor_realization(c.algebra, gg);
  const StarMap lhs = compose(tensor_map(c.delta, identity_map(c.group.realization), c.target, left3), c.delta);
  const StarMap rhs = compose(tensor_map(identity_map(c.algebra), c.delta_group, c.target, right3), c.delta);
  c.identity_residual = 0.0;
  for (int k = 0; k < c.algebra->dim(); ++k)
    c.identity_residual = std::max(
        c.identity_residual, (left3->element(lhs.matrix.col(k)) - right3->element(rhs.matrix.col(k))).norm());

  c.injective = verify_isomorphism(c.delta).injective;

  const int d = c.algebra->ambient_dim();
  const Mat id = Mat::Identity(d, d);
  Mat span(c.target->dim(), static_cast<Eigen::Index>(c.algebra->dim()) * g.order());
  Eigen::Index col = 0;
  for (int k = 0; k < c.algebra->dim(); ++k) {
    const Mat dk = c.target->element(c.delta.matrix.col(k));
    for (int t = 0; t < g.order(); ++t) span.col(col++) = c.target->coordinates(dk * kron(id, c.group.lambda[t]));
  }
  c.nondegeneracy_rank = numerical_rank(span);
  return c;
}

int CrossedProduct::find(const std::vector<int>& label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw LinalgError("crossed product: unknown generator label");
  return static_cast<int>(it - labels.begin());
}

CrossedProduct coaction_crossed_product(const Coaction& c) {
  CrossedProduct p;
  const int d = c.algebra->ambient_dim();
  const Mat id = Mat::Identity(d, d);
  for (size_t i = 0; i < c.j_a.size(); ++i)
    for (int t = 0; t < c.group.group.order(); ++t) {
      p.labels.push_back({static_cast<int>(i), t});
      p.generators.push_back(c.j_a[i] * kron(id, c.group.point_mass(t)));
    }
  p.carrier = star_closure(p.generators);
  return p;
}

std::vector<StarMap> dual_action(const CrossedProduct& ccp, const FiniteGroup& g) {
  std::vector<StarMap> out;
  for (int s = 0; s < g.order(); ++s) {
    std::vector<std::pair<Mat, Mat>> pairs;
    for (size_t k = 0; k < ccp.labels.size(); ++k) {
      const auto& l = ccp.labels[k];
      pairs.emplace_back(ccp.generators[k], ccp.generators[ccp.find({l[0], g.mul(l[1], g.inv(s))})]);
    }
    out.push_back(define_map_on_span(ccp.carrier, ccp.carrier, pairs));
  }
  return out;
}

double action_residual(const std::vector<StarMap>& act, const FiniteGroup& g) {
  double worst = 0.0;
  for (int s = 0; s < g.order(); ++s) {
    worst = std::max({worst, act[s].hom_residual, act[s].consistency_residual});
    for (int t = 0; t < g.order(); ++t)
      worst = std::max(worst, (act[s].matrix * act[t].matrix - act[g.mul(s, t)].matrix).cwiseAbs().maxCoeff());
  }
  return worst;
}

bool is_certified_action(const std::vector<StarMap>& act, const FiniteGroup& g, double tol) {
  if (static_cast<int>(act.size()) != g.order()) return false;
  for (const auto& m : act)
    if (!verify_isomorphism(m, tol).is_isomorphism()) return false;
  return action_residual(act, g) <= tol;
}

Mat covariant_image(const CrossedProduct& acp, const Mat& b, int s) {
  const FiniteGroup& g = acp.group;
  const int n = g.order();
  const int nb = acp.base->ambient_dim();
  Mat ib = Mat::Zero(nb * n, nb * n);
  for (int u = 0; u < n; ++u) {
    Mat e = Mat::Zero(n, n);
    e(u, u) = 1.0;
    ib += kron(acp.action[g.inv(u)].apply(b), e);
  }
  return ib * kron(Mat::Identity(nb, nb), left_shift(g, s));
}

CrossedProduct action_crossed_product(const Realization& b, const FiniteGroup& g, const std::vector<StarMap>& act,
                                      const std::vector<Mat>& b_generators,
                                      const std::vector<std::vector<int>>& b_labels) {
  if (!is_certified_action(act, g)) throw LinalgError("action crossed product: not a certified action");
  if (b_generators.size() != b_labels.size()) throw LinalgError("action crossed product: one label per generator");
  CrossedProduct p;
  p.base = b;
  p.group = g;
  p.action = act;
  for (size_t j = 0; j < b_generators.size(); ++j)
    for (int s = 0; s < g.order(); ++s) {
      std::vector<int> l = b_labels[j];
      l.push_back(s);
      p.labels.push_back(std::move(l));
      p.generators.push_back(covariant_image(p, b_generators[j], s));
    }
  p.carrier = star_closure(p.generators);
  return p;
}

CrossedProduct action_crossed_product(const Realization& b, const FiniteGroup& g, const std::vector<StarMap>& act) {
  std::vector<Mat> gens;
  std::vector<std::vector<int>> labels;
  for (int j = 0; j < b->dim(); ++j) {
    gens.push_back(b->carrier().basis(j));
    labels.push_back({j});
  }
  return action_crossed_product(b, g, act, gens, labels);
}

std::vector<StarMap> inner_action(const Realization& b, const std::vector<Mat>& u) {
  std::vector<StarMap> out;
  for (const Mat& us : u) {
    std::vector<std::pair<Mat, Mat>> pairs;
    for (int j = 0; j < b->dim(); ++j) {
      const Mat bj = b->carrier().basis(j);
      pairs.emplace_back(bj, us * bj * us.adjoint());
    }
    out.push_back(define_map_on_span(b, b, pairs));
  }
  return out;
}

double bundle_covariance_residual(const SectionAlgebra& a, const Coaction& c, Translation tr) {
  const FiniteGroup& g = c.group.group;
  const int d = c.algebra->ambient_dim();
  const Mat id = Mat::Identity(d, d);
  double worst = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    const int s = a.arrow_of(i);
    for (int t = 0; t < g.order(); ++t) {
      const int moved = tr == Translation::left ? g.mul(s, t) : g.mul(t, g.inv(s));
      const Mat lhs = c.j_a[i] * kron(id, c.group.point_mass(t));
      const Mat rhs = kron(id, c.group.point_mass(moved)) * c.j_a[i];
      worst = std::max(worst, (lhs - rhs).norm());
    }
  }
  return worst;
}

bool check_bundle_covariance(const SectionAlgebra& a, const Coaction& c, Translation tr, double tol) {
  return bundle_covariance_residual(a, c, tr) <= tol;
}

InducedAction induced_section_action(const SectionAlgebra& a, const Envelope& env, const UnitaryAction& w) {
  const RealizedFellBundle& b = a.bundle();
  const FiniteGroup& g = w.group();
  InducedAction out;
  for (int t = 0; t < g.order(); ++t) {
    std::vector<std::pair<Mat, Mat>> pairs;
    for (int i = 0; i < a.dim(); ++i) {
      const Section e = a.basis_section(i);
      Section moved = zero_section(b);
      const int x = a.arrow_of(i);
      moved.values[w.beta.apply(t, x)] = w.alpha(t, e.values[x]);
      if (fiber_defect(b, moved) > kTol) throw BundleError("induced action: W_t does not map fibers to fibers");
      const Vec mc = a.coordinates(moved);
      out.trace_residual = std::max(out.trace_residual, std::abs(a.trace(mc) - a.trace(a.coordinates(e))));
      pairs.emplace_back(env.generators[i], env.image(mc));
    }
    out.maps.push_back(define_map_on_span(env.realization, env.realization, pairs));
  }
  out.action_residual = action_residual(out.maps, g);
  return out;
}

bool CompatReport::ok(double tol) const {
  return theta.is_isomorphism() && theta.hom_residual <= tol && coaction_identity_residual <= tol && compat_residual <= tol;
}

CompatReport semidirect_coaction_compat(const Realization& b, const FiniteGroup& g, const std::vector<Mat>& u,
                                        double tol) {
  CompatReport r;
  const SectionAlgebra sa(semidirect_bundle_from_group_action(b, g, u));
  const Envelope env = enveloping_cstar(sa);
  const CrossedProduct acp = action_crossed_product(b, g, inner_action(b, u));
  r.algebra_dim = sa.dim();
  r.crossed_dim = acp.carrier->dim();

  // theta(i_B(b_j) i_G(s)) = section at s with value (b_j (x) 1)(u_s (x) rho_s).
  const GroupCStar cg = group_cstar(g);
  std::vector<std::pair<Mat, Mat>> pairs;
  for (size_t k = 0; k < acp.labels.size(); ++k) {
    const int j = acp.labels[k][0], s = acp.labels[k][1];
    Section f = zero_section(sa.bundle());
    f.values[s] = std::sqrt(FiniteGroup::modular(s)) * kron(b->carrier().basis(j) * u[s], cg.right_regular(s));
    pairs.emplace_back(acp.generators[k], env.image(sa.coordinates(f)));
  }
  const StarMap theta = define_map_on_span(acp.carrier, env.realization, pairs);
  r.theta = verify_isomorphism(theta, tol);

  const Coaction c = coaction_delta(sa, env);
  r.coaction_identity_residual = c.identity_residual;
  const Realization acp_cg = tensor_realization(acp.carrier, c.group.realization);
  std::vector<std::pair<Mat, Mat>> dpairs;
  for (size_t k = 0; k < acp.labels.size(); ++k)
    dpairs.emplace_back(acp.generators[k], kron(acp.generators[k], c.group.lambda[acp.labels[k][1]]));
  const StarMap hat = define_map_on_span(acp.carrier, acp_cg, dpairs);
  const StarMap lhs = compose(c.delta, theta);
  const StarMap rhs = compose(tensor_map(theta, identity_map(c.group.realization), acp_cg, c.target), hat);
  r.compat_residual = std::max({max_col_norm(lhs.matrix - rhs.matrix), hat.hom_residual, hat.consistency_residual});
  r.blocks = wedderburn_blocks(*acp.carrier);
  return r;
}

}  // namespace fellcheck
