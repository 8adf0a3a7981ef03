#include "fellcheck/duality.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>

namespace fellcheck {

namespace {

Mat matrix_unit(int n, int i, int j) {
  Mat e = Mat::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

double weight(int s) { return std::sqrt(FiniteGroup::modular(s)); }

// Image under pi of the section supported at x with the given value.
Mat section_image(const SectionAlgebra& a, const Envelope& env, int x, const Mat& value) {
  Section f = zero_section(a.bundle());
  f.values[x] = value;
  return env.image(a.coordinates(f));
}

// Value of the transformation-bundle basis section over (r, s) built from
// the p-th basis matrix of A_r.
Mat transformation_value(const CoactionStage& c, int r, int s, int p) {
  const FiniteGroup& g = c.group;
  const int n = g.order();
  return kron(matrix_unit(n, g.mul(r, s), s), c.sections->bundle().fibers[r].basis(p));
}

double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

CoactionStage make_coaction_stage(const RealizedFellBundle& a) {
  CoactionStage c;
  c.group = groupoid_group(a.base);
  c.sections = std::make_shared<const SectionAlgebra>(a);
  c.env = enveloping_cstar(*c.sections);
  c.coaction = coaction_delta(*c.sections, c.env);
  c.ccp = coaction_crossed_product(c.coaction);
  c.dual = dual_action(c.ccp, c.group);
  c.dcp = action_crossed_product(c.ccp.carrier, c.group, c.dual, c.ccp.generators, c.ccp.labels);
  return c;
}

SemidirectStage make_semidirect_stage(const RealizedFellBundle& b, const UnitaryAction& w) {
  SemidirectStage s;
  s.base = std::make_shared<const SectionAlgebra>(b);
  s.base_env = enveloping_cstar(*s.base);
  s.w = w;
  s.alpha = induced_section_action(*s.base, s.base_env, w);
  std::vector<std::vector<int>> labels;
  for (int j = 0; j < s.base->dim(); ++j) labels.push_back({j});
  s.acp = action_crossed_product(s.base_env.realization, w.group(), s.alpha.maps, s.base_env.generators, labels);
  s.sd = std::make_shared<const SectionAlgebra>(groupoid_semidirect_bundle(b, w));
  s.sd_env = enveloping_cstar(*s.sd);
  return s;
}

SemidirectStage make_rt_stage(const RealizedFellBundle& a) {
  return make_semidirect_stage(transformation_bundle(a), rt_action_on_transformation_bundle(a));
}

ProductStage make_product_stage(const CoactionStage& c) {
  ProductStage p;
  const int n = c.group.order();
  const FiniteGroupoid e = pair_groupoid(n);
  p.product = std::make_shared<const SectionAlgebra>(product_bundle(c.sections->bundle(), e));
  p.product_env = enveloping_cstar(*p.product);
  p.pair = std::make_shared<const SectionAlgebra>(trivial_line_bundle(e));
  p.pair_env = enveloping_cstar(*p.pair);
  std::vector<Mat> units;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) units.push_back(matrix_unit(n, a, b));
  p.matrices = star_closure(units);
  p.tensor_pair = tensor_realization(c.env.realization, p.pair_env.realization);
  p.target = tensor_realization(c.env.realization, p.matrices);
  return p;
}

StarMap theta_iso(const CoactionStage& c, const SemidirectStage& rt) {
  const int n = c.group.order();
  std::vector<std::pair<Mat, Mat>> pairs;
  for (size_t k = 0; k < c.ccp.labels.size(); ++k) {
    const int i = c.ccp.labels[k][0], s = c.ccp.labels[k][1];
    const int r = c.sections->arrow_of(i), p = c.sections->fiber_index(i);
    const Mat v = weight(s) * transformation_value(c, r, s, p);
    pairs.emplace_back(c.ccp.generators[k], section_image(*rt.base, rt.base_env, transformation_arrow(n, r, s), v));
  }
  return define_map_on_span(c.ccp.carrier, rt.base_env.realization, pairs);
}

double theta_equivariance_residual(const CoactionStage& c, const SemidirectStage& rt, const StarMap& theta) {
  double worst = 0.0;
  for (int s = 0; s < c.group.order(); ++s)
    worst = std::max(worst, max_abs(compose(rt.alpha.maps[s], theta).matrix - compose(theta, c.dual[s]).matrix));
  return worst;
}

namespace {

std::vector<std::pair<Mat, Mat>> sigma_pairs(const SemidirectStage& s) {
  const RealizedFellBundle& b = s.base->bundle();
  const int nk = s.w.group().order();
  std::vector<std::pair<Mat, Mat>> pairs;
  for (size_t k = 0; k < s.acp.labels.size(); ++k) {
    const int j = s.acp.labels[k][0], t = s.acp.labels[k][1];
    const int x = s.base->arrow_of(j), p = s.base->fiber_index(j);
    const Mat v = weight(t) * b.fibers[x].basis(p) * s.w.w[t];
    pairs.emplace_back(s.acp.generators[k], section_image(*s.sd, s.sd_env, x * nk + t, v));
  }
  return pairs;
}

}  // namespace

StarMap sigma_iso(const SemidirectStage& s) {
  return define_map_on_span(s.acp.carrier, s.sd_env.realization, sigma_pairs(s));
}

StarMap tau_map(const SemidirectStage& s) {
  auto pairs = sigma_pairs(s);
  for (auto& [a, b] : pairs) std::swap(a, b);
  return define_map_on_span(s.sd_env.realization, s.acp.carrier, pairs);
}

StarMap theta_cross(const CoactionStage& c, const SemidirectStage& rt, const StarMap& theta) {
  std::vector<std::pair<Mat, Mat>> pairs;
  for (size_t m = 0; m < c.dcp.labels.size(); ++m) {
    const auto& l = c.dcp.labels[m];
    const Mat inner = theta.apply(c.ccp.generators[c.ccp.find({l[0], l[1]})]);
    pairs.emplace_back(c.dcp.generators[m], covariant_image(rt.acp, inner, l[2]));
  }
  return define_map_on_span(c.dcp.carrier, rt.acp.carrier, pairs);
}

StarMap big_theta_iso(const CoactionStage& c, const SemidirectStage& rt) {
  const int n = c.group.order();
  std::vector<std::pair<Mat, Mat>> pairs;
  for (size_t m = 0; m < c.dcp.labels.size(); ++m) {
    const int i = c.dcp.labels[m][0], s = c.dcp.labels[m][1], t = c.dcp.labels[m][2];
    const int r = c.sections->arrow_of(i), p = c.sections->fiber_index(i);
    const Mat v = weight(s) * weight(t) * transformation_value(c, r, s, p) * rt.w.w[t];
    pairs.emplace_back(c.dcp.generators[m], section_image(*rt.sd, rt.sd_env, transformation_arrow(n, r, s) * n + t, v));
  }
  return define_map_on_span(c.dcp.carrier, rt.sd_env.realization, pairs);
}

StarMap psi_iso(const SemidirectStage& rt, const ProductStage& p, double* fiber_defect_out) {
  const FiniteGroup& g = rt.w.group();
  const int n = g.order();
  const FiniteGroupoid& from = rt.sd->bundle().base;
  const FiniteGroupoid& to = p.product->bundle().base;
  std::vector<int> arrows(static_cast<size_t>(from.arrow_count()));
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t)
        arrows[(transformation_arrow(n, r, s)) * n + t] = r * n * n + g.mul(r, s) * n + g.mul(s, t);
  std::vector<int> sorted = arrows;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || static_cast<int>(sorted.size()) != to.arrow_count())
    throw LinalgError("psi: arrow map is not a bijection");
  const GroupoidHom psi = make_hom(from, to, arrows);

  double defect = 0.0;
  std::vector<std::pair<Mat, Mat>> pairs;
  const RealizedFellBundle& src = rt.sd->bundle();
  const RealizedFellBundle& dst = p.product->bundle();
  for (int i = 0; i < rt.sd->dim(); ++i) {
    const int x = rt.sd->arrow_of(i);
    const Mat v = src.fibers[x].basis(rt.sd->fiber_index(i));
    defect = std::max(defect, dst.fibers[psi(x)].residual(v));
    pairs.emplace_back(rt.sd_env.generators[i], section_image(*p.product, p.product_env, psi(x), v));
  }
  if (fiber_defect_out) *fiber_defect_out = defect;
  return define_map_on_span(rt.sd_env.realization, p.product_env.realization, pairs);
}

StarMap omega_iso(const CoactionStage& c, const ProductStage& p) {
  const RealizedFellBundle& prod = p.product->bundle();
  const FiniteGroupoid& e = p.pair->bundle().base;
  const int ne = e.arrow_count();
  const int na = c.sections->bundle().ambient_dim();
  std::vector<std::pair<Mat, Mat>> pairs;
  for (int i = 0; i < p.product->dim(); ++i) {
    const int arrow = p.product->arrow_of(i);
    const int s = arrow / ne, x = arrow % ne;
    const Mat v = prod.fibers[arrow].basis(p.product->fiber_index(i));
    const int a = e.unit_position(e.range(x)), b = e.unit_position(e.source(x));
    const Mat as = v.block(a * na, b * na, na, na);
    const Mat pa = section_image(*c.sections, c.env, s, as);
    const Mat pe = section_image(*p.pair, p.pair_env, x, matrix_unit(e.unit_count(), a, b));
    pairs.emplace_back(p.product_env.generators[i], kron(pa, pe));
  }
  return define_map_on_span(p.product_env.realization, p.tensor_pair, pairs);
}

StarMap tau_pair(const ProductStage& p) {
  const FiniteGroupoid& e = p.pair->bundle().base;
  std::vector<std::pair<Mat, Mat>> pairs;
  for (int x = 0; x < e.arrow_count(); ++x) {
    const Mat u = matrix_unit(e.unit_count(), e.unit_position(e.range(x)), e.unit_position(e.source(x)));
    pairs.emplace_back(section_image(*p.pair, p.pair_env, x, u), u);
  }
  return define_map_on_span(p.pair_env.realization, p.matrices, pairs);
}

StarMap upsilon_iso(const CoactionStage& c, const ProductStage& p, const StarMap& omega) {
  return compose(tensor_map(identity_map(c.env.realization), tau_pair(p), p.tensor_pair, p.target), omega);
}

double upsilon_formula_residual(const CoactionStage& c, const ProductStage& p, const StarMap& upsilon) {
  const RealizedFellBundle& prod = p.product->bundle();
  const int n = c.group.order();
  const int ne = n * n;
  const int na = c.sections->bundle().ambient_dim();
  double worst = 0.0;
  for (int i = 0; i < p.product->dim(); ++i) {
    const int arrow = p.product->arrow_of(i);
    const int r = arrow / ne;
    const Mat v = prod.fibers[arrow].basis(p.product->fiber_index(i));
    Mat expected = Mat::Zero(c.env.realization->ambient_dim() * n, c.env.realization->ambient_dim() * n);
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) {
        const Mat f = v.block(s * na, t * na, na, na);
        if (f.norm() == 0.0) continue;
        expected += kron(section_image(*c.sections, c.env, r, f), matrix_unit(n, s, t));
      }
    worst = std::max(worst, (upsilon.apply(p.product_env.generators[i]) - expected).norm());
  }
  return worst;
}

StarMap phi_canonical(const CoactionStage& c, const ProductStage& p) {
  const GroupCStar& cg = c.coaction.group;
  std::vector<std::pair<Mat, Mat>> pairs;
  for (size_t m = 0; m < c.dcp.labels.size(); ++m) {
    const int i = c.dcp.labels[m][0], s = c.dcp.labels[m][1], t = c.dcp.labels[m][2];
    const int r = c.sections->arrow_of(i);
    const Mat op = cg.lambda[r] * cg.point_mass(s) * cg.right_regular(t);
    pairs.emplace_back(c.dcp.generators[m], kron(c.env.generators[i], op));
  }
  return define_map_on_span(c.dcp.carrier, p.target, pairs);
}

// ------------------------------------------------------------------ report

const CheckRecord* DualityReport::check(const std::string& n) const {
  for (const auto& c : checks)
    if (c.name == n) return &c;
  return nullptr;
}

const MapRecord* DualityReport::map(const std::string& n) const {
  for (const auto& m : maps)
    if (m.name == n) return &m;
  return nullptr;
}

double DualityReport::diagram_residual() const {
  const CheckRecord* c = check("Phi = Upsilon Psi Theta");
  return c ? c->value : -1.0;
}

std::string DualityReport::summary(bool timings) const {
  std::ostringstream os;
  os << std::setprecision(3);
  os << "bundle " << name << ": |G| = " << group_order << ", D = " << fiber_total << ", tol = " << tol << "\n";
  if (!error.empty()) os << "  error: " << error << "\n";
  if (!algebra_blocks.empty())
    os << "  C*(G,A) = " << describe_blocks(algebra_blocks) << " (dim " << fiber_total << ", center " << algebra_center
       << ")\n";
  for (const auto& l : ladder)
    os << "  dim " << std::left << std::setw(28) << l.name << std::right << std::setw(4) << l.dim
       << (l.dim == l.expected ? "" : "  (expected " + std::to_string(l.expected) + ")") << "\n";
  for (const auto& m : maps) {
    os << "  " << (m.certified ? "iso  " : "FAIL ") << std::left << std::setw(16) << m.name << std::right << m.domain_dim
       << " -> " << m.codomain_dim << "  rank " << m.rank << "  hom " << m.hom_residual << "  pairs "
       << m.consistency_residual;
    if (timings) os << "  " << m.wall_ms << " ms";
    os << "\n";
  }
  for (const auto& c : checks)
    os << "  " << (c.passed ? "ok   " : "FAIL ") << std::left << std::setw(34) << c.name << std::right << c.value << "\n";
  os << "  verdict: " << (verdict ? "PASS" : "FAIL");
  if (timings) os << "  (" << wall_ms << " ms)";
  os << "\n";
  return os.str();
}

DualityReport verify_duality_pipeline(const RealizedFellBundle& a, const std::string& name, double tol) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  DualityReport rep;
  rep.name = name;
  rep.tol = tol;
  auto add_check = [&](const std::string& n, double v, bool ok) { rep.checks.push_back({n, v, ok}); };
  auto imap = [&](const std::string& n, const std::function<StarMap()>& build) {
    const auto t0 = clock::now();
    StarMap f = build();
    MapRecord m;
    m.name = n;
    const IsoReport r = verify_isomorphism(f, tol);
    m.domain_dim = r.domain_dim;
    m.codomain_dim = r.codomain_dim;
    m.rank = r.rank;
    m.consistency_residual = r.consistency_residual;
    m.hom_residual = r.hom_residual;
    m.certified = r.is_isomorphism();
    m.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    rep.maps.push_back(m);
    return f;
  };
  try {
    const BundleReport br = validate_bundle(a, tol);
    add_check("bundle invariants", br.ok() ? 0.0 : 1.0, br.ok());
    if (!br.ok()) throw BundleError(br.first_failure()->name + " fails at " + br.first_failure()->location);
    if (!a.base.is_group()) throw BundleError("duality pipeline needs a bundle over a group");
    const CoactionStage c = make_coaction_stage(a);
    const int n = c.group.order();
    const int d = c.sections->dim();
    rep.group_order = n;
    rep.fiber_total = d;
    rep.algebra_center = center_dimension(*c.env.realization);
    rep.algebra_blocks = wedderburn_blocks(*c.env.realization);
    add_check("section algebra associativity", c.sections->associativity_residual(), c.sections->associativity_residual() <= tol);
    add_check("coaction injective", c.coaction.injective ? 0.0 : 1.0, c.coaction.injective);
    add_check("coaction identity", c.coaction.identity_residual, c.coaction.identity_residual <= tol);
    add_check("coaction nondegeneracy rank", c.coaction.nondegeneracy_rank, c.coaction.nondegeneracy_rank == d * n);
    add_check("delta is a *-homomorphism", c.coaction.delta.hom_residual, c.coaction.delta.hom_residual <= tol);
    add_check("dual action law", action_residual(c.dual, c.group), is_certified_action(c.dual, c.group, tol));
    add_check("covariance (left translation)", bundle_covariance_residual(*c.sections, c.coaction, Translation::left),
              check_bundle_covariance(*c.sections, c.coaction, Translation::left, tol));

    const SemidirectStage rt = make_rt_stage(a);
    add_check("rt action law", rt.alpha.action_residual, rt.alpha.action_residual <= tol);
    add_check("rt preserves the trace", rt.alpha.trace_residual, rt.alpha.trace_residual <= tol);
    const ProductStage p = make_product_stage(c);

    rep.ladder = {{"C*(G,A)", c.env.realization->dim(), d},
                  {"C*(G,A) x| G", c.ccp.carrier->dim(), n * d},
                  {"C*(GxG, A x G)", rt.base_env.realization->dim(), n * d},
                  {"(C*(G,A) x| G) x| G", c.dcp.carrier->dim(), n * n * d},
                  {"C*(GxG, A x G) x|rt G", rt.acp.carrier->dim(), n * n * d},
                  {"C*((GxG) x|rt G)", rt.sd_env.realization->dim(), n * n * d},
                  {"C*(G x E, A x E)", p.product_env.realization->dim(), n * n * d},
                  {"C*(G,A) (x) M_n", p.target->dim(), n * n * d}};

    const StarMap theta = imap("theta", [&] { return theta_iso(c, rt); });
    const double eq = theta_equivariance_residual(c, rt, theta);
    add_check("theta equivariance", eq, eq <= tol);
    const StarMap sigma = imap("sigma", [&] { return sigma_iso(rt); });
    const StarMap tau = imap("tau", [&] { return tau_map(rt); });
    const double ts = max_abs(compose(tau, sigma).matrix - Mat::Identity(sigma.domain->dim(), sigma.domain->dim()));
    const double st = max_abs(compose(sigma, tau).matrix - Mat::Identity(tau.domain->dim(), tau.domain->dim()));
    add_check("tau sigma = id", ts, ts <= tol);
    add_check("sigma tau = id", st, st <= tol);
    const StarMap tx = imap("theta x G", [&] { return theta_cross(c, rt, theta); });
    const StarMap big = imap("Theta", [&] { return big_theta_iso(c, rt); });
    const double bt = max_abs(compose(sigma, tx).matrix - big.matrix);
    add_check("Theta = sigma (theta x G)", bt, bt <= tol);
    double psi_defect = 0.0;
    const StarMap psi = imap("Psi", [&] { return psi_iso(rt, p, &psi_defect); });
    add_check("Psi carries fibers onto fibers", psi_defect, psi_defect <= tol);
    const StarMap omega = imap("omega", [&] { return omega_iso(c, p); });
    imap("tau_E", [&] { return tau_pair(p); });
    const StarMap ups = imap("Upsilon", [&] { return upsilon_iso(c, p, omega); });
    const double uf = upsilon_formula_residual(c, p, ups);
    add_check("Upsilon matrix formula", uf, uf <= tol);
    const StarMap phi = imap("Phi", [&] { return phi_canonical(c, p); });
    const double dg = max_abs(compose(ups, compose(psi, big)).matrix - phi.matrix);
    add_check("Phi = Upsilon Psi Theta", dg, dg <= tol);

    bool ok = true;
    for (const auto& l : rep.ladder) ok = ok && l.dim == l.expected;
    for (const auto& m : rep.maps) ok = ok && m.certified;
    for (const auto& ch : rep.checks) ok = ok && ch.passed;
    rep.verdict = ok;
  } catch (const std::exception& e) {
    rep.error = e.what();
    rep.verdict = false;
  }
  rep.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
  return rep;
}

}  // namespace fellcheck
