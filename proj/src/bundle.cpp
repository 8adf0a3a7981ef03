#include "fellcheck/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fellcheck {

namespace {

Mat matrix_unit(int n, int i, int j) {
  Mat e = Mat::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

// rho_s e_v = e_{v s^{-1}} on l^2(G).
Mat right_shift(const FiniteGroup& g, int s) {
  const int n = g.order();
  Mat p = Mat::Zero(n, n);
  for (int v = 0; v < n; ++v) p(g.mul(v, g.inv(s)), v) = 1.0;
  return p;
}

std::string pair_label(const FiniteGroupoid& g, int x, int y) { return g.label(x) + " * " + g.label(y); }

struct Tracker {
  InvariantCheck c;
  double tol;
  Tracker(std::string name, double t) : tol(t) { c.name = std::move(name); }
  void see(double r, const std::string& where) {
    if (r > c.worst_residual) c.worst_residual = r;
    if (r > tol && c.passed) {
      c.passed = false;
      c.location = where;
    }
  }
  void fail(const std::string& where) {
    if (c.passed) {
      c.passed = false;
      c.location = where;
    }
  }
};

}  // namespace

int RealizedFellBundle::ambient_dim() const { return std::accumulate(block_dims.begin(), block_dims.end(), 0); }

int RealizedFellBundle::block_offset(int unit) const {
  const int p = base.unit_position(unit);
  return std::accumulate(block_dims.begin(), block_dims.begin() + p, 0);
}

int RealizedFellBundle::total_dim() const {
  int d = 0;
  for (const auto& f : fibers) d += f.dim();
  return d;
}

RealizedFellBundle make_bundle(FiniteGroupoid base, std::vector<int> block_dims,
                               const std::vector<std::vector<Mat>>& spanning_sets) {
  if (static_cast<int>(block_dims.size()) != base.unit_count()) throw BundleError("bundle: one block per unit required");
  for (int d : block_dims)
    if (d < 1) throw BundleError("bundle: block dimensions must be positive");
  if (static_cast<int>(spanning_sets.size()) != base.arrow_count()) throw BundleError("bundle: one fiber per arrow required");
  const int n = std::accumulate(block_dims.begin(), block_dims.end(), 0);
  std::vector<Subspace> fibers;
  fibers.reserve(spanning_sets.size());
  for (const auto& set : spanning_sets) {
    for (const auto& m : set)
      if (m.rows() != n || m.cols() != n) throw BundleError("bundle: fiber matrix does not match the ambient size");
    fibers.push_back(orthonormalize(n, set));
  }
  return RealizedFellBundle{std::move(base), std::move(block_dims), std::move(fibers)};
}

bool BundleReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck& c) { return c.passed; });
}

const InvariantCheck* BundleReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.passed) return &c;
  return nullptr;
}

std::string BundleReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed ? "ok   " : "FAIL ") << c.name << "  worst=" << c.worst_residual;
    if (!c.passed) os << "  at " << c.location;
    os << "\n";
  }
  return os.str();
}

BundleReport validate_bundle(const RealizedFellBundle& b, double tol) {
  const FiniteGroupoid& g = b.base;
  const int n = b.ambient_dim();
  Tracker ortho("orthonormal fiber bases", kGramTol), support("block support", tol), invol("involution", tol),
      grading("grading", tol), saturation("saturation", 0.0), units("unit fibers are *-algebras", tol);

  for (int x = 0; x < g.arrow_count(); ++x) {
    const Subspace& f = b.fibers[x];
    if (f.ambient_dim() != n) {
      support.fail(g.label(x) + " (ambient mismatch)");
      continue;
    }
    if (f.dim() > 0)
      ortho.see((f.coords().adjoint() * f.coords() - Mat::Identity(f.dim(), f.dim())).cwiseAbs().maxCoeff(), g.label(x));
    const int ro = b.block_offset(g.range(x)), so = b.block_offset(g.source(x));
    const int rd = b.block_dim(g.range(x)), sd = b.block_dim(g.source(x));
    for (int i = 0; i < f.dim(); ++i) {
      Mat a = f.basis(i);
      a.block(ro, so, rd, sd).setZero();
      support.see(a.norm(), g.label(x));
      invol.see(b.fibers[g.inverse(x)].residual(f.basis(i).adjoint()), g.label(x));
    }
  }

  std::vector<std::vector<Mat>> basis(g.arrow_count());
  for (int x = 0; x < g.arrow_count(); ++x)
    for (int i = 0; i < b.fibers[x].dim(); ++i) basis[x].push_back(b.fibers[x].basis(i));

  for (int x = 0; x < g.arrow_count(); ++x)
    for (int y = 0; y < g.arrow_count(); ++y) {
      const int xy = g.compose(x, y);
      if (xy == kNoArrow) continue;
      const Subspace& target = b.fibers[xy];
      Mat coords(target.dim(), static_cast<Eigen::Index>(basis[x].size() * basis[y].size()));
      Eigen::Index c = 0;
      for (const auto& a : basis[x])
        for (const auto& bb : basis[y]) {
          const Mat p = a * bb;
          const double r = target.residual(p);
          grading.see(r, pair_label(g, x, y));
          if (g.is_unit(x) && x == y) units.see(r, g.label(x));
          if (target.dim() > 0) coords.col(c) = target.coordinates(p);
          ++c;
        }
      const int rank = target.dim() == 0 || coords.cols() == 0 ? 0 : numerical_rank(coords);
      if (rank != target.dim()) {
        // Worst residual is the number of missing dimensions.
        saturation.fail(pair_label(g, x, y) + " spans " + std::to_string(rank) + " of " + std::to_string(target.dim()));
        saturation.see(static_cast<double>(target.dim() - rank), pair_label(g, x, y));
      }
    }
  for (int u : g.units()) {
    for (const auto& a : basis[u]) units.see(b.fibers[u].residual(a.adjoint()), g.label(u));
  }

  BundleReport r;
  r.checks = {ortho.c, support.c, grading.c, invol.c, units.c, saturation.c};
  return r;
}

void require_valid(const RealizedFellBundle& b, const std::string& what) {
  const BundleReport r = validate_bundle(b);
  if (const auto* f = r.first_failure())
    throw BundleError(what + ": " + f->name + " fails at " + f->location);
}

BundleReport validate_unitary_action(const RealizedFellBundle& b, const UnitaryAction& a, double tol) {
  const FiniteGroupoid& g = b.base;
  const FiniteGroup& k = a.group();
  const int n = b.ambient_dim();
  Tracker beta("beta is an action by automorphisms", 0.0), unitary("W_t unitary", tol), blocks("W_t permutes blocks", tol),
      fibers("Ad W_t maps fibers onto fibers", tol), hom("W_s W_t = W_st", tol);
  if (auto d = action_defect(g, a.beta)) beta.fail(*d);
  if (static_cast<int>(a.w.size()) != k.order()) {
    unitary.fail("expected one unitary per group element");
  } else if (beta.c.passed) {
    for (int t = 0; t < k.order(); ++t) {
      const Mat& w = a.w[t];
      const std::string tl = "t=" + std::to_string(t);
      if (w.rows() != n || w.cols() != n) {
        unitary.fail(tl + " (wrong size)");
        continue;
      }
      unitary.see((w * w.adjoint() - Mat::Identity(n, n)).norm(), tl);
      for (int v : g.units())
        for (int v2 : g.units()) {
          if (v2 == a.beta.apply(t, v)) continue;
          blocks.see(w.block(b.block_offset(v2), b.block_offset(v), b.block_dim(v2), b.block_dim(v)).norm(),
                     tl + " block " + g.label(v2) + "," + g.label(v));
        }
      for (int x = 0; x < g.arrow_count(); ++x) {
        std::vector<Mat> img;
        for (int i = 0; i < b.fibers[x].dim(); ++i) img.push_back(a.alpha(t, b.fibers[x].basis(i)));
        const Subspace s = orthonormalize(n, img);
        const Subspace& target = b.fibers[a.beta.apply(t, x)];
        const double d = s.dim() == target.dim() ? projector_distance(s, target) : 1.0;
        fibers.see(d, tl + " arrow " + g.label(x));
      }
      for (int s = 0; s < k.order(); ++s)
        if (static_cast<int>(a.w[s].rows()) == n)
          hom.see((a.w[s] * w - a.w[k.mul(s, t)]).norm(), "s=" + std::to_string(s) + " " + tl);
    }
  }
  BundleReport r;
  r.checks = {beta.c, unitary.c, blocks.c, fibers.c, hom.c};
  return r;
}

RealizedFellBundle semidirect_bundle_from_group_action(const Realization& algebra, const FiniteGroup& g,
                                                       const std::vector<Mat>& u) {
  const int nb = algebra->ambient_dim();
  const int n = g.order();
  if (static_cast<int>(u.size()) != n) throw BundleError("semidirect bundle: one unitary per group element required");
  for (int s = 0; s < n; ++s) {
    if (u[s].rows() != nb || u[s].cols() != nb) throw BundleError("semidirect bundle: unitary has wrong size");
    if ((u[s] * u[s].adjoint() - Mat::Identity(nb, nb)).norm() > kTol) throw BundleError("semidirect bundle: u_s is not unitary");
    for (int t = 0; t < n; ++t)
      if ((u[s] * u[t] - u[g.mul(s, t)]).norm() > kTol) throw BundleError("semidirect bundle: u is not a homomorphism");
    for (int i = 0; i < algebra->dim(); ++i)
      if (algebra->carrier().residual(u[s] * algebra->carrier().basis(i) * u[s].adjoint()) > kTol)
        throw BundleError("semidirect bundle: Ad u_s does not preserve the algebra");
  }
  std::vector<std::vector<Mat>> sets(n);
  for (int s = 0; s < n; ++s) {
    const Mat rho = right_shift(g, s);
    for (int i = 0; i < algebra->dim(); ++i) sets[s].push_back(kron(algebra->carrier().basis(i) * u[s], rho));
  }
  RealizedFellBundle b = make_bundle(group_as_groupoid(g), {nb * n}, sets);
  require_valid(b, "semidirect bundle");
  return b;
}

double cocycle_defect(const FiniteGroup& g, const std::function<cplx(int, int)>& omega) {
  double worst = 0.0;
  const int n = g.order();
  for (int s = 0; s < n; ++s) {
    worst = std::max({worst, std::abs(omega(0, s) - 1.0), std::abs(omega(s, 0) - 1.0)});
    for (int t = 0; t < n; ++t) {
      worst = std::max(worst, std::abs(std::abs(omega(s, t)) - 1.0));
      for (int r = 0; r < n; ++r)
        worst = std::max(worst, std::abs(omega(s, t) * omega(g.mul(s, t), r) - omega(s, g.mul(t, r)) * omega(t, r)));
    }
  }
  return worst;
}

RealizedFellBundle cocycle_line_bundle(const FiniteGroup& g, const std::function<cplx(int, int)>& omega) {
  if (cocycle_defect(g, omega) > kTol) throw BundleError("cocycle line bundle: omega is not a normalized 2-cocycle");
  const int n = g.order();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<std::vector<Mat>> sets(n);
  for (int s = 0; s < n; ++s) {
    Mat us = Mat::Zero(n, n);
    for (int t = 0; t < n; ++t) us(g.mul(s, t), t) = omega(s, t);
    sets[s].push_back(scale * us);
  }
  RealizedFellBundle b = make_bundle(group_as_groupoid(g), {n}, sets);
  require_valid(b, "cocycle line bundle");
  return b;
}

RealizedFellBundle trivial_line_bundle(const FiniteGroupoid& g) {
  const int n = g.unit_count();
  std::vector<std::vector<Mat>> sets(g.arrow_count());
  for (int x = 0; x < g.arrow_count(); ++x)
    sets[x].push_back(matrix_unit(n, g.unit_position(g.range(x)), g.unit_position(g.source(x))));
  RealizedFellBundle b = make_bundle(g, std::vector<int>(n, 1), sets);
  require_valid(b, "trivial line bundle");
  return b;
}

RealizedFellBundle pullback_bundle(const RealizedFellBundle& a, const FiniteGroupoid& h, const GroupoidHom& phi) {
  if (!a.base.is_group()) throw BundleError("pullback: bundle must live over a group");
  if (auto d = groupoid_hom_defect(h, a.base, phi)) throw BundleError("pullback: " + *d);
  const int m = h.unit_count();
  const int n = a.ambient_dim();
  std::vector<std::vector<Mat>> sets(h.arrow_count());
  for (int x = 0; x < h.arrow_count(); ++x) {
    const Mat e = matrix_unit(m, h.unit_position(h.range(x)), h.unit_position(h.source(x)));
    const Subspace& f = a.fibers[phi(x)];
    for (int i = 0; i < f.dim(); ++i) sets[x].push_back(kron(e, f.basis(i)));
  }
  RealizedFellBundle b = make_bundle(h, std::vector<int>(m, n), sets);
  require_valid(b, "pullback bundle");
  return b;
}

RealizedFellBundle transformation_bundle(const RealizedFellBundle& a) {
  const FiniteGroup g = groupoid_group(a.base);
  const int n = g.order();
  std::vector<int> phi(n * n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) phi[transformation_arrow(n, s, t)] = s;
  const FiniteGroupoid h = transformation_groupoid(g);
  return pullback_bundle(a, h, make_hom(h, a.base, phi));
}

RealizedFellBundle product_bundle(const RealizedFellBundle& a, const FiniteGroupoid& h) {
  const FiniteGroupoid p = product_groupoid(a.base, h);
  const int nk = h.arrow_count();
  std::vector<int> phi(p.arrow_count());
  for (int x = 0; x < p.arrow_count(); ++x) phi[x] = x / nk;
  return pullback_bundle(a, p, make_hom(p, a.base, phi));
}

RealizedFellBundle groupoid_semidirect_bundle(const RealizedFellBundle& b, const UnitaryAction& a) {
  const BundleReport r = validate_unitary_action(b, a);
  if (const auto* f = r.first_failure()) throw BundleError("semidirect bundle: " + f->name + " fails at " + f->location);
  if (!check_haar_invariance(b.base, a.beta)) throw BundleError("semidirect bundle: action does not preserve the Haar system");
  const FiniteGroupoid sd = semidirect_groupoid(b.base, a.beta);
  const int nk = a.group().order();
  std::vector<std::vector<Mat>> sets(sd.arrow_count());
  for (int x = 0; x < b.base.arrow_count(); ++x)
    for (int t = 0; t < nk; ++t)
      for (int i = 0; i < b.fibers[x].dim(); ++i) sets[x * nk + t].push_back(b.fibers[x].basis(i) * a.w[t]);
  RealizedFellBundle out = make_bundle(sd, b.block_dims, sets);
  require_valid(out, "groupoid semidirect bundle");
  return out;
}

UnitaryAction rt_action_on_transformation_bundle(const RealizedFellBundle& a) {
  const FiniteGroup g = groupoid_group(a.base);
  const int n = g.order();
  const int na = a.ambient_dim();
  UnitaryAction act{rt_action(g), {}};
  for (int r = 0; r < n; ++r) act.w.push_back(kron(right_shift(g, r), Mat::Identity(na, na)));
  return act;
}

}  // namespace fellcheck
