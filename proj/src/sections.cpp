#include "fellcheck/sections.hpp"

#include <Eigen/Cholesky>

#include <algorithm>

namespace fellcheck {

Section zero_section(const RealizedFellBundle& b) {
  const int n = b.ambient_dim();
  return Section{std::vector<Mat>(static_cast<size_t>(b.base.arrow_count()), Mat::Zero(n, n))};
}

double fiber_defect(const RealizedFellBundle& b, const Section& f) {
  double worst = 0.0;
  for (int x = 0; x < b.base.arrow_count(); ++x) worst = std::max(worst, b.fibers[x].residual(f.values[x]));
  return worst;
}

Section convolve(const RealizedFellBundle& b, const Section& f, const Section& g) {
  const FiniteGroupoid& gr = b.base;
  Section h = zero_section(b);
  for (int x = 0; x < gr.arrow_count(); ++x)
    for (int y : gr.range_fiber(gr.range(x))) h.values[x] += f.values[y] * g.values[gr.compose(gr.inverse(y), x)];
  return h;
}

Section involute(const RealizedFellBundle& b, const Section& f) {
  Section h = zero_section(b);
  for (int x = 0; x < b.base.arrow_count(); ++x) h.values[x] = f.values[b.base.inverse(x)].adjoint();
  return h;
}

cplx canonical_trace(const RealizedFellBundle& b, const Section& f) {
  cplx t = 0.0;
  for (int u : b.base.units()) t += f.values[u].trace();
  return t;
}

// ---------------------------------------------------------- SectionAlgebra

SectionAlgebra::SectionAlgebra(BundlePtr b) : bundle_(std::move(b)) { build(); }

SectionAlgebra::SectionAlgebra(RealizedFellBundle b) : bundle_(std::make_shared<const RealizedFellBundle>(std::move(b))) {
  build();
}

void SectionAlgebra::build() {
  const RealizedFellBundle& b = *bundle_;
  const FiniteGroupoid& g = b.base;
  offset_.assign(static_cast<size_t>(g.arrow_count()), 0);
  for (int x = 0; x < g.arrow_count(); ++x) {
    offset_[x] = dim_;
    for (int p = 0; p < b.fiber_dim(x); ++p) {
      arrow_.push_back(x);
      fiber_.push_back(p);
    }
    dim_ += b.fiber_dim(x);
  }
  std::vector<Mat> basis(static_cast<size_t>(dim_));
  for (int i = 0; i < dim_; ++i) basis[i] = b.fibers[arrow_[i]].basis(fiber_[i]);

  // Single-arrow sections multiply along composable arrows only.
  left_.assign(static_cast<size_t>(dim_), Mat::Zero(dim_, dim_));
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      const int xy = g.compose(arrow_[i], arrow_[j]);
      if (xy == kNoArrow || b.fiber_dim(xy) == 0) continue;
      const Mat p = basis[i] * basis[j];
      product_defect_ = std::max(product_defect_, b.fibers[xy].residual(p));
      left_[i].block(offset_[xy], j, b.fiber_dim(xy), 1) = b.fibers[xy].coordinates(p);
    }
  adjoint_ = Mat::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    const int xi = g.inverse(arrow_[i]);
    const Mat a = basis[i].adjoint();
    product_defect_ = std::max(product_defect_, b.fibers[xi].residual(a));
    if (b.fiber_dim(xi) > 0) adjoint_.block(offset_[xi], i, b.fiber_dim(xi), 1) = b.fibers[xi].coordinates(a);
  }
}

Vec SectionAlgebra::coordinates(const Section& f) const {
  Vec c(dim_);
  for (int x = 0; x < bundle_->base.arrow_count(); ++x)
    if (bundle_->fiber_dim(x) > 0) c.segment(offset_[x], bundle_->fiber_dim(x)) = bundle_->fibers[x].coordinates(f.values[x]);
  return c;
}

Section SectionAlgebra::section(const Vec& c) const {
  Section f = zero_section(*bundle_);
  for (int x = 0; x < bundle_->base.arrow_count(); ++x)
    if (bundle_->fiber_dim(x) > 0) f.values[x] = bundle_->fibers[x].element(c.segment(offset_[x], bundle_->fiber_dim(x)));
  return f;
}

Section SectionAlgebra::basis_section(int i) const {
  Vec c = Vec::Zero(dim_);
  c(i) = 1.0;
  return section(c);
}

Mat SectionAlgebra::left_operator(const Vec& a) const {
  Mat l = Mat::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    if (a(i) != cplx(0.0)) l += a(i) * left_[i];
  return l;
}

Vec SectionAlgebra::multiply(const Vec& a, const Vec& b) const { return left_operator(a) * b; }

cplx SectionAlgebra::trace(const Vec& a) const {
  cplx t = 0.0;
  for (int i = 0; i < dim_; ++i)
    if (bundle_->base.is_unit(arrow_[i]) && a(i) != cplx(0.0))
      t += a(i) * bundle_->fibers[arrow_[i]].basis(fiber_[i]).trace();
  return t;
}

double SectionAlgebra::associativity_residual() const {
  const FiniteGroupoid& g = bundle_->base;
  const RealizedFellBundle& b = *bundle_;
  double worst = 0.0;
  // Products of single-arrow sections live on one fiber segment, so both
  // sides are short combinations of columns.
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      const int xy = g.compose(arrow_[i], arrow_[j]);
      if (xy == kNoArrow) continue;
      for (int l = 0; l < dim_; ++l) {
        const int yz = g.compose(arrow_[j], arrow_[l]);
        if (yz == kNoArrow) continue;
        Vec lhs = Vec::Zero(dim_), rhs = Vec::Zero(dim_);
        for (int m = offset_[xy]; m < offset_[xy] + b.fiber_dim(xy); ++m) lhs += left_[i](m, j) * left_[m].col(l);
        for (int m = offset_[yz]; m < offset_[yz] + b.fiber_dim(yz); ++m) rhs += left_[j](m, l) * left_[i].col(m);
        worst = std::max(worst, (lhs - rhs).norm());
      }
    }
  return worst;
}

// ---------------------------------------------------------------- Envelope

Mat Envelope::image(const Vec& c) const {
  Mat m = Mat::Zero(generators.front().rows(), generators.front().cols());
  for (Eigen::Index i = 0; i < c.size(); ++i)
    if (c(i) != cplx(0.0)) m += c(i) * generators[static_cast<size_t>(i)];
  return m;
}

Vec Envelope::to_sections(const Vec& rc) const {
  return embedding.fullPivLu().solve(rc);
}

Envelope enveloping_cstar(const SectionAlgebra& a) {
  const int d = a.dim();
  if (d == 0) throw BundleError("enveloping algebra of the zero bundle");
  Envelope env;
  // gram(i, j) = tau(e_i^* e_j); the left-regular operator of e_i^* is
  // sum_m S(m, i) L_m.
  env.gram = Mat::Zero(d, d);
  Vec tau(d);
  for (int m = 0; m < d; ++m) {
    Vec e = Vec::Zero(d);
    e(m) = 1.0;
    tau(m) = a.trace(e);
  }
  for (int i = 0; i < d; ++i) {
    const Mat li = a.left_operator(a.adjoint_coords().col(i));
    env.gram.row(i) = tau.transpose() * li;
  }
  Eigen::LLT<Mat> llt(env.gram);
  if (llt.info() != Eigen::Success) throw BundleError("canonical trace is not faithful on the section algebra");
  const double off = (env.gram - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
  env.whitening = off <= kGramTol ? Mat(Mat::Identity(d, d)) : Mat(llt.matrixU());
  const Mat rinv = env.whitening.inverse();
  for (int i = 0; i < d; ++i) env.generators.push_back(env.whitening * a.left_regular()[i] * rinv);
  env.realization = star_closure(env.generators);
  if (env.realization->dim() != d) throw BundleError("GNS representation is not faithful");
  env.embedding = Mat(d, d);
  for (int i = 0; i < d; ++i) env.embedding.col(i) = env.realization->coordinates(env.generators[i]);
  return env;
}

Mat iota(const SectionAlgebra& a, const Envelope& env, int s, const Mat& value) {
  const RealizedFellBundle& b = a.bundle();
  const FiniteGroupoid& g = b.base;
  if (!g.is_group()) throw BundleError("iota: bundle must live over a group");
  const int d = a.dim();
  Mat op(d, d);
  for (int j = 0; j < d; ++j) {
    const Section f = a.basis_section(j);
    Section h = zero_section(b);
    for (int t = 0; t < g.arrow_count(); ++t) h.values[t] = value * f.values[g.compose(g.inverse(s), t)];
    op.col(j) = a.coordinates(h);
  }
  return env.whitening * op * env.whitening.inverse();
}

}  // namespace fellcheck
