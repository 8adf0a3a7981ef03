#pragma once

#include "fellcheck/bundle.hpp"

#include <vector>

namespace fellcheck {

// Compactly supported section: one ambient matrix per arrow.
struct Section {
  std::vector<Mat> values;
};

Section zero_section(const RealizedFellBundle& b);
// Largest distance of a value from its fiber.
double fiber_defect(const RealizedFellBundle& b, const Section& f);
// (f * g)(x) = sum over r(y) = r(x) of f(y) g(y^{-1} x).
Section convolve(const RealizedFellBundle& b, const Section& f, const Section& g);
// f^*(x) = f(x^{-1})^*.
Section involute(const RealizedFellBundle& b, const Section& f);
// Sum over units u of tr f(u); tau(f^* * f) is the squared Frobenius norm of f.
cplx canonical_trace(const RealizedFellBundle& b, const Section& f);

// Finite-dimensional section algebra Gamma_c(G; A). Basis e_i is the section
// with the p-th fiber basis matrix at arrow x, ordered by (x, p).
class SectionAlgebra {
 public:
  explicit SectionAlgebra(BundlePtr b);
  explicit SectionAlgebra(RealizedFellBundle b);

  const RealizedFellBundle& bundle() const { return *bundle_; }
  const BundlePtr& bundle_ptr() const { return bundle_; }
  int dim() const { return dim_; }
  int arrow_of(int i) const { return arrow_[i]; }
  int fiber_index(int i) const { return fiber_[i]; }
  int offset(int arrow) const { return offset_[arrow]; }
  int index(int arrow, int p) const { return offset_[arrow] + p; }

  // L_i(:, j) = coords(e_i * e_j).
  const std::vector<Mat>& left_regular() const { return left_; }
  // Column i = coords(e_i^*).
  const Mat& adjoint_coords() const { return adjoint_; }
  // Largest grading defect met while building the product table.
  double product_defect() const { return product_defect_; }

  Vec coordinates(const Section& f) const;
  Section section(const Vec& c) const;
  Section basis_section(int i) const;
  Vec multiply(const Vec& a, const Vec& b) const;
  Vec adjoint(const Vec& a) const { return adjoint_ * a.conjugate(); }
  Mat left_operator(const Vec& a) const;
  cplx trace(const Vec& a) const;

  // max |(e_i e_j) e_l - e_i (e_j e_l)| over composable arrow triples.
  double associativity_residual() const;

 private:
  void build();
  BundlePtr bundle_;
  int dim_ = 0;
  std::vector<int> arrow_, fiber_, offset_;
  std::vector<Mat> left_;
  Mat adjoint_;
  double product_defect_ = 0.0;
};

// GNS realization of the section algebra for the canonical trace. The
// enveloping C*-algebra of a finite-dimensional section algebra is its
// faithful GNS image.
struct Envelope {
  Realization realization;
  std::vector<Mat> generators;  // pi(e_i), acting on l^2 of the GNS basis
  Mat embedding;                // column i = realization coords of pi(e_i)
  Mat gram;                     // tau(e_i^* e_j)
  Mat whitening;                // R with gram = R^* R

  Mat image(const Vec& section_coords) const;
  Vec to_realization(const Vec& section_coords) const { return embedding * section_coords; }
  Vec to_sections(const Vec& realization_coords) const;
};

Envelope enveloping_cstar(const SectionAlgebra& a);

// Operator a f(s^{-1} .) on sections of a bundle over a group, written in
// GNS coordinates. Equals pi(delta_s a) for a in A_s.
Mat iota(const SectionAlgebra& a, const Envelope& env, int s, const Mat& value);

}  // namespace fellcheck
