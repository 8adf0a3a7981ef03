#pragma once

// Reference computations that avoid the library's closure, structure
// constants and Gram-Schmidt: plain word expansion, JacobiSVD ranks and
// explicit group arithmetic.

#include "fellcheck/bundle.hpp"
#include "fellcheck/sections.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <vector>

namespace fellcheck::oracle {

inline int svd_rank(const Mat& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-8 * s(0) && s(i) > 1e-13) ++r;
  return r;
}

inline Mat stack(const std::vector<Mat>& ms) {
  const Eigen::Index len = ms.front().size();
  Mat out(len, static_cast<Eigen::Index>(ms.size()));
  for (size_t i = 0; i < ms.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Vec>(ms[i].data(), len);
  return out;
}

// Orthonormal basis (as vec columns) of the span of ms.
inline Mat span_basis(const std::vector<Mat>& ms) {
  const Mat s = stack(ms);
  Eigen::JacobiSVD<Mat> svd(s, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(svd_rank(s));
}

// Unital-or-not *-algebra generated by gens, by multiplying words until the
// span stops growing.
inline Mat generated_algebra(const std::vector<Mat>& gens) {
  const int n = static_cast<int>(gens.front().rows());
  std::vector<Mat> letters = gens;
  for (const auto& g : gens) letters.push_back(g.adjoint());
  std::vector<Mat> words = letters;
  Mat basis = span_basis(words);
  for (;;) {
    std::vector<Mat> next = words;
    for (Eigen::Index c = 0; c < basis.cols(); ++c) {
      const Mat w = Eigen::Map<const Mat>(basis.col(c).data(), n, n);
      for (const auto& l : letters) next.push_back(w * l);
    }
    const Mat grown = span_basis(next);
    if (grown.cols() == basis.cols()) return basis;
    basis = grown;
    words.clear();
    for (Eigen::Index c = 0; c < basis.cols(); ++c) words.push_back(Eigen::Map<const Mat>(basis.col(c).data(), n, n));
  }
}

// Commutant {X : X g = g X for every generator and adjoint} as vec columns:
// the kernel of sum_k C_k^* C_k, C_k the commutator with generator k.
inline Mat commutant(const std::vector<Mat>& gens) {
  const int n = static_cast<int>(gens.front().rows());
  const Mat id = Mat::Identity(n, n);
  Mat gram = Mat::Zero(n * n, n * n);
  for (const auto& g0 : gens)
    for (const Mat& g : {g0, Mat(g0.adjoint())}) {
      // vec(X g - g X) = (g^T (x) I - I (x) g) vec X
      Mat op(n * n, n * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) op.block(i * n, j * n, n, n) = g(j, i) * id - (i == j ? g : Mat::Zero(n, n));
      gram.noalias() += op.adjoint() * op;
    }
  Eigen::SelfAdjointEigenSolver<Mat> eig(gram);
  const auto& ev = eig.eigenvalues();
  const double cut = std::max(1e-10 * ev.cwiseAbs().maxCoeff(), 1e-20);
  int k = 0;
  while (k < ev.size() && ev(k) < cut) ++k;
  return eig.eigenvectors().leftCols(k);
}

struct AlgebraShape {
  int dim = 0;
  int center = 0;
};

// dim(A cap A') = dim A + dim A' - dim(A + A').
inline AlgebraShape shape(const std::vector<Mat>& gens) {
  const Mat a = generated_algebra(gens);
  const Mat c = commutant(gens);
  Mat both(a.rows(), a.cols() + c.cols());
  both << a, c;
  return {static_cast<int>(a.cols()), static_cast<int>(a.cols() + c.cols()) - svd_rank(both)};
}

// Convolution on G x G written directly in group arithmetic:
// (h * k)(s,t) = sum_u h(u, u^{-1} s t) k(u^{-1} s, t), values in A_s.
inline std::vector<Mat> transformation_convolution(const FiniteGroup& g, const std::vector<Mat>& h,
                                                   const std::vector<Mat>& k) {
  const int n = g.order();
  std::vector<Mat> out(n * n, Mat::Zero(h[0].rows(), h[0].cols()));
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      for (int u = 0; u < n; ++u) {
        const int ui = g.inv(u);
        out[s * n + t] += h[u * n + g.mul(ui, g.mul(s, t))] * k[g.mul(ui, s) * n + t];
      }
  return out;
}

// h^*(s,t) = h(s^{-1}, st)^*.
inline std::vector<Mat> transformation_involution(const FiniteGroup& g, const std::vector<Mat>& h) {
  const int n = g.order();
  std::vector<Mat> out(n * n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) out[s * n + t] = h[g.inv(s) * n + g.mul(s, t)].adjoint();
  return out;
}

// On G x_beta K with h(x,t) = h1(x,t) W_t:
// (h * k)_1(x,t) = sum_{r(y) = r(x)} sum_s h1(y,s) alpha_s(k1(beta_s^{-1}(y^{-1} x), s^{-1} t)).
inline std::vector<Mat> semidirect_convolution(const FiniteGroupoid& g, const UnitaryAction& a,
                                               const std::vector<Mat>& h1, const std::vector<Mat>& k1) {
  const FiniteGroup& k = a.group();
  const int nk = k.order();
  std::vector<Mat> out(h1.size(), Mat::Zero(h1[0].rows(), h1[0].cols()));
  for (int x = 0; x < g.arrow_count(); ++x)
    for (int t = 0; t < nk; ++t)
      for (int y = 0; y < g.arrow_count(); ++y) {
        if (g.range(y) != g.range(x)) continue;
        const int yx = g.compose(g.inverse(y), x);
        for (int s = 0; s < nk; ++s) {
          const int z = a.beta.apply(k.inv(s), yx);
          out[x * nk + t] += h1[y * nk + s] * a.alpha(s, k1[z * nk + k.mul(k.inv(s), t)]);
        }
      }
  return out;
}

// h^*_1(x,t) = alpha_t(h1(beta_t^{-1}(x^{-1}), t^{-1})^*).
inline std::vector<Mat> semidirect_involution(const FiniteGroupoid& g, const UnitaryAction& a, const std::vector<Mat>& h1) {
  const FiniteGroup& k = a.group();
  const int nk = k.order();
  std::vector<Mat> out(h1.size());
  for (int x = 0; x < g.arrow_count(); ++x)
    for (int t = 0; t < nk; ++t) {
      const int ti = k.inv(t);
      out[x * nk + t] = a.alpha(t, h1[a.beta.apply(ti, g.inverse(x)) * nk + ti].adjoint());
    }
  return out;
}

// Counting-measure invariance tested on every point mass: for each t, u
// and arrow z, #{x in r^{-1}(u) : beta_t x = z} = [z in r^{-1}(beta_t u)].
inline bool haar_invariant_by_counting(const FiniteGroupoid& g, const GroupoidAction& a) {
  for (int t = 0; t < a.group.order(); ++t)
    for (int u : g.units())
      for (int z = 0; z < g.arrow_count(); ++z) {
        int lhs = 0;
        for (int x = 0; x < g.arrow_count(); ++x)
          if (g.range(x) == u && a.beta[t][x] == z) ++lhs;
        const int rhs = g.range(z) == a.beta[t][u] ? 1 : 0;
        if (lhs != rhs) return false;
      }
  return true;
}

}  // namespace fellcheck::oracle
