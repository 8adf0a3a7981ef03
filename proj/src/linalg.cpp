#include "fellcheck/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace fellcheck {

namespace {

using SpMat = Eigen::SparseMatrix<cplx>;
using SpVec = Eigen::SparseVector<cplx>;

// Inner products below this are treated as exact zeros so that disjointly
// supported inputs stay sparse through Gram-Schmidt.
constexpr double kCoefFloor = 1e-15;
// Closure keeps a new direction when its orthogonal residual exceeds this.
constexpr double kClosureAdd = 1e-10;

SpVec sparse_vec(const SpMat& m) {
  const int n = static_cast<int>(m.rows());
  SpVec v(static_cast<Eigen::Index>(n) * n);
  std::vector<std::pair<Eigen::Index, cplx>> entries;
  for (int j = 0; j < m.outerSize(); ++j)
    for (SpMat::InnerIterator it(m, j); it; ++it)
      if (it.value() != cplx(0.0)) entries.emplace_back(it.row() + static_cast<Eigen::Index>(j) * n, it.value());
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  v.reserve(static_cast<Eigen::Index>(entries.size()));
  for (const auto& [i, x] : entries) v.insertBack(i) = x;
  return v;
}

SpVec sparse_from_dense(const Vec& d) {
  SpVec v(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (d(i) != cplx(0.0)) v.insertBack(i) = d(i);
  return v;
}

SpMat sparse_unvec(const SpVec& v, int n) {
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(static_cast<size_t>(v.nonZeros()));
  for (SpVec::InnerIterator it(v); it; ++it)
    t.emplace_back(static_cast<int>(it.index() % n), static_cast<int>(it.index() / n), it.value());
  SpMat m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SpMat sparse_of(const Mat& m) {
  SpMat s = m.sparseView(cplx(0.0), 0.0);
  s.makeCompressed();
  return s;
}

cplx dot(const SpVec& a, const SpVec& b) { return a.dot(b); }  // conj(a) . b

// Orthonormal sparse basis grown one vector at a time (classical GS, twice).
class SparseBasis {
 public:
  explicit SparseBasis(Eigen::Index len) : len_(len) {}

  // Returns true when v contributed a new direction.
  bool add(const SpVec& v, double drop) {
    SpVec r = v;
    for (int pass = 0; pass < 2; ++pass) {
      std::vector<cplx> c(cols_.size());
      for (size_t l = 0; l < cols_.size(); ++l) c[l] = dot(cols_[l], r);
      for (size_t l = 0; l < cols_.size(); ++l)
        if (std::abs(c[l]) > kCoefFloor) r -= c[l] * cols_[l];
      if (pass == 0 && r.norm() <= drop) return false;
    }
    r.prune(cplx(0.0), 0.0);
    const double nr = r.norm();
    if (nr <= drop) return false;
    cols_.push_back(r / nr);
    return true;
  }

  const std::vector<SpVec>& cols() const { return cols_; }

  Mat dense() const {
    Mat q = Mat::Zero(len_, static_cast<Eigen::Index>(cols_.size()));
    for (size_t l = 0; l < cols_.size(); ++l) q.col(static_cast<Eigen::Index>(l)) = Vec(cols_[l]);
    return q;
  }

 private:
  Eigen::Index len_;
  std::vector<SpVec> cols_;
};

SpMat columns_matrix(const std::vector<SpVec>& cols, Eigen::Index rows) {
  std::vector<Eigen::Triplet<cplx>> t;
  for (size_t j = 0; j < cols.size(); ++j)
    for (SpVec::InnerIterator it(cols[j]); it; ++it)
      t.emplace_back(static_cast<int>(it.index()), static_cast<int>(j), it.value());
  SpMat m(rows, static_cast<Eigen::Index>(cols.size()));
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

std::vector<SpMat> sparse_basis(const Subspace& s) {
  std::vector<SpMat> out;
  out.reserve(static_cast<size_t>(s.dim()));
  for (int i = 0; i < s.dim(); ++i) out.push_back(sparse_of(s.basis(i)));
  return out;
}

double max_col_norm(const Mat& m) {
  double r = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) r = std::max(r, m.col(j).norm());
  return r;
}

double rank_cutoff(double top) { return std::max(kRankRel * top, kRankAbs); }

}  // namespace

Vec vec(const Mat& m) {
  return Eigen::Map<const Vec>(m.data(), m.size());
}

Mat unvec(const Vec& v, int n) {
  if (v.size() != static_cast<Eigen::Index>(n) * n) throw LinalgError("unvec: size mismatch");
  return Eigen::Map<const Mat>(v.data(), n, n);
}

Mat kron(const Mat& a, const Mat& b) {
  Mat k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

int numerical_rank(const Mat& m) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 0;
  const double cut = rank_cutoff(s(0));
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

// ---------------------------------------------------------------- Subspace

Subspace::Subspace(int ambient_dim, Mat coords) : n_(ambient_dim), q_(std::move(coords)) {
  if (q_.rows() != static_cast<Eigen::Index>(n_) * n_) throw LinalgError("Subspace: coordinate rows must be N^2");
  if (q_.cols() > 0) {
    const double g = (q_.adjoint() * q_ - Mat::Identity(q_.cols(), q_.cols())).cwiseAbs().maxCoeff();
    if (g > kGramTol) throw LinalgError("Subspace: basis is not orthonormal");
  }
}

Vec Subspace::coordinates(const Mat& m) const {
  if (m.rows() != n_ || m.cols() != n_) throw LinalgError("Subspace: matrix has wrong size");
  return q_.adjoint() * vec(m);
}

Mat Subspace::element(const Vec& c) const {
  if (c.size() != q_.cols()) throw LinalgError("Subspace: coordinate vector has wrong length");
  if (q_.cols() == 0) return Mat::Zero(n_, n_);
  return unvec(q_ * c, n_);
}

Mat Subspace::project(const Mat& m) const { return element(coordinates(m)); }

double Subspace::residual(const Mat& m) const { return (m - project(m)).norm(); }

bool Subspace::contains(const Mat& m, double tol) const { return residual(m) <= tol; }

Subspace orthonormalize(int ambient_dim, std::span<const Mat> vectors) {
  const Eigen::Index len = static_cast<Eigen::Index>(ambient_dim) * ambient_dim;
  double top = 0.0;
  for (const auto& v : vectors) {
    if (v.rows() != ambient_dim || v.cols() != ambient_dim) throw LinalgError("orthonormalize: matrix has wrong size");
    top = std::max(top, v.norm());
  }
  SparseBasis basis(len);
  const double drop = rank_cutoff(top);
  for (const auto& v : vectors) basis.add(sparse_vec(sparse_of(v)), drop);
  return Subspace(ambient_dim, basis.dense());
}

Subspace orthonormalize(std::span<const Mat> vectors) {
  if (vectors.empty()) throw LinalgError("orthonormalize: empty input needs an explicit ambient size");
  return orthonormalize(static_cast<int>(vectors.front().rows()), vectors);
}

Subspace span_of(int ambient_dim, const Mat& vec_columns) {
  std::vector<Mat> ms;
  for (Eigen::Index j = 0; j < vec_columns.cols(); ++j) ms.push_back(unvec(vec_columns.col(j), ambient_dim));
  return orthonormalize(ambient_dim, ms);
}

double projector_distance(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw LinalgError("projector_distance: ambient mismatch");
  // ||P_a - P_b||_F^2 = ||(I - P_b) Q_a||^2 + ||(I - P_a) Q_b||^2, evaluated
  // without cancellation.
  auto leak = [](const Mat& q, const Mat& p) {
    if (q.cols() == 0) return 0.0;
    if (p.cols() == 0) return q.squaredNorm();
    return (q - p * (p.adjoint() * q)).squaredNorm();
  };
  return std::sqrt(leak(a.coords(), b.coords()) + leak(b.coords(), a.coords()));
}

bool same_subspace(const Subspace& a, const Subspace& b, double tol) {
  return a.dim() == b.dim() && projector_distance(a, b) <= tol;
}

// ------------------------------------------------------- CStarRealization

Vec CStarRealization::multiply(const Vec& a, const Vec& b) const { return left_operator(a) * b; }

Vec CStarRealization::adjoint(const Vec& a) const { return adjoint_ * a.conjugate(); }

Mat CStarRealization::left_operator(const Vec& a) const {
  Mat l = Mat::Zero(dim(), dim());
  for (int i = 0; i < dim(); ++i)
    if (a(i) != cplx(0.0)) l += a(i) * left_[static_cast<size_t>(i)];
  return l;
}

void CStarRealization::find_unit() {
  const int k = dim();
  unital_ = false;
  unit_ = Vec::Zero(k);
  if (k == 0) return;
  // u_i solves sum_i u_i L_i = I and sum_i u_i R_i = I, where R_i(:,j) = L_j(:,i).
  Mat a(2 * k * k, k);
  Vec rhs(2 * k * k);
  const Mat id = Mat::Identity(k, k);
  rhs << vec(id), vec(id);
  for (int i = 0; i < k; ++i) {
    Mat r(k, k);
    for (int j = 0; j < k; ++j) r.col(j) = left_[static_cast<size_t>(j)].col(i);
    a.col(i) << vec(left_[static_cast<size_t>(i)]), vec(r);
  }
  Vec u = a.colPivHouseholderQr().solve(rhs);
  if ((a * u - rhs).norm() <= kTol) {
    unital_ = true;
    unit_ = u;
  }
}

Realization realize_from_basis(Subspace carrier, double closure_residual) {
  auto r = std::shared_ptr<CStarRealization>(new CStarRealization());
  const int k = carrier.dim();
  const int n = carrier.ambient_dim();
  const Eigen::Index len = static_cast<Eigen::Index>(n) * n;
  std::vector<SpMat> b = sparse_basis(carrier);
  std::vector<SpVec> cols;
  for (const auto& m : b) cols.push_back(sparse_vec(m));
  const SpMat q = columns_matrix(cols, len);
  const SpMat qa = q.adjoint();

  double worst = closure_residual;
  r->left_.resize(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    std::vector<SpVec> prod;
    prod.reserve(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j) {
      SpMat p = b[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
      prod.push_back(sparse_vec(p));
    }
    const SpMat pm = columns_matrix(prod, len);
    const SpMat c = qa * pm;
    const SpMat res = pm - q * c;
    for (int j = 0; j < k; ++j) worst = std::max(worst, res.col(j).norm());
    r->left_[static_cast<size_t>(i)] = Mat(c);
  }
  std::vector<SpVec> adj;
  for (const auto& m : b) adj.push_back(sparse_vec(SpMat(m.adjoint())));
  const SpMat am = columns_matrix(adj, len);
  const SpMat s = qa * am;
  const SpMat sres = am - q * s;
  for (int j = 0; j < k; ++j) worst = std::max(worst, sres.col(j).norm());
  r->adjoint_ = Mat(s);
  if (k == 0) r->adjoint_ = Mat::Zero(0, 0);
  r->closure_residual_ = worst;
  r->carrier_ = std::move(carrier);
  r->find_unit();
  return r;
}

Realization star_closure(std::span<const Mat> generators) {
  if (generators.empty()) throw LinalgError("star_closure: no generators");
  const int n = static_cast<int>(generators.front().rows());
  const Eigen::Index len = static_cast<Eigen::Index>(n) * n;
  Subspace start = orthonormalize(n, generators);
  SparseBasis basis(len);
  for (int i = 0; i < start.dim(); ++i) basis.add(sparse_from_dense(start.coords().col(i)), kClosureAdd);

  for (int round = 0; round < 8; ++round) {
    std::vector<SpMat> mats;
    for (const auto& c : basis.cols()) mats.push_back(sparse_unvec(c, n));
    bool grew = false;
    for (size_t i = 0; i < mats.size(); ++i) {
      for (size_t j = 0; j <= i; ++j) {
        for (const SpMat& p : {SpMat(mats[i] * mats[j]), SpMat(mats[j] * mats[i])}) {
          if (basis.add(sparse_vec(p), kClosureAdd)) {
            mats.push_back(sparse_unvec(basis.cols().back(), n));
            grew = true;
          }
        }
      }
      if (basis.add(sparse_vec(SpMat(mats[i].adjoint())), kClosureAdd)) {
        mats.push_back(sparse_unvec(basis.cols().back(), n));
        grew = true;
      }
    }
    Realization r = realize_from_basis(Subspace(n, basis.dense()));
    if (r->closure_residual() <= kTol || !grew) {
      if (r->closure_residual() > kTol) throw LinalgError("star_closure: closure did not converge");
      return r;
    }
  }
  throw LinalgError("star_closure: closure did not converge");
}

Realization tensor_realization(const Realization& a, const Realization& b) {
  const int ka = a->dim(), kb = b->dim();
  const int na = a->ambient_dim(), nb = b->ambient_dim();
  const int n = na * nb;
  const int k = ka * kb;
  // kron of orthonormal families is orthonormal; build coords directly.
  Mat q(static_cast<Eigen::Index>(n) * n, k);
  for (int i = 0; i < ka; ++i) {
    const Mat ai = a->carrier().basis(i);
    for (int j = 0; j < kb; ++j) q.col(i * kb + j) = vec(kron(ai, b->carrier().basis(j)));
  }
  auto r = std::shared_ptr<CStarRealization>(new CStarRealization());
  r->carrier_ = Subspace(n, std::move(q));
  r->left_.resize(static_cast<size_t>(k));
  for (int i = 0; i < ka; ++i)
    for (int j = 0; j < kb; ++j)
      r->left_[static_cast<size_t>(i * kb + j)] =
          kron(a->left_structure()[static_cast<size_t>(i)], b->left_structure()[static_cast<size_t>(j)]);
  r->adjoint_ = kron(a->adjoint_structure(), b->adjoint_structure());
  r->closure_residual_ = std::max(a->closure_residual(), b->closure_residual());
  r->factor_a_ = a;
  r->factor_b_ = b;
  r->find_unit();
  return r;
}

// ----------------------------------------------------------------- StarMap

Mat StarMap::apply(const Mat& x) const { return codomain->element(matrix * domain->coordinates(x)); }

double hom_defect(const CStarRealization& dom, const CStarRealization& cod, const Mat& m) {
  const int k = dom.dim();
  double worst = 0.0;
  for (int i = 0; i < k; ++i) {
    const Mat lhs = m * dom.left_structure()[static_cast<size_t>(i)];  // phi(b_i b_j)
    const Mat rhs = cod.left_operator(m.col(i)) * m;                    // phi(b_i) phi(b_j)
    worst = std::max(worst, max_col_norm(lhs - rhs));
    const Vec adj_l = m * dom.adjoint_structure().col(i);
    const Vec adj_r = cod.adjoint(m.col(i));
    worst = std::max(worst, (adj_l - adj_r).norm());
  }
  return worst;
}

StarMap map_from_matrix(const Realization& dom, const Realization& cod, Mat m, double consistency) {
  if (m.rows() != cod->dim() || m.cols() != dom->dim()) throw LinalgError("map_from_matrix: shape mismatch");
  StarMap f{dom, cod, std::move(m), consistency, 0.0};
  f.hom_residual = hom_defect(*dom, *cod, f.matrix);
  return f;
}

StarMap define_map_on_span(const Realization& dom, const Realization& cod,
                           std::span<const std::pair<Mat, Mat>> pairs) {
  const auto m = static_cast<Eigen::Index>(pairs.size());
  Mat x(dom->dim(), m), y(cod->dim(), m);
  double membership = 0.0;
  for (Eigen::Index c = 0; c < m; ++c) {
    const auto& [src, dst] = pairs[static_cast<size_t>(c)];
    x.col(c) = dom->coordinates(src);
    y.col(c) = cod->coordinates(dst);
    membership = std::max(membership, dom->carrier().residual(src));
    membership = std::max(membership, cod->carrier().residual(dst));
  }
  if (numerical_rank(x) < dom->dim()) throw LinalgError("define_map_on_span: sources do not span the domain");
  // M X = Y with X of full row rank.
  const Mat mt = x.adjoint().bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(Mat(y.adjoint()));
  Mat mm = mt.adjoint();
  const double consistency = std::max(membership, max_col_norm(mm * x - y));
  return map_from_matrix(dom, cod, std::move(mm), consistency);
}

StarMap identity_map(const Realization& r) { return map_from_matrix(r, r, Mat::Identity(r->dim(), r->dim())); }

StarMap compose(const StarMap& g, const StarMap& f) {
  if (f.codomain != g.domain) throw LinalgError("compose: codomain/domain realizations differ");
  return map_from_matrix(f.domain, g.codomain, g.matrix * f.matrix,
                         std::max(f.consistency_residual, g.consistency_residual));
}

StarMap inverse(const StarMap& f) {
  if (f.matrix.rows() != f.matrix.cols()) throw LinalgError("inverse: map is not square");
  Eigen::FullPivLU<Mat> lu(f.matrix);
  lu.setThreshold(kRankRel);
  if (!lu.isInvertible()) throw LinalgError("inverse: map is singular");
  return map_from_matrix(f.codomain, f.domain, lu.inverse(), f.consistency_residual);
}

StarMap tensor_map(const StarMap& f, const StarMap& g, const Realization& dom, const Realization& cod) {
  if (dom->left_factor() != f.domain || dom->right_factor() != g.domain)
    throw LinalgError("tensor_map: domain is not the tensor of the factor domains");
  if (cod->left_factor() != f.codomain || cod->right_factor() != g.codomain)
    throw LinalgError("tensor_map: codomain is not the tensor of the factor codomains");
  return map_from_matrix(dom, cod, kron(f.matrix, g.matrix),
                         std::max(f.consistency_residual, g.consistency_residual));
}

IsoReport verify_isomorphism(const StarMap& f, double tol) {
  IsoReport r;
  r.domain_dim = f.domain->dim();
  r.codomain_dim = f.codomain->dim();
  r.rank = numerical_rank(f.matrix);
  r.consistency_residual = f.consistency_residual;
  r.hom_residual = f.hom_residual;
  r.is_star_hom = f.hom_residual <= tol && f.consistency_residual <= tol;
  r.injective = r.rank == r.domain_dim;
  r.surjective = r.rank == r.codomain_dim;
  return r;
}

// ------------------------------------------------------------------ center

namespace {

Mat center_basis(const CStarRealization& a) {
  const int k = a.dim();
  // z in Z(A) iff sum_i z_i (L_i(:,j) - L_j(:,i)) = 0 for all j.
  Mat c(static_cast<Eigen::Index>(k) * k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      c.block(static_cast<Eigen::Index>(j) * k, i, k, 1) =
          a.left_structure()[static_cast<size_t>(i)].col(j) - a.left_structure()[static_cast<size_t>(j)].col(i);
  Eigen::BDCSVD<Mat> svd(c, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = rank_cutoff(s.size() ? s(0) : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++rank;
  return svd.matrixV().rightCols(k - rank);
}

}  // namespace

int center_dimension(const CStarRealization& a) {
  if (a.dim() == 0) return 0;
  return static_cast<int>(center_basis(a).cols());
}

std::vector<int> wedderburn_blocks(const CStarRealization& a) {
  if (a.dim() == 0) return {};
  if (!a.is_unital()) throw LinalgError("wedderburn_blocks: algebra has no unit");
  const Mat z = center_basis(a);
  // Generic self-adjoint central element. Both the real and imaginary parts
  // of each central basis vector enter with their own weight: the real
  // parts alone can collapse (e.g. U and U^2 = U^* on Z/3 share one).
  Mat h = Mat::Zero(a.ambient_dim(), a.ambient_dim());
  for (Eigen::Index m = 0; m < z.cols(); ++m) {
    const Mat zm = a.element(z.col(m));
    const double wr = std::cos(0.37 + 1.71 * static_cast<double>(m)) + 0.5;
    const double wi = std::sin(1.13 + 2.39 * static_cast<double>(m)) + 0.25;
    h += wr * 0.5 * (zm + zm.adjoint()) + wi * cplx(0.0, -0.5) * (zm - zm.adjoint());
  }
  // Shifted so that the algebra's support sits strictly above zero while
  // its ambient complement stays at zero.
  const Mat unit = a.element(a.unit_coords());
  const double shift = 1.0 + 2.0 * h.norm();
  const Mat hs = h + shift * unit;
  Eigen::SelfAdjointEigenSolver<Mat> es(hs);
  const auto& ev = es.eigenvalues();
  const Mat& v = es.eigenvectors();
  std::vector<std::pair<double, std::vector<int>>> clusters;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (clusters.empty() || ev(i) - clusters.back().first > 1e-6) clusters.push_back({ev(i), {}});
    clusters.back().second.push_back(static_cast<int>(i));
  }
  std::vector<int> blocks;
  for (const auto& [lambda, idx] : clusters) {
    if (std::abs(lambda) < 0.5) continue;  // ambient complement of the unit
    Mat p = Mat::Zero(hs.rows(), hs.cols());
    for (int i : idx) p += v.col(i) * v.col(i).adjoint();
    if (a.carrier().residual(p) > 1e-6) throw LinalgError("wedderburn_blocks: spectral projection left the algebra");
    const int d = numerical_rank(a.left_operator(a.coordinates(p)));
    const int nj = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d))));
    if (nj * nj != d) throw LinalgError("wedderburn_blocks: summand dimension is not a square");
    blocks.push_back(nj);
  }
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

std::string describe_blocks(const std::vector<int>& blocks) {
  std::map<int, int> count;
  for (int b : blocks) ++count[b];
  std::ostringstream os;
  bool first = true;
  for (auto it = count.rbegin(); it != count.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    const std::string name = it->first == 1 ? "C" : "M" + std::to_string(it->first);
    for (int r = 0; r < it->second; ++r) os << (r ? " + " : "") << name;
  }
  return first ? std::string("0") : os.str();
}

}  // namespace fellcheck
