#pragma once

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fellcheck {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Numerical policy shared by every module.
inline constexpr double kTol = 1e-9;          // absolute residual for identities
inline constexpr double kRankRel = 1e-8;      // relative singular-value cutoff
inline constexpr double kRankAbs = 1e-13;     // floor under kRankRel * sigma_max
inline constexpr double kGramTol = 1e-12;     // Gram = I for stored bases

class LinalgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Column-major vectorisation of a square matrix and its inverse.
Vec vec(const Mat& m);
Mat unvec(const Vec& v, int n);
Mat kron(const Mat& a, const Mat& b);
int numerical_rank(const Mat& m);

// Orthonormal basis (Frobenius inner product) of a subspace of M_N.
// Columns of coords() are vec'd basis matrices; coords()^* coords() = I.
class Subspace {
 public:
  Subspace() = default;
  Subspace(int ambient_dim, Mat coords);

  int ambient_dim() const { return n_; }
  int dim() const { return static_cast<int>(q_.cols()); }
  const Mat& coords() const { return q_; }
  Mat basis(int i) const { return unvec(q_.col(i), n_); }

  Vec coordinates(const Mat& m) const;
  Mat element(const Vec& c) const;
  Mat project(const Mat& m) const;
  double residual(const Mat& m) const;  // ||m - P m||_F
  bool contains(const Mat& m, double tol = kTol) const;

 private:
  int n_ = 0;
  Mat q_;
};

Subspace orthonormalize(int ambient_dim, std::span<const Mat> vectors);
Subspace orthonormalize(std::span<const Mat> vectors);  // non-empty input
Subspace span_of(int ambient_dim, const Mat& vec_columns);
// Frobenius distance of orthogonal projectors: zero iff the spaces coincide.
double projector_distance(const Subspace& a, const Subspace& b);
bool same_subspace(const Subspace& a, const Subspace& b, double tol = kTol);

class CStarRealization;
using Realization = std::shared_ptr<const CStarRealization>;

// A finite-dimensional *-subalgebra of M_N. b_i denotes carrier basis i.
// left[i] column j holds coords(b_i b_j); adjoint column j holds coords(b_j^*).
class CStarRealization {
 public:
  const Subspace& carrier() const { return carrier_; }
  int dim() const { return carrier_.dim(); }
  int ambient_dim() const { return carrier_.ambient_dim(); }
  const std::vector<Mat>& left_structure() const { return left_; }
  const Mat& adjoint_structure() const { return adjoint_; }
  double closure_residual() const { return closure_residual_; }

  bool is_unital() const { return unital_; }
  const Vec& unit_coords() const { return unit_; }

  Vec coordinates(const Mat& x) const { return carrier_.coordinates(x); }
  Mat element(const Vec& c) const { return carrier_.element(c); }
  Vec multiply(const Vec& a, const Vec& b) const;
  Vec adjoint(const Vec& a) const;
  Mat left_operator(const Vec& a) const;  // sum_i a_i left[i]

  // Non-null only for realizations built by tensor_realization.
  const Realization& left_factor() const { return factor_a_; }
  const Realization& right_factor() const { return factor_b_; }

 private:
  friend Realization realize_from_basis(Subspace, double);
  friend Realization star_closure(std::span<const Mat>);
  friend Realization tensor_realization(const Realization&, const Realization&);

  void find_unit();

  Subspace carrier_;
  std::vector<Mat> left_;
  Mat adjoint_;
  double closure_residual_ = 0.0;
  bool unital_ = false;
  Vec unit_;
  Realization factor_a_, factor_b_;
};

// Smallest *-algebra containing the generators (products and adjoints
// iterated until no direction outside the carrier exceeds kTol).
Realization star_closure(std::span<const Mat> generators);
// Structure constants for a carrier already known to be *-closed.
Realization realize_from_basis(Subspace carrier, double closure_residual = 0.0);
// Carrier basis is kron(a_i, b_j) at index i * dim(b) + j.
Realization tensor_realization(const Realization& a, const Realization& b);

// Linear map between realizations, as a matrix on carrier coordinates.
struct StarMap {
  Realization domain;
  Realization codomain;
  Mat matrix;
  double consistency_residual = 0.0;  // defect of the defining pairs
  double hom_residual = 0.0;          // max multiplicativity / adjoint defect

  Vec apply_coords(const Vec& c) const { return matrix * c; }
  Mat apply(const Mat& x) const;
};

double hom_defect(const CStarRealization& dom, const CStarRealization& cod,
                  const Mat& m);

// Throws LinalgError when the sources do not span the domain.
StarMap define_map_on_span(const Realization& dom, const Realization& cod,
                           std::span<const std::pair<Mat, Mat>> pairs);
StarMap map_from_matrix(const Realization& dom, const Realization& cod, Mat m,
                        double consistency = 0.0);
StarMap identity_map(const Realization& r);
StarMap compose(const StarMap& g, const StarMap& f);  // g after f
StarMap inverse(const StarMap& f);
// Needs dom/cod built by tensor_realization from the factors' realizations.
StarMap tensor_map(const StarMap& f, const StarMap& g, const Realization& dom,
                   const Realization& cod);

struct IsoReport {
  int rank = 0;
  int domain_dim = 0;
  int codomain_dim = 0;
  double consistency_residual = 0.0;
  double hom_residual = 0.0;
  bool is_star_hom = false;
  bool injective = false;
  bool surjective = false;
  bool is_isomorphism() const { return is_star_hom && injective && surjective; }
};

IsoReport verify_isomorphism(const StarMap& f, double tol = kTol);

int center_dimension(const CStarRealization& a);
// Matrix sizes n_j of the simple summands M_{n_j}, sorted ascending.
std::vector<int> wedderburn_blocks(const CStarRealization& a);
std::string describe_blocks(const std::vector<int>& blocks);

}  // namespace fellcheck
