#pragma once

#include "fellcheck/groupoid.hpp"
#include "fellcheck/linalg.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace fellcheck {

class BundleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fell bundle realized inside one matrix algebra M_N. The ambient splits
// into contiguous blocks, one per unit (ordered as base.units()), and the
// fiber over x lives in block (r(x), s(x)).
struct RealizedFellBundle {
  FiniteGroupoid base;
  std::vector<int> block_dims;
  std::vector<Subspace> fibers;

  int ambient_dim() const;
  int block_offset(int unit) const;
  int block_dim(int unit) const { return block_dims[base.unit_position(unit)]; }
  int total_dim() const;  // sum of fiber dimensions
  int fiber_dim(int x) const { return fibers[x].dim(); }
};

using BundlePtr = std::shared_ptr<const RealizedFellBundle>;

// Orthonormalizes each spanning set; does not validate.
RealizedFellBundle make_bundle(FiniteGroupoid base, std::vector<int> block_dims,
                               const std::vector<std::vector<Mat>>& spanning_sets);

struct InvariantCheck {
  std::string name;
  bool passed = true;
  double worst_residual = 0.0;
  std::string location;  // first failing arrow or arrow pair
};

struct BundleReport {
  std::vector<InvariantCheck> checks;
  bool ok() const;
  const InvariantCheck* first_failure() const;
  std::string summary() const;
};

BundleReport validate_bundle(const RealizedFellBundle& b, double tol = kTol);
void require_valid(const RealizedFellBundle& b, const std::string& what);

// Group G acting on a groupoid bundle through unitaries W_t in the ambient:
// W_t maps block v onto block beta_t(v) and Ad W_t maps A_x onto A_{beta_t x}.
struct UnitaryAction {
  GroupoidAction beta;
  std::vector<Mat> w;
  const FiniteGroup& group() const { return beta.group; }
  Mat alpha(int t, const Mat& a) const { return w[t] * a * w[t].adjoint(); }
};

BundleReport validate_unitary_action(const RealizedFellBundle& b, const UnitaryAction& a, double tol = kTol);

// Fiber over s is span{(b (x) 1)(u_s (x) rho_s)} in M_{N_B |G|},
// rho_s e_v = e_{v s^{-1}}. Requires u unitary, multiplicative, Ad u_s(B) = B.
RealizedFellBundle semidirect_bundle_from_group_action(const Realization& algebra, const FiniteGroup& g,
                                                       const std::vector<Mat>& u);

// Line bundle C U_s in M_{|G|}, U_s e_t = omega(s,t) e_{st}, scaled by |G|^{-1/2}.
RealizedFellBundle cocycle_line_bundle(const FiniteGroup& g, const std::function<cplx(int, int)>& omega);
// Largest cocycle-identity defect of omega; zero for a normalized 2-cocycle.
double cocycle_defect(const FiniteGroup& g, const std::function<cplx(int, int)>& omega);

// Fiber over x is C E_{r(x), s(x)}; over a group this is C in M_1.
RealizedFellBundle trivial_line_bundle(const FiniteGroupoid& g);

// Bundle over a group pulled back along phi : H -> G. Fiber over h is
// kron(E_{r(h), s(h)}, A_{phi(h)}) in M_{|H^0|} (x) M_N.
RealizedFellBundle pullback_bundle(const RealizedFellBundle& a, const FiniteGroupoid& h, const GroupoidHom& phi);
// Pullback along (s,t) -> s from the transformation groupoid.
RealizedFellBundle transformation_bundle(const RealizedFellBundle& a);
// Pullback along (g,x) -> g from G x h.
RealizedFellBundle product_bundle(const RealizedFellBundle& a, const FiniteGroupoid& h);

// Fiber over (x,t) is A_x W_t. Requires a valid action with invariant Haar system.
RealizedFellBundle groupoid_semidirect_bundle(const RealizedFellBundle& b, const UnitaryAction& a);

// Right translation of G on the transformation bundle of a: beta_r(s,t) =
// (s, t r^{-1}), W_r = kron(P_r, 1_N) with P_r e_u = e_{u r^{-1}}.
UnitaryAction rt_action_on_transformation_bundle(const RealizedFellBundle& a);

}  // namespace fellcheck
