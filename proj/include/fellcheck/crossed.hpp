#pragma once

#include "fellcheck/sections.hpp"

#include <vector>

namespace fellcheck {

// C*(G) as the GNS image of the trivial line bundle: lambda_s e_u = e_{su}.
struct GroupCStar {
  FiniteGroup group;
  Realization realization;
  std::vector<Mat> lambda;
  Mat point_mass(int t) const;  // M_t = e_tt on l^2(G)
  Mat right_regular(int t) const;  // rho_t e_u = e_{u t^{-1}}
};

GroupCStar group_cstar(const FiniteGroup& g);

// delta(a_s) = a_s (x) lambda_s on H (x) l^2(G).
struct Coaction {
  Realization algebra;
  GroupCStar group;
  Realization target;
  StarMap delta;
  StarMap delta_group;
  std::vector<Mat> j_a;  // delta(pi(e_i)) for each section basis element
  bool injective = false;
  double identity_residual = 0.0;  // (delta (x) id) delta vs (id (x) delta_G) delta
  int nondegeneracy_rank = 0;      // rank of span delta(A)(1 (x) C*(G))
};

Coaction coaction_delta(const SectionAlgebra& a, const Envelope& env);

struct CrossedProduct {
  Realization carrier;
  std::vector<std::vector<int>> labels;
  std::vector<Mat> generators;
  // Set for crossed products by an action.
  Realization base;
  FiniteGroup group;
  std::vector<StarMap> action;

  int find(const std::vector<int>& label) const;  // throws if absent
};

// Generators (i, t) = delta(pi(e_i)) (1 (x) M_t).
CrossedProduct coaction_crossed_product(const Coaction& c);

// hat-delta_s acts as (i, t) -> (i, t s^{-1}), i.e. j_G(f) -> j_G(f(. s)).
std::vector<StarMap> dual_action(const CrossedProduct& ccp, const FiniteGroup& g);

// max over s, t of |M_s M_t - M_st|, plus the largest hom/consistency residual.
double action_residual(const std::vector<StarMap>& act, const FiniteGroup& g);
// Every map a certified automorphism and the action law within tol.
bool is_certified_action(const std::vector<StarMap>& act, const FiniteGroup& g, double tol = kTol);

// Regular covariant representation on H_B (x) l^2(G):
// i_B(b) = sum_u alpha_{u^{-1}}(b) (x) e_uu, i_G(s) = 1 (x) lambda_s.
Mat covariant_image(const CrossedProduct& acp, const Mat& b, int s);

// Generators i_B(b_j) i_G(s) with labels (label_j..., s).
CrossedProduct action_crossed_product(const Realization& b, const FiniteGroup& g, const std::vector<StarMap>& act,
                                      const std::vector<Mat>& b_generators,
                                      const std::vector<std::vector<int>>& b_labels);
// Uses the carrier basis of b, labelled (j).
CrossedProduct action_crossed_product(const Realization& b, const FiniteGroup& g, const std::vector<StarMap>& act);

// Action of G on a realization by conjugation with unitaries in its ambient.
std::vector<StarMap> inner_action(const Realization& b, const std::vector<Mat>& u);

enum class Translation { left, right };

// Residual of pi_0(a_s) mu(delta_t) = mu(T_s delta_t) pi_0(a_s) on the
// canonical covariant pair of the coaction; left is T_s delta_t = delta_{st},
// right is delta_{t s^{-1}}.
double bundle_covariance_residual(const SectionAlgebra& a, const Coaction& c, Translation tr);
bool check_bundle_covariance(const SectionAlgebra& a, const Coaction& c, Translation tr, double tol = kTol);

// Action on C*(G; B) induced by a unitary action on the bundle:
// (alpha_t f)(x) = W_t f(beta_t^{-1} x) W_t^*.
struct InducedAction {
  std::vector<StarMap> maps;
  double action_residual = 0.0;
  double trace_residual = 0.0;  // |tau(alpha_t e_i) - tau(e_i)|
};

InducedAction induced_section_action(const SectionAlgebra& a, const Envelope& env, const UnitaryAction& w);

// B x_alpha G versus C*(G, B x_u G) for an inner-implemented action, with
// the dual coaction on the crossed product matched to the bundle coaction.
struct CompatReport {
  int algebra_dim = 0;
  int crossed_dim = 0;
  IsoReport theta;
  double coaction_identity_residual = 0.0;
  double compat_residual = 0.0;
  std::vector<int> blocks;  // Wedderburn blocks of the crossed product
  bool ok(double tol = kTol) const;
};

CompatReport semidirect_coaction_compat(const Realization& b, const FiniteGroup& g, const std::vector<Mat>& u,
                                        double tol = kTol);

}  // namespace fellcheck
