#pragma once

#include "fellcheck/crossed.hpp"

#include <memory>
#include <string>
#include <vector>

namespace fellcheck {

// C*(G, A), its coaction, the coaction crossed product, the dual action and
// the double crossed product, for a bundle A over a finite group G.
struct CoactionStage {
  FiniteGroup group;
  std::shared_ptr<const SectionAlgebra> sections;
  Envelope env;
  Coaction coaction;
  CrossedProduct ccp;  // labels (i, s), i a section basis index
  std::vector<StarMap> dual;
  CrossedProduct dcp;  // labels (i, s, t)
};

CoactionStage make_coaction_stage(const RealizedFellBundle& a);

// C*(G; B), an action induced by unitaries, the crossed product by it and
// the semidirect bundle C*(G x K; B x K).
struct SemidirectStage {
  std::shared_ptr<const SectionAlgebra> base;
  Envelope base_env;
  UnitaryAction w;
  InducedAction alpha;
  CrossedProduct acp;  // labels (j, t), j a base section index
  std::shared_ptr<const SectionAlgebra> sd;
  Envelope sd_env;
};

SemidirectStage make_semidirect_stage(const RealizedFellBundle& b, const UnitaryAction& w);
// Transformation bundle of a with the right-translation action.
SemidirectStage make_rt_stage(const RealizedFellBundle& a);

// C*(G x E, A x E) for the pair groupoid E on G, together with C*(E),
// the matrix algebra M_|G| and the common target C*(G, A) (x) M_|G|.
struct ProductStage {
  std::shared_ptr<const SectionAlgebra> product;
  Envelope product_env;
  std::shared_ptr<const SectionAlgebra> pair;
  Envelope pair_env;
  Realization matrices;
  Realization tensor_pair;  // C*(G, A) (x) C*(E)
  Realization target;       // C*(G, A) (x) M_n
};

ProductStage make_product_stage(const CoactionStage& c);

// (r,p,s) -> section of the transformation bundle at (r,s).
StarMap theta_iso(const CoactionStage& c, const SemidirectStage& rt);
// max_s |alpha^rt_s theta - theta hat-delta_s|.
double theta_equivariance_residual(const CoactionStage& c, const SemidirectStage& rt, const StarMap& theta);
// Crossed product by the induced action onto the semidirect bundle algebra.
StarMap sigma_iso(const SemidirectStage& s);
StarMap tau_map(const SemidirectStage& s);
// theta x G between the double crossed product and C*(T) x_rt G.
StarMap theta_cross(const CoactionStage& c, const SemidirectStage& rt, const StarMap& theta);
// Direct map from the double crossed product onto C*((G x G) x G).
StarMap big_theta_iso(const CoactionStage& c, const SemidirectStage& rt);
// ((r,s),t) -> (r, (rs, st)), fibers carried by the identity of the ambient.
StarMap psi_iso(const SemidirectStage& rt, const ProductStage& p, double* fiber_defect = nullptr);
StarMap omega_iso(const CoactionStage& c, const ProductStage& p);
StarMap tau_pair(const ProductStage& p);
StarMap upsilon_iso(const CoactionStage& c, const ProductStage& p, const StarMap& omega);
// Largest deviation of Upsilon from sum_{r,s,t} pi(f(r,s,t)) (x) E_st.
double upsilon_formula_residual(const CoactionStage& c, const ProductStage& p, const StarMap& upsilon);
// (r,p,s,t) -> pi(e_rp) (x) lambda_r M_s rho_t.
StarMap phi_canonical(const CoactionStage& c, const ProductStage& p);

struct MapRecord {
  std::string name;
  int domain_dim = 0;
  int codomain_dim = 0;
  int rank = 0;
  double consistency_residual = 0.0;
  double hom_residual = 0.0;
  bool certified = false;
  double wall_ms = 0.0;
};

struct CheckRecord {
  std::string name;
  double value = 0.0;
  bool passed = false;
};

struct LadderEntry {
  std::string name;
  int dim = 0;
  int expected = 0;
};

struct DualityReport {
  std::string name;
  int group_order = 0;
  int fiber_total = 0;
  double tol = kTol;
  // Structure of C*(G, A): center dimension and Wedderburn block sizes.
  int algebra_center = 0;
  std::vector<int> algebra_blocks;
  std::vector<LadderEntry> ladder;
  std::vector<MapRecord> maps;
  std::vector<CheckRecord> checks;
  bool verdict = false;
  std::string error;  // set when construction failed
  double wall_ms = 0.0;

  const CheckRecord* check(const std::string& n) const;
  const MapRecord* map(const std::string& n) const;
  // max over generators of |Phi(x) - Upsilon Psi Theta(x)|; -1 if not reached.
  double diagram_residual() const;
  std::string summary(bool timings = false) const;
};

DualityReport verify_duality_pipeline(const RealizedFellBundle& a, const std::string& name, double tol = kTol);

}  // namespace fellcheck
