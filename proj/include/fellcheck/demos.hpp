#pragma once

#include "fellcheck/bundle.hpp"

#include <string>
#include <vector>

namespace fellcheck {

// Built-in bundles over finite groups:
//   trivial  C over the trivial group
//   z2line   C U_s over Z/2 with trivial cocycle (C*(Z/2) = C^2)
//   cyclic3  C^3 x Z/3 with the cyclic shift (D = 9)
//   swap     C^2 x Z/2 with the flip (D = 4)
//   pauli    Z/2 x Z/2 with omega((a,b),(c,d)) = (-1)^{bc} (C* = M_2)
const std::vector<std::string>& demo_names();
bool is_demo(const std::string& name);
RealizedFellBundle demo_bundle(const std::string& name);
std::string demo_description(const std::string& name);

Realization diagonal_algebra(int n);
// u_s = P^s with P e_i = e_{i+1 mod n}.
std::vector<Mat> cyclic_shift_unitaries(int n);
cplx pauli_cocycle(int x, int y);
// Line bundle over Z/n with trivial cocycle.
RealizedFellBundle cyclic_line_bundle(int n);

// Z/2 flipping both points of the pair groupoid on two points, on its
// trivial line bundle. The action moves units, so beta is nontrivial.
struct SemidirectExample {
  RealizedFellBundle bundle;
  UnitaryAction action;
};
SemidirectExample pair_flip_example();

}  // namespace fellcheck
