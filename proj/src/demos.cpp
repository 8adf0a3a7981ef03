#include "fellcheck/demos.hpp"

#include <stdexcept>

namespace fellcheck {

const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names{"trivial", "z2line", "cyclic3", "swap", "pauli"};
  return names;
}

bool is_demo(const std::string& name) {
  for (const auto& n : demo_names())
    if (n == name) return true;
  return false;
}

Realization diagonal_algebra(int n) {
  std::vector<Mat> d;
  for (int i = 0; i < n; ++i) {
    Mat e = Mat::Zero(n, n);
    e(i, i) = 1.0;
    d.push_back(e);
  }
  return star_closure(d);
}

std::vector<Mat> cyclic_shift_unitaries(int n) {
  Mat p = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) p((i + 1) % n, i) = 1.0;
  std::vector<Mat> u{Mat::Identity(n, n)};
  for (int s = 1; s < n; ++s) u.push_back(p * u.back());
  return u;
}

cplx pauli_cocycle(int x, int y) {
  // Klein group element (a, b) has index 2a + b.
  const int b = x % 2, c = y / 2;
  return (b * c) % 2 ? -1.0 : 1.0;
}

RealizedFellBundle cyclic_line_bundle(int n) {
  return cocycle_line_bundle(cyclic_group(n), [](int, int) { return cplx(1.0); });
}

RealizedFellBundle demo_bundle(const std::string& name) {
  if (name == "trivial") return cyclic_line_bundle(1);
  if (name == "z2line") return cyclic_line_bundle(2);
  if (name == "cyclic3") return semidirect_bundle_from_group_action(diagonal_algebra(3), cyclic_group(3), cyclic_shift_unitaries(3));
  if (name == "swap") return semidirect_bundle_from_group_action(diagonal_algebra(2), cyclic_group(2), cyclic_shift_unitaries(2));
  if (name == "pauli") return cocycle_line_bundle(klein_group(), pauli_cocycle);
  throw std::invalid_argument("unknown demo bundle '" + name + "'");
}

std::string demo_description(const std::string& name) {
  if (name == "trivial") return "C over the trivial group";
  if (name == "z2line") return "line bundle over Z/2, trivial cocycle";
  if (name == "cyclic3") return "C^3 x Z/3, cyclic shift";
  if (name == "swap") return "C^2 x Z/2, coordinate flip";
  if (name == "pauli") return "Z/2 x Z/2 line bundle, cocycle (-1)^{bc}";
  throw std::invalid_argument("unknown demo bundle '" + name + "'");
}

SemidirectExample pair_flip_example() {
  const FiniteGroupoid e = pair_groupoid(2);
  RealizedFellBundle b = trivial_line_bundle(e);
  std::vector<int> flip(4);
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c) flip[a * 2 + c] = (1 - a) * 2 + (1 - c);
  std::vector<int> id{0, 1, 2, 3};
  GroupoidAction beta = make_action(e, cyclic_group(2), {id, flip});
  Mat x = Mat::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  UnitaryAction w{beta, {Mat::Identity(2, 2), x}};
  return {std::move(b), std::move(w)};
}

}  // namespace fellcheck
