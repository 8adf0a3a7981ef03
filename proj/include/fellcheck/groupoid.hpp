#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fellcheck {

class GroupoidError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Finite group given by its Cayley table; element 0 is the identity.
// Haar measure is counting measure and the modular function is 1.
class FiniteGroup {
 public:
  FiniteGroup() : FiniteGroup(std::vector<std::vector<int>>{{0}}) {}
  explicit FiniteGroup(std::vector<std::vector<int>> table);

  int order() const { return static_cast<int>(table_.size()); }
  int mul(int a, int b) const { return table_[a][b]; }
  int inv(int a) const { return inv_[a]; }
  static constexpr int identity() { return 0; }
  static constexpr double modular(int) { return 1.0; }
  const std::vector<std::vector<int>>& table() const { return table_; }
  bool is_abelian() const;

 private:
  std::vector<std::vector<int>> table_;
  std::vector<int> inv_;
};

FiniteGroup trivial_group();
FiniteGroup cyclic_group(int n);
// Element (a, b) has index a * |H| + b.
FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h);
FiniteGroup klein_group();
FiniteGroup symmetric_group3();

inline constexpr int kNoArrow = -1;

// Finite groupoid on arrows 0..n-1. Units are the arrows with r(x) = x.
// The constructor checks every groupoid axiom exhaustively.
class FiniteGroupoid {
 public:
  FiniteGroupoid(std::vector<int> range, std::vector<int> source, std::vector<int> inverse,
                 std::vector<int> compose, std::vector<std::string> labels = {});

  int arrow_count() const { return n_; }
  int range(int x) const { return range_[x]; }
  int source(int x) const { return source_[x]; }
  int inverse(int x) const { return inverse_[x]; }
  // kNoArrow unless s(x) = r(y).
  int compose(int x, int y) const { return compose_[x * n_ + y]; }
  bool composable(int x, int y) const { return compose(x, y) != kNoArrow; }
  bool is_unit(int x) const { return range_[x] == x; }
  const std::vector<int>& units() const { return units_; }
  int unit_count() const { return static_cast<int>(units_.size()); }
  int unit_position(int u) const { return unit_pos_[u]; }  // index into units()
  const std::vector<int>& range_fiber(int u) const { return range_fiber_[unit_pos_[u]]; }
  const std::string& label(int x) const { return labels_[x]; }
  bool is_group() const { return units_.size() == 1; }

 private:
  int n_;
  std::vector<int> range_, source_, inverse_, compose_;
  std::vector<std::string> labels_;
  std::vector<int> units_, unit_pos_;
  std::vector<std::vector<int>> range_fiber_;
};

// Arrow ids: group element g.
FiniteGroupoid group_as_groupoid(const FiniteGroup& g);
// Group of a one-unit groupoid whose unit is arrow 0; throws otherwise.
FiniteGroup groupoid_group(const FiniteGroupoid& g);
// G x G with (s,tr)(t,r) = (st,r); arrow (s,t) has id s * n + t.
FiniteGroupoid transformation_groupoid(const FiniteGroup& g);
inline int transformation_arrow(int n, int s, int t) { return s * n + t; }
// Pair groupoid on n points; arrow (a,b) has id a * n + b, r = a, s = b.
FiniteGroupoid pair_groupoid(int n);
// G x K, arrow (g,k) has id g * |K| + k.
FiniteGroupoid product_groupoid(const FiniteGroupoid& g, const FiniteGroupoid& k);

// Left invariance of the counting Haar system: x r^{-1}(s(x)) = r^{-1}(r(x)).
bool check_left_invariance(const FiniteGroupoid& g);

// Action beta of a group on a groupoid by automorphisms; beta[t][x].
struct GroupoidAction {
  FiniteGroup group;
  std::vector<std::vector<int>> beta;
  int apply(int t, int x) const { return beta[t][x]; }
};

// Empty optional when beta is a homomorphism into Aut(G); else the defect.
std::optional<std::string> action_defect(const FiniteGroupoid& g, const GroupoidAction& a);
GroupoidAction make_action(const FiniteGroupoid& g, FiniteGroup group, std::vector<std::vector<int>> beta);
GroupoidAction trivial_action(const FiniteGroupoid& g, FiniteGroup group);

// Right translation on G x G: beta_r(s,t) = (s, t r^{-1}).
GroupoidAction rt_action(const FiniteGroup& g);

// beta_t maps r^{-1}(u) bijectively onto r^{-1}(beta_t(u)) for every u, t.
bool check_haar_invariance(const FiniteGroupoid& g, const GroupoidAction& a);

// G x_beta K with (x,t)(y,s) = (x beta_t(y), ts) when s(x) = beta_t(r(y)).
// Arrow (x,t) has id x * |K| + t.
FiniteGroupoid semidirect_groupoid(const FiniteGroupoid& g, const GroupoidAction& a);

struct GroupoidHom {
  std::vector<int> arrow_map;
  int operator()(int x) const { return arrow_map[x]; }
};

std::optional<std::string> groupoid_hom_defect(const FiniteGroupoid& from, const FiniteGroupoid& to, const GroupoidHom& h);
GroupoidHom make_hom(const FiniteGroupoid& from, const FiniteGroupoid& to, std::vector<int> arrow_map);

}  // namespace fellcheck
