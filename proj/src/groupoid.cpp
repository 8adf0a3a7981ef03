#include "fellcheck/groupoid.hpp"

#include <algorithm>
#include <sstream>

namespace fellcheck {

namespace {

[[noreturn]] void fail(const std::string& what) { throw GroupoidError(what); }

std::string pair_label(const std::string& a, const std::string& b) { return "(" + a + "," + b + ")"; }

}  // namespace

// ------------------------------------------------------------------ groups

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> table) : table_(std::move(table)) {
  const int n = order();
  if (n == 0) fail("group: empty table");
  for (const auto& row : table_) {
    if (static_cast<int>(row.size()) != n) fail("group: table is not square");
    for (int v : row)
      if (v < 0 || v >= n) fail("group: table entry out of range");
  }
  for (int a = 0; a < n; ++a)
    if (table_[0][a] != a || table_[a][0] != a) fail("group: element 0 is not the identity");
  // Latin square gives unique inverses; associativity checked exhaustively.
  for (int a = 0; a < n; ++a) {
    std::vector<bool> row(n), col(n);
    for (int b = 0; b < n; ++b) {
      if (row[table_[a][b]] || col[table_[b][a]]) fail("group: table is not a Latin square");
      row[table_[a][b]] = col[table_[b][a]] = true;
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]]) fail("group: multiplication is not associative");
  inv_.assign(n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (table_[a][b] == 0) inv_[a] = b;
}

bool FiniteGroup::is_abelian() const {
  for (int a = 0; a < order(); ++a)
    for (int b = 0; b < order(); ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

FiniteGroup trivial_group() { return FiniteGroup(); }

FiniteGroup cyclic_group(int n) {
  if (n < 1) fail("cyclic_group: order must be positive");
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return FiniteGroup(std::move(t));
}

FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h) {
  const int m = h.order();
  const int n = g.order() * m;
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) t[x][y] = g.mul(x / m, y / m) * m + h.mul(x % m, y % m);
  return FiniteGroup(std::move(t));
}

FiniteGroup klein_group() { return direct_product(cyclic_group(2), cyclic_group(2)); }

FiniteGroup symmetric_group3() {
  // Permutations of {0,1,2} in lexicographic order; composition (p q)(i) = p(q(i)).
  std::vector<std::vector<int>> perms;
  std::vector<int> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  auto index = [&](const std::vector<int>& q) {
    return static_cast<int>(std::find(perms.begin(), perms.end(), q) - perms.begin());
  };
  std::vector<std::vector<int>> t(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      std::vector<int> c(3);
      for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
      t[a][b] = index(c);
    }
  return FiniteGroup(std::move(t));
}

// --------------------------------------------------------------- groupoids

FiniteGroupoid::FiniteGroupoid(std::vector<int> range, std::vector<int> source, std::vector<int> inverse,
                               std::vector<int> compose, std::vector<std::string> labels)
    : n_(static_cast<int>(range.size())),
      range_(std::move(range)),
      source_(std::move(source)),
      inverse_(std::move(inverse)),
      compose_(std::move(compose)),
      labels_(std::move(labels)) {
  const int n = n_;
  if (n == 0) fail("groupoid: no arrows");
  if (static_cast<int>(source_.size()) != n || static_cast<int>(inverse_.size()) != n ||
      static_cast<int>(compose_.size()) != n * n)
    fail("groupoid: inconsistent table sizes");
  if (labels_.empty())
    for (int x = 0; x < n; ++x) labels_.push_back(std::to_string(x));
  if (static_cast<int>(labels_.size()) != n) fail("groupoid: wrong number of labels");
  auto in_range = [n](int v) { return v >= 0 && v < n; };
  for (int x = 0; x < n; ++x) {
    if (!in_range(range_[x]) || !in_range(source_[x]) || !in_range(inverse_[x])) fail("groupoid: arrow out of range");
    for (int y = 0; y < n; ++y) {
      const int c = compose_[x * n + y];
      if (c != kNoArrow && !in_range(c)) fail("groupoid: composite out of range");
    }
  }
  unit_pos_.assign(n, -1);
  for (int x = 0; x < n; ++x)
    if (range_[x] == x) {
      unit_pos_[x] = static_cast<int>(units_.size());
      units_.push_back(x);
    }
  const std::string at = " at arrow ";
  for (int x = 0; x < n; ++x) {
    const int r = range_[x], s = source_[x];
    if (!is_unit(r) || !is_unit(s)) fail("groupoid: range/source is not a unit" + at + labels_[x]);
    if (is_unit(x) && s != x) fail("groupoid: unit with different source" + at + labels_[x]);
    const int xi = inverse_[x];
    if (inverse_[xi] != x) fail("groupoid: inverse is not an involution" + at + labels_[x]);
    if (range_[xi] != s || source_[xi] != r) fail("groupoid: inverse swaps range and source incorrectly" + at + labels_[x]);
    if (this->compose(r, x) != x || this->compose(x, s) != x) fail("groupoid: units do not act trivially" + at + labels_[x]);
    if (this->compose(x, xi) != r || this->compose(xi, x) != s) fail("groupoid: inverse law fails" + at + labels_[x]);
    for (int y = 0; y < n; ++y) {
      const int c = this->compose(x, y);
      if ((c != kNoArrow) != (s == range_[y]))
        fail("groupoid: composability differs from s(x) = r(y) at " + pair_label(labels_[x], labels_[y]));
      if (c != kNoArrow && (range_[c] != r || source_[c] != source_[y]))
        fail("groupoid: composite has wrong range/source at " + pair_label(labels_[x], labels_[y]));
    }
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const int xy = this->compose(x, y);
      if (xy == kNoArrow) continue;
      for (int z = 0; z < n; ++z) {
        const int yz = this->compose(y, z);
        if (yz == kNoArrow) continue;
        if (this->compose(xy, z) != this->compose(x, yz))
          fail("groupoid: composition is not associative at " + labels_[x] + "," + labels_[y] + "," + labels_[z]);
      }
    }
  range_fiber_.assign(units_.size(), {});
  for (int x = 0; x < n; ++x) range_fiber_[unit_pos_[range_[x]]].push_back(x);
}

FiniteGroupoid group_as_groupoid(const FiniteGroup& g) {
  const int n = g.order();
  std::vector<int> r(n, 0), s(n, 0), inv(n), c(n * n);
  for (int a = 0; a < n; ++a) {
    inv[a] = g.inv(a);
    for (int b = 0; b < n; ++b) c[a * n + b] = g.mul(a, b);
  }
  return FiniteGroupoid(r, s, inv, c);
}

FiniteGroup groupoid_group(const FiniteGroupoid& g) {
  if (!g.is_group() || g.units().front() != 0) fail("groupoid_group: expected one unit at arrow 0");
  const int n = g.arrow_count();
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = g.compose(a, b);
  return FiniteGroup(std::move(t));
}

FiniteGroupoid transformation_groupoid(const FiniteGroup& g) {
  const int n = g.order();
  const int m = n * n;
  std::vector<int> r(m), s(m), inv(m), c(m * m, kNoArrow);
  std::vector<std::string> labels(m);
  for (int a = 0; a < n; ++a)
    for (int t = 0; t < n; ++t) {
      const int x = a * n + t;
      r[x] = g.mul(a, t);  // (e, at)
      s[x] = t;            // (e, t)
      inv[x] = g.inv(a) * n + g.mul(a, t);
      labels[x] = pair_label(std::to_string(a), std::to_string(t));
    }
  for (int a = 0; a < n; ++a)
    for (int u = 0; u < n; ++u)
      for (int b = 0; b < n; ++b)
        for (int rr = 0; rr < n; ++rr)
          if (u == g.mul(b, rr)) c[(a * n + u) * m + (b * n + rr)] = g.mul(a, b) * n + rr;
  return FiniteGroupoid(r, s, inv, c, labels);
}

FiniteGroupoid pair_groupoid(int n) {
  if (n < 1) fail("pair_groupoid: need at least one point");
  const int m = n * n;
  std::vector<int> r(m), s(m), inv(m), c(m * m, kNoArrow);
  std::vector<std::string> labels(m);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int x = a * n + b;
      r[x] = a * n + a;
      s[x] = b * n + b;
      inv[x] = b * n + a;
      labels[x] = pair_label(std::to_string(a), std::to_string(b));
      for (int d = 0; d < n; ++d) c[x * m + (b * n + d)] = a * n + d;
    }
  return FiniteGroupoid(r, s, inv, c, labels);
}

FiniteGroupoid product_groupoid(const FiniteGroupoid& g, const FiniteGroupoid& k) {
  const int ng = g.arrow_count(), nk = k.arrow_count();
  const int m = ng * nk;
  std::vector<int> r(m), s(m), inv(m), c(m * m, kNoArrow);
  std::vector<std::string> labels(m);
  for (int a = 0; a < ng; ++a)
    for (int b = 0; b < nk; ++b) {
      const int x = a * nk + b;
      r[x] = g.range(a) * nk + k.range(b);
      s[x] = g.source(a) * nk + k.source(b);
      inv[x] = g.inverse(a) * nk + k.inverse(b);
      labels[x] = pair_label(g.label(a), k.label(b));
      for (int a2 = 0; a2 < ng; ++a2)
        for (int b2 = 0; b2 < nk; ++b2) {
          const int ca = g.compose(a, a2), cb = k.compose(b, b2);
          if (ca != kNoArrow && cb != kNoArrow) c[x * m + a2 * nk + b2] = ca * nk + cb;
        }
    }
  return FiniteGroupoid(r, s, inv, c, labels);
}

bool check_left_invariance(const FiniteGroupoid& g) {
  for (int x = 0; x < g.arrow_count(); ++x) {
    std::vector<int> image;
    for (int y : g.range_fiber(g.source(x))) image.push_back(g.compose(x, y));
    std::sort(image.begin(), image.end());
    std::vector<int> target = g.range_fiber(g.range(x));
    std::sort(target.begin(), target.end());
    if (image != target) return false;
  }
  return true;
}

// ----------------------------------------------------------------- actions

std::optional<std::string> action_defect(const FiniteGroupoid& g, const GroupoidAction& a) {
  const int n = g.arrow_count();
  const FiniteGroup& k = a.group;
  if (static_cast<int>(a.beta.size()) != k.order()) return "action: one permutation per group element required";
  for (int t = 0; t < k.order(); ++t) {
    const auto& b = a.beta[t];
    if (static_cast<int>(b.size()) != n) return "action: permutation has wrong length";
    std::vector<bool> hit(n);
    for (int x = 0; x < n; ++x) {
      if (b[x] < 0 || b[x] >= n || hit[b[x]]) return "action: beta_" + std::to_string(t) + " is not a bijection";
      hit[b[x]] = true;
    }
    for (int x = 0; x < n; ++x) {
      if (b[g.range(x)] != g.range(b[x]) || b[g.source(x)] != g.source(b[x]))
        return "action: beta_" + std::to_string(t) + " does not commute with range/source at " + g.label(x);
      if (b[g.inverse(x)] != g.inverse(b[x])) return "action: beta_" + std::to_string(t) + " does not preserve inverses at " + g.label(x);
      for (int y = 0; y < n; ++y) {
        const int xy = g.compose(x, y);
        if (xy != kNoArrow && b[xy] != g.compose(b[x], b[y]))
          return "action: beta_" + std::to_string(t) + " is not multiplicative at " + pair_label(g.label(x), g.label(y));
      }
    }
  }
  for (int x = 0; x < n; ++x)
    if (a.beta[0][x] != x) return "action: beta_e is not the identity";
  for (int s = 0; s < k.order(); ++s)
    for (int t = 0; t < k.order(); ++t)
      for (int x = 0; x < n; ++x)
        if (a.beta[s][a.beta[t][x]] != a.beta[k.mul(s, t)][x])
          return "action: beta_s beta_t != beta_st at s=" + std::to_string(s) + " t=" + std::to_string(t);
  return std::nullopt;
}

GroupoidAction make_action(const FiniteGroupoid& g, FiniteGroup group, std::vector<std::vector<int>> beta) {
  GroupoidAction a{std::move(group), std::move(beta)};
  if (auto d = action_defect(g, a)) fail(*d);
  return a;
}

GroupoidAction trivial_action(const FiniteGroupoid& g, FiniteGroup group) {
  std::vector<int> id(g.arrow_count());
  for (int x = 0; x < g.arrow_count(); ++x) id[x] = x;
  std::vector<std::vector<int>> beta(group.order(), id);
  return make_action(g, std::move(group), std::move(beta));
}

GroupoidAction rt_action(const FiniteGroup& g) {
  const int n = g.order();
  std::vector<std::vector<int>> beta(n, std::vector<int>(n * n));
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) beta[r][s * n + t] = s * n + g.mul(t, g.inv(r));
  return make_action(transformation_groupoid(g), g, std::move(beta));
}

bool check_haar_invariance(const FiniteGroupoid& g, const GroupoidAction& a) {
  for (int t = 0; t < a.group.order(); ++t)
    for (int u : g.units()) {
      std::vector<int> image;
      for (int x : g.range_fiber(u)) image.push_back(a.apply(t, x));
      std::sort(image.begin(), image.end());
      if (std::adjacent_find(image.begin(), image.end()) != image.end()) return false;
      // A map that sends a unit off the unit space has no target fiber.
      if (!g.is_unit(a.apply(t, u))) return false;
      std::vector<int> target = g.range_fiber(a.apply(t, u));
      std::sort(target.begin(), target.end());
      if (image != target) return false;
    }
  return true;
}

FiniteGroupoid semidirect_groupoid(const FiniteGroupoid& g, const GroupoidAction& a) {
  if (auto d = action_defect(g, a)) fail(*d);
  const FiniteGroup& k = a.group;
  const int ng = g.arrow_count(), nk = k.order();
  const int m = ng * nk;
  std::vector<int> r(m), s(m), inv(m), c(m * m, kNoArrow);
  std::vector<std::string> labels(m);
  for (int x = 0; x < ng; ++x)
    for (int t = 0; t < nk; ++t) {
      const int id = x * nk + t;
      const int tinv = k.inv(t);
      r[id] = g.range(x) * nk;
      s[id] = a.apply(tinv, g.source(x)) * nk;
      inv[id] = a.apply(tinv, g.inverse(x)) * nk + tinv;
      labels[id] = pair_label(g.label(x), std::to_string(t));
      for (int y = 0; y < ng; ++y) {
        const int xy = g.compose(x, a.apply(t, y));
        if (xy == kNoArrow) continue;
        for (int u = 0; u < nk; ++u) c[id * m + y * nk + u] = xy * nk + k.mul(t, u);
      }
    }
  return FiniteGroupoid(r, s, inv, c, labels);
}

// -------------------------------------------------------------------- homs

std::optional<std::string> groupoid_hom_defect(const FiniteGroupoid& from, const FiniteGroupoid& to, const GroupoidHom& h) {
  const int n = from.arrow_count();
  if (static_cast<int>(h.arrow_map.size()) != n) return "hom: arrow map has wrong length";
  for (int x = 0; x < n; ++x)
    if (h(x) < 0 || h(x) >= to.arrow_count()) return "hom: image out of range at " + from.label(x);
  for (int x = 0; x < n; ++x) {
    if (h(from.range(x)) != to.range(h(x)) || h(from.source(x)) != to.source(h(x)))
      return "hom: range/source not preserved at " + from.label(x);
    for (int y = 0; y < n; ++y) {
      const int xy = from.compose(x, y);
      if (xy != kNoArrow && h(xy) != to.compose(h(x), h(y)))
        return "hom: not multiplicative at " + pair_label(from.label(x), from.label(y));
    }
  }
  return std::nullopt;
}

GroupoidHom make_hom(const FiniteGroupoid& from, const FiniteGroupoid& to, std::vector<int> arrow_map) {
  GroupoidHom h{std::move(arrow_map)};
  if (auto d = groupoid_hom_defect(from, to, h)) fail(*d);
  return h;
}

}  // namespace fellcheck
