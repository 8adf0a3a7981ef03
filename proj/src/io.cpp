#include "fellcheck/io.hpp"

#include <fstream>

namespace fellcheck {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw ParseError(what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

int as_int(const json& j, const std::string& what) {
  if (!j.is_number_integer()) bad(what + " must be an integer");
  return j.get<int>();
}

cplx entry_from_json(const json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) return {e[0].get<double>(), e[1].get<double>()};
  bad("matrix entry must be a number or [re, im]");
}

}  // namespace

json group_to_json(const FiniteGroup& g) { return {{"order", g.order()}, {"table", g.table()}}; }

FiniteGroup group_from_json(const json& j) {
  const int n = as_int(field(j, "order"), "group order");
  const json& t = field(j, "table");
  if (!t.is_array() || static_cast<int>(t.size()) != n) bad("group table must have 'order' rows");
  std::vector<std::vector<int>> table;
  for (const auto& row : t) {
    if (!row.is_array() || static_cast<int>(row.size()) != n) bad("group table rows must have 'order' entries");
    std::vector<int> r;
    for (const auto& v : row) r.push_back(as_int(v, "group table entry"));
    table.push_back(std::move(r));
  }
  try {
    return FiniteGroup(std::move(table));
  } catch (const GroupoidError& e) {
    bad(e.what());
  }
}

json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(row);
  }
  return rows;
}

Mat matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) bad("matrix must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Mat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = j[static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) bad("matrix must be square");
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = entry_from_json(row[static_cast<size_t>(k)]);
  }
  return m;
}

FiniteGroupoid base_from_json(const json& j) {
  const json& kind = field(j, "kind");
  if (!kind.is_string()) bad("base kind must be a string");
  const std::string k = kind.get<std::string>();
  try {
    if (k == "group") return group_as_groupoid(group_from_json(field(j, "group")));
    if (k == "transformation") return transformation_groupoid(group_from_json(field(j, "group")));
    if (k == "pair") {
      const int n = as_int(field(j, "points"), "pair groupoid points");
      if (n < 1) bad("pair groupoid needs at least one point");
      return pair_groupoid(n);
    }
    if (k == "product") return product_groupoid(base_from_json(field(j, "left")), base_from_json(field(j, "right")));
  } catch (const GroupoidError& e) {
    bad(e.what());
  }
  bad("unknown base kind '" + k + "'");
}

RealizedFellBundle bundle_from_json(const json& j) {
  if (!j.is_object()) bad("bundle file must hold a JSON object");
  const bool has_group = j.contains("group"), has_ctor = j.contains("groupoid_constructor");
  if (has_group == has_ctor) bad("bundle needs exactly one of 'group' or 'groupoid_constructor'");
  const FiniteGroupoid base = has_group ? group_as_groupoid(group_from_json(j.at("group")))
                                        : base_from_json(j.at("groupoid_constructor"));
  const json& fibers = field(j, "fibers");
  if (!fibers.is_object()) bad("'fibers' must map arrow ids to lists of matrices");
  std::vector<std::vector<Mat>> sets(static_cast<size_t>(base.arrow_count()));
  int size = -1;
  for (auto it = fibers.begin(); it != fibers.end(); ++it) {
    int x = -1;
    try {
      size_t pos = 0;
      x = std::stoi(it.key(), &pos);
      if (pos != it.key().size()) x = -1;
    } catch (const std::exception&) {
      x = -1;
    }
    if (x < 0 || x >= base.arrow_count()) bad("fiber key '" + it.key() + "' is not an arrow id");
    if (!it.value().is_array()) bad("fiber '" + it.key() + "' must be a list of matrices");
    for (const auto& m : it.value()) {
      Mat a = matrix_from_json(m);
      if (size >= 0 && a.rows() != size) bad("all fiber matrices must have the same size");
      size = static_cast<int>(a.rows());
      sets[static_cast<size_t>(x)].push_back(std::move(a));
    }
  }
  if (size < 0) bad("bundle has no fiber matrices");
  std::vector<int> blocks;
  if (j.contains("block_dims")) {
    const json& b = j.at("block_dims");
    if (!b.is_array()) bad("'block_dims' must be an array");
    for (const auto& d : b) blocks.push_back(as_int(d, "block dimension"));
  } else {
    if (base.unit_count() != 1) bad("'block_dims' is required when the base has several units");
    blocks = {size};
  }
  int total = 0;
  for (int d : blocks) total += d;
  if (static_cast<int>(blocks.size()) != base.unit_count()) bad("'block_dims' needs one entry per unit");
  if (total != size) bad("block dimensions do not add up to the matrix size");
  try {
    return make_bundle(base, blocks, sets);
  } catch (const std::exception& e) {
    bad(e.what());
  }
}

json bundle_to_json(const RealizedFellBundle& b, const std::string& name) {
  const FiniteGroup g = groupoid_group(b.base);
  json fibers = json::object();
  for (int x = 0; x < b.base.arrow_count(); ++x) {
    json list = json::array();
    for (int i = 0; i < b.fibers[x].dim(); ++i) list.push_back(matrix_to_json(b.fibers[x].basis(i)));
    fibers[std::to_string(x)] = list;
  }
  return {{"name", name},
          {"group", group_to_json(g)},
          {"block_dims", b.block_dims},
          {"fibers", fibers}};
}

RealizedFellBundle load_bundle(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    bad("'" + path + "' is not valid JSON: " + e.what());
  }
  return bundle_from_json(j);
}

json report_to_json(const DualityReport& r, bool timings) {
  json stages = json::object();
  json times = json::object();
  for (const auto& m : r.maps) {
    stages[m.name] = {{"dims", {{"domain", m.domain_dim}, {"codomain", m.codomain_dim}, {"rank", m.rank}}},
                      {"residuals", {{"hom", m.hom_residual}, {"consistency", m.consistency_residual}}},
                      {"flags", {{"certified", m.certified}}}};
    times[m.name] = m.wall_ms;
  }
  json checks = json::object();
  for (const auto& c : r.checks) checks[c.name] = {{"value", c.value}, {"passed", c.passed}};
  json ladder = json::array();
  for (const auto& l : r.ladder) ladder.push_back({{"algebra", l.name}, {"dim", l.dim}, {"expected", l.expected}});
  json out = {{"bundle", r.name},
              {"group_order", r.group_order},
              {"fiber_total", r.fiber_total},
              {"tol", r.tol},
              {"algebra", {{"dim", r.fiber_total}, {"center", r.algebra_center}, {"blocks", r.algebra_blocks}}},
              {"ladder", ladder},
              {"stages", stages},
              {"checks", checks},
              {"diagram_residual", r.diagram_residual()},
              {"verdict", r.verdict ? "PASS" : "FAIL"}};
  if (!r.error.empty()) out["error"] = r.error;
  if (timings) {
    times["total"] = r.wall_ms;
    out["wall_times_ms"] = times;
  }
  return out;
}

}  // namespace fellcheck
