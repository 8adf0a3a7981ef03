#pragma once

#include "fellcheck/bundle.hpp"
#include "fellcheck/duality.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace fellcheck {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bundle file layout:
//   {"name": str?,
//    "group": G | "groupoid_constructor": C,
//    "block_dims": [int]?,           (defaults to one block of the matrix size)
//    "fibers": {"<arrow>": [M, ...]}} (spanning matrices; absent arrows are zero)
//   G = {"order": n, "table": [[int]]}
//   C = {"kind": "group", "group": G} | {"kind": "transformation", "group": G}
//     | {"kind": "pair", "points": n} | {"kind": "product", "left": C, "right": C}
//   M = rows of entries, each [re, im] or a real number.
nlohmann::json group_to_json(const FiniteGroup& g);
FiniteGroup group_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const Mat& m);
Mat matrix_from_json(const nlohmann::json& j);

FiniteGroupoid base_from_json(const nlohmann::json& j);
// Throws ParseError for malformed input; does not validate the bundle.
RealizedFellBundle bundle_from_json(const nlohmann::json& j);
// Only bundles over groups are emitted (top-level "group").
nlohmann::json bundle_to_json(const RealizedFellBundle& b, const std::string& name);
RealizedFellBundle load_bundle(const std::string& path);

// {bundle, group_order, fiber_total, tol, algebra, ladder,
//  stages: {map: {dims, residuals, flags}}, checks: {name: {value, passed}},
//  diagram_residual, verdict, error?, wall_times_ms?}. Wall times only when
// asked for, so that identical inputs give identical reports.
nlohmann::json report_to_json(const DualityReport& r, bool timings);

}  // namespace fellcheck
