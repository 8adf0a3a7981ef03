// fellcheck: validate finite Fell bundles and certify the duality pipeline.
// Exit codes: 0 success, 1 verification failure, 2 usage or parse error.

#include "fellcheck/demos.hpp"
#include "fellcheck/duality.hpp"
#include "fellcheck/io.hpp"
#include "fellcheck/sections.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <future>
#include <iostream>

using namespace fellcheck;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Input {
  std::string name;
  RealizedFellBundle bundle;
};

int run_validate(const std::string& path) {
  const RealizedFellBundle b = load_bundle(path);
  const BundleReport r = validate_bundle(b);
  std::cout << path << ": " << b.base.arrow_count() << " arrows, " << b.base.unit_count() << " units, ambient "
            << b.ambient_dim() << ", D = " << b.total_dim() << "\n"
            << r.summary() << (r.ok() ? "VALID" : "INVALID") << "\n";
  return r.ok() ? kOk : kFail;
}

int run_duality(const std::vector<std::string>& files, std::vector<std::string> demos, double tol,
                const std::string& json_path, bool parallel, bool timings) {
  if (std::find(demos.begin(), demos.end(), "all") != demos.end()) demos = demo_names();
  std::vector<Input> inputs;
  for (const auto& d : demos) {
    if (!is_demo(d)) throw ParseError("unknown demo '" + d + "' (see list-demos)");
    inputs.push_back({d, demo_bundle(d)});
  }
  for (const auto& f : files) inputs.push_back({f, load_bundle(f)});
  if (inputs.empty()) throw ParseError("duality needs at least one bundle file or --demo");

  std::vector<DualityReport> reports;
  if (parallel) {
    std::vector<std::future<DualityReport>> jobs;
    for (const auto& in : inputs)
      jobs.push_back(std::async(std::launch::async, [&in, tol] { return verify_duality_pipeline(in.bundle, in.name, tol); }));
    for (auto& j : jobs) reports.push_back(j.get());
  } else {
    for (const auto& in : inputs) reports.push_back(verify_duality_pipeline(in.bundle, in.name, tol));
  }

  bool all = true;
  for (const auto& r : reports) {
    std::cout << r.summary(timings);
    all = all && r.verdict;
  }
  if (!json_path.empty()) {
    nlohmann::json out;
    if (reports.size() == 1) {
      out = report_to_json(reports.front(), timings);
    } else {
      out = nlohmann::json::array();
      for (const auto& r : reports) out.push_back(report_to_json(r, timings));
    }
    std::ofstream f(json_path);
    if (!f) throw ParseError("cannot write '" + json_path + "'");
    f << out.dump(2) << "\n";
  }
  return all ? kOk : kFail;
}

int run_demo(const std::string& name, const std::string& emit) {
  if (!is_demo(name)) throw ParseError("unknown demo '" + name + "' (see list-demos)");
  const RealizedFellBundle b = demo_bundle(name);
  const SectionAlgebra sa(b);
  const Envelope env = enveloping_cstar(sa);
  const auto blocks = wedderburn_blocks(*env.realization);
  std::cout << name << ": " << demo_description(name) << "\n"
            << "  |G| = " << b.base.arrow_count() << ", ambient M_" << b.ambient_dim() << ", D = " << sa.dim() << "\n"
            << "  fiber dims";
  for (int x = 0; x < b.base.arrow_count(); ++x) std::cout << " " << b.fiber_dim(x);
  std::cout << "\n"
            << "  C*(G,A): dim " << env.realization->dim() << ", center " << center_dimension(*env.realization)
            << ", isomorphic to " << describe_blocks(blocks) << "\n";
  if (!emit.empty()) {
    std::ofstream f(emit);
    if (!f) throw ParseError("cannot write '" + emit + "'");
    f << bundle_to_json(b, name).dump(2) << "\n";
    std::cout << "  wrote " << emit << "\n";
  }
  return kOk;
}

int run_list() {
  for (const auto& n : demo_names()) std::cout << n << "\t" << demo_description(n) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite Fell bundles: validation and duality certification"};
  app.require_subcommand(1);

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "check every Fell bundle invariant of a bundle file");
  validate->add_option("file", validate_file, "bundle JSON")->required();

  std::vector<std::string> files, demos;
  double tol = kTol;
  std::string json_path;
  bool parallel = false, timings = false;
  auto* dual = app.add_subcommand("duality", "run the duality pipeline on bundle files or demos");
  dual->add_option("files", files, "bundle JSON files");
  dual->add_option("--demo", demos, "demo bundle name, or 'all' (repeatable)");
  dual->add_option("--tol", tol, "absolute residual tolerance in (0, 1e-3]")
      ->check(CLI::Validator(
          [](std::string& s) -> std::string {
            try {
              const double v = std::stod(s);
              if (v > 0.0 && v <= 1e-3) return {};
            } catch (const std::exception&) {
            }
            return "tolerance must be a number in (0, 1e-3]";
          },
          "(0, 1e-3]"));
  dual->add_option("--json", json_path, "write the report(s) as JSON");
  dual->add_flag("--parallel", parallel, "run inputs concurrently");
  dual->add_flag("--timings", timings, "include wall times");

  std::string demo_name, emit;
  auto* demo = app.add_subcommand("demo", "describe a built-in bundle");
  demo->add_option("name", demo_name, "demo name")->required();
  demo->add_option("--emit", emit, "write the bundle as JSON");

  auto* list = app.add_subcommand("list-demos", "list built-in bundles");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (validate->parsed()) return run_validate(validate_file);
    if (dual->parsed()) return run_duality(files, demos, tol, json_path, parallel, timings);
    if (demo->parsed()) return run_demo(demo_name, emit);
    if (list->parsed()) return run_list();
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
