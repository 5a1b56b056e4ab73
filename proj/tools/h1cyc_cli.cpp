// h1cyc: reproduce the cohomology computation, query H^1 and summands, run
// lemma campaigns. Exit status: 0 pass, 1 computational failure, 2 bad input.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "h1cyc/run.hpp"

namespace {

using h1cyc::io::InputError;
using h1cyc::io::Json;
namespace run = h1cyc::run;

Json read_json(const std::string& path, const std::string& field) {
  std::ifstream in(path);
  if (!in) throw InputError(field, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(field, std::string("invalid JSON: ") + e.what());
  }
}

void print(const run::RunReport& r, bool timings) {
  for (const auto& s : r.steps) {
    const char* tag = s.passed ? "PASS" : s.asserted ? "FAIL" : "INFO";
    std::cout << "[" << tag << "] " << s.name;
    if (timings) std::cout << " (" << static_cast<long long>(s.elapsed_ms) << " ms)";
    std::cout << "\n";
    for (const auto& [key, value] : s.detail.items()) {
      if (key == "trials" || key == "witness_cocycles") continue;
      std::cout << "    " << key << ": " << value.dump() << "\n";
    }
  }
  std::cout << (r.overall() ? "overall: pass" : "overall: fail") << "\n";
}

int finish(const run::RunReport& r, const std::string& json_path, bool timings) {
  print(r, timings);
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    if (!out) {
      std::cerr << "error: --json: cannot write " << json_path << "\n";
      return 2;
    }
    out << run::to_json(r, timings).dump(2) << "\n";
  }
  return r.overall() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cohomology of finite matrix groups and direct-summand checks"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string json_path;
  bool timings = false;
  app.add_option("--json", json_path, "Write the JSON report to this path");
  app.add_flag("--timings", timings, "Include per-step wall-clock in the reports");

  run::ReproduceOptions rep;
  std::size_t cap = h1cyc::kDefaultClosureCap;
  auto* reproduce = app.add_subcommand("reproduce", "Verify the full construction for a prime p");
  reproduce->add_option("--p", rep.p, "Prime congruent to 2 mod 3")->required();
  reproduce->add_option("--cap", rep.cap, "Closure size cap");
  reproduce->add_flag("--allow-large", rep.allow_large, "Permit p > 7");

  auto* bench = app.add_subcommand("bench", "Time the pipeline stages");
  run::ReproduceOptions bench_opts;
  bench->add_option("--p", bench_opts.p, "Prime congruent to 2 mod 3");
  bench->add_option("--cap", bench_opts.cap, "Closure size cap");
  bench->add_flag("--allow-large", bench_opts.allow_large, "Permit p > 7");

  std::string group_file, module_file, subgroup_file;
  bool cyc = false;
  auto* h1 = app.add_subcommand("h1", "H^1 of a matrix group on a module");
  h1->add_option("--group", group_file, "Group spec JSON file")->required();
  h1->add_option("--module", module_file, "Module JSON file")->required();
  h1->add_flag("--cyc", cyc, "Also compute the locally trivial part");
  h1->add_option("--cap", cap, "Closure size cap");

  auto* summand = app.add_subcommand("summand", "Is a subgroup a direct summand?");
  summand->add_option("--group", group_file, "Group JSON file")->required();
  summand->add_option("--subgroup", subgroup_file, "Subgroup JSON file")->required();

  std::string config_file, lemma, sampler;
  std::optional<std::uint64_t> seed, trials;
  std::optional<std::int64_t> max_order, n;
  auto* fuzz = app.add_subcommand("fuzz", "Run a lemma campaign");
  fuzz->add_option("--config", config_file, "Campaign config JSON file");
  fuzz->add_option("--lemma", lemma, "2.2, 2.3 or 3.1");
  fuzz->add_option("--seed", seed, "Campaign seed");
  fuzz->add_option("--trials", trials, "Number of trials");
  fuzz->add_option("--max-order", max_order, "Largest group order (<= 64)");
  fuzz->add_option("--n", n, "Torsion bound");
  fuzz->add_option("--sampler", sampler, "S1 (rejection) or S2 (constructive)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*reproduce) return finish(run::reproduce(rep), json_path, timings);
    if (*bench) return finish(run::bench(bench_opts), json_path, true);
    if (*h1) {
      return finish(run::h1_query(read_json(group_file, "--group"), read_json(module_file, "--module"), cyc, cap),
                    json_path, timings);
    }
    if (*summand)
      return finish(run::summand_query(read_json(group_file, "--group"), read_json(subgroup_file, "--subgroup")),
                    json_path, timings);
    Json cfg = config_file.empty() ? Json::object() : read_json(config_file, "--config");
    if (!lemma.empty()) cfg["lemma"] = lemma;
    if (seed) cfg["seed"] = *seed;
    if (trials) cfg["trials"] = *trials;
    if (max_order) cfg["max_order"] = *max_order;
    if (n) cfg["n"] = *n;
    if (!sampler.empty()) cfg["sampler"] = sampler;
    return finish(run::fuzz(h1cyc::io::campaign_from_json(cfg)), json_path, timings);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 1;
  }
}
