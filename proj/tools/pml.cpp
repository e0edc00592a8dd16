#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pml/acceptance.hpp"
#include "pml/eno.hpp"
#include "pml/harness.hpp"
#include "pml/kde.hpp"

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_run(const std::string& case_name, const std::string& scale_name,
            const std::string& methods_csv, std::optional<std::uint64_t> seed,
            const std::string& out_dir) {
  const pml::TestCase tc = pml::make_test_case(
      pml::test_case_from_string(case_name),
      pml::scale_from_string(scale_name));
  std::set<pml::Method> methods;
  for (const std::string& m : split(methods_csv, ','))
    methods.insert(pml::method_from_string(m));
  const std::uint64_t s = pml::resolve_seed(seed);
  const pml::RunReport report = pml::run_test_case(tc, methods, s);
  const auto files = pml::export_csv(report, out_dir);
  for (const auto& f : files) std::cout << f.string() << "\n";
  return 0;
}

int cmd_bandwidth(const std::string& input) {
  std::ifstream in(input);
  if (!in) {
    std::cerr << "cannot read " << input << "\n";
    return 1;
  }
  pml::Sample sample;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || !(std::isdigit(line[0]) || line[0] == '-' ||
                          line[0] == '+' || line[0] == '.'))
      continue;
    sample.positions.push_back(std::stod(line));
  }
  if (sample.n() < 2) {
    std::cerr << "need at least two samples\n";
    return 1;
  }
  const pml::BandwidthReport r = pml::solve_the_equation_bandwidth(sample);
  std::cout << "n " << sample.n() << "\n"
            << "epsilon " << r.epsilon << "\n"
            << "method "
            << (r.method == pml::BandwidthMethod::SolveTheEquation
                    ? "solve-the-equation"
                    : "silverman-fallback")
            << "\n"
            << "silverman " << pml::silverman_bandwidth(sample) << "\n"
            << "pilot_h1 " << r.h1 << "\npilot_h2 " << r.h2 << "\n"
            << "curvature_norm " << r.curvature_norm << "\n"
            << "iterations " << r.iterations << "\n";
  return 0;
}

int cmd_eno_tables(int k) {
  const pml::EnoTables t = pml::eno_tables(k, 1.0);
  auto print = [](const char* name,
                  const std::vector<std::vector<double>>& m) {
    std::cout << name << "\n";
    for (const auto& row : m) {
      for (std::size_t j = 0; j < row.size(); ++j)
        std::cout << (j ? " " : "") << row[j];
      std::cout << "\n";
    }
  };
  print("C", t.C);
  print("D (dx=1)", t.D);
  print("Dbar (dx=1)", t.Dbar);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dual-method numerical laboratory for du/dt = 1/2 (beta(u))''"};
  app.require_subcommand(1);

  std::string config_file;
  app.add_option("--config", config_file,
                 "key = value file; flags override its entries");

  // run
  auto* run = app.add_subcommand("run", "run a test case and export CSVs");
  std::string case_name, scale_name = "desk", methods = "particle,relaxation",
              out_dir = "out";
  std::optional<std::uint64_t> seed;
  run->add_option("--case", case_name, "test case id");
  run->add_option("--scale", scale_name, "paper or desk");
  run->add_option("--methods", methods, "comma list: particle,relaxation,exact");
  run->add_option("--seed", seed, "rng seed (PML_SEED env also honored)");
  run->add_option("--out", out_dir, "output directory");

  // bandwidth
  auto* bw = app.add_subcommand("bandwidth", "plug-in bandwidth of a sample");
  std::string bw_input;
  bw->add_option("--input", bw_input, "text file, one sample per line")
      ->required();

  // eno-tables
  auto* eno = app.add_subcommand("eno-tables", "print the k-th order tables");
  int k = 3;
  eno->add_option("--k", k, "stencil width")->check(CLI::Range(1, 6));

  // validate
  auto* validate =
      app.add_subcommand("validate", "run the full acceptance suite");
  std::optional<std::uint64_t> vseed;
  validate->add_option("--seed", vseed, "rng seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_file.empty()) {
      const auto cfg = pml::parse_config(config_file);
      auto get = [&cfg](const char* key) -> const std::string* {
        const auto it = cfg.find(key);
        return it == cfg.end() ? nullptr : &it->second;
      };
      if (!run->count("--case"))
        if (const auto* v = get("case")) case_name = *v;
      if (!run->count("--scale"))
        if (const auto* v = get("scale")) scale_name = *v;
      if (!run->count("--methods"))
        if (const auto* v = get("methods")) methods = *v;
      if (!run->count("--seed"))
        if (const auto* v = get("seed")) seed = std::stoull(*v);
      if (!run->count("--out"))
        if (const auto* v = get("out")) out_dir = *v;
    }
    if (app.got_subcommand(run)) {
      if (case_name.empty()) {
        std::cerr << "run: --case is required (or set case= in --config)\n";
        return 2;
      }
      return cmd_run(case_name, scale_name, methods, seed, out_dir);
    }
    if (app.got_subcommand(bw)) return cmd_bandwidth(bw_input);
    if (app.got_subcommand(eno)) return cmd_eno_tables(k);
    if (app.got_subcommand(validate)) {
      const auto results =
          pml::run_acceptance(pml::resolve_seed(vseed));
      return pml::report_acceptance(results) == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
