// Command-line front end. Exit status: 0 success, 2 inconclusive, 1 error.

#include "weylbound/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace weylbound;

struct Flags {
  std::string config;
  std::optional<std::string> preset, spin, alpha, slopes, perturb, lambda0, out, csv, analyses;
  std::vector<double> t;
  std::optional<std::uint64_t> seed;
  std::optional<int> cap, grid, order;
  std::optional<double> box, radius;
  std::optional<std::size_t> seeds;
  bool timings = false;
  bool no_complex = false;
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON configuration file");
  cmd->add_option("--preset", f.preset,
                  "family preset: spin1-scaled, spin, band, diagonal, symmetric-example, pauli, pauli-quadratic");
  cmd->add_option("--spin", f.spin, "spin s for --preset spin, e.g. 3/2");
  cmd->add_option("--alpha", f.alpha, "band coefficients a0,a1,a2 (rationals)");
  cmd->add_option("--slopes", f.slopes, "diagonal slopes, comma separated");
  cmd->add_option("--perturb", f.perturb, "perturbation: none, constant (preset1), quadratic (preset2), random");
  cmd->add_option("--t", f.t, "perturbation strengths")->delimiter(',');
  cmd->add_option("--lambda0", f.lambda0, "base eigenvalue, exact, or 'auto'");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--cap", f.cap, "degree cap for the multiplicity computation");
  cmd->add_option("--grid", f.grid, "Chern sphere resolution (polar divisions)");
  cmd->add_option("--box", f.box, "search box half-width");
  cmd->add_option("--radius", f.radius, "Chern sphere radius");
  cmd->add_option("--seeds", f.seeds, "number of search starts (0: automatic)");
  cmd->add_option("--order", f.order, "Taylor order of the effective family");
  cmd->add_option("--analyses", f.analyses, "report stages: cwp,chern,weyl,sw,formulas");
  cmd->add_option("--out", f.out, "write the JSON report here instead of stdout");
  cmd->add_option("--csv", f.csv, "write dispersion samples as CSV");
  cmd->add_flag("--timings", f.timings, "include wall-clock timings in the report");
  cmd->add_flag("--no-complex", f.no_complex, "skip the complex crossing search");
}

AnalysisConfig effective_config(const Flags& f) {
  AnalysisConfig c;
  if (!f.config.empty()) c = load_config(f.config);
  else if (!f.preset) throw ConfigError("give --preset or --config");
  if (f.preset) {
    c.family.preset = *f.preset;
    c.family.entries.clear();
  }
  if (f.spin) c.family.twice_s = parse_twice_spin(*f.spin);
  if (f.alpha) {
    c.family.alpha = split(*f.alpha);
    if (c.family.alpha.size() != 3) throw ConfigError("--alpha needs three values");
  }
  if (f.slopes) c.family.slopes = split(*f.slopes);
  if (f.perturb) c.perturbation.preset = *f.perturb;
  if (!f.t.empty()) c.t = f.t;
  if (f.lambda0) c.lambda0 = *f.lambda0;
  if (f.seed) c.seed = *f.seed;
  if (f.cap) c.cap = *f.cap;
  if (f.grid) c.grid = *f.grid;
  if (f.box) c.box = *f.box;
  if (f.radius) c.radius = *f.radius;
  if (f.seeds) c.seeds = *f.seeds;
  if (f.order) c.sw_order = *f.order;
  if (f.analyses) c.analyses = split(*f.analyses);
  if (f.out) c.out = *f.out;
  if (f.csv) c.csv = *f.csv;
  if (f.timings) c.timings = true;
  if (f.no_complex) c.complex = false;
  for (const auto& s : c.family.alpha) detail::parse_rational(s);
  for (const auto& s : c.family.slopes) detail::parse_rational(s);
  return c;
}

int emit(const Report& r, const std::string& out) {
  std::string text = r.json.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(out);
    if (!os) {
      std::cerr << "error: cannot write '" << out << "'\n";
      return 1;
    }
    os << text;
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counting and locating multifold band crossings of polynomial matrix families"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  Flags flags;
  auto* count = app.add_subcommand("count-cwp", "number of complex crossing points of a degeneracy");
  auto* chern = app.add_subcommand("chern", "Chern numbers of the bands on a sphere");
  auto* weyl = app.add_subcommand("find-weyl", "locate crossing points of a perturbed family");
  auto* sw = app.add_subcommand("sw", "effective family at a degeneracy");
  auto* report = app.add_subcommand("report", "crossing count, Chern numbers, crossing points and bounds");
  for (auto* cmd : {count, chern, weyl, sw, report}) add_common(cmd, flags);

  auto* formulas = app.add_subcommand("formulas", "closed-form counts and Hilbert sequences");
  long long k = 3;
  std::string cls = "hermitian";
  formulas->add_option("--k", k, "cluster size")->required();
  formulas->add_option("--class", cls, "hermitian, symmetric, diagonal or general");
  formulas->add_option("--out", flags.out, "write the JSON report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (formulas->parsed()) return emit(cmd_formulas(k, symmetry_class_from_string(cls)), flags.out.value_or(""));
    AnalysisConfig c = effective_config(flags);
    Report r;
    if (count->parsed()) r = cmd_count_cwp(c);
    else if (chern->parsed()) r = cmd_chern(c);
    else if (weyl->parsed()) r = cmd_find_weyl(c);
    else if (sw->parsed()) r = cmd_sw(c);
    else r = cmd_report(c);
    return emit(r, c.out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
