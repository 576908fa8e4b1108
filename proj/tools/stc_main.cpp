#include <CLI11.hpp>

#include "stc/reports.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

using namespace stc;

namespace {

struct Common {
  std::string group, input, out;
  double tol = -1.0;
  std::uint64_t seed = 20240817;
  bool text = false;
};

void add_common(CLI::App* sub, Common& c, bool with_group = true) {
  if (with_group) sub->add_option("--group", c.group, "builtin group name");
  sub->add_option("--input", c.input, "path to a JSON descriptor");
  sub->add_option("--tol", c.tol, "residual tolerance override");
  sub->add_option("--seed", c.seed, "seed for randomized checks");
  sub->add_option("--out", c.out, "write the report to this path instead of stdout");
  sub->add_flag("--text", c.text, "render a plain-text summary instead of JSON");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail("BadInput", "cannot read " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

CatalogPtr load_group(const Common& c) {
  if (!c.group.empty()) return builtin(c.group);
  if (!c.input.empty()) return catalog_from_json(read_file(c.input));
  fail("BadInput", "provide --group NAME or --input PATH");
}

LatticeFieldSystem load_system(const Common& c, const std::string& system_name, int sites) {
  if (!system_name.empty())
    return system_from_json("{\"system\": \"" + system_name +
                            "\", \"n_sites\": " + std::to_string(sites) + "}");
  if (!c.input.empty()) return system_from_json(read_file(c.input));
  fail("BadInput", "provide --input PATH or --system NAME");
}

int emit(const std::string& report, const Common& c) {
  std::string payload = c.text ? render_text(report) : report;
  if (c.out.empty()) {
    std::cout << payload << "\n";
    return 0;
  }
  std::ofstream f(c.out);
  if (!f) {
    std::cerr << "cannot write " << c.out << "\n";
    return 2;
  }
  f << payload << "\n";
  return 0;
}

bool is_input_error(const Error& e) {
  static const std::set<std::string> codes = {
      "BadInput",       "UnknownFamily", "ShapeMismatch",          "NoIdentity",
      "NoInverse",      "NotAssociative", "NoCentralInvolution",   "IncompleteIrrepCatalog",
      "UnknownEndomorphism"};
  return codes.count(e.code()) > 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite symmetric tensor category and lattice field toolkit"};
  app.require_subcommand(1);

  Common c;
  if (const char* env = std::getenv("STC_TOL")) c.tol = std::atof(env);
  bool super_kind = false;
  int irrep = -1, degree = 2, only = 0, sites = 3;
  std::string system_name;

  auto* cls = app.add_subcommand(
      "classify", "per-irrep statistics parameters, determinant classes, trace table");
  add_common(cls, c);
  cls->add_flag("--super", super_kind, "use the graded braiding of the distinguished involution");

  auto* tan = app.add_subcommand(
      "tannaka", "hom-block algebra, characters, group reconstruction, monoid automorphisms");
  add_common(tan, c);

  auto* sym = app.add_subcommand(
      "symalg", "truncated symmetric algebra residual table over one generator");
  add_common(sym, c);
  sym->add_option("--irrep", irrep, "generator irrep index (default: first of maximal dimension)");
  sym->add_option("--degree", degree, "truncation degree");

  auto* fld = app.add_subcommand("fieldnet", "lattice gauge system verdict list");
  add_common(fld, c, false);
  fld->add_option("--system", system_name, "builtin system: z2-chain, fermion-chain, s3-chain");
  fld->add_option("--sites", sites, "builtin system size");

  auto* ver = app.add_subcommand("verify-all", "run the full verification suite");
  add_common(ver, c, false);
  ver->add_option("--only", only, "run a single criterion by id");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  ReportOptions opt;
  opt.tol = c.tol;
  opt.seed = c.seed;

  try {
    std::string report;
    bool ok = false;
    if (*cls) {
      report = classify_report(load_group(c),
                               super_kind ? SymmetryKind::super : SymmetryKind::plain,
                               opt, &ok);
    } else if (*tan) {
      report = tannaka_report(load_group(c), opt, &ok);
    } else if (*sym) {
      CatalogPtr cat = load_group(c);
      if (irrep < 0) {
        int best = 0;
        for (std::size_t i = 1; i < cat->irreps.size(); ++i)
          if (cat->irreps[i].dim > cat->irreps[(std::size_t)best].dim) best = (int)i;
        irrep = best;
      }
      report = symalg_report(cat, irrep, degree, opt, &ok);
    } else if (*fld) {
      report = fieldnet_report(load_system(c, system_name, sites), opt, &ok);
    } else {
      auto results = acceptance_suite(c.seed, only, c.tol);
      if (results.empty()) fail("BadInput", "no criterion with id " + std::to_string(only));
      ok = true;
      for (const auto& r : results) ok = ok && r.pass;
      report = acceptance_report(results, c.seed, c.tol);
    }
    int rc = emit(report, c);
    if (rc != 0) return rc;
    return ok ? 0 : 3;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return is_input_error(e) ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
