#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cstar/analysis.hpp"
#include "cstar/bargmann.hpp"
#include "cstar/json_io.hpp"
#include "cstar/quantize.hpp"
#include "cstar/star.hpp"
#include "cstar/twisted.hpp"
#include "report.hpp"
#include "suites.hpp"

using namespace cstar;
using namespace cstar::cli;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitContract = 3;
constexpr std::uint64_t kDefaultSeed = 20240601;

struct Globals {
  std::uint64_t seed = kDefaultSeed;
  std::string json_path;
  std::string csv_path;
  std::optional<double> hbar;
  std::optional<int> cutoff;
  std::optional<std::string> ordering;
  std::optional<int> grid;
};

std::string load_input(RunReport& rep, const std::string& path) {
  std::string text = io::read_file(path);
  rep.add_input(path, text);
  return text;
}

ThetaMatrix theta_for(RunReport& rep, const std::string& preset, const std::string& theta_path, std::size_t d) {
  if (!theta_path.empty()) {
    const ThetaMatrix t = io::theta_from_json(io::parse_json(load_input(rep, theta_path), theta_path));
    if (t.dim() != d) throw DimensionMismatch("theta", d, t.dim());
    return t;
  }
  if (d % 2 != 0) throw InvalidArgument("symbols of odd dimension need an explicit --theta file");
  rep.add_input("preset", preset);
  return ThetaMatrix::preset(preset, d / 2);
}

OrderingSpec ordering_spec(const Globals& g, const std::string& sigma) {
  mpq_class s(sigma);
  s.canonicalize();
  OrderingSpec spec = OrderingSpec::preset(parse_ordering(g.ordering.value_or("weyl")), g.hbar.value_or(1.0),
                                           g.cutoff.value_or(32), s);
  spec.validate();
  return spec;
}

void describe_spec(RunReport& rep, const OrderingSpec& spec) {
  rep.add_input("ordering", spec.name() + " " + num(spec.hbar) + " " + std::to_string(spec.N) + " " +
                                spec.sigma.get_str());
  rep.outputs()["ordering"] = spec.name();
  rep.outputs()["hbar"] = spec.hbar;
  rep.outputs()["cutoff"] = spec.N;
  rep.outputs()["sigma"] = spec.sigma.get_str();
}

std::vector<double> load_coefficients(RunReport& rep, const std::string& path) {
  std::istringstream is(load_input(rep, path));
  return io::read_coefficients_csv(is);
}

json profile_json(const GrowthProfile& p) {
  json j = {{"order", number_json(p.order)}, {"type_class", type_class_name(p.type_class)}, {"used", p.used}};
  if (p.type) j["type"] = number_json(*p.type);
  return j;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and numeric star products, quantization maps and symbol-class analysis"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "PRNG seed for random sweeps");
  app.add_option("--json", g.json_path, "also write the report to FILE");
  app.add_option("--csv", g.csv_path, "write the sweep table to FILE");
  app.add_option("--hbar", g.hbar, "numeric value of hbar");
  app.add_option("--cutoff", g.cutoff, "Fock cutoff N");
  app.add_option("--ordering", g.ordering, "weyl|moyal|standard|antistandard|wick|antiwick");
  app.add_option("--grid", g.grid, "grid points per axis");

  std::optional<RunReport> report;
  CsvTable table;

  // star
  auto* star_cmd = app.add_subcommand("star", "exact star product of two PolySymbol files");
  std::string star_preset = "moyal", star_theta;
  std::vector<std::string> star_files;
  star_cmd->add_option("--preset", star_preset, "ordering preset");
  star_cmd->add_option("--theta", star_theta, "ThetaMatrix JSON file");
  star_cmd->add_option("files", star_files, "f.json g.json")->required()->expected(2);
  star_cmd->callback([&] {
    report.emplace("star");
    const PolySymbol f = io::poly_from_json(io::parse_json(load_input(*report, star_files[0]), star_files[0]));
    const PolySymbol h = io::poly_from_json(io::parse_json(load_input(*report, star_files[1]), star_files[1]));
    if (f.dim() != h.dim()) throw DimensionMismatch("star", f.dim(), h.dim());
    const StarResult r = star(f, h, theta_for(*report, star_preset, star_theta, f.dim()));
    report->outputs() = {{"result", io::to_json(r.value)}, {"terms", r.term_count}, {"grouped", io::grouped_text(r.value)}};
  });

  // twist
  auto* twist_cmd = app.add_subcommand("twist", "twisted convolution of two grid CSV files");
  std::string twist_preset = "moyal", twist_theta, twist_out;
  std::vector<std::string> twist_files;
  twist_cmd->add_option("--preset", twist_preset, "ordering preset");
  twist_cmd->add_option("--theta", twist_theta, "ThetaMatrix JSON file");
  twist_cmd->add_option("-o,--out", twist_out, "write the result grid CSV here (default: stdout)");
  twist_cmd->add_option("files", twist_files, "g1.csv g2.csv")->required()->expected(2);
  twist_cmd->callback([&] {
    report.emplace("twist");
    std::istringstream a(load_input(*report, twist_files[0])), b(load_input(*report, twist_files[1]));
    const GridFunction g1 = read_grid_csv(a), g2 = read_grid_csv(b);
    const double hbar = g.hbar.value_or(1.0);
    require(hbar > 0, "twist: hbar must be > 0");
    const Eigen::MatrixXcd theta = theta_for(*report, twist_preset, twist_theta, 2).numeric(hbar);
    const GridFunction out = twisted_convolve(g1, g2, theta);
    report->outputs() = {{"hbar", hbar}, {"points", out.size()}, {"max_abs", out.max_abs()}};
    if (twist_out.empty()) {
      write_grid_csv(std::cout, out);
    } else {
      std::ofstream os(twist_out);
      if (!os) throw ParseError("cannot write '" + twist_out + "'");
      write_grid_csv(os, out);
      report->outputs()["file"] = twist_out;
    }
  });

  // quantize
  auto* quant_cmd = app.add_subcommand("quantize", "Fock matrix of a PolySymbol under an ordering");
  std::string quant_file, quant_sigma = "1";
  quant_cmd->add_option("file", quant_file, "f.json")->required();
  quant_cmd->add_option("--sigma", quant_sigma, "rational scale sigma");
  quant_cmd->callback([&] {
    report.emplace("quantize");
    const PolySymbol f = io::poly_from_json(io::parse_json(load_input(*report, quant_file), quant_file));
    const OrderingSpec spec = ordering_spec(g, quant_sigma);
    describe_spec(*report, spec);
    report->outputs()["operator"] = io::to_json(quantize_poly(f, spec));
  });

  // verify-hom
  auto* vhom_cmd = app.add_subcommand("verify-hom", "homomorphism residual for one pair of symbols");
  std::vector<std::string> vhom_files;
  std::string vhom_sigma = "1";
  vhom_cmd->add_option("files", vhom_files, "f.json g.json")->required()->expected(2);
  vhom_cmd->add_option("--sigma", vhom_sigma, "rational scale sigma");
  vhom_cmd->callback([&] {
    report.emplace("verify-hom");
    const PolySymbol f = io::poly_from_json(io::parse_json(load_input(*report, vhom_files[0]), vhom_files[0]));
    const PolySymbol h = io::poly_from_json(io::parse_json(load_input(*report, vhom_files[1]), vhom_files[1]));
    const OrderingSpec spec = ordering_spec(g, vhom_sigma);
    describe_spec(*report, spec);
    const HomomorphismResult r = verify_homomorphism(f, h, spec);
    report->outputs()["block"] = r.block;
    report->check("homomorphism", r.residual < kHomTolerance, r.residual, kHomTolerance);
    if (!(r.residual < kHomTolerance)) report->counterexample({{"f", io::to_json(f)}, {"g", io::to_json(h)}});
  });

  std::optional<int> trials;
  auto suite_options = [&] {
    SuiteOptions o;
    o.seed = g.seed;
    o.trials = trials;
    o.hbar = g.hbar;
    o.cutoff = g.cutoff;
    o.ordering = g.ordering;
    o.grid = g.grid;
    return o;
  };

  // bargmann-check
  auto* bcheck_cmd = app.add_subcommand("bargmann-check", "Bargmann unitarity and intertwining suites");
  bcheck_cmd->add_option("--trials", trials, "random trials");
  bcheck_cmd->callback([&] {
    report.emplace("bargmann-check");
    report->set_seed(g.seed);
    suite_bargmann(suite_options(), *report, table);
  });

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "seeded property sweeps");
  verify_cmd->require_subcommand(1);
  verify_cmd->fallthrough();
  auto add_suite = [&](const char* name, const char* help, void (*fn)(const SuiteOptions&, RunReport&, CsvTable&)) {
    auto* c = verify_cmd->add_subcommand(name, help);
    c->add_option("--trials", trials, "random trials");
    c->callback([&, name, fn] {
      report.emplace(std::string("verify ") + name);
      report->set_seed(g.seed);
      fn(suite_options(), *report, table);
    });
  };
  add_suite("assoc", "exact associativity, unit and classical limit", suite_assoc);
  add_suite("hom", "quantization homomorphism on the protected block", suite_hom);
  add_suite("intertwine", "Fourier intertwining of star product and twisted convolution", suite_intertwine);
  add_suite("projective", "projective relation of truncated displacements", suite_projective);
  add_suite("bargmann", "Bargmann unitarity and intertwining", suite_bargmann);

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "growth and norm analysis");
  analyze_cmd->require_subcommand(1);
  analyze_cmd->fallthrough();

  std::string growth_file;
  auto* growth_cmd = analyze_cmd->add_subcommand("growth", "order and type of a coefficient sequence");
  growth_cmd->add_option("file", growth_file, "coefficients CSV")->required();
  growth_cmd->callback([&] {
    report.emplace("analyze growth");
    const std::vector<double> c = load_coefficients(*report, growth_file);
    report->outputs() = profile_json(estimate_order(c));
  });

  std::string mult_file;
  double mult_rho = 2.0;
  auto* mult_cmd = analyze_cmd->add_subcommand("multiplier", "does G(d) act on E^rho");
  mult_cmd->add_option("file", mult_file, "coefficients CSV")->required();
  mult_cmd->add_option("--rho", mult_rho, "class exponent in (0, 2]");
  mult_cmd->callback([&] {
    report.emplace("analyze multiplier");
    report->add_input("rho", num(mult_rho));
    const std::vector<double> c = load_coefficients(*report, mult_file);
    const MultiplierVerdict v = is_multiplier(c, mult_rho);
    report->outputs() = {{"rho", mult_rho},
                         {"verdict", v.verdict},
                         {"margin", number_json(v.margin)},
                         {"profile", profile_json(v.profile)}};
  });

  std::string cone_file;
  std::vector<double> cone_point;
  auto* cone_cmd = analyze_cmd->add_subcommand("cone-dist", "max-norm distance from a point to a cone");
  cone_cmd->add_option("file", cone_file, "Cone JSON")->required();
  cone_cmd->add_option("point", cone_point, "coordinates (after --)")->required();
  cone_cmd->callback([&] {
    report.emplace("analyze cone-dist");
    const Cone V = io::cone_from_json(io::parse_json(load_input(*report, cone_file), cone_file));
    std::string pt;
    for (double x : cone_point) pt += num(x) + " ";
    report->add_input("point", pt);
    report->outputs() = {{"distance", cone_distance(V, cone_point)}, {"point", cone_point}};
  });

  NormSpec nspec;
  NormGrid ngrid;
  std::string norm_family = "E", norm_file, norm_cone;
  auto* norm_cmd = analyze_cmd->add_subcommand("norm", "weighted sup norm of a symbol");
  norm_cmd->add_option("file", norm_file, "PolySymbol / Gaussian JSON or grid CSV")->required();
  norm_cmd->add_option("--family", norm_family, "E|E-real|W|W-cone|W-prime|W-gamma-rho");
  norm_cmd->add_option("--eps", nspec.eps, "weight rate eps");
  norm_cmd->add_option("--L", nspec.L, "E-real scale L");
  norm_cmd->add_option("--a", nspec.a, "rate a");
  norm_cmd->add_option("--b", nspec.b, "rate b");
  norm_cmd->add_option("--N", nspec.N, "polynomial weight / derivative order N");
  norm_cmd->add_option("--rho", nspec.rho, "exponent rho");
  norm_cmd->add_option("--rho-prime", nspec.rho_prime, "exponent rho' (default rho/(rho-1))");
  norm_cmd->add_option("--gamma", nspec.gamma, "exponent gamma");
  norm_cmd->add_option("--K", nspec.K_max, "derivative cap for E-real");
  norm_cmd->add_option("--cone", norm_cone, "Cone JSON for W-cone");
  norm_cmd->add_option("--real-width", ngrid.real_half_width, "half-width of the real grid");
  norm_cmd->add_option("--real-points", ngrid.real_points, "points per real axis");
  norm_cmd->add_option("--imag-width", ngrid.imag_half_width, "half-width of the imaginary grid");
  norm_cmd->add_option("--imag-points", ngrid.imag_points, "points per imaginary axis");
  norm_cmd->callback([&] {
    report.emplace("analyze norm");
    const auto fam = parse_norm_family(norm_family);
    if (!fam) throw InvalidArgument("unknown norm family '" + norm_family + "'");
    nspec.family = *fam;
    nspec.hbar = g.hbar.value_or(0.0);
    if (!norm_cone.empty())
      nspec.cone = io::cone_from_json(io::parse_json(load_input(*report, norm_cone), norm_cone));
    report->add_input("spec", norm_family + " " + num(nspec.eps) + " " + num(nspec.L) + " " + num(nspec.a) + " " +
                                  num(nspec.b) + " " + std::to_string(nspec.N) + " " + num(nspec.rho) + " " +
                                  num(nspec.rho_prime) + " " + num(nspec.gamma) + " " + std::to_string(nspec.K_max) +
                                  " " + num(nspec.hbar));
    const std::string text = load_input(*report, norm_file);
    NormResult r;
    if (ends_with(norm_file, ".csv")) {
      std::istringstream is(text);
      r = norm_eval(read_grid_csv(is), nspec);
    } else {
      const json j = io::parse_json(text, norm_file);
      r = io::is_gaussian_json(j) ? norm_eval(io::gaussian_from_json(j), nspec, ngrid)
                                  : norm_eval(io::poly_from_json(j), nspec, ngrid);
    }
    json argmax = json::array();
    for (cplx z : r.argmax) argmax.push_back(io::complex_json(z));
    report->outputs() = {{"family", norm_family},
                         {"value", number_json(r.value)},
                         {"argmax", argmax},
                         {"kappa", r.kappa.values()},
                         {"on_boundary", r.on_boundary}};
    report->warnings(r.warnings);
  });

  int code = kExitPass;
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  } catch (const ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << '\n';
    return kExitContract;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitContract;
  }
  if (!report) return kExitInput;

  const std::string text = report->to_json().dump(2);
  if (!g.json_path.empty()) {
    std::ofstream os(g.json_path);
    if (!os) {
      std::cerr << "error: cannot write '" << g.json_path << "'\n";
      return kExitInput;
    }
    os << text << '\n';
  }
  if (!g.csv_path.empty()) {
    std::ofstream os(g.csv_path);
    if (!os) {
      std::cerr << "error: cannot write '" << g.csv_path << "'\n";
      return kExitInput;
    }
    table.write(os);
  }
  // the twisted grid goes to stdout when no --out is given; keep the report off it then
  (twist_cmd->parsed() && twist_out.empty() ? std::cerr : std::cout) << text << '\n';
  if (!report->pass()) code = kExitFail;
  return code;
}
