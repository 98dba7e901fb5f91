#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cstar/bargmann.hpp"
#include "cstar/quantize.hpp"
#include "cstar/random.hpp"
#include "cstar/star.hpp"
#include "cstar/twisted.hpp"
#include "report.hpp"

namespace cstar::cli {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void row(std::vector<std::string> r) { rows.push_back(std::move(r)); }
  void write(std::ostream& os) const {
    auto line = [&](const std::vector<std::string>& v) {
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
      os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  }
};

inline std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::optional<int> trials;
  std::optional<double> hbar;
  std::optional<int> cutoff;
  std::optional<std::string> ordering;
  std::optional<int> grid;
};

inline constexpr double kHomTolerance = 1e-9;
inline constexpr double kIntertwineTolerance = 1e-4;
inline constexpr double kProjectiveTolerance = 1e-6;
inline constexpr double kBargmannTolerance = 1e-7;
inline constexpr double kBargmannNormTolerance = 1e-8;
/// Residuals below this are roundoff and do not count against monotonicity.
inline constexpr double kRoundoffFloor = 1e-12;

inline json q_json(const RatMatrix& Q) {
  json rows = json::array();
  for (std::size_t i = 0; i < Q.size(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < Q.size(); ++j) r.push_back({{"re", Q(i, j).re.get_str()}, {"im", Q(i, j).im.get_str()}});
    rows.push_back(r);
  }
  return rows;
}

/// Exact associativity, unit and classical-limit laws on random triples.
inline void suite_assoc(const SuiteOptions& o, RunReport& rep, CsvTable& csv) {
  SymbolSampler rng(o.seed);
  const int trials = o.trials.value_or(200);
  require(trials >= 1, "verify assoc: trials must be >= 1");
  csv.header = {"trial", "dim", "assoc_terms", "unit_terms", "pointwise_terms", "classical_terms"};
  std::size_t worst = 0;
  bool ok = true;
  for (int t = 0; t < trials; ++t) {
    const std::size_t d = rng.uniform_int(0, 1) ? 4 : 2;
    const RatMatrix Q = rng.symmetric_q(d);
    const ThetaMatrix theta = ThetaMatrix::from_q(Q);
    const PolySymbol f = rng.poly(d, 4), g = rng.poly(d, 4), h = rng.poly(d, 4);
    const PolySymbol assoc = star(star(f, g, theta).value, h, theta).value - star(f, star(g, h, theta).value, theta).value;
    const PolySymbol unit = star(f, PolySymbol::one(d), theta).value - f;
    const PolySymbol pointwise = hbar_part(star(f, g, theta).value, 0) - hbar_part(f * g, 0);
    const PolySymbol classical = classical_limit_residual(f, g, theta);
    const std::size_t bad = assoc.size() + unit.size() + pointwise.size() + classical.size();
    csv.row({std::to_string(t), std::to_string(d), std::to_string(assoc.size()), std::to_string(unit.size()),
             std::to_string(pointwise.size()), std::to_string(classical.size())});
    if (bad > worst) worst = bad;
    if (bad > 0 && ok) {
      ok = false;
      rep.counterexample({{"trial", t}, {"Q", q_json(Q)}, {"f", io::to_json(f)}, {"g", io::to_json(g)},
                          {"h", io::to_json(h)}});
    }
  }
  rep.outputs()["trials"] = trials;
  rep.check("exact_laws", ok, static_cast<double>(worst), 0.0);
}

inline std::vector<Ordering> orderings_for(const SuiteOptions& o) {
  if (o.ordering) return {parse_ordering(*o.ordering)};
  return {Ordering::Weyl, Ordering::Standard, Ordering::AntiStandard, Ordering::Wick, Ordering::AntiWick};
}

/// Protected-block homomorphism on random pairs of degree <= 3.
inline void suite_hom(const SuiteOptions& o, RunReport& rep, CsvTable& csv) {
  SymbolSampler rng(o.seed);
  const int trials = o.trials.value_or(100);
  const int N = o.cutoff.value_or(32);
  const double hbar = o.hbar.value_or(1.0);
  require(trials >= 1, "verify hom: trials must be >= 1");
  csv.header = {"ordering", "trial", "residual"};
  json per = json::object();
  for (Ordering ord : orderings_for(o)) {
    const OrderingSpec spec = OrderingSpec::preset(ord, hbar, N);
    double worst = 0.0;
    json counter;
    for (int t = 0; t < trials; ++t) {
      const PolySymbol f = rng.poly(2, 3), g = rng.poly(2, 3);
      const double r = verify_homomorphism(f, g, spec).residual;
      csv.row({ordering_name(ord), std::to_string(t), num(r)});
      if (r > worst || std::isnan(r)) {
        worst = r;
        counter = {{"ordering", ordering_name(ord)}, {"f", io::to_json(f)}, {"g", io::to_json(g)}, {"residual", r}};
      }
    }
    per[ordering_name(ord)] = worst;
    const bool ok = worst < kHomTolerance;
    rep.check("hom_" + ordering_name(ord), ok, worst, kHomTolerance);
    if (!ok) rep.counterexample(counter);
  }
  rep.outputs() = {{"trials", trials}, {"cutoff", N}, {"hbar", hbar}, {"worst", per}};
}

/// Fourier intertwining for a fixed Gaussian pair.
inline void suite_intertwine(const SuiteOptions& o, RunReport& rep, CsvTable& csv) {
  const int N = o.grid.value_or(128);
  const double hbar = o.hbar.value_or(0.1);
  const GaussianSymbol f1 = GaussianSymbol::gaussian(-Eigen::MatrixXcd::Identity(2, 2));
  Eigen::MatrixXcd M(2, 2);
  M << -1.0, 0.3, 0.3, -0.7;
  const GaussianSymbol f2 = GaussianSymbol::gaussian(M);
  std::vector<Ordering> ords = o.ordering ? std::vector<Ordering>{parse_ordering(*o.ordering)}
                                          : std::vector<Ordering>{Ordering::Weyl, Ordering::Standard};
  csv.header = {"ordering", "residual", "conclusive"};
  json per = json::object();
  for (Ordering ord : ords) {
    IntertwiningOptions opt;
    opt.N = N;
    opt.L = 8.0;
    const IntertwiningResult r = verify_intertwining(f1, f2, ThetaMatrix::preset(ord, 1), hbar, opt);
    rep.warnings(r.warnings);
    csv.row({ordering_name(ord), num(r.residual), r.conclusive ? "true" : "false"});
    per[ordering_name(ord)] = {{"residual", number_json(r.residual)},
                               {"conclusive", r.conclusive},
                               {"star_series", convergence_name(r.star_diagnostic.verdict)}};
    const bool ok = r.conclusive && r.residual < kIntertwineTolerance;
    rep.check("intertwine_" + ordering_name(ord), ok, r.residual, kIntertwineTolerance);
    if (!ok) rep.counterexample({{"ordering", ordering_name(ord)}, {"f1", io::to_json(f1)}, {"f2", io::to_json(f2)}});
  }
  rep.outputs() = {{"grid", N}, {"L", 8.0}, {"hbar", hbar}, {"results", per}};
}

/// Projective relation of truncated displacements over increasing cutoffs.
inline void suite_projective(const SuiteOptions& o, RunReport& rep, CsvTable& csv) {
  SymbolSampler rng(o.seed);
  const int trials = o.trials.value_or(5);
  const double hbar = o.hbar.value_or(1.0);
  const int top = o.cutoff.value_or(40);
  require(top >= 16, "verify projective: cutoff must be >= 16");
  std::vector<int> Ns;
  for (int n = 16; n < top; n += 8) Ns.push_back(n);
  Ns.push_back(top);
  csv.header = {"trial", "p1", "q1", "p2", "q2", "N", "residual"};
  double worst_top = 0.0;
  json worst_case;
  bool monotone = true;
  for (int t = 0; t < trials; ++t) {
    auto point = [&] {
      const double r = rng.uniform(0.25, 0.5), a = rng.uniform(0.0, 2 * std::numbers::pi);
      return std::pair{r * std::cos(a), r * std::sin(a)};
    };
    const auto [p1, q1] = point();
    const auto [p2, q2] = point();
    double prev = std::numeric_limits<double>::infinity();
    for (int N : Ns) {
      const double r = verify_projective(p1, q1, p2, q2, hbar, N).residual;
      csv.row({std::to_string(t), num(p1), num(q1), num(p2), num(q2), std::to_string(N), num(r)});
      if (r > prev && r > kRoundoffFloor) {
        if (monotone)
          rep.counterexample({{"x", {p1, q1}}, {"x_prime", {p2, q2}}, {"N", N}, {"residual", r}, {"previous", prev}});
        monotone = false;
      }
      prev = r;
      if (N == top && !(r <= worst_top)) {
        worst_top = r;
        worst_case = {{"x", {p1, q1}}, {"x_prime", {p2, q2}}, {"N", N}, {"residual", number_json(r)}};
      }
    }
  }
  rep.outputs() = {{"trials", trials}, {"hbar", hbar}, {"cutoffs", Ns}};
  const bool top_ok = worst_top < kProjectiveTolerance;
  rep.check("projective_at_top_cutoff", top_ok, worst_top, kProjectiveTolerance);
  if (!top_ok && monotone) rep.counterexample(worst_case);
  rep.check("monotone_in_cutoff", monotone, monotone ? 0.0 : 1.0, 0.0);
}

/// Unitarity and Wick intertwining of the Bargmann transform.
inline void suite_bargmann(const SuiteOptions& o, RunReport& rep, CsvTable& csv) {
  SymbolSampler rng(o.seed);
  const double hbar = o.hbar.value_or(1.0);
  const int trials = o.trials.value_or(20);
  const int N = o.cutoff.value_or(24);
  require(N >= 12, "verify bargmann: cutoff must be >= 12");
  csv.header = {"check", "index", "residual"};

  std::vector<BargmannPoly> b;
  for (int k = 0; k <= 10; ++k) b.push_back(bargmann_transform(HermiteState::number_state(k, hbar)).value);
  double gram = 0.0;
  for (int j = 0; j <= 10; ++j)
    for (int k = 0; k <= 10; ++k) gram = std::max(gram, std::abs(fb_inner(b[j], b[k]) - (j == k ? 1.0 : 0.0)));
  csv.row({"gram", "10", num(gram)});
  rep.check("unitarity_gram", gram < kBargmannTolerance, gram, kBargmannTolerance);

  double norms = 0.0, ladder = 0.0;
  for (int t = 0; t < trials; ++t) {
    HermiteState psi({}, hbar);
    const int deg = rng.uniform_int(0, 8);
    for (int k = 0; k <= deg; ++k)
      psi += HermiteState::number_state(k, hbar).scaled(cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)));
    const BargmannPoly bp = bargmann_transform(psi).value;
    const double rn = std::abs(fb_inner(bp, bp) - psi.inner(psi));
    const double rl = std::max((bargmann_transform(psi.annihilate()).value - bp.lower()).max_abs_coeff(),
                               (bargmann_transform(psi.create()).value - bp.mul_zbar()).max_abs_coeff());
    csv.row({"norm", std::to_string(t), num(rn)});
    csv.row({"ladder", std::to_string(t), num(rl)});
    norms = std::max(norms, rn);
    ladder = std::max(ladder, rl);
  }
  rep.check("unitarity_norms", norms < kBargmannNormTolerance, norms, kBargmannNormTolerance);
  rep.check("ladder_intertwining", ladder < kBargmannTolerance, ladder, kBargmannTolerance);

  const Ladder L = fock_ladder(N, hbar);
  double wick = 0.0;
  for (int t = 0; t < trials; ++t) {
    const PolySymbol f = rng.poly(2, 4);
    const FockOperator A = wick_normal_ordered(to_numeric(f, hbar), L);
    double r = 0.0;
    for (int k = 0; k <= 8; ++k) {
      const Eigen::VectorXcd col = A.matrix().col(k);
      r = std::max(r, (from_fock(col, hbar) - wick_on_fb(f, b[static_cast<std::size_t>(k)])).max_abs_coeff());
    }
    csv.row({"wick", std::to_string(t), num(r)});
    if (r > wick && r >= kBargmannTolerance) rep.counterexample({{"f", io::to_json(f)}, {"residual", r}});
    wick = std::max(wick, r);
  }
  rep.check("wick_intertwining", wick < kBargmannTolerance, wick, kBargmannTolerance);
  rep.outputs() = {{"hbar", hbar}, {"trials", trials}, {"cutoff", N}};
}

} // namespace cstar::cli
