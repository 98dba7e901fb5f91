#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cstar/analysis.hpp"
#include "cstar/bargmann.hpp"
#include "cstar/fock.hpp"
#include "cstar/grid.hpp"
#include "cstar/symbols.hpp"
#include "cstar/theta.hpp"

namespace cstar::io {

using json = nlohmann::json;

/// Parses text, turning syntax errors into ParseError with the position.
inline json parse_json(const std::string& text, const std::string& source = "input") {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": " + e.what() + " (byte " + std::to_string(e.byte) + ")");
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json load_json(const std::string& path) { return parse_json(read_file(path), path); }

namespace detail {

[[noreturn]] inline void fail(const std::string& what) { throw ParseError(what); }

inline const json& field(const json& j, const char* key, const char* where) {
  if (!j.is_object()) fail(std::string(where) + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(std::string(where) + ": missing field '" + key + "'");
  return *it;
}

inline mpq_class rational(const json& j, const char* where) {
  if (j.is_string()) return GaussRat::parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return mpq_class(j.get<long>());
  fail(std::string(where) + ": expected an integer or a \"num/den\" string");
}

inline double number(const json& j, const char* where) {
  if (!j.is_number()) fail(std::string(where) + ": expected a number");
  return j.get<double>();
}

inline int integer(const json& j, const char* where) {
  if (!j.is_number_integer()) fail(std::string(where) + ": expected an integer");
  return j.get<int>();
}

/// A number or a [re, im] pair.
inline cplx complex_number(const json& j, const char* where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2) return {number(j[0], where), number(j[1], where)};
  if (j.is_object()) return {number(field(j, "re", where), where), j.contains("im") ? number(j["im"], where) : 0.0};
  fail(std::string(where) + ": expected a number or [re, im]");
}

inline MultiIndex exponent(const json& j, std::size_t d, const char* where) {
  if (!j.is_array() || j.size() != d) fail(std::string(where) + ": 'exp' must be an array of length dim");
  std::vector<int> e;
  for (const auto& v : j) {
    const int k = integer(v, where);
    if (k < 0) fail(std::string(where) + ": negative exponent");
    e.push_back(k);
  }
  return MultiIndex(std::move(e));
}

inline std::size_t dimension(const json& j, const char* where) {
  const int d = integer(field(j, "dim", where), where);
  if (d < 1) fail(std::string(where) + ": dim must be >= 1");
  return static_cast<std::size_t>(d);
}

inline std::string rat_string(const mpq_class& q) { return q.get_str(); }

} // namespace detail

// ---- PolySymbol ----

inline PolySymbol poly_from_json(const json& j) {
  const char* where = "PolySymbol";
  const std::size_t d = detail::dimension(j, where);
  const json& terms = detail::field(j, "terms", where);
  if (!terms.is_array()) detail::fail("PolySymbol: 'terms' must be an array");
  PolySymbol f(d);
  for (const auto& t : terms) {
    const MultiIndex k = detail::exponent(detail::field(t, "exp", where), d, where);
    const mpq_class re = t.contains("re") ? detail::rational(t["re"], where) : mpq_class(0);
    const mpq_class im = t.contains("im") ? detail::rational(t["im"], where) : mpq_class(0);
    const int h = t.contains("hbar") ? detail::integer(t["hbar"], where) : 0;
    if (h < 0) detail::fail("PolySymbol: negative hbar power");
    f.add_term(k, Coeff::hbar(static_cast<std::size_t>(h), GaussRat(re, im)));
  }
  return f;
}

/// One entry per (monomial, hbar power), ordered by hbar power then monomial.
inline json to_json(const PolySymbol& f) {
  std::map<std::size_t, std::vector<json>> by_power;
  for (const auto& [k, c] : f.terms())
    for (std::size_t h = 0; h < c.powers().size(); ++h) {
      const GaussRat& g = c.powers()[h];
      if (g.is_zero()) continue;
      by_power[h].push_back({{"exp", k.values()},
                             {"re", detail::rat_string(g.re)},
                             {"im", detail::rat_string(g.im)},
                             {"hbar", h}});
    }
  json terms = json::array();
  for (auto& [h, v] : by_power)
    for (auto& t : v) terms.push_back(std::move(t));
  return {{"dim", f.dim()}, {"terms", terms}};
}

/// Variable names: (p, q) for d = 2, p1..pn q1..qn for even d, x1..xd otherwise.
inline std::vector<std::string> variable_names(std::size_t d) {
  std::vector<std::string> v;
  if (d == 2) return {"p", "q"};
  if (d % 2 == 0) {
    for (std::size_t j = 1; j <= d / 2; ++j) v.push_back("p" + std::to_string(j));
    for (std::size_t j = 1; j <= d / 2; ++j) v.push_back("q" + std::to_string(j));
    return v;
  }
  for (std::size_t j = 1; j <= d; ++j) v.push_back("x" + std::to_string(j));
  return v;
}

inline std::string monomial_text(const MultiIndex& k, const std::vector<std::string>& names) {
  std::string s;
  for (std::size_t j = 0; j < k.size(); ++j) {
    if (k[j] == 0) continue;
    if (!s.empty()) s += "*";
    s += names[j];
    if (k[j] > 1) s += "^" + std::to_string(k[j]);
  }
  return s.empty() ? "1" : s;
}

/// {"0": "...", "1": "..."}: readable sum of terms at each hbar power.
inline json grouped_text(const PolySymbol& f) {
  const auto names = variable_names(f.dim());
  std::map<std::size_t, std::string> by_power;
  for (const auto& [k, c] : f.terms())
    for (std::size_t h = 0; h < c.powers().size(); ++h) {
      const GaussRat& g = c.powers()[h];
      if (g.is_zero()) continue;
      std::ostringstream os;
      os << g;
      std::string term = os.str();
      const std::string mono = monomial_text(k, names);
      if (mono != "1") term = (term == "1" ? "" : term == "-1" ? "-" : term + "*") + mono;
      std::string& line = by_power[h];
      if (!line.empty()) line += " + ";
      line += term;
    }
  json out = json::object();
  for (const auto& [h, s] : by_power) out[std::to_string(h)] = s;
  return out;
}

// ---- GaussianSymbol ----

inline bool is_gaussian_json(const json& j) { return j.is_object() && j.contains("M"); }

inline GaussianSymbol gaussian_from_json(const json& j) {
  const char* where = "GaussianSymbol";
  const std::size_t d = detail::dimension(j, where);
  NumPoly pre(d);
  if (j.contains("terms")) {
    const PolySymbol p = poly_from_json(j);
    for (const auto& [k, c] : p.terms()) {
      if (c.hbar_degree() > 0) detail::fail("GaussianSymbol: prefactor terms cannot carry hbar");
      pre.add_term(k, c.evaluate(0.0));
    }
  } else {
    pre = NumPoly::one(d);
  }
  const json& M = detail::field(j, "M", where);
  if (!M.is_array() || M.size() != d) detail::fail("GaussianSymbol: 'M' must be a dim x dim array");
  Eigen::MatrixXcd m(d, d);
  for (std::size_t r = 0; r < d; ++r) {
    if (!M[r].is_array() || M[r].size() != d) detail::fail("GaussianSymbol: 'M' must be a dim x dim array");
    for (std::size_t c = 0; c < d; ++c) m(r, c) = detail::complex_number(M[r][c], where);
  }
  if (!m.isApprox(m.transpose())) detail::fail("GaussianSymbol: 'M' must be symmetric");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
  if (j.contains("v")) {
    const json& vj = j["v"];
    if (!vj.is_array() || vj.size() != d) detail::fail("GaussianSymbol: 'v' must have length dim");
    for (std::size_t r = 0; r < d; ++r) v(r) = detail::complex_number(vj[r], where);
  }
  const cplx c = j.contains("c") ? detail::complex_number(j["c"], where) : cplx(0.0);
  return GaussianSymbol(std::move(pre), m, std::move(v), c);
}

inline json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const GaussianSymbol& g) {
  json terms = json::array();
  for (const auto& [k, c] : g.prefactor().terms())
    terms.push_back({{"exp", k.values()}, {"re", c.real()}, {"im", c.imag()}});
  json M = json::array(), v = json::array();
  for (std::size_t r = 0; r < g.dim(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < g.dim(); ++c) row.push_back(complex_json(g.M(r, c)));
    M.push_back(row);
    v.push_back(complex_json(g.v()(static_cast<Eigen::Index>(r))));
  }
  return {{"dim", g.dim()}, {"prefactor", terms}, {"M", M}, {"v", v}, {"c", complex_json(g.c())}};
}

// ---- ThetaMatrix ----

inline RatMatrix rat_matrix(const json& j, std::size_t d, const char* where) {
  if (!j.is_array() || j.size() != d) detail::fail(std::string(where) + ": expected a " + std::to_string(d) + "x" +
                                                   std::to_string(d) + " array");
  RatMatrix m(d);
  for (std::size_t r = 0; r < d; ++r) {
    if (!j[r].is_array() || j[r].size() != d) detail::fail(std::string(where) + ": ragged matrix");
    for (std::size_t c = 0; c < d; ++c) {
      const json& e = j[r][c];
      if (e.is_object())
        m(r, c) = GaussRat(e.contains("re") ? detail::rational(e["re"], where) : mpq_class(0),
                           e.contains("im") ? detail::rational(e["im"], where) : mpq_class(0));
      else
        m(r, c) = GaussRat(detail::rational(e, where));
    }
  }
  return m;
}

/// Raw entries: a rational, {"re", "im", "hbar"}, or an array of such objects.
inline Coeff coeff_from_json(const json& e, const char* where) {
  if (e.is_array()) {
    Coeff c;
    for (const auto& t : e) c += coeff_from_json(t, where);
    return c;
  }
  if (e.is_object()) {
    const GaussRat g(e.contains("re") ? detail::rational(e["re"], where) : mpq_class(0),
                     e.contains("im") ? detail::rational(e["im"], where) : mpq_class(0));
    const int h = e.contains("hbar") ? detail::integer(e["hbar"], where) : 0;
    if (h < 0) detail::fail(std::string(where) + ": negative hbar power");
    return Coeff::hbar(static_cast<std::size_t>(h), g);
  }
  return Coeff(GaussRat(detail::rational(e, where)));
}

inline ThetaMatrix theta_from_json(const json& j) {
  const char* where = "ThetaMatrix";
  const std::string mode = [&] {
    const json& m = detail::field(j, "mode", where);
    if (!m.is_string()) detail::fail("ThetaMatrix: 'mode' must be a string");
    return m.get<std::string>();
  }();
  if (mode == "preset" || mode == "Q") {
    const int n = detail::integer(detail::field(j, "n", where), where);
    if (n < 1) detail::fail("ThetaMatrix: n must be >= 1");
    if (mode == "preset") {
      const json& name = detail::field(j, "name", where);
      if (!name.is_string()) detail::fail("ThetaMatrix: 'name' must be a string");
      const mpq_class sigma = j.contains("sigma") ? detail::rational(j["sigma"], where) : mpq_class(1);
      return ThetaMatrix::preset(name.get<std::string>(), static_cast<std::size_t>(n), sigma);
    }
    return ThetaMatrix::from_q(rat_matrix(detail::field(j, "Q", where), 2 * static_cast<std::size_t>(n), where));
  }
  if (mode == "raw") {
    const json& e = detail::field(j, "entries", where);
    if (!e.is_array() || e.empty()) detail::fail("ThetaMatrix: 'entries' must be a square array");
    const std::size_t d = e.size();
    CoeffMatrix m(d);
    for (std::size_t r = 0; r < d; ++r) {
      if (!e[r].is_array() || e[r].size() != d) detail::fail("ThetaMatrix: 'entries' must be square");
      for (std::size_t c = 0; c < d; ++c) m(r, c) = coeff_from_json(e[r][c], where);
    }
    return ThetaMatrix::raw(std::move(m));
  }
  detail::fail("ThetaMatrix: mode must be preset, Q or raw");
}

// ---- FockOperator ----

inline json to_json(const FockOperator& A) {
  json re = json::array(), im = json::array();
  for (int r = 0; r < A.N(); ++r) {
    json rr = json::array(), ri = json::array();
    for (int c = 0; c < A.N(); ++c) {
      rr.push_back(A(r, c).real());
      ri.push_back(A(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return {{"N", A.N()},   {"hbar", A.hbar()},           {"sigma", A.sigma()}, {"deg", A.band()},
          {"protected", A.protected_size()}, {"re", re}, {"im", im}};
}

inline FockOperator fock_from_json(const json& j) {
  const char* where = "FockOperator";
  const int N = detail::integer(detail::field(j, "N", where), where);
  if (N < 1) detail::fail("FockOperator: N must be >= 1");
  const double hbar = detail::number(detail::field(j, "hbar", where), where);
  const double sigma = j.contains("sigma") ? detail::number(j["sigma"], where) : 1.0;
  const int deg = detail::integer(detail::field(j, "deg", where), where);
  const json& re = detail::field(j, "re", where);
  const json& im = detail::field(j, "im", where);
  Eigen::MatrixXcd m(N, N);
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) {
      if (!re.is_array() || re.size() != static_cast<std::size_t>(N) || re[r].size() != static_cast<std::size_t>(N) ||
          !im.is_array() || im.size() != static_cast<std::size_t>(N) || im[r].size() != static_cast<std::size_t>(N))
        detail::fail("FockOperator: 're' and 'im' must be N x N");
      m(r, c) = cplx(detail::number(re[r][c], where), detail::number(im[r][c], where));
    }
  if (j.contains("protected"))
    return FockOperator(std::move(m), deg, detail::integer(j["protected"], where), hbar, sigma);
  return FockOperator(std::move(m), deg, hbar, sigma);
}

// ---- BargmannPoly ----

inline json to_json(const BargmannPoly& b) {
  json c = json::array();
  for (const auto& v : b.coeffs()) c.push_back({{"re", v.real()}, {"im", v.imag()}});
  return {{"hbar", b.hbar()}, {"coeffs", c}};
}

inline BargmannPoly bargmann_from_json(const json& j) {
  const char* where = "BargmannPoly";
  const double hbar = detail::number(detail::field(j, "hbar", where), where);
  const json& c = detail::field(j, "coeffs", where);
  if (!c.is_array()) detail::fail("BargmannPoly: 'coeffs' must be an array");
  std::vector<cplx> v;
  for (const auto& e : c) v.push_back(detail::complex_number(e, where));
  return BargmannPoly(std::move(v), hbar);
}

// ---- Cone ----

inline json to_json(const Cone& V) { return {{"dim", V.dim()}, {"normals", V.normals()}}; }

inline std::vector<std::vector<double>> cone_normals(const json& j, std::size_t& d) {
  const char* where = "Cone";
  d = detail::dimension(j, where);
  const json& n = detail::field(j, "normals", where);
  if (!n.is_array()) detail::fail("Cone: 'normals' must be an array");
  std::vector<std::vector<double>> out;
  for (const auto& a : n) {
    if (!a.is_array() || a.size() != d) detail::fail("Cone: every normal must have length dim");
    std::vector<double> row;
    for (const auto& v : a) row.push_back(v.is_string() ? GaussRat::parse_rational(v.get<std::string>()).get_d()
                                                        : detail::number(v, where));
    out.push_back(std::move(row));
  }
  return out;
}

inline Cone cone_from_json(const json& j) {
  std::size_t d = 0;
  auto n = cone_normals(j, d);
  return Cone(d, std::move(n));
}

// ---- coefficient sequences ----

/// One coefficient per line ("value" or "k,value"); a non-numeric first line
/// is treated as a header.
inline std::vector<double> read_coefficients_csv(std::istream& is) {
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> parts;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    auto parse = [&](const std::string& s, double& v) {
      try {
        std::size_t used = 0;
        v = std::stod(s, &used);
        return s.find_first_not_of(" \t", used) == std::string::npos;
      } catch (const std::exception&) {
        return false;
      }
    };
    double v = 0, k = 0;
    const bool ok = parts.size() == 1 ? parse(parts[0], v)
                    : parts.size() == 2 ? parse(parts[0], k) && parse(parts[1], v)
                                        : false;
    if (!ok) {
      if (lineno == 1) continue;
      throw ParseError("coefficients csv: bad line " + std::to_string(lineno) + ": '" + line + "'");
    }
    if (parts.size() == 2 && k != static_cast<double>(out.size()))
      throw ParseError("coefficients csv: index " + parts[0] + " out of sequence on line " + std::to_string(lineno));
    out.push_back(v);
  }
  return out;
}

inline GridFunction load_grid(const std::string& path) {
  std::istringstream is(read_file(path));
  return read_grid_csv(is);
}

} // namespace cstar::io
