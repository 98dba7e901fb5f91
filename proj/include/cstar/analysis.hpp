#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cstar/grid.hpp"
#include "cstar/simplex.hpp"
#include "cstar/symbols.hpp"

namespace cstar {

// ---- growth order and type ----

enum class TypeClass { Minimal, Finite, Infinite };

inline const char* type_class_name(TypeClass t) {
  switch (t) {
    case TypeClass::Minimal: return "minimal";
    case TypeClass::Finite: return "finite";
    case TypeClass::Infinite: return "infinite";
  }
  return "?";
}

struct GrowthProfile {
  double order = 0.0;
  TypeClass type_class = TypeClass::Minimal;
  /// a in |c_k| ~ (a rho)^{k/rho} / (k!)^{1/rho}; set when the class is finite.
  std::optional<double> type;
  std::size_t used = 0;
};

inline constexpr double kMinimalTypeBelow = 1e-3;
inline constexpr double kInfiniteTypeAbove = 1e3;

/// Fits -log|c_k| = alpha k log k + beta k + gamma log k + delta over the
/// nonzero coefficients in the tail half; order = 1/alpha.
inline GrowthProfile estimate_order(std::span<const double> coeffs) {
  require(coeffs.size() >= 32, "estimate_order: need at least 32 coefficients");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = coeffs.size() / 2; k < coeffs.size(); ++k) {
    const double c = std::abs(coeffs[k]);
    if (!std::isfinite(c)) throw InvalidArgument("estimate_order: non-finite coefficient");
    if (c > 0 && k >= 1) pts.emplace_back(static_cast<double>(k), -std::log(c));
  }
  GrowthProfile g;
  if (pts.empty()) return g;
  require(pts.size() >= 5, "estimate_order: too few nonzero tail coefficients");
  Eigen::MatrixXd X(static_cast<Eigen::Index>(pts.size()), 4);
  Eigen::VectorXd y(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double k = pts[i].first;
    const auto r = static_cast<Eigen::Index>(i);
    X.row(r) << k * std::log(k), k, std::log(k), 1.0;
    y(r) = pts[i].second;
  }
  const Eigen::Vector4d beta = X.colPivHouseholderQr().solve(y);
  g.used = pts.size();
  const double alpha = beta(0);
  if (!(alpha > 0)) {
    g.order = std::numeric_limits<double>::infinity();
    g.type_class = TypeClass::Infinite;
    return g;
  }
  g.order = 1.0 / alpha;
  // -log template = alpha (k log k - k) - alpha k log(a rho)
  const double a = alpha * std::exp(-beta(1) / alpha - 1.0);
  if (a < kMinimalTypeBelow) {
    g.type_class = TypeClass::Minimal;
  } else if (a > kInfiniteTypeAbove || !std::isfinite(a)) {
    g.type_class = TypeClass::Infinite;
  } else {
    g.type_class = TypeClass::Finite;
    g.type = a;
  }
  return g;
}

inline constexpr double kOrderTolerance = 0.1;

struct MultiplierVerdict {
  bool verdict = false;
  /// rho' - estimated order (infinite for rho <= 1)
  double margin = 0.0;
  GrowthProfile profile;
};

/// G(d) acts on E^rho when G has order <= rho/(rho-1) and finite type
/// (rho > 1), or for every entire G when rho <= 1.
inline MultiplierVerdict is_multiplier(std::span<const double> coeffs, double rho) {
  require(rho > 0 && rho <= 2, "is_multiplier: rho must lie in (0, 2]");
  MultiplierVerdict v;
  v.profile = estimate_order(coeffs);
  if (rho <= 1) {
    v.verdict = true;
    v.margin = std::numeric_limits<double>::infinity();
    return v;
  }
  const double rp = rho / (rho - 1.0);
  v.margin = rp - v.profile.order;
  const bool at_edge = std::abs(v.margin) <= kOrderTolerance;
  v.verdict = v.margin >= -kOrderTolerance && !(at_edge && v.profile.type_class == TypeClass::Infinite);
  return v;
}

/// inf_r e^{sum r_j^rho} / r^kappa = (rho e)^{|kappa|/rho} / (kappa^kappa)^{1/rho}, 0^0 = 1.
inline double min_exp_bound(double rho, const MultiIndex& kappa) {
  require(rho > 0, "min_exp_bound: rho must be > 0");
  double lg = kappa.order() * std::log(rho * std::exp(1.0)) / rho;
  for (std::size_t j = 0; j < kappa.size(); ++j)
    if (kappa[j] > 0) lg -= kappa[j] * std::log(static_cast<double>(kappa[j])) / rho;
  return std::exp(lg);
}

// ---- cones ----

/// {x : a_i . x >= 0 for all i}, required to have interior points.
template <class T>
class BasicCone {
public:
  BasicCone(std::size_t dim, std::vector<std::vector<T>> normals) : dim_(dim), normals_(std::move(normals)) {
    require(dim >= 1, "Cone: dimension must be >= 1");
    for (auto& a : normals_) {
      if (a.size() != dim) throw DimensionMismatch("Cone: normal", dim, a.size());
      bool nonzero = false;
      for (auto& v : a) {
        LpTraits<T>::normalize(v);
        nonzero = nonzero || v != T(0);
      }
      require(nonzero, "Cone: zero normal");
    }
    if (!has_interior()) throw InvalidArgument("Cone: empty interior");
  }

  std::size_t dim() const { return dim_; }
  const std::vector<std::vector<T>>& normals() const { return normals_; }

  bool contains(std::span<const T> x) const {
    if (x.size() != dim_) throw DimensionMismatch("Cone::contains", dim_, x.size());
    for (const auto& a : normals_) {
      T s = 0;
      for (std::size_t j = 0; j < dim_; ++j) s += a[j] * x[j];
      if (LpTraits<T>::negative(s)) return false;
    }
    return true;
  }

  BasicCone with_normal(std::vector<T> a) const {
    auto n = normals_;
    n.push_back(std::move(a));
    return BasicCone(dim_, std::move(n));
  }

private:
  // max s with a_i.xi >= s, |xi_j| <= 1, s <= 1; interior iff s > 0
  bool has_interior() const {
    if (normals_.empty()) return true;
    const std::size_t d = dim_, nv = 2 * d + 1;  // u, v, s
    std::vector<T> c(nv, T(0));
    c[2 * d] = -1;
    std::vector<LpConstraint<T>> rows;
    for (const auto& a : normals_) {
      LpConstraint<T> r{std::vector<T>(nv, T(0)), Sense::GreaterEqual, T(0)};
      for (std::size_t j = 0; j < d; ++j) {
        r.a[j] = a[j];
        r.a[d + j] = -a[j];
      }
      r.a[2 * d] = -1;
      rows.push_back(std::move(r));
    }
    for (std::size_t j = 0; j < d; ++j) {
      LpConstraint<T> r{std::vector<T>(nv, T(0)), Sense::LessEqual, T(1)};
      r.a[j] = 1;
      rows.push_back(r);
      r.a[j] = 0;
      r.a[d + j] = 1;
      rows.push_back(std::move(r));
    }
    rows.push_back({std::vector<T>(nv, T(0)), Sense::LessEqual, T(1)});
    rows.back().a[2 * d] = 1;
    const LpResult<T> r = simplex(c, rows);
    return r.status == LpStatus::Optimal && LpTraits<T>::positive(-r.value);
  }

  std::size_t dim_;
  std::vector<std::vector<T>> normals_;
};

using Cone = BasicCone<double>;
using ExactCone = BasicCone<mpq_class>;

/// delta_V(x) = inf_{xi in V} max_j |x_j - xi_j| by linear programming:
/// minimize t with -t <= x_j - xi_j <= t and a_i . xi >= 0.
template <class T>
T cone_distance(const BasicCone<T>& V, std::span<const T> x) {
  const std::size_t d = V.dim();
  if (x.size() != d) throw DimensionMismatch("cone_distance", d, x.size());
  const std::size_t nv = 2 * d + 1;  // xi = u - v, then t
  std::vector<T> c(nv, T(0));
  c[2 * d] = 1;
  std::vector<LpConstraint<T>> rows;
  for (std::size_t j = 0; j < d; ++j) {
    // xi_j - t <= x_j
    LpConstraint<T> r{std::vector<T>(nv, T(0)), Sense::LessEqual, x[j]};
    r.a[j] = 1;
    r.a[d + j] = -1;
    r.a[2 * d] = -1;
    rows.push_back(r);
    // xi_j + t >= x_j
    r.sense = Sense::GreaterEqual;
    r.a[2 * d] = 1;
    rows.push_back(std::move(r));
  }
  for (const auto& a : V.normals()) {
    LpConstraint<T> r{std::vector<T>(nv, T(0)), Sense::GreaterEqual, T(0)};
    for (std::size_t j = 0; j < d; ++j) {
      r.a[j] = a[j];
      r.a[d + j] = -a[j];
    }
    rows.push_back(std::move(r));
  }
  const LpResult<T> r = simplex(c, rows);
  if (r.status != LpStatus::Optimal) throw ContractViolation("cone_distance: linear program not solved");
  return r.value;
}

template <class T>
T cone_distance(const BasicCone<T>& V, const std::vector<T>& x) {
  return cone_distance(V, std::span<const T>(x));
}

// ---- norms ----

enum class NormFamily {
  /// sup_z |f(z)| e^{-eps |z|^rho}
  EComplex,
  /// sup_{x, |kappa| <= K} L^{|kappa|} |d^kappa f(x)| (kappa!)^{1/rho - 1} e^{-|x/L|^rho}
  EReal,
  /// sup_{x,y} (1+|x|)^N |f(x+iy)| e^{-eps |y|^rho}
  W,
  /// W with the extra weight e^{-eps delta_V(x)^rho}
  WCone,
  /// max_{|kappa| <= N} sup |d^kappa g(s)| e^{a |s|^rho'}
  WPrime,
  /// sup_{q,y} |psi(q+iy)| e^{a |q|^rho - b |y|^gamma}
  WGammaRho,
};

inline const char* norm_family_name(NormFamily f) {
  switch (f) {
    case NormFamily::EComplex: return "E";
    case NormFamily::EReal: return "E-real";
    case NormFamily::W: return "W";
    case NormFamily::WCone: return "W-cone";
    case NormFamily::WPrime: return "W-prime";
    case NormFamily::WGammaRho: return "W-gamma-rho";
  }
  return "?";
}

inline std::optional<NormFamily> parse_norm_family(const std::string& s) {
  for (NormFamily f : {NormFamily::EComplex, NormFamily::EReal, NormFamily::W, NormFamily::WCone,
                       NormFamily::WPrime, NormFamily::WGammaRho})
    if (s == norm_family_name(f)) return f;
  return std::nullopt;
}

struct NormSpec {
  NormFamily family = NormFamily::EComplex;
  double eps = 1.0;
  double L = 1.0;
  double a = 1.0;
  double b = 1.0;
  int N = 0;
  double rho = 2.0;
  /// W-prime exponent; <= 0 means rho / (rho - 1).
  double rho_prime = 0.0;
  double gamma = 2.0;
  /// derivative cap for E-real
  int K_max = 0;
  std::optional<Cone> cone;
  /// value substituted for hbar in PolySymbol coefficients
  double hbar = 0.0;

  double dual_exponent() const { return rho_prime > 0 ? rho_prime : rho / (rho - 1.0); }

  bool uses_imaginary() const {
    return family == NormFamily::EComplex || family == NormFamily::W || family == NormFamily::WCone ||
           family == NormFamily::WGammaRho;
  }
  /// highest derivative order entering the norm
  int derivative_order() const {
    if (family == NormFamily::EReal) return K_max;
    if (family == NormFamily::WPrime) return N;
    return 0;
  }

  void validate() const {
    require(rho > 0 && std::isfinite(rho), "NormSpec: rho must be > 0");
    require(N >= 0 && K_max >= 0, "NormSpec: N and K_max must be >= 0");
    switch (family) {
      case NormFamily::EComplex:
      case NormFamily::W: require(eps > 0, "NormSpec: eps must be > 0"); break;
      case NormFamily::WCone:
        require(eps > 0, "NormSpec: eps must be > 0");
        require(cone.has_value(), "NormSpec: W-cone needs a cone");
        break;
      case NormFamily::EReal: require(L > 0, "NormSpec: L must be > 0"); break;
      case NormFamily::WPrime:
        require(a > 0, "NormSpec: a must be > 0");
        require(rho_prime > 0 || rho > 1, "NormSpec: W-prime needs rho > 1 or an explicit rho'");
        break;
      case NormFamily::WGammaRho:
        require(a > 0 && b > 0, "NormSpec: a and b must be > 0");
        require(gamma > 0, "NormSpec: gamma must be > 0");
        break;
    }
  }
};

struct NormGrid {
  double real_half_width = 4.0;
  int real_points = 41;
  double imag_half_width = 2.0;
  int imag_points = 21;
};

struct NormResult {
  double value = 0.0;
  std::vector<cplx> argmax;
  MultiIndex kappa;
  /// arg-max on the edge of the grid: the true sup may lie outside
  bool on_boundary = false;
  Warnings warnings;
};

inline constexpr std::size_t kMaxNormGridPoints = 5'000'000;

namespace detail {

inline std::vector<MultiIndex> multi_indices_up_to(std::size_t d, int K) {
  std::vector<MultiIndex> out;
  std::vector<int> e(d, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t j, int left) {
    if (j == d) {
      out.emplace_back(e);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      e[j] = k;
      rec(j + 1, left - k);
    }
    e[j] = 0;
  };
  rec(0, K);
  return out;
}

inline double factorial_product(const MultiIndex& k) {
  double f = 1.0;
  for (std::size_t j = 0; j < k.size(); ++j) f *= std::tgamma(k[j] + 1.0);
  return f;
}

using PointFn = std::function<cplx(std::span<const cplx>)>;

/// Weighted value of one (kappa, point) pair; x and y are the real and
/// imaginary parts.
inline double norm_weight(const NormSpec& s, const MultiIndex& kappa, std::span<const double> x,
                          std::span<const double> y) {
  double xmax = 0.0, ymax = 0.0, zmax = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    xmax = std::max(xmax, std::abs(x[j]));
    ymax = std::max(ymax, std::abs(y[j]));
    zmax = std::max(zmax, std::hypot(x[j], y[j]));
  }
  switch (s.family) {
    case NormFamily::EComplex: return -s.eps * std::pow(zmax, s.rho);
    case NormFamily::EReal:
      return kappa.order() * std::log(s.L) + (1.0 / s.rho - 1.0) * std::log(factorial_product(kappa)) -
             std::pow(xmax / s.L, s.rho);
    case NormFamily::W: return s.N * std::log1p(xmax) - s.eps * std::pow(ymax, s.rho);
    case NormFamily::WCone: {
      const double delta = cone_distance(*s.cone, x);
      return s.N * std::log1p(xmax) - s.eps * std::pow(delta, s.rho) - s.eps * std::pow(ymax, s.rho);
    }
    case NormFamily::WPrime: return s.a * std::pow(xmax, s.dual_exponent());
    case NormFamily::WGammaRho: return s.a * std::pow(xmax, s.rho) - s.b * std::pow(ymax, s.gamma);
  }
  return 0.0;
}

/// Grid sup over a product of per-axis coordinate lists.
inline NormResult grid_sup(const NormSpec& spec, const std::vector<std::pair<MultiIndex, PointFn>>& fns,
                           const std::vector<std::vector<double>>& xs, const std::vector<double>& ys) {
  const std::size_t d = xs.size();
  std::size_t total = ys.size() > 0 ? 1 : 0;
  for (const auto& ax : xs) total *= ax.size() * ys.size();
  if (total * fns.size() > kMaxNormGridPoints) throw InvalidArgument("norm_eval: grid too large");

  NormResult res;
  res.value = -1.0;
  std::vector<std::size_t> ix(d, 0), iy(d, 0);
  std::vector<double> x(d), y(d);
  std::vector<cplx> z(d);
  std::vector<std::size_t> best_ix, best_iy;
  for (std::size_t n = 0; n < total; ++n) {
    std::size_t r = n;
    for (std::size_t j = d; j-- > 0;) {
      iy[j] = r % ys.size();
      r /= ys.size();
      ix[j] = r % xs[j].size();
      r /= xs[j].size();
      x[j] = xs[j][ix[j]];
      y[j] = ys[iy[j]];
      z[j] = cplx(x[j], y[j]);
    }
    for (const auto& [kappa, fn] : fns) {
      const double mag = std::abs(fn(z));
      if (mag == 0.0) continue;
      const double v = mag * std::exp(norm_weight(spec, kappa, x, y));
      if (!std::isfinite(v)) throw ContractViolation("norm_eval: non-finite weighted value");
      if (v > res.value) {
        res.value = v;
        res.argmax = z;
        res.kappa = kappa;
        best_ix = ix;
        best_iy = iy;
      }
    }
  }
  if (res.value < 0) {
    res.value = 0.0;
    return res;
  }
  for (std::size_t j = 0; j < d; ++j) {
    if (best_ix[j] == 0 || best_ix[j] + 1 == xs[j].size()) res.on_boundary = true;
    if (ys.size() > 1 && (best_iy[j] == 0 || best_iy[j] + 1 == ys.size())) res.on_boundary = true;
  }
  if (res.on_boundary) res.warnings.add("norm_eval: arg-max on the grid boundary; refine or widen the grid");
  return res;
}

inline std::vector<double> axis(double half_width, int points) {
  if (points == 1) return {0.0};
  std::vector<double> v(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) v[static_cast<std::size_t>(i)] = -half_width + 2.0 * half_width * i / (points - 1);
  return v;
}

inline NormResult symbol_norm(std::size_t d, const NormSpec& spec, const NormGrid& grid,
                              const std::vector<std::pair<MultiIndex, PointFn>>& fns) {
  require(grid.real_points >= 1 && grid.imag_points >= 1, "norm_eval: grid needs points");
  require(grid.real_half_width > 0 && grid.imag_half_width >= 0, "norm_eval: grid widths must be positive");
  if (spec.family == NormFamily::WCone && spec.cone->dim() != d)
    throw DimensionMismatch("norm_eval: cone", d, spec.cone->dim());
  const std::vector<std::vector<double>> xs(d, axis(grid.real_half_width, grid.real_points));
  const std::vector<double> ys = spec.uses_imaginary() ? axis(grid.imag_half_width, grid.imag_points)
                                                       : std::vector<double>{0.0};
  return grid_sup(spec, fns, xs, ys);
}

} // namespace detail

/// Grid sup of the weighted expression; a lower bound of the true sup, with
/// the arg-max reported.
inline NormResult norm_eval(const PolySymbol& f, const NormSpec& spec, const NormGrid& grid = {}) {
  spec.validate();
  std::vector<std::pair<MultiIndex, detail::PointFn>> fns;
  for (const MultiIndex& k : detail::multi_indices_up_to(f.dim(), spec.derivative_order())) {
    NumPoly g = to_numeric(f.derive(k), spec.hbar);
    fns.emplace_back(k, [g = std::move(g)](std::span<const cplx> z) { return eval(g, z); });
  }
  return detail::symbol_norm(f.dim(), spec, grid, fns);
}

inline NormResult norm_eval(const GaussianSymbol& f, const NormSpec& spec, const NormGrid& grid = {}) {
  spec.validate();
  std::vector<std::pair<MultiIndex, detail::PointFn>> fns;
  for (const MultiIndex& k : detail::multi_indices_up_to(f.dim(), spec.derivative_order())) {
    GaussianSymbol g = f.derive(k);
    fns.emplace_back(k, [g = std::move(g)](std::span<const cplx> z) { return g.eval(z); });
  }
  return detail::symbol_norm(f.dim(), spec, grid, fns);
}

/// Real samples only: derivative orders above 0 are rejected and the
/// imaginary direction is restricted to y = 0.
inline NormResult norm_eval(const GridFunction& f, const NormSpec& spec) {
  spec.validate();
  if (spec.derivative_order() > 0)
    throw InvalidArgument("norm_eval: derivatives are not available for sampled functions");
  if (spec.family == NormFamily::WCone && spec.cone->dim() != f.dim())
    throw DimensionMismatch("norm_eval: cone", f.dim(), spec.cone->dim());
  const std::size_t d = f.dim();
  NormResult res;
  res.value = 0.0;
  std::vector<double> x(d), y(d, 0.0);
  std::vector<std::size_t> best;
  const MultiIndex k0(d);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f.point(i, x);
    const double mag = std::abs(f[i]);
    if (mag == 0.0) continue;
    const double v = mag * std::exp(detail::norm_weight(spec, k0, x, y));
    if (v > res.value) {
      res.value = v;
      res.argmax.assign(x.begin(), x.end());
      best.assign(1, i);
    }
  }
  res.kappa = k0;
  if (!best.empty()) {
    std::size_t r = best[0];
    for (std::size_t j = d; j-- > 0;) {
      const std::size_t k = r % static_cast<std::size_t>(f.N(j));
      r /= static_cast<std::size_t>(f.N(j));
      if (k == 0 || k + 1 == static_cast<std::size_t>(f.N(j))) res.on_boundary = true;
    }
  }
  if (spec.uses_imaginary()) res.warnings.add("norm_eval: sampled function evaluated on the real slice y = 0 only");
  if (res.on_boundary) res.warnings.add("norm_eval: arg-max on the grid boundary; refine or widen the grid");
  return res;
}

} // namespace cstar
