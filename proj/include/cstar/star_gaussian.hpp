#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "cstar/symbols.hpp"
#include "cstar/theta.hpp"

namespace cstar {

enum class Convergence { Converging, Diverging, Inconclusive };

inline const char* convergence_name(Convergence c) {
  switch (c) {
    case Convergence::Converging: return "converging";
    case Convergence::Diverging: return "diverging";
    case Convergence::Inconclusive: return "inconclusive";
  }
  return "?";
}

/// Cube [-half_width, half_width]^d sampled with `points` nodes per axis.
struct ReferenceGrid {
  double half_width = 2.0;
  int points = 17;
};

struct ConvergenceDiagnostic {
  Convergence verdict = Convergence::Inconclusive;
  /// exp(slope) of log(sup_m) against m over the tail orders.
  double ratio = std::numeric_limits<double>::quiet_NaN();
};

struct GaussianStarResult {
  GaussianSymbol partial_sum;
  /// sup over the reference grid of |term_m|, m = 0..M_max.
  std::vector<double> order_sups;
  ConvergenceDiagnostic diagnostic;
};

/// Ratio test on per-order sups over the tail half of the orders. An order far
/// below both neighbours is treated as a cancelled order (e.g. odd orders of a
/// Moyal square) and skipped; a non-finite sup is a divergence.
inline ConvergenceDiagnostic diagnose_orders(const std::vector<double>& sups) {
  ConvergenceDiagnostic out;
  for (double s : sups)
    if (!std::isfinite(s)) {
      out.verdict = Convergence::Diverging;
      out.ratio = std::numeric_limits<double>::infinity();
      return out;
    }
  const std::size_t total = sups.size();
  if (total < 3) return out;
  auto cancelled = [&](std::size_t m) {
    const double before = m > 0 ? sups[m - 1] : 0.0;
    const double after = m + 1 < total ? sups[m + 1] : 0.0;
    return sups[m] <= 1e-8 * std::max(before, after);
  };
  std::vector<double> xs, ys;
  for (std::size_t m = total / 2; m < total; ++m)
    if (sups[m] > 0.0 && !cancelled(m)) {
      xs.push_back(static_cast<double>(m));
      ys.push_back(std::log(sups[m]));
    }
  if (xs.empty()) {
    // every tail order vanished: the series terminated
    out.verdict = Convergence::Converging;
    out.ratio = 0.0;
    return out;
  }
  if (xs.size() < 2) return out;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= xs.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  out.ratio = std::exp(sxy / sxx);
  out.verdict = out.ratio < 1.0 ? Convergence::Converging : Convergence::Diverging;
  return out;
}

namespace detail {

/// Dense index space for exponents a in {0..cap}^d.
struct DenseExponents {
  std::size_t d = 0;
  int cap = 0;
  std::size_t count = 0;
  std::vector<int> exps;          // count x d
  std::vector<long> minus, plus;  // count x d, -1 when out of range

  DenseExponents(std::size_t dim, int c) : d(dim), cap(c) {
    count = 1;
    for (std::size_t j = 0; j < d; ++j) count *= static_cast<std::size_t>(cap + 1);
    exps.resize(count * d);
    minus.assign(count * d, -1);
    plus.assign(count * d, -1);
    std::size_t stride = 1;
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t i = 0; i < count; ++i) {
        const int a = static_cast<int>((i / stride) % static_cast<std::size_t>(cap + 1));
        exps[i * d + j] = a;
        if (a > 0) minus[i * d + j] = static_cast<long>(i - stride);
        if (a < cap) plus[i * d + j] = static_cast<long>(i + stride);
      }
      stride *= static_cast<std::size_t>(cap + 1);
    }
  }

  std::size_t index(const MultiIndex& k) const {
    std::size_t i = 0, stride = 1;
    for (std::size_t j = 0; j < d; ++j) {
      i += static_cast<std::size_t>(k[j]) * stride;
      stride *= static_cast<std::size_t>(cap + 1);
    }
    return i;
  }
};

/// Tensor T(a, b) of coefficients of x^a x'^b for the prefactor of
/// (derivatives of f)(x) (derivatives of g)(x').
class BiPrefactor {
public:
  BiPrefactor(const DenseExponents& left, const DenseExponents& right)
      : Lp_(&left), Rp_(&right), t_(left.count * right.count, 0.0) {}

  cplx& at(std::size_t a, std::size_t b) { return t_[a * Rp_->count + b]; }
  cplx at(std::size_t a, std::size_t b) const { return t_[a * Rp_->count + b]; }
  bool is_zero() const {
    for (const auto& c : t_)
      if (c != cplx(0.0)) return false;
    return true;
  }

  /// e^{-phi} d_j e^{phi} acting on the left (x) factor, phi = x.Mx + v.x.
  BiPrefactor left_derivative(std::size_t j, const GaussianSymbol& f) const {
    BiPrefactor out(*Lp_, *Rp_);
    const std::size_t d = Lp_->d;
    for (std::size_t a = 0; a < Lp_->count; ++a) {
      const int aj = Lp_->exps[a * d + j];
      const long down = Lp_->minus[a * d + j];
      for (std::size_t b = 0; b < Rp_->count; ++b) {
        const cplx c = at(a, b);
        if (c == cplx(0.0)) continue;
        if (down >= 0) out.at(static_cast<std::size_t>(down), b) += static_cast<double>(aj) * c;
        out.at(a, b) += f.v()(static_cast<Eigen::Index>(j)) * c;
        for (std::size_t k = 0; k < d; ++k) {
          const cplx m = f.M(j, k);
          if (m == cplx(0.0)) continue;
          const long up = Lp_->plus[a * d + k];
          if (up < 0) throw ContractViolation("star_gaussian_partial: prefactor exceeded its degree cap");
          out.at(static_cast<std::size_t>(up), b) += 2.0 * m * c;
        }
      }
    }
    return out;
  }

  BiPrefactor right_derivative(std::size_t j, const GaussianSymbol& g) const {
    BiPrefactor out(*Lp_, *Rp_);
    const std::size_t d = Rp_->d;
    for (std::size_t a = 0; a < Lp_->count; ++a)
      for (std::size_t b = 0; b < Rp_->count; ++b) {
        const cplx c = at(a, b);
        if (c == cplx(0.0)) continue;
        const long down = Rp_->minus[b * d + j];
        if (down >= 0) out.at(a, static_cast<std::size_t>(down)) += static_cast<double>(Rp_->exps[b * d + j]) * c;
        out.at(a, b) += g.v()(static_cast<Eigen::Index>(j)) * c;
        for (std::size_t k = 0; k < d; ++k) {
          const cplx m = g.M(j, k);
          if (m == cplx(0.0)) continue;
          const long up = Rp_->plus[b * d + k];
          if (up < 0) throw ContractViolation("star_gaussian_partial: prefactor exceeded its degree cap");
          out.at(a, static_cast<std::size_t>(up)) += 2.0 * m * c;
        }
      }
    return out;
  }

  void axpy(cplx s, const BiPrefactor& o) {
    if (s == cplx(0.0)) return;
    for (std::size_t i = 0; i < t_.size(); ++i) t_[i] += s * o.t_[i];
  }
  void scale(cplx s) {
    for (auto& c : t_) c *= s;
  }

  NumPoly diagonal() const {
    const std::size_t d = Lp_->d;
    NumPoly r(d);
    for (std::size_t a = 0; a < Lp_->count; ++a)
      for (std::size_t b = 0; b < Rp_->count; ++b) {
        const cplx c = at(a, b);
        if (c == cplx(0.0)) continue;
        MultiIndex k(d);
        for (std::size_t j = 0; j < d; ++j) k[j] = Lp_->exps[a * d + j] + Rp_->exps[b * d + j];
        r.add_term(k, c);
      }
    return r;
  }

private:
  const DenseExponents* Lp_;
  const DenseExponents* Rp_;
  std::vector<cplx> t_;
};

inline double grid_sup(const NumPoly& prefactor, const GaussianSymbol& exponent_carrier, const ReferenceGrid& grid) {
  const std::size_t d = prefactor.dim();
  std::size_t total = 1;
  for (std::size_t j = 0; j < d; ++j) total *= static_cast<std::size_t>(grid.points);
  std::vector<cplx> x(d);
  double sup = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t r = i;
    for (std::size_t j = 0; j < d; ++j) {
      const int k = static_cast<int>(r % static_cast<std::size_t>(grid.points));
      r /= static_cast<std::size_t>(grid.points);
      x[j] = grid.points == 1 ? 0.0 : -grid.half_width + 2.0 * grid.half_width * k / (grid.points - 1);
    }
    const double v = std::abs(eval(prefactor, x)) * std::exp(exponent_carrier.exponent(x).real());
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    sup = std::max(sup, v);
  }
  return sup;
}

} // namespace detail

/// Partial sum through order M_max of f *_theta g for Gaussian symbols.
///
/// Every order keeps the exponential exp(x.(M_f+M_g)x + (v_f+v_g).x + c_f+c_g)
/// and carries the derivative structure in its polynomial prefactor. The sup
/// of each order over `grid` is reported for convergence diagnosis; overflow
/// is reported through the diagnostic rather than thrown.
inline GaussianStarResult star_gaussian_partial(const GaussianSymbol& f, const GaussianSymbol& g,
                                                const Eigen::MatrixXcd& theta, int M_max,
                                                const ReferenceGrid& grid = {}) {
  if (f.dim() != g.dim()) throw DimensionMismatch("star_gaussian_partial", f.dim(), g.dim());
  if (theta.rows() != static_cast<Eigen::Index>(f.dim()) || theta.cols() != theta.rows())
    throw DimensionMismatch("star_gaussian_partial: theta", f.dim(), static_cast<std::size_t>(theta.rows()));
  require(M_max >= 0, "star_gaussian_partial: M_max must be >= 0");
  require(grid.points >= 1 && grid.half_width >= 0, "star_gaussian_partial: bad reference grid");

  const std::size_t d = f.dim();
  const int fdeg = std::max(f.prefactor().degree(), 0);
  const int gdeg = std::max(g.prefactor().degree(), 0);
  const detail::DenseExponents left(d, fdeg + M_max), right(d, gdeg + M_max);
  if (left.count * right.count > 50'000'000)
    throw InvalidArgument("star_gaussian_partial: dense prefactor tensor too large; lower M_max");

  const GaussianSymbol carrier(NumPoly::one(d), f.M() + g.M(), f.v() + g.v(), f.c() + g.c());

  detail::BiPrefactor t(left, right);
  for (const auto& [a, ca] : f.prefactor().terms())
    for (const auto& [b, cb] : g.prefactor().terms()) t.at(left.index(a), right.index(b)) += ca * cb;

  GaussianStarResult out;
  NumPoly sum(d);
  bool overflow = false;
  for (int m = 0; m <= M_max; ++m) {
    if (m > 0) {
      std::vector<detail::BiPrefactor> right_d;
      right_d.reserve(d);
      for (std::size_t k = 0; k < d; ++k) right_d.push_back(t.right_derivative(k, g));
      detail::BiPrefactor next(left, right);
      for (std::size_t j = 0; j < d; ++j) {
        detail::BiPrefactor mixed(left, right);
        for (std::size_t k = 0; k < d; ++k) mixed.axpy(theta(j, k), right_d[k]);
        if (mixed.is_zero()) continue;
        next.axpy(1.0, mixed.left_derivative(j, f));
      }
      next.scale(cplx(0.0, 1.0 / m));
      t = std::move(next);
    }
    const NumPoly term = t.diagonal();
    const double s = overflow ? std::numeric_limits<double>::infinity() : detail::grid_sup(term, carrier, grid);
    if (!std::isfinite(s)) overflow = true;
    out.order_sups.push_back(s);
    if (!overflow) sum += term;
  }
  out.partial_sum = carrier.with_prefactor(std::move(sum));
  out.diagnostic = diagnose_orders(out.order_sups);
  return out;
}

inline GaussianStarResult star_gaussian_partial(const GaussianSymbol& f, const GaussianSymbol& g,
                                                const ThetaMatrix& theta, double hbar_value, int M_max,
                                                const ReferenceGrid& grid = {}) {
  return star_gaussian_partial(f, g, theta.numeric(hbar_value), M_max, grid);
}

} // namespace cstar
