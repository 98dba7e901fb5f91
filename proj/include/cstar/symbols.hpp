#pragma once

#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cstar/coeff.hpp"
#include "cstar/polynomial.hpp"

namespace cstar {

/// Exact symbol: polynomial with hbar-graded Gaussian-rational coefficients.
using PolySymbol = Polynomial<Coeff>;
/// Polynomial with floating complex coefficients.
using NumPoly = Polynomial<cplx>;

inline PolySymbol derive(const PolySymbol& f, const MultiIndex& kappa) { return f.derive(kappa); }

/// Evaluates f at x with the formal hbar replaced by `hbar_value`.
inline cplx eval(const PolySymbol& f, std::span<const cplx> x, double hbar_value = 0.0) {
  return evaluate_with(f, x, [&](const Coeff& c) { return c.evaluate(hbar_value); });
}

inline cplx eval(const NumPoly& f, std::span<const cplx> x) {
  return evaluate_with(f, x, [](const cplx& c) { return c; });
}

/// Substitutes a numeric hbar into the grading.
inline NumPoly to_numeric(const PolySymbol& f, double hbar_value) {
  return f.map_coefficients([&](const Coeff& c) { return c.evaluate(hbar_value); });
}

/// Coefficient of hbar^k of every term.
inline PolySymbol hbar_part(const PolySymbol& f, std::size_t k) {
  PolySymbol r(f.dim());
  for (const auto& [m, c] : f.terms()) r.add_term(m, Coeff(c.at(k)));
  return r;
}

/// Polynomial prefactor times exp(x.Mx + v.x + c) with complex symmetric M.
///
/// Only the upper triangle of M is kept, so symmetry holds by construction.
class GaussianSymbol {
public:
  GaussianSymbol() = default;

  GaussianSymbol(NumPoly prefactor, const Eigen::MatrixXcd& M, Eigen::VectorXcd v, cplx c)
      : dim_(prefactor.dim()), prefactor_(std::move(prefactor)), v_(std::move(v)), c_(c) {
    if (M.rows() != static_cast<Eigen::Index>(dim_) || M.cols() != M.rows())
      throw DimensionMismatch("GaussianSymbol: M", dim_, static_cast<std::size_t>(M.rows()));
    if (v_.size() != static_cast<Eigen::Index>(dim_))
      throw DimensionMismatch("GaussianSymbol: v", dim_, static_cast<std::size_t>(v_.size()));
    upper_.reserve(dim_ * (dim_ + 1) / 2);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i; j < dim_; ++j) upper_.push_back(M(i, j));
  }

  /// exp(x.Mx) with unit prefactor and no linear part.
  static GaussianSymbol gaussian(const Eigen::MatrixXcd& M) {
    const auto d = static_cast<std::size_t>(M.rows());
    return {NumPoly::one(d), M, Eigen::VectorXcd::Zero(M.rows()), 0.0};
  }

  std::size_t dim() const { return dim_; }
  const NumPoly& prefactor() const { return prefactor_; }
  const Eigen::VectorXcd& v() const { return v_; }
  cplx c() const { return c_; }

  cplx M(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return upper_[i * dim_ - i * (i - 1) / 2 + (j - i)];
  }

  Eigen::MatrixXcd M() const {
    Eigen::MatrixXcd m(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) m(i, j) = M(i, j);
    return m;
  }

  cplx exponent(std::span<const cplx> x) const {
    if (x.size() != dim_) throw DimensionMismatch("GaussianSymbol::exponent", dim_, x.size());
    cplx e = c_;
    for (std::size_t i = 0; i < dim_; ++i) {
      e += v_(i) * x[i];
      for (std::size_t j = 0; j < dim_; ++j) e += x[i] * M(i, j) * x[j];
    }
    return e;
  }

  cplx eval(std::span<const cplx> x) const { return cstar::eval(prefactor_, x) * std::exp(exponent(x)); }

  /// The linear polynomial d_j(x.Mx + v.x) = 2(Mx)_j + v_j.
  NumPoly exponent_gradient(std::size_t j) const {
    NumPoly g = NumPoly::constant(dim_, v_(j));
    for (std::size_t k = 0; k < dim_; ++k) g.add_term(MultiIndex::unit(dim_, k), 2.0 * M(j, k));
    return g;
  }

  /// Analytic derivative: the exponential is kept, the prefactor absorbs the
  /// chain rule.
  GaussianSymbol derive(std::size_t j) const {
    GaussianSymbol r = *this;
    r.prefactor_ = prefactor_.derive(j) + prefactor_ * exponent_gradient(j);
    return r;
  }

  GaussianSymbol derive(const MultiIndex& kappa) const {
    if (kappa.size() != dim_) throw DimensionMismatch("GaussianSymbol::derive", dim_, kappa.size());
    GaussianSymbol r = *this;
    for (std::size_t j = 0; j < dim_; ++j)
      for (int t = 0; t < kappa[j]; ++t) r = r.derive(j);
    return r;
  }

  GaussianSymbol with_prefactor(NumPoly p) const {
    if (p.dim() != dim_) throw DimensionMismatch("GaussianSymbol::with_prefactor", dim_, p.dim());
    GaussianSymbol r = *this;
    r.prefactor_ = std::move(p);
    return r;
  }

  /// Frobenius norm of M.
  double m_norm() const { return M().norm(); }

private:
  std::size_t dim_ = 0;
  NumPoly prefactor_;
  std::vector<cplx> upper_;
  Eigen::VectorXcd v_;
  cplx c_ = 0.0;
};

inline cplx eval(const GaussianSymbol& f, std::span<const cplx> x) { return f.eval(x); }

/// Degree-<=D Taylor polynomial of f about the origin.
inline NumPoly taylor_truncate(const GaussianSymbol& f, int D) {
  require(D >= 0, "taylor_truncate: D must be >= 0");
  const std::size_t d = f.dim();
  // q = x.Mx + v.x has no constant term, so q^k only contributes for k <= D.
  NumPoly q(d);
  for (std::size_t i = 0; i < d; ++i) {
    q.add_term(MultiIndex::unit(d, i), f.v()(i));
    for (std::size_t j = 0; j < d; ++j) q.add_term(MultiIndex::unit(d, i) + MultiIndex::unit(d, j), f.M(i, j));
  }
  NumPoly series = NumPoly::one(d);
  NumPoly power = NumPoly::one(d);
  for (int k = 1; k <= D; ++k) {
    power = (power * q).truncated(D).scaled(1.0 / k);
    if (power.is_zero()) break;
    series += power;
  }
  return (f.prefactor() * series).truncated(D).scaled(std::exp(f.c()));
}

} // namespace cstar
