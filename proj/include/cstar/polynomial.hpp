#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "cstar/coeff.hpp"
#include "cstar/error.hpp"

namespace cstar {

/// Exponent vector kappa = (kappa_1, ..., kappa_d) with non-negative entries.
class MultiIndex {
public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t d) : e_(d, 0) {}
  MultiIndex(std::initializer_list<int> e) : e_(e) { check(); }
  explicit MultiIndex(std::vector<int> e) : e_(std::move(e)) { check(); }

  static MultiIndex unit(std::size_t d, std::size_t j, int k = 1) {
    MultiIndex m(d);
    m.e_.at(j) = k;
    return m;
  }

  std::size_t size() const { return e_.size(); }
  int operator[](std::size_t j) const { return e_[j]; }
  int& operator[](std::size_t j) { return e_[j]; }
  const std::vector<int>& values() const { return e_; }

  /// |kappa| = sum of entries.
  int order() const { return std::accumulate(e_.begin(), e_.end(), 0); }

  /// Componentwise kappa <= other.
  bool divides(const MultiIndex& other) const {
    for (std::size_t j = 0; j < e_.size(); ++j)
      if (e_[j] > other.e_[j]) return false;
    return true;
  }

  friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
    if (a.size() != b.size()) throw DimensionMismatch("MultiIndex::+", a.size(), b.size());
    MultiIndex r = a;
    for (std::size_t j = 0; j < a.size(); ++j) r.e_[j] += b.e_[j];
    return r;
  }

  /// Concatenation (x, x') -> exponent of the tensor product.
  friend MultiIndex concat(const MultiIndex& a, const MultiIndex& b) {
    std::vector<int> e = a.e_;
    e.insert(e.end(), b.e_.begin(), b.e_.end());
    return MultiIndex(std::move(e));
  }

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

private:
  void check() const {
    for (int v : e_)
      if (v < 0) throw InvalidArgument("MultiIndex: negative exponent");
  }

  std::vector<int> e_;
};

/// Sparse multivariate polynomial sum_kappa c_kappa x^kappa.
///
/// Zero coefficients are never stored. `C` is either the exact `Coeff`
/// (hbar-graded Gaussian rationals) or `cplx` for floating work.
template <class C>
class Polynomial {
public:
  using coeff_type = C;
  using Traits = CoeffTraits<C>;
  using Terms = std::map<MultiIndex, C>;

  Polynomial() = default;
  explicit Polynomial(std::size_t dim) : dim_(dim) {}

  static Polynomial constant(std::size_t dim, const C& c) {
    Polynomial p(dim);
    p.add_term(MultiIndex(dim), c);
    return p;
  }
  static Polynomial one(std::size_t dim) { return constant(dim, Traits::from_int(1)); }

  /// The coordinate function x_j.
  static Polynomial variable(std::size_t dim, std::size_t j) {
    Polynomial p(dim);
    p.add_term(MultiIndex::unit(dim, j), Traits::from_int(1));
    return p;
  }

  static Polynomial monomial(const MultiIndex& k, const C& c) {
    Polynomial p(k.size());
    p.add_term(k, c);
    return p;
  }

  std::size_t dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Maximal |kappa| over stored terms; -1 for the zero polynomial.
  int degree() const {
    int d = -1;
    for (const auto& [k, c] : terms_) d = std::max(d, k.order());
    return d;
  }

  C coefficient(const MultiIndex& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? C{} : it->second;
  }

  void add_term(const MultiIndex& k, const C& c) {
    if (k.size() != dim_) throw DimensionMismatch("Polynomial::add_term", dim_, k.size());
    if (Traits::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (Traits::is_zero(it->second)) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_dim(o, "Polynomial::+");
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_dim(o, "Polynomial::-");
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(const Polynomial& a) { return a.scaled(Traits::from_int(-1)); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_dim(b, "Polynomial::*");
    Polynomial r(a.dim_);
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) r.add_term(ka + kb, ca * cb);
    return r;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial scaled(const C& s) const {
    Polynomial r(dim_);
    for (const auto& [k, c] : terms_) r.add_term(k, c * s);
    return r;
  }

  /// Exact partial derivative d^kappa.
  Polynomial derive(const MultiIndex& kappa) const {
    if (kappa.size() != dim_) throw DimensionMismatch("derive", dim_, kappa.size());
    Polynomial r(dim_);
    for (const auto& [k, c] : terms_) {
      if (!kappa.divides(k)) continue;
      MultiIndex nk = k;
      long factor = 1;
      for (std::size_t j = 0; j < dim_; ++j) {
        for (int t = 0; t < kappa[j]; ++t) factor *= (k[j] - t);
        nk[j] = k[j] - kappa[j];
      }
      r.add_term(nk, c * Traits::from_int(factor));
    }
    return r;
  }

  Polynomial derive(std::size_t j) const { return derive(MultiIndex::unit(dim_, j)); }

  /// Keeps the terms with |kappa| <= max_degree.
  Polynomial truncated(int max_degree) const {
    Polynomial r(dim_);
    for (const auto& [k, c] : terms_)
      if (k.order() <= max_degree) r.terms_.emplace(k, c);
    return r;
  }

  template <class F>
  auto map_coefficients(F&& f) const {
    using D = std::decay_t<decltype(f(std::declval<const C&>()))>;
    Polynomial<D> r(dim_);
    for (const auto& [k, c] : terms_) r.add_term(k, f(c));
    return r;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

private:
  void check_dim(const Polynomial& o, const char* where) const {
    if (o.dim_ != dim_) throw DimensionMismatch(where, dim_, o.dim_);
  }

  std::size_t dim_ = 0;
  Terms terms_;
};

/// Evaluates sum_kappa c_kappa x^kappa, with coefficient values supplied by
/// `value(c)`. Powers of each coordinate are tabulated once per call.
template <class C, class ValueFn>
cplx evaluate_with(const Polynomial<C>& f, std::span<const cplx> x, ValueFn&& value) {
  if (x.size() != f.dim()) throw DimensionMismatch("eval", f.dim(), x.size());
  const int deg = std::max(f.degree(), 0);
  std::vector<std::vector<cplx>> pw(f.dim(), std::vector<cplx>(deg + 1, 1.0));
  for (std::size_t j = 0; j < f.dim(); ++j)
    for (int k = 1; k <= deg; ++k) pw[j][k] = pw[j][k - 1] * x[j];
  cplx acc = 0.0;
  for (const auto& [k, c] : f.terms()) {
    cplx m = value(c);
    for (std::size_t j = 0; j < f.dim(); ++j) m *= pw[j][k[j]];
    acc += m;
  }
  return acc;
}

} // namespace cstar
