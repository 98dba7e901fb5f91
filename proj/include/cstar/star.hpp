#pragma once

#include <vector>

#include "cstar/symbols.hpp"
#include "cstar/theta.hpp"

namespace cstar {

template <class C>
struct StarResultT {
  Polynomial<C> value;
  /// Number of series orders m that contributed a nonzero term.
  int term_count = 0;
};

using StarResult = StarResultT<Coeff>;

namespace detail {

/// f(x) g(x') as a polynomial in 2d variables.
template <class C>
Polynomial<C> tensor(const Polynomial<C>& f, const Polynomial<C>& g) {
  Polynomial<C> t(f.dim() + g.dim());
  for (const auto& [a, ca] : f.terms())
    for (const auto& [b, cb] : g.terms()) t.add_term(concat(a, b), ca * cb);
  return t;
}

/// Restriction of a 2d-variable polynomial to the diagonal x = x'.
template <class C>
Polynomial<C> diagonal(const Polynomial<C>& t) {
  const std::size_t d = t.dim() / 2;
  Polynomial<C> r(d);
  for (const auto& [k, c] : t.terms()) {
    MultiIndex m(d);
    for (std::size_t j = 0; j < d; ++j) m[j] = k[j] + k[d + j];
    r.add_term(m, c);
  }
  return r;
}

/// sum_{jk} A^{jk} d_{x^j} d_{x'^k} applied to a polynomial in (x, x').
template <class C>
Polynomial<C> bidifferential(const Polynomial<C>& t, const SquareMatrix<C>& A) {
  using Traits = CoeffTraits<C>;
  const std::size_t d = t.dim() / 2;
  Polynomial<C> r(t.dim());
  for (const auto& [k, c] : t.terms())
    for (std::size_t j = 0; j < d; ++j) {
      if (k[j] == 0) continue;
      for (std::size_t l = 0; l < d; ++l) {
        if (k[d + l] == 0 || Traits::is_zero(A(j, l))) continue;
        MultiIndex nk = k;
        --nk[j];
        --nk[d + l];
        r.add_term(nk, c * A(j, l) * Traits::from_int(static_cast<long>(k[j]) * k[d + l]));
      }
    }
  return r;
}

/// sum_{jk} S^{jk} d_j d_k applied to a polynomial in x.
template <class C>
Polynomial<C> second_order(const Polynomial<C>& f, const SquareMatrix<C>& S) {
  using Traits = CoeffTraits<C>;
  const std::size_t d = f.dim();
  Polynomial<C> r(d);
  for (const auto& [k, c] : f.terms())
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t l = 0; l < d; ++l) {
        if (Traits::is_zero(S(j, l))) continue;
        MultiIndex nk = k;
        long factor = 0;
        if (j == l) {
          if (k[j] < 2) continue;
          factor = static_cast<long>(k[j]) * (k[j] - 1);
          nk[j] -= 2;
        } else {
          if (k[j] == 0 || k[l] == 0) continue;
          factor = static_cast<long>(k[j]) * k[l];
          --nk[j];
          --nk[l];
        }
        r.add_term(nk, c * S(j, l) * Traits::from_int(factor));
      }
  return r;
}

} // namespace detail

/// f *_theta g = sum_m (i^m / m!) (theta^{jk} d_j (x) d'_k)^m (f (x) g) on x = x'.
///
/// For polynomial inputs the series terminates after min(deg f, deg g) orders,
/// so the result is exact.
template <class C>
StarResultT<C> star(const Polynomial<C>& f, const Polynomial<C>& g, const SquareMatrix<C>& theta) {
  using Traits = CoeffTraits<C>;
  if (f.dim() != g.dim()) throw DimensionMismatch("star", f.dim(), g.dim());
  if (theta.size() != f.dim()) throw DimensionMismatch("star: theta", f.dim(), theta.size());
  StarResultT<C> out{Polynomial<C>(f.dim()), 0};
  Polynomial<C> t = detail::tensor(f, g);
  for (long m = 0; !t.is_zero(); ++m) {
    if (m > 0) t = detail::bidifferential(t, theta).scaled(Traits::imag_unit() * Traits::inverse_int(m));
    Polynomial<C> term = detail::diagonal(t);
    if (!term.is_zero()) {
      out.value += term;
      ++out.term_count;
    }
  }
  return out;
}

inline StarResult star(const PolySymbol& f, const PolySymbol& g, const ThetaMatrix& theta) {
  return star(f, g, theta.entries());
}

/// {f, g} = pi^{jk} d_j f d_k g with x = (p_1..p_n, q^1..q^n).
inline PolySymbol poisson(const PolySymbol& f, const PolySymbol& g) {
  if (f.dim() != g.dim()) throw DimensionMismatch("poisson", f.dim(), g.dim());
  if (f.dim() % 2 != 0) throw InvalidArgument("poisson: dimension must be even");
  const std::size_t n = f.dim() / 2;
  PolySymbol r(f.dim());
  for (std::size_t j = 0; j < n; ++j) {
    // pi^{p_j q_j} = -1, pi^{q_j p_j} = +1
    r -= f.derive(j) * g.derive(n + j);
    r += f.derive(n + j) * g.derive(j);
  }
  return r;
}

/// hbar^1 coefficient of (f*g - g*f)/i minus the hbar^0 part of {f, g};
/// identically zero for every theta of the form hbar (Q + pi/2). Symbols that
/// carry their own hbar terms are compared at hbar = 0.
inline PolySymbol classical_limit_residual(const PolySymbol& f, const PolySymbol& g, const ThetaMatrix& theta) {
  if (theta.mode() != ThetaMatrix::Mode::FromQ)
    throw InvalidArgument("classical_limit_residual: theta must be built from a symmetric Q");
  const PolySymbol commutator = star(f, g, theta).value - star(g, f, theta).value;
  const PolySymbol first = hbar_part(commutator, 1).scaled(Coeff(GaussRat(0, -1)));
  return first - hbar_part(poisson(f, g), 0);
}

/// exp(S^{jk} d_j d_k) f, summed exactly (the series stops after deg f / 2
/// orders).
template <class C>
Polynomial<C> exp_quadratic_diff(const SquareMatrix<C>& S, const Polynomial<C>& f) {
  using Traits = CoeffTraits<C>;
  if (S.size() != f.dim()) throw DimensionMismatch("exp_quadratic_diff", f.dim(), S.size());
  if (!S.is_symmetric()) throw InvalidArgument("exp_quadratic_diff: S must be symmetric");
  Polynomial<C> out = f;
  Polynomial<C> t = f;
  for (long m = 1; !t.is_zero(); ++m) {
    t = detail::second_order(t, S).scaled(Traits::inverse_int(m));
    out += t;
  }
  return out;
}

} // namespace cstar
