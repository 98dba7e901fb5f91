#pragma once

#include <cstdint>
#include <random>

#include "cstar/symbols.hpp"
#include "cstar/theta.hpp"

namespace cstar {

/// Seeded generator of random exact symbols and symmetric matrices.
class SymbolSampler {
public:
  explicit SymbolSampler(std::uint64_t seed) : gen_(seed) {}

  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }

  mpq_class rational(int range) {
    mpq_class q(uniform_int(-range, range), uniform_int(1, range));
    q.canonicalize();
    return q;
  }
  GaussRat gauss_rational(int range, bool complex) {
    return complex ? GaussRat(rational(range), rational(range)) : GaussRat(rational(range));
  }

  MultiIndex exponent(std::size_t d, int max_degree) {
    MultiIndex m(d);
    const int total = uniform_int(0, max_degree);
    for (int t = 0; t < total; ++t) ++m[static_cast<std::size_t>(uniform_int(0, static_cast<int>(d) - 1))];
    return m;
  }

  /// Up to max_terms monomials of degree <= max_degree with complex rational
  /// coefficients, some carrying an hbar^1 part.
  PolySymbol poly(std::size_t d, int max_degree, int max_terms = 4, bool with_hbar = true) {
    PolySymbol f(d);
    const int terms = uniform_int(1, max_terms);
    for (int t = 0; t < terms; ++t) {
      Coeff c(gauss_rational(5, true));
      if (with_hbar && uniform_int(0, 2) == 0) c += Coeff::hbar(1, gauss_rational(3, false));
      f.add_term(exponent(d, max_degree), c);
    }
    return f;
  }

  RatMatrix symmetric_q(std::size_t d, bool complex = true) {
    RatMatrix q(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) q(i, j) = q(j, i) = gauss_rational(4, complex);
    return q;
  }

  std::mt19937_64& engine() { return gen_; }

private:
  std::mt19937_64 gen_;
};

} // namespace cstar
