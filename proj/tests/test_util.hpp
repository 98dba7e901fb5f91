#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cstar/star.hpp"

namespace cstar::testing {

inline GaussRat rat(long num, long den = 1) { return GaussRat(mpq_class(num, den)); }
inline GaussRat irat(long num, long den = 1) { return GaussRat(0, mpq_class(num, den)); }

inline PolySymbol var(std::size_t d, std::size_t j) { return PolySymbol::variable(d, j); }
inline PolySymbol cst(std::size_t d, const Coeff& c) { return PolySymbol::constant(d, c); }

/// (p, q) in the fixed phase-space order for n = 1.
inline PolySymbol p1() { return var(2, 0); }
inline PolySymbol q1() { return var(2, 1); }

inline PolySymbol pow(const PolySymbol& f, int k) {
  PolySymbol r = PolySymbol::one(f.dim());
  for (int i = 0; i < k; ++i) r *= f;
  return r;
}

class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }

  GaussRat small_rat(int range = 5, bool complex = false) {
    auto one = [&] { return mpq_class(uniform_int(-range, range), uniform_int(1, range)); };
    return complex ? GaussRat(one(), one()) : GaussRat(one());
  }

  MultiIndex exponent(std::size_t d, int max_degree) {
    MultiIndex m(d);
    const int total = uniform_int(0, max_degree);
    for (int t = 0; t < total; ++t) ++m[static_cast<std::size_t>(uniform_int(0, static_cast<int>(d) - 1))];
    return m;
  }

  /// Sparse random symbol with Gaussian-rational coefficients, optionally
  /// carrying hbar^1 parts.
  PolySymbol poly(std::size_t d, int max_degree, int max_terms = 4, bool with_hbar = true) {
    PolySymbol f(d);
    const int terms = uniform_int(1, max_terms);
    for (int t = 0; t < terms; ++t) {
      Coeff c = Coeff(small_rat(5, true));
      if (with_hbar && uniform_int(0, 2) == 0) c += Coeff::hbar(1, small_rat(3));
      f.add_term(exponent(d, max_degree), c);
    }
    return f;
  }

  RatMatrix symmetric_q(std::size_t d, bool complex = true) {
    RatMatrix q(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) q(i, j) = q(j, i) = small_rat(4, complex);
    return q;
  }

  CoeffMatrix raw_theta(std::size_t d) {
    CoeffMatrix m(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) m(i, j) = Coeff(small_rat(4));
    return m;
  }

  std::mt19937_64& engine() { return gen_; }

private:
  std::mt19937_64 gen_;
};

} // namespace cstar::testing
