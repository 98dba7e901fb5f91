#pragma once

#include <complex>
#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "cstar/error.hpp"

namespace cstar {

using cplx = std::complex<double>;

/// Exact complex number with rational real and imaginary parts.
struct GaussRat {
  mpq_class re{0};
  mpq_class im{0};

  GaussRat() = default;
  GaussRat(long r) : re(r) {}
  GaussRat(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }

  static GaussRat i() { return {0, 1}; }

  /// Parses "p", "p/q" (optionally signed). Throws ParseError.
  static mpq_class parse_rational(const std::string& s) {
    mpq_class q;
    if (s.empty() || q.set_str(s, 10) != 0)
      throw ParseError("not a rational number: '" + s + "'");
    if (q.get_den() == 0) throw ParseError("zero denominator: '" + s + "'");
    q.canonicalize();
    return q;
  }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  GaussRat conj() const { return {re, -im}; }
  cplx to_complex() const { return {re.get_d(), im.get_d()}; }

  friend GaussRat operator+(const GaussRat& a, const GaussRat& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussRat operator-(const GaussRat& a, const GaussRat& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussRat operator-(const GaussRat& a) { return {-a.re, -a.im}; }
  friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussRat operator/(const GaussRat& a, const GaussRat& b) {
    mpq_class n = b.re * b.re + b.im * b.im;
    if (sgn(n) == 0) throw InvalidArgument("GaussRat: division by zero");
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  GaussRat& operator+=(const GaussRat& b) { return *this = *this + b; }
  GaussRat& operator*=(const GaussRat& b) { return *this = *this * b; }
  friend bool operator==(const GaussRat& a, const GaussRat& b) {
    return a.re == b.re && a.im == b.im;
  }

  friend std::ostream& operator<<(std::ostream& os, const GaussRat& g) {
    if (sgn(g.im) == 0) return os << g.re.get_str();
    if (sgn(g.re) == 0) {
      if (g.im == 1) return os << "i";
      if (g.im == -1) return os << "-i";
      return os << g.im.get_str() << "i";
    }
    return os << "(" << g.re.get_str() << (sgn(g.im) > 0 ? "+" : "")
              << g.im.get_str() << "i)";
  }
};

/// Polynomial in the formal parameter hbar with GaussRat coefficients.
/// Index k of `powers()` holds the coefficient of hbar^k; trailing zeros are
/// never stored, so the zero coefficient is the empty vector.
class Coeff {
public:
  Coeff() = default;
  Coeff(long v) : Coeff(GaussRat(v)) {}
  Coeff(const GaussRat& g) {
    if (!g.is_zero()) p_.push_back(g);
  }

  /// g * hbar^k
  static Coeff hbar(std::size_t k, const GaussRat& g = GaussRat(1)) {
    Coeff c;
    if (g.is_zero()) return c;
    c.p_.assign(k + 1, GaussRat());
    c.p_[k] = g;
    return c;
  }

  static Coeff from_powers(std::vector<GaussRat> p) {
    Coeff c;
    c.p_ = std::move(p);
    c.trim();
    return c;
  }

  bool is_zero() const { return p_.empty(); }
  const std::vector<GaussRat>& powers() const { return p_; }
  /// Highest hbar power present; -1 for zero.
  int hbar_degree() const { return static_cast<int>(p_.size()) - 1; }

  GaussRat at(std::size_t k) const { return k < p_.size() ? p_[k] : GaussRat(); }

  /// Lowest hbar power with a nonzero coefficient; -1 for zero.
  int hbar_valuation() const {
    for (std::size_t k = 0; k < p_.size(); ++k)
      if (!p_[k].is_zero()) return static_cast<int>(k);
    return -1;
  }

  cplx evaluate(double hbar_value) const {
    cplx acc = 0.0;
    for (auto it = p_.rbegin(); it != p_.rend(); ++it) acc = acc * hbar_value + it->to_complex();
    return acc;
  }

  Coeff conj() const {
    Coeff c;
    for (const auto& g : p_) c.p_.push_back(g.conj());
    return c;
  }

  friend Coeff operator+(const Coeff& a, const Coeff& b) {
    Coeff c;
    c.p_.resize(std::max(a.p_.size(), b.p_.size()));
    for (std::size_t k = 0; k < c.p_.size(); ++k) c.p_[k] = a.at(k) + b.at(k);
    c.trim();
    return c;
  }
  friend Coeff operator-(const Coeff& a) {
    Coeff c;
    for (const auto& g : a.p_) c.p_.push_back(-g);
    return c;
  }
  friend Coeff operator-(const Coeff& a, const Coeff& b) { return a + (-b); }
  friend Coeff operator*(const Coeff& a, const Coeff& b) {
    Coeff c;
    if (a.is_zero() || b.is_zero()) return c;
    c.p_.assign(a.p_.size() + b.p_.size() - 1, GaussRat());
    for (std::size_t i = 0; i < a.p_.size(); ++i) {
      if (a.p_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.p_.size(); ++j) c.p_[i + j] += a.p_[i] * b.p_[j];
    }
    c.trim();
    return c;
  }
  friend Coeff operator*(const Coeff& a, const GaussRat& g) {
    Coeff c;
    if (g.is_zero()) return c;
    for (const auto& x : a.p_) c.p_.push_back(x * g);
    c.trim();
    return c;
  }
  Coeff& operator+=(const Coeff& b) { return *this = *this + b; }
  Coeff& operator-=(const Coeff& b) { return *this = *this - b; }
  Coeff& operator*=(const Coeff& b) { return *this = *this * b; }

  friend bool operator==(const Coeff& a, const Coeff& b) {
    if (a.p_.size() != b.p_.size()) return false;
    for (std::size_t k = 0; k < a.p_.size(); ++k)
      if (!(a.p_[k] == b.p_[k])) return false;
    return true;
  }

  friend std::ostream& operator<<(std::ostream& os, const Coeff& c) {
    if (c.is_zero()) return os << "0";
    bool first = true;
    for (std::size_t k = 0; k < c.p_.size(); ++k) {
      if (c.p_[k].is_zero()) continue;
      if (!first) os << " + ";
      first = false;
      os << c.p_[k];
      if (k == 1) os << "*hbar";
      if (k > 1) os << "*hbar^" << k;
    }
    return os;
  }

private:
  void trim() {
    while (!p_.empty() && p_.back().is_zero()) p_.pop_back();
  }

  std::vector<GaussRat> p_;
};

/// Coefficient-type hooks used by the generic polynomial code.
template <class C>
struct CoeffTraits;

template <>
struct CoeffTraits<Coeff> {
  static bool is_zero(const Coeff& c) { return c.is_zero(); }
  static Coeff from_int(long v) { return Coeff(v); }
  static Coeff inverse_int(long v) { return Coeff(GaussRat(mpq_class(1, v))); }
  static Coeff imag_unit() { return Coeff(GaussRat::i()); }
};

template <>
struct CoeffTraits<cplx> {
  static bool is_zero(const cplx& c) { return c == cplx(0.0, 0.0); }
  static cplx from_int(long v) { return cplx(static_cast<double>(v), 0.0); }
  static cplx inverse_int(long v) { return cplx(1.0 / static_cast<double>(v), 0.0); }
  static cplx imag_unit() { return cplx(0.0, 1.0); }
};

} // namespace cstar
