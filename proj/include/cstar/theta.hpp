#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cstar/coeff.hpp"
#include "cstar/error.hpp"

namespace cstar {

/// Dense square matrix over a coefficient ring, row-major.
template <class C>
class SquareMatrix {
public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n) : n_(n), a_(n * n) {}

  std::size_t size() const { return n_; }
  const C& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  C& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }

  bool is_symmetric() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if (!((*this)(i, j) == (*this)(j, i))) return false;
    return true;
  }

  SquareMatrix transposed() const {
    SquareMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  template <class F>
  auto map(F&& f) const {
    using D = std::decay_t<decltype(f(std::declval<const C&>()))>;
    SquareMatrix<D> r(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) r(i, j) = f((*this)(i, j));
    return r;
  }

  friend SquareMatrix operator+(const SquareMatrix& x, const SquareMatrix& y) {
    if (x.n_ != y.n_) throw DimensionMismatch("SquareMatrix::+", x.n_, y.n_);
    SquareMatrix r(x.n_);
    for (std::size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = x.a_[k] + y.a_[k];
    return r;
  }
  friend SquareMatrix operator-(const SquareMatrix& x, const SquareMatrix& y) {
    if (x.n_ != y.n_) throw DimensionMismatch("SquareMatrix::-", x.n_, y.n_);
    SquareMatrix r(x.n_);
    for (std::size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = x.a_[k] - y.a_[k];
    return r;
  }
  friend SquareMatrix operator*(const SquareMatrix& x, const SquareMatrix& y) {
    if (x.n_ != y.n_) throw DimensionMismatch("SquareMatrix::*", x.n_, y.n_);
    SquareMatrix r(x.n_);
    for (std::size_t i = 0; i < x.n_; ++i)
      for (std::size_t j = 0; j < x.n_; ++j) {
        C acc{};
        for (std::size_t k = 0; k < x.n_; ++k) acc = acc + x(i, k) * y(k, j);
        r(i, j) = acc;
      }
    return r;
  }
  template <class S>
  SquareMatrix scaled(const S& s) const {
    SquareMatrix r(n_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * s;
    return r;
  }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

private:
  std::size_t n_ = 0;
  std::vector<C> a_;
};

using RatMatrix = SquareMatrix<GaussRat>;
using CoeffMatrix = SquareMatrix<Coeff>;

/// Symplectic matrix Omega = [[0, I], [-I, 0]] for variables
/// (p_1..p_n, q^1..q^n).
inline RatMatrix symplectic_omega(std::size_t n) {
  RatMatrix w(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    w(j, n + j) = GaussRat(1);
    w(n + j, j) = GaussRat(-1);
  }
  return w;
}

/// pi = Omega^{-1} = -Omega.
inline RatMatrix poisson_tensor(std::size_t n) {
  return symplectic_omega(n).map([](const GaussRat& g) { return -g; });
}

/// Converts between the x-side symmetric part Q and the symplectic-Fourier
/// side matrix Q~ = -Omega Q Omega. The map is its own inverse.
inline RatMatrix omega_conjugate(const RatMatrix& m) {
  const std::size_t n = m.size() / 2;
  const RatMatrix w = symplectic_omega(n);
  return (w * m * w).map([](const GaussRat& g) { return -g; });
}

enum class Ordering { Weyl, Standard, AntiStandard, Wick, AntiWick };

inline Ordering parse_ordering(const std::string& name) {
  if (name == "weyl" || name == "moyal") return Ordering::Weyl;
  if (name == "standard") return Ordering::Standard;
  if (name == "antistandard") return Ordering::AntiStandard;
  if (name == "wick") return Ordering::Wick;
  if (name == "antiwick") return Ordering::AntiWick;
  throw InvalidArgument("unknown ordering preset '" + name + "'");
}

inline std::string ordering_name(Ordering o) {
  switch (o) {
    case Ordering::Weyl: return "weyl";
    case Ordering::Standard: return "standard";
    case Ordering::AntiStandard: return "antistandard";
    case Ordering::Wick: return "wick";
    case Ordering::AntiWick: return "antiwick";
  }
  return "?";
}

/// Symmetric part Q of the preset orderings, obtained from the Q~ catalogue
/// of the operator orderings through Q = -Omega Q~ Omega.
inline RatMatrix ordering_q(Ordering o, std::size_t n, const mpq_class& sigma = 1) {
  if (n < 1) throw InvalidArgument("ordering_q: n must be >= 1");
  if (sgn(sigma) <= 0) throw InvalidArgument("ordering_q: sigma must be > 0");
  RatMatrix qt(2 * n);
  const GaussRat half(mpq_class(1, 2));
  switch (o) {
    case Ordering::Weyl: return RatMatrix(2 * n);
    case Ordering::Standard:
    case Ordering::AntiStandard: {
      const GaussRat s = o == Ordering::Standard ? half : -half;
      for (std::size_t j = 0; j < n; ++j) qt(j, n + j) = qt(n + j, j) = s;
      break;
    }
    case Ordering::Wick:
    case Ordering::AntiWick: {
      // Q~ = -(i/2) diag(sigma^-2 I, sigma^2 I); anti-Wick flips the sign.
      const mpq_class s2 = sigma * sigma;
      const mpq_class sign = o == Ordering::Wick ? -1 : 1;
      for (std::size_t j = 0; j < n; ++j) {
        qt(j, j) = GaussRat(0, sign / (2 * s2));
        qt(n + j, n + j) = GaussRat(0, sign * s2 / 2);
      }
      break;
    }
  }
  return omega_conjugate(qt);
}

/// The matrix theta of a general star product, hbar included.
///
/// Built from a symmetric Q it equals hbar (Q + pi/2); in raw mode it is any
/// matrix of hbar-graded coefficients and the antisymmetric-part contract is
/// not enforced.
class ThetaMatrix {
public:
  enum class Mode { FromQ, Raw };

  static ThetaMatrix from_q(const RatMatrix& Q) {
    if (Q.size() == 0 || Q.size() % 2 != 0)
      throw InvalidArgument("ThetaMatrix::from_q: dimension must be even and positive");
    if (!Q.is_symmetric()) throw InvalidArgument("ThetaMatrix::from_q: Q must be symmetric");
    const std::size_t n = Q.size() / 2;
    const RatMatrix pi = poisson_tensor(n);
    ThetaMatrix t;
    t.mode_ = Mode::FromQ;
    t.q_ = Q;
    t.entries_ = CoeffMatrix(2 * n);
    const GaussRat half(mpq_class(1, 2));
    for (std::size_t i = 0; i < 2 * n; ++i)
      for (std::size_t j = 0; j < 2 * n; ++j) t.entries_(i, j) = Coeff::hbar(1, Q(i, j) + pi(i, j) * half);
    return t;
  }

  static ThetaMatrix raw(CoeffMatrix entries) {
    if (entries.size() == 0) throw InvalidArgument("ThetaMatrix::raw: empty matrix");
    ThetaMatrix t;
    t.mode_ = Mode::Raw;
    t.entries_ = std::move(entries);
    return t;
  }

  static ThetaMatrix preset(Ordering o, std::size_t n, const mpq_class& sigma = 1) {
    ThetaMatrix t = from_q(ordering_q(o, n, sigma));
    t.preset_ = o;
    return t;
  }
  static ThetaMatrix preset(const std::string& name, std::size_t n, const mpq_class& sigma = 1) {
    return preset(parse_ordering(name), n, sigma);
  }

  Mode mode() const { return mode_; }
  std::size_t dim() const { return entries_.size(); }
  std::size_t n() const {
    if (dim() % 2 != 0) throw InvalidArgument("ThetaMatrix: odd dimension has no symplectic n");
    return dim() / 2;
  }
  const Coeff& operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }
  const CoeffMatrix& entries() const { return entries_; }
  std::optional<Ordering> preset_ordering() const { return preset_; }

  /// Q, available only for matrices built from a symmetric part.
  const RatMatrix& q() const {
    if (mode_ != Mode::FromQ) throw InvalidArgument("ThetaMatrix: raw matrix has no Q");
    return q_;
  }

  CoeffMatrix antisymmetric_part() const {
    const GaussRat half(mpq_class(1, 2));
    return (entries_ - entries_.transposed()).map([&](const Coeff& c) { return c * half; });
  }
  CoeffMatrix symmetric_part() const {
    const GaussRat half(mpq_class(1, 2));
    return (entries_ + entries_.transposed()).map([&](const Coeff& c) { return c * half; });
  }

  /// True when the antisymmetric part equals (hbar/2) pi exactly.
  bool has_symplectic_antisymmetric_part() const {
    if (dim() % 2 != 0) return false;
    const RatMatrix pi = poisson_tensor(n());
    const CoeffMatrix a = antisymmetric_part();
    const GaussRat half(mpq_class(1, 2));
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < dim(); ++j)
        if (!(a(i, j) == Coeff::hbar(1, pi(i, j) * half))) return false;
    return true;
  }

  Eigen::MatrixXcd numeric(double hbar_value) const {
    Eigen::MatrixXcd m(dim(), dim());
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < dim(); ++j) m(i, j) = entries_(i, j).evaluate(hbar_value);
    return m;
  }

private:
  Mode mode_ = Mode::Raw;
  CoeffMatrix entries_;
  RatMatrix q_;
  std::optional<Ordering> preset_;
};

} // namespace cstar
