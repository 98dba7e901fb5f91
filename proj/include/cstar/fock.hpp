#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "cstar/coeff.hpp"
#include "cstar/error.hpp"

namespace cstar {

/// N x N truncation of an operator on span{|0>, .., |N-1>}.
///
/// For banded operators (polynomials in the ladder operators) `band` is the
/// half-width and entries with both indices below N - band are exact matrix
/// elements of the untruncated operator. Dense operators (band = N - 1) carry
/// an explicit protected size instead.
class FockOperator {
public:
  FockOperator() = default;
  FockOperator(Eigen::MatrixXcd m, int band, double hbar, double sigma)
      : m_(std::move(m)), band_(band), protected_(static_cast<int>(m_.rows()) - band), hbar_(hbar), sigma_(sigma) {
    check();
  }
  FockOperator(Eigen::MatrixXcd m, int band, int protected_size, double hbar, double sigma)
      : m_(std::move(m)), band_(band), protected_(protected_size), hbar_(hbar), sigma_(sigma) {
    check();
  }

  static FockOperator identity(int N, double hbar, double sigma = 1.0) {
    return FockOperator(Eigen::MatrixXcd::Identity(N, N), 0, hbar, sigma);
  }
  static FockOperator zero(int N, double hbar, double sigma = 1.0) {
    return FockOperator(Eigen::MatrixXcd::Zero(N, N), 0, hbar, sigma);
  }

  int N() const { return static_cast<int>(m_.rows()); }
  int band() const { return band_; }
  /// Indices below this bound are exact (or, for dense operators, trusted).
  int protected_size() const { return std::max(0, protected_); }
  double hbar() const { return hbar_; }
  double sigma() const { return sigma_; }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  cplx operator()(int j, int k) const { return m_(j, k); }

  Eigen::MatrixXcd protected_block() const {
    const int p = protected_size();
    return m_.topLeftCorner(p, p);
  }

  friend FockOperator operator*(const FockOperator& a, const FockOperator& b) {
    a.check_compatible(b);
    const int band = std::min(a.N() - 1, a.band_ + b.band_);
    const int prot = std::min(a.protected_ - b.band_, b.protected_ - a.band_);
    return FockOperator(a.m_ * b.m_, band, std::min(prot, a.N() - band), a.hbar_, a.sigma_);
  }
  friend FockOperator operator+(const FockOperator& a, const FockOperator& b) {
    a.check_compatible(b);
    return FockOperator(a.m_ + b.m_, std::max(a.band_, b.band_), std::min(a.protected_, b.protected_), a.hbar_,
                        a.sigma_);
  }
  friend FockOperator operator-(const FockOperator& a, const FockOperator& b) { return a + b.scaled(-1.0); }
  FockOperator scaled(cplx s) const { return FockOperator(m_ * s, band_, protected_, hbar_, sigma_); }

  FockOperator pow(int k) const {
    require(k >= 0, "FockOperator::pow: negative exponent");
    FockOperator r = identity(N(), hbar_, sigma_);
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  FockOperator adjoint() const { return FockOperator(m_.adjoint(), band_, protected_, hbar_, sigma_); }

private:
  void check() const {
    if (m_.rows() != m_.cols()) throw InvalidArgument("FockOperator: matrix must be square");
    require(band_ >= 0, "FockOperator: band must be >= 0");
    require(hbar_ > 0 && sigma_ > 0, "FockOperator: hbar and sigma must be > 0");
  }
  void check_compatible(const FockOperator& o) const {
    if (N() != o.N()) throw DimensionMismatch("FockOperator", static_cast<std::size_t>(N()),
                                              static_cast<std::size_t>(o.N()));
    if (hbar_ != o.hbar_ || sigma_ != o.sigma_) throw InvalidArgument("FockOperator: hbar/sigma mismatch");
  }

  Eigen::MatrixXcd m_;
  int band_ = 0;
  int protected_ = 0;
  double hbar_ = 1.0;
  double sigma_ = 1.0;
};

/// max |a - b| over the common protected block.
inline double protected_residual(const FockOperator& a, const FockOperator& b, int block = -1) {
  if (block < 0) block = std::min(a.protected_size(), b.protected_size());
  if (block == 0) return 0.0;
  return (a.matrix().topLeftCorner(block, block) - b.matrix().topLeftCorner(block, block)).cwiseAbs().maxCoeff();
}

struct Ladder {
  FockOperator a, adag, q, p;
};

/// a|k> = sqrt(hbar k)|k-1>, q = (a + a^dag)/(sqrt2 sigma),
/// p = sigma (a - a^dag)/(i sqrt2).
inline Ladder fock_ladder(int N, double hbar, double sigma = 1.0) {
  require(N >= 2, "fock_ladder: N must be >= 2");
  require(hbar > 0 && sigma > 0, "fock_ladder: hbar and sigma must be > 0");
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(N, N);
  for (int k = 1; k < N; ++k) a(k - 1, k) = std::sqrt(hbar * k);
  const Eigen::MatrixXcd ad = a.adjoint();
  const double r2 = std::sqrt(2.0);
  const Eigen::MatrixXcd q = (a + ad) / (r2 * sigma);
  const Eigen::MatrixXcd p = (a - ad) * (sigma / (cplx(0.0, 1.0) * r2));
  // every entry of a truncated ladder matrix is exact
  return {FockOperator(a, 1, N, hbar, sigma), FockOperator(ad, 1, N, hbar, sigma), FockOperator(q, 1, N, hbar, sigma),
          FockOperator(p, 1, N, hbar, sigma)};
}

/// exp((i/hbar)(p Q - q P)) of the truncated generator. Dense; the protected
/// block defaults to indices below N - N/4 where truncation error is small
/// for |x| <= 1 (not exact).
inline FockOperator displacement(double p, double q, double hbar, int N, double sigma = 1.0, int block = -1) {
  require(N >= 4, "displacement: N must be >= 4");
  const Ladder L = fock_ladder(N, hbar, sigma);
  const Eigen::MatrixXcd gen = (cplx(0.0, 1.0) / hbar) * (p * L.q.matrix() - q * L.p.matrix());
  Eigen::MatrixXcd T = gen.exp();
  if (block < 0) block = N - N / 4;
  return FockOperator(std::move(T), N - 1, std::min(block, N), hbar, sigma);
}

/// omega(x, x') = p q' - q p' for x = (p, q).
inline double symplectic_form(double p, double q, double p2, double q2) { return p * q2 - q * p2; }

struct ProjectiveResult {
  double residual = 0.0;
  /// exp((i / 2 hbar) omega(x, x'))
  cplx phase;
};

/// max over the protected block of |T_x T_x' - e^{(i/2hbar) omega(x,x')} T_{x+x'}|.
inline ProjectiveResult verify_projective(double p1, double q1, double p2, double q2, double hbar, int N,
                                          double sigma = 1.0, int block = -1) {
  const FockOperator A = displacement(p1, q1, hbar, N, sigma, block);
  const FockOperator B = displacement(p2, q2, hbar, N, sigma, block);
  const FockOperator C = displacement(p1 + p2, q1 + q2, hbar, N, sigma, block);
  const cplx phase = std::polar(1.0, symplectic_form(p1, q1, p2, q2) / (2.0 * hbar));
  const int b = A.protected_size();
  const Eigen::MatrixXcd lhs = A.matrix() * B.matrix();
  const Eigen::MatrixXcd diff = lhs.topLeftCorner(b, b) - phase * C.matrix().topLeftCorner(b, b);
  return {b == 0 ? 0.0 : diff.cwiseAbs().maxCoeff(), phase};
}

} // namespace cstar
