#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "cstar/coeff.hpp"
#include "cstar/error.hpp"

namespace cstar {

/// psi(q) = P(q) exp(-sigma^2 q^2 / (2 hbar)) with P(q) = sum_k c_k q^k.
class HermiteState {
public:
  HermiteState(std::vector<cplx> coeffs, double hbar, double sigma = 1.0)
      : c_(std::move(coeffs)), hbar_(hbar), sigma_(sigma) {
    require(hbar > 0 && std::isfinite(hbar), "HermiteState: hbar must be > 0");
    require(sigma > 0 && std::isfinite(sigma), "HermiteState: sigma must be > 0");
    trim();
  }

  /// Normalized ground state (sigma^2 / (pi hbar))^{1/4} exp(-sigma^2 q^2 / (2 hbar)).
  static HermiteState ground(double hbar, double sigma = 1.0) {
    return HermiteState({std::pow(sigma * sigma / (std::numbers::pi * hbar), 0.25)}, hbar, sigma);
  }

  /// Normalized number state (a^dag)^k |0> / sqrt(hbar^k k!).
  static HermiteState number_state(int k, double hbar, double sigma = 1.0) {
    require(k >= 0, "HermiteState::number_state: k must be >= 0");
    HermiteState s = ground(hbar, sigma);
    for (int j = 1; j <= k; ++j) s = s.create().scaled(1.0 / std::sqrt(hbar * j));
    return s;
  }

  const std::vector<cplx>& coeffs() const { return c_; }
  double hbar() const { return hbar_; }
  double sigma() const { return sigma_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }

  /// Exponent rate alpha in exp(-alpha q^2).
  double alpha() const { return sigma_ * sigma_ / (2.0 * hbar_); }

  cplx polynomial(double q) const {
    cplx r = 0.0;
    for (std::size_t k = c_.size(); k-- > 0;) r = r * q + c_[k];
    return r;
  }
  cplx eval(double q) const { return polynomial(q) * std::exp(-alpha() * q * q); }

  HermiteState mul_q() const {
    std::vector<cplx> r(c_.size() + 1, 0.0);
    for (std::size_t k = 0; k < c_.size(); ++k) r[k + 1] = c_[k];
    return with(std::move(r));
  }

  /// d/dq (P e^{-alpha q^2}) = (P' - 2 alpha q P) e^{-alpha q^2}.
  HermiteState derive() const {
    std::vector<cplx> r(c_.size() + 1, 0.0);
    for (std::size_t k = 1; k < c_.size(); ++k) r[k - 1] += static_cast<double>(k) * c_[k];
    for (std::size_t k = 0; k < c_.size(); ++k) r[k + 1] -= 2.0 * alpha() * c_[k];
    return with(std::move(r));
  }

  /// a^dag = (sigma q - (hbar / sigma) d/dq) / sqrt 2
  HermiteState create() const {
    return (mul_q().scaled(sigma_) - derive().scaled(hbar_ / sigma_)).scaled(1.0 / std::sqrt(2.0));
  }
  /// a = (sigma q + (hbar / sigma) d/dq) / sqrt 2
  HermiteState annihilate() const {
    return (mul_q().scaled(sigma_) + derive().scaled(hbar_ / sigma_)).scaled(1.0 / std::sqrt(2.0));
  }

  HermiteState scaled(cplx s) const {
    std::vector<cplx> r = c_;
    for (auto& v : r) v *= s;
    return with(std::move(r));
  }

  HermiteState& operator+=(const HermiteState& o) {
    check_params(o);
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  HermiteState& operator-=(const HermiteState& o) { return *this += o.scaled(-1.0); }
  friend HermiteState operator+(HermiteState a, const HermiteState& b) { return a += b; }
  friend HermiteState operator-(HermiteState a, const HermiteState& b) { return a -= b; }

  /// <this, o> = int conj(this) o dq, exact Gaussian moments.
  cplx inner(const HermiteState& o) const {
    check_params(o);
    const double beta = 2.0 * alpha();
    // m_n = int q^n e^{-beta q^2} dq
    const std::size_t top = c_.size() + o.c_.size();
    std::vector<double> m(top + 1, 0.0);
    m[0] = std::sqrt(std::numbers::pi / beta);
    for (std::size_t n = 2; n <= top; n += 2) m[n] = m[n - 2] * static_cast<double>(n - 1) / (2.0 * beta);
    cplx s = 0.0;
    for (std::size_t j = 0; j < c_.size(); ++j)
      for (std::size_t k = 0; k < o.c_.size(); ++k)
        if ((j + k) % 2 == 0) s += std::conj(c_[j]) * o.c_[k] * m[j + k];
    return s;
  }
  double norm() const { return std::sqrt(std::max(0.0, inner(*this).real())); }

  /// <k|psi> for k < N.
  std::vector<cplx> fock_expansion(int N) const {
    require(N >= 1, "fock_expansion: N must be >= 1");
    std::vector<cplx> out(static_cast<std::size_t>(N));
    HermiteState basis = ground(hbar_, sigma_);
    for (int k = 0; k < N; ++k) {
      if (k > 0) basis = basis.create().scaled(1.0 / std::sqrt(hbar_ * k));
      out[static_cast<std::size_t>(k)] = basis.inner(*this);
    }
    return out;
  }

  bool same_params(const HermiteState& o) const { return hbar_ == o.hbar_ && sigma_ == o.sigma_; }

private:
  HermiteState with(std::vector<cplx> c) const { return HermiteState(std::move(c), hbar_, sigma_); }
  void trim() {
    while (!c_.empty() && c_.back() == cplx(0.0)) c_.pop_back();
  }
  void check_params(const HermiteState& o) const {
    if (!same_params(o)) throw InvalidArgument("HermiteState: hbar/sigma mismatch");
  }

  std::vector<cplx> c_;
  double hbar_;
  double sigma_;
};

} // namespace cstar
