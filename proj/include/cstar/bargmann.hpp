#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "cstar/hermite.hpp"
#include "cstar/quantize.hpp"

namespace cstar {

/// phi(zbar) = sum_k c_k zbar^k in the Fock-Bargmann space with parameter hbar.
class BargmannPoly {
public:
  BargmannPoly(std::vector<cplx> coeffs, double hbar) : c_(std::move(coeffs)), hbar_(hbar) {
    require(hbar > 0 && std::isfinite(hbar), "BargmannPoly: hbar must be > 0");
    while (!c_.empty() && c_.back() == cplx(0.0)) c_.pop_back();
  }

  static BargmannPoly monomial(int k, double hbar, cplx c = 1.0) {
    std::vector<cplx> v(static_cast<std::size_t>(k) + 1, 0.0);
    v.back() = c;
    return BargmannPoly(std::move(v), hbar);
  }

  const std::vector<cplx>& coeffs() const { return c_; }
  cplx coeff(std::size_t k) const { return k < c_.size() ? c_[k] : cplx(0.0); }
  double hbar() const { return hbar_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }

  cplx eval(cplx zbar) const {
    cplx r = 0.0;
    for (std::size_t k = c_.size(); k-- > 0;) r = r * zbar + c_[k];
    return r;
  }

  BargmannPoly mul_zbar() const {
    std::vector<cplx> r(c_.size() + 1, 0.0);
    for (std::size_t k = 0; k < c_.size(); ++k) r[k + 1] = c_[k];
    return BargmannPoly(std::move(r), hbar_);
  }
  /// hbar d/dzbar
  BargmannPoly lower() const {
    std::vector<cplx> r;
    for (std::size_t k = 1; k < c_.size(); ++k) r.push_back(hbar_ * static_cast<double>(k) * c_[k]);
    return BargmannPoly(std::move(r), hbar_);
  }
  BargmannPoly scaled(cplx s) const {
    std::vector<cplx> r = c_;
    for (auto& v : r) v *= s;
    return BargmannPoly(std::move(r), hbar_);
  }
  BargmannPoly& operator+=(const BargmannPoly& o) {
    if (o.hbar_ != hbar_) throw InvalidArgument("BargmannPoly: hbar mismatch");
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    while (!c_.empty() && c_.back() == cplx(0.0)) c_.pop_back();
    return *this;
  }
  friend BargmannPoly operator+(BargmannPoly a, const BargmannPoly& b) { return a += b; }
  friend BargmannPoly operator-(BargmannPoly a, const BargmannPoly& b) { return a += b.scaled(-1.0); }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& c : c_) m = std::max(m, std::abs(c));
    return m;
  }

private:
  std::vector<cplx> c_;
  double hbar_;
};

/// <phi, psi> = sum_k conj(phi_k) psi_k hbar^k k!.
inline cplx fb_inner(const BargmannPoly& phi, const BargmannPoly& psi) {
  if (phi.hbar() != psi.hbar()) throw InvalidArgument("fb_inner: hbar mismatch");
  cplx s = 0.0;
  double w = 1.0;
  const std::size_t n = std::min(phi.coeffs().size(), psi.coeffs().size());
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) w *= phi.hbar() * static_cast<double>(k);
    s += std::conj(phi.coeffs()[k]) * psi.coeffs()[k] * w;
  }
  return s;
}

/// Gauss-Hermite nodes and weights for weight exp(-t^2) (Golub-Welsch).
struct GaussHermite {
  std::vector<double> nodes, weights;
  explicit GaussHermite(int order) {
    require(order >= 1, "GaussHermite: order must be >= 1");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) J(k - 1, k) = J(k, k - 1) = std::sqrt(k / 2.0);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    for (int i = 0; i < order; ++i) {
      nodes.push_back(es.eigenvalues()(i));
      const double v = es.eigenvectors()(0, i);
      weights.push_back(std::sqrt(std::numbers::pi) * v * v);
    }
  }
};

struct BargmannResult {
  BargmannPoly value{{}, 1.0};
  /// Argument of B(ground state) before normalization (0 for this kernel).
  double global_phase = 0.0;
  /// max relative misfit of the fitted polynomial at off-collocation points.
  double collocation_residual = 0.0;
  int quadrature_order = 0;
};

namespace detail {

/// (B psi)(zbar) by quadrature, sigma-scaled kernel:
/// sqrt(sigma) (pi hbar)^{-1/4} e^{zbar^2/2hbar} int e^{-(sqrt2 zbar - sigma q)^2/2hbar} psi(q) dq.
inline cplx bargmann_point(const HermiteState& psi, cplx zbar, const GaussHermite& gh) {
  const double hbar = psi.hbar(), s = psi.sigma(), rh = std::sqrt(hbar);
  // q = sqrt(hbar) t / sigma turns exp(-sigma^2 q^2 / hbar) into exp(-t^2)
  cplx sum = 0.0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
    const double t = gh.nodes[i];
    sum += gh.weights[i] * psi.polynomial(rh * t / s) * std::exp(std::sqrt(2.0) * zbar * t / rh);
  }
  const double pre = std::sqrt(s) * std::pow(std::numbers::pi * hbar, -0.25) * rh / s;
  return pre * std::exp(-zbar * zbar / (2.0 * hbar)) * sum;
}

inline BargmannPoly fit_on_circle(const HermiteState& psi, int degree, const GaussHermite& gh, double* residual) {
  const int K = degree + 1;
  const double rad = std::sqrt(psi.hbar());
  std::vector<cplx> vals(static_cast<std::size_t>(K));
  for (int m = 0; m < K; ++m)
    vals[static_cast<std::size_t>(m)] = bargmann_point(psi, std::polar(rad, 2.0 * std::numbers::pi * m / K), gh);
  std::vector<cplx> c(static_cast<std::size_t>(K), 0.0);
  for (int k = 0; k < K; ++k) {
    for (int m = 0; m < K; ++m)
      c[static_cast<std::size_t>(k)] += vals[static_cast<std::size_t>(m)] * std::polar(1.0, -2.0 * std::numbers::pi * m * k / K);
    c[static_cast<std::size_t>(k)] /= static_cast<double>(K) * std::pow(rad, k);
  }
  BargmannPoly fit(c, psi.hbar());
  double worst = 0.0, scale = 0.0;
  for (int m = 0; m < K; ++m) {
    const cplx z = std::polar(rad, 2.0 * std::numbers::pi * (m + 0.5) / K);
    const cplx direct = bargmann_point(psi, z, gh);
    worst = std::max(worst, std::abs(fit.eval(z) - direct));
    scale = std::max(scale, std::abs(direct));
  }
  *residual = worst / std::max(scale, std::numeric_limits<double>::min());
  return fit;
}

} // namespace detail

inline constexpr double kCollocationTolerance = 1e-8;

/// Bargmann transform of a polynomial x Gaussian state; the image is the
/// polynomial of the same degree, fitted from quadrature values on the circle
/// |z| = sqrt(hbar). order < 0 selects degree + 24.
inline BargmannResult bargmann_transform(const HermiteState& psi, int order = -1) {
  const int deg = std::max(psi.degree(), 0);
  if (order < 0) order = deg + 24;
  require(order >= deg + 16, "bargmann_transform: quadrature order must be >= degree + 16");
  const GaussHermite gh(order);
  BargmannResult out;
  out.quadrature_order = order;
  const cplx ground = detail::bargmann_point(HermiteState::ground(psi.hbar(), psi.sigma()), 0.0, gh);
  out.global_phase = std::arg(ground);
  if (psi.is_zero()) {
    out.value = BargmannPoly({}, psi.hbar());
    return out;
  }
  double residual = 0.0;
  const BargmannPoly fit = detail::fit_on_circle(psi, deg, gh, &residual);
  out.collocation_residual = residual;
  if (residual > kCollocationTolerance)
    throw ContractViolation("bargmann_transform: under-resolved quadrature (collocation residual " +
                            std::to_string(residual) + ")");
  out.value = fit.scaled(std::polar(1.0, -out.global_phase));
  return out;
}

/// zbar^kappa z^lambda acts as zbar^kappa (hbar d/dzbar)^lambda; f is in the
/// variables (zbar, z) with hbar-graded coefficients evaluated at phi's hbar.
inline BargmannPoly wick_on_fb(const PolySymbol& f, const BargmannPoly& phi) {
  if (f.dim() != 2) throw InvalidArgument("wick_on_fb: symbol must be in (zbar, z)");
  BargmannPoly out({}, phi.hbar());
  for (const auto& [k, c] : f.terms()) {
    BargmannPoly t = phi;
    for (int i = 0; i < k[1]; ++i) t = t.lower();
    for (int i = 0; i < k[0]; ++i) t = t.mul_zbar();
    out += t.scaled(c.evaluate(phi.hbar()));
  }
  return out;
}

/// Fock coefficients -> sum_k v_k zbar^k / sqrt(hbar^k k!).
inline BargmannPoly from_fock(const Eigen::VectorXcd& v, double hbar) {
  std::vector<cplx> c(static_cast<std::size_t>(v.size()));
  double norm = 1.0;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (k > 0) norm *= hbar * static_cast<double>(k);
    c[static_cast<std::size_t>(k)] = v(k) / std::sqrt(norm);
  }
  return BargmannPoly(std::move(c), hbar);
}

struct E2ANormSpec {
  double A = 0.5;
  double r = 0.0;
  double rho = 2.0;
};

struct E2AGrid {
  int radial = 2000;
  int angular = 64;
  /// <= 0 picks a radius past the decay point of the weight.
  double radius = 0.0;
};

/// sup |phi(zbar)| exp(-A |z|^2 + r |z|^rho) over a polar grid. A grid sup
/// never exceeds the true sup. Infinite when rho = 2 and r >= A (for phi != 0).
inline double e2a_norm(const BargmannPoly& phi, const E2ANormSpec& spec, const E2AGrid& grid = {}) {
  require(spec.A > 0, "e2a_norm: A must be > 0");
  require(spec.r > 0, "e2a_norm: r must be > 0");
  require(spec.rho > 1 && spec.rho <= 2, "e2a_norm: rho must lie in (1, 2]");
  require(grid.radial >= 2 && grid.angular >= 1, "e2a_norm: grid too small");
  if (phi.is_zero()) return 0.0;
  if (spec.rho == 2.0 && spec.r >= spec.A) return std::numeric_limits<double>::infinity();
  double R = grid.radius;
  if (R <= 0) {
    const double m = phi.degree() + 1.0;
    const double eff = spec.rho == 2.0 ? spec.A - spec.r : spec.A;
    R = 4.0 * std::sqrt(m / eff) + 2.0;
    if (spec.rho < 2.0 && spec.r > 0) R += 2.0 * std::pow(2.0 * spec.r / spec.A, 1.0 / (2.0 - spec.rho));
  }
  double best = 0.0;
  for (int i = 0; i < grid.radial; ++i) {
    const double s = R * i / (grid.radial - 1);
    const double w = std::exp(-spec.A * s * s + spec.r * std::pow(s, spec.rho));
    for (int j = 0; j < grid.angular; ++j) {
      const cplx zbar = std::polar(s, 2.0 * std::numbers::pi * j / grid.angular);
      best = std::max(best, std::abs(phi.eval(zbar)) * w);
    }
  }
  return best;
}

} // namespace cstar
