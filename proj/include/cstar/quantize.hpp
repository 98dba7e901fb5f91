#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cstar/fock.hpp"
#include "cstar/hermite.hpp"
#include "cstar/star.hpp"

namespace cstar {

/// Ordering prescription for n = 1: a named preset or an explicit symmetric
/// rational Q, plus the numeric hbar, sigma and Fock cutoff N.
struct OrderingSpec {
  std::optional<Ordering> ordering = Ordering::Weyl;
  RatMatrix explicit_q{2};
  double hbar = 1.0;
  mpq_class sigma = 1;
  int N = 32;

  static OrderingSpec preset(Ordering o, double hbar, int N, const mpq_class& sigma = 1) {
    OrderingSpec s;
    s.ordering = o;
    s.hbar = hbar;
    s.N = N;
    s.sigma = sigma;
    return s;
  }
  static OrderingSpec from_q(const RatMatrix& Q, double hbar, int N, const mpq_class& sigma = 1) {
    if (Q.size() != 2) throw InvalidArgument("OrderingSpec: only n = 1 is supported");
    if (!Q.is_symmetric()) throw InvalidArgument("OrderingSpec: Q must be symmetric");
    OrderingSpec s;
    s.ordering.reset();
    s.explicit_q = Q;
    s.hbar = hbar;
    s.N = N;
    s.sigma = sigma;
    return s;
  }

  RatMatrix q() const { return ordering ? ordering_q(*ordering, 1, sigma) : explicit_q; }
  ThetaMatrix theta() const { return ThetaMatrix::from_q(q()); }
  double sigma_value() const { return sigma.get_d(); }
  Ladder ladder() const { return fock_ladder(N, hbar, sigma_value()); }
  std::string name() const { return ordering ? ordering_name(*ordering) : "custom"; }

  void validate() const {
    require(hbar > 0, "OrderingSpec: hbar must be > 0");
    require(sigma > 0, "OrderingSpec: sigma must be > 0");
    require(N >= 2, "OrderingSpec: N must be >= 2");
  }
};

/// S = (i hbar / 2)(Q_st - Q), the ordering-change operator exp(S^{jk} d_j d_k)
/// taking an ordering-Q symbol to its standard-ordered symbol.
inline CoeffMatrix ordering_change(const RatMatrix& Q) {
  const RatMatrix d = ordering_q(Ordering::Standard, 1) - Q;
  return d.map([](const GaussRat& g) { return Coeff::hbar(1, g * GaussRat(mpq_class(0), mpq_class(1, 2))); });
}

namespace detail {

struct LadderPowers {
  std::vector<FockOperator> q, p;
  LadderPowers(const Ladder& L, int deg) {
    q.push_back(FockOperator::identity(L.q.N(), L.q.hbar(), L.q.sigma()));
    p.push_back(q.front());
    for (int k = 1; k <= deg; ++k) {
      q.push_back(q.back() * L.q);
      p.push_back(p.back() * L.p);
    }
  }
};

/// p^kappa q^lambda -> Q^lambda P^kappa, summed.
inline FockOperator standard_map(const NumPoly& f, const Ladder& L) {
  const int deg = std::max(f.degree(), 0);
  const LadderPowers pw(L, deg);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(L.q.N(), L.q.N());
  for (const auto& [k, c] : f.terms())
    m += c * (pw.q[static_cast<std::size_t>(k[1])] * pw.p[static_cast<std::size_t>(k[0])]).matrix();
  return FockOperator(std::move(m), std::min(deg, L.q.N() - 1), L.q.hbar(), L.q.sigma());
}

inline void require_phase_plane(std::size_t dim, const char* where) {
  if (dim % 2 != 0) throw InvalidArgument(std::string(where) + ": dimension must be even");
  if (dim != 2) throw InvalidArgument(std::string(where) + ": only n = 1 is supported");
}

} // namespace detail

/// Operator of an exact symbol: standard-ordered symbol from the ordering
/// change, then p^kappa q^lambda -> Q^lambda P^kappa. Band = deg f.
inline FockOperator quantize_poly(const PolySymbol& f, const OrderingSpec& spec) {
  detail::require_phase_plane(f.dim(), "quantize_poly");
  spec.validate();
  const PolySymbol st = exp_quadratic_diff(ordering_change(spec.q()), f);
  return detail::standard_map(to_numeric(st, spec.hbar), spec.ladder());
}

/// Same pipeline for floating-coefficient symbols (e.g. Taylor truncations).
inline FockOperator quantize_poly(const NumPoly& f, const OrderingSpec& spec) {
  detail::require_phase_plane(f.dim(), "quantize_poly");
  spec.validate();
  const CoeffMatrix S = ordering_change(spec.q());
  const SquareMatrix<cplx> Sn = S.map([&](const Coeff& c) { return c.evaluate(spec.hbar); });
  return detail::standard_map(exp_quadratic_diff(Sn, f), spec.ladder());
}

/// (sigma q - i p / sigma)^kappa (sigma q + i p / sigma)^lambda, that is
/// 2^{(kappa+lambda)/2} zbar^kappa z^lambda with sqrt2 z = sigma q + i p / sigma.
inline PolySymbol scaled_holomorphic_monomial(int kappa, int lambda, const mpq_class& sigma = 1) {
  require(kappa >= 0 && lambda >= 0, "scaled_holomorphic_monomial: exponents must be >= 0");
  require(sigma > 0, "scaled_holomorphic_monomial: sigma must be > 0");
  const PolySymbol p = PolySymbol::variable(2, 0), q = PolySymbol::variable(2, 1);
  const PolySymbol sq = q.scaled(Coeff(GaussRat(sigma)));
  const PolySymbol ip = p.scaled(Coeff(GaussRat(mpq_class(0), 1 / sigma)));
  const PolySymbol zb = sq - ip, z = sq + ip;
  PolySymbol r = PolySymbol::one(2);
  for (int i = 0; i < kappa; ++i) r *= zb;
  for (int i = 0; i < lambda; ++i) r *= z;
  return r;
}

/// sum c zbar^kappa z^lambda -> sum c (a^dag)^kappa a^lambda for a symbol in
/// the variables (zbar, z).
inline FockOperator wick_normal_ordered(const NumPoly& w, const Ladder& L) {
  if (w.dim() != 2) throw InvalidArgument("wick_normal_ordered: symbol must be in (zbar, z)");
  const int N = L.a.N();
  const int deg = std::max(w.degree(), 0);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(N, N);
  for (const auto& [k, c] : w.terms()) m += c * (L.adag.pow(k[0]) * L.a.pow(k[1])).matrix();
  return FockOperator(std::move(m), std::min(deg, N - 1), L.a.hbar(), L.a.sigma());
}

/// Direct normal-ordering rule: rewrite f(p, q) in (zbar, z) and send
/// zbar^kappa z^lambda to (a^dag)^kappa a^lambda.
inline FockOperator quantize_wick_direct(const PolySymbol& f, const OrderingSpec& spec) {
  detail::require_phase_plane(f.dim(), "quantize_wick_direct");
  spec.validate();
  const double s = spec.sigma_value(), r2 = std::sqrt(2.0);
  // variables (zbar, z): q = (z + zbar)/(sqrt2 s), p = s (z - zbar)/(i sqrt2)
  NumPoly qz(2), pz(2);
  qz.add_term({1, 0}, 1.0 / (r2 * s));
  qz.add_term({0, 1}, 1.0 / (r2 * s));
  pz.add_term({1, 0}, -s / (cplx(0.0, 1.0) * r2));
  pz.add_term({0, 1}, s / (cplx(0.0, 1.0) * r2));
  const NumPoly fn = to_numeric(f, spec.hbar);
  NumPoly w(2);
  for (const auto& [k, c] : fn.terms()) {
    NumPoly t = NumPoly::constant(2, c);
    for (int i = 0; i < k[0]; ++i) t *= pz;
    for (int i = 0; i < k[1]; ++i) t *= qz;
    w += t;
  }
  return wick_normal_ordered(w, spec.ladder());
}

struct HomomorphismResult {
  double residual = 0.0;
  int block = 0;
};

/// max |Op(f * g) - Op(f) Op(g)| over indices below N - deg f - deg g.
inline HomomorphismResult verify_homomorphism(const PolySymbol& f, const PolySymbol& g, const OrderingSpec& spec) {
  detail::require_phase_plane(f.dim(), "verify_homomorphism");
  if (g.dim() != f.dim()) throw DimensionMismatch("verify_homomorphism", f.dim(), g.dim());
  const int block = spec.N - std::max(f.degree(), 0) - std::max(g.degree(), 0);
  if (block <= 0) throw InvalidArgument("verify_homomorphism: doubly-protected block is empty; raise N");
  const PolySymbol fg = star(f, g, spec.theta()).value;
  const FockOperator lhs = quantize_poly(fg, spec);
  const FockOperator rhs = quantize_poly(f, spec) * quantize_poly(g, spec);
  return {protected_residual(lhs, rhs, block), block};
}

/// sum c_{kappa lambda} (-i hbar)^kappa q^lambda d^kappa psi for
/// f = sum c p^kappa q^lambda, with hbar taken from psi.
inline HermiteState apply_standard_operator(const PolySymbol& f, const HermiteState& psi) {
  detail::require_phase_plane(f.dim(), "apply_standard_operator");
  const double hbar = psi.hbar();
  HermiteState out({}, hbar, psi.sigma());
  const int deg = std::max(f.degree(), 0);
  std::vector<HermiteState> derivs{psi};
  for (int k = 1; k <= deg; ++k) derivs.push_back(derivs.back().derive());
  for (const auto& [k, c] : f.terms()) {
    HermiteState t = derivs[static_cast<std::size_t>(k[0])];
    for (int i = 0; i < k[1]; ++i) t = t.mul_q();
    out += t.scaled(c.evaluate(hbar) * std::pow(cplx(0.0, -hbar), k[0]));
  }
  return out;
}

/// Fock-matrix action on the first N expansion coefficients of psi.
inline Eigen::VectorXcd apply_fock(const FockOperator& A, const HermiteState& psi) {
  const std::vector<cplx> c = psi.fock_expansion(A.N());
  return A.matrix() * Eigen::Map<const Eigen::VectorXcd>(c.data(), static_cast<Eigen::Index>(c.size()));
}

} // namespace cstar
