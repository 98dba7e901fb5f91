#include <catch2/catch_amalgamated.hpp>

#include "cstar/star.hpp"
#include "test_util.hpp"

using namespace cstar;
using namespace cstar::testing;

namespace {

const Coeff kHbar = Coeff::hbar(1);

Coeff ihbar(long num, long den = 1) { return Coeff::hbar(1, irat(num, den)); }

/// sqrt(2) z = sigma q + i p / sigma, and its conjugate.
PolySymbol scaled_z(const mpq_class& sigma, bool conj) {
  const GaussRat im(0, (conj ? -1 : 1) / sigma);
  return q1().scaled(Coeff(GaussRat(sigma))) + p1().scaled(Coeff(im));
}

} // namespace

TEST_CASE("theta presets", "[star][theta]") {
  SECTION("moyal is (hbar/2) pi with zero symmetric part") {
    const ThetaMatrix t = ThetaMatrix::preset("moyal", 1);
    CHECK(t(0, 1) == Coeff::hbar(1, rat(-1, 2)));
    CHECK(t(1, 0) == Coeff::hbar(1, rat(1, 2)));
    CHECK(t(0, 0).is_zero());
    CHECK(t(1, 1).is_zero());
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) CHECK(t.symmetric_part()(i, j).is_zero());
    CHECK(t.has_symplectic_antisymmetric_part());
  }

  SECTION("standard has a single -hbar entry in the (p,q) slot") {
    // Q~ = 1/2 offdiag(I, I)  ->  Q = -Omega Q~ Omega, checked by hand.
    RatMatrix qt(2);
    qt(0, 1) = qt(1, 0) = rat(1, 2);
    CHECK(omega_conjugate(qt) == ordering_q(Ordering::Standard, 1));
    const ThetaMatrix t = ThetaMatrix::preset("standard", 1);
    CHECK(t(0, 1) == Coeff::hbar(1, rat(-1)));
    CHECK(t(1, 0).is_zero());
    CHECK(t(0, 0).is_zero());
    CHECK(t(1, 1).is_zero());
    CHECK(t.has_symplectic_antisymmetric_part());
  }

  SECTION("wick satisfies z * zbar = z zbar + hbar") {
    for (const mpq_class& sigma : {mpq_class(1), mpq_class(3, 2)}) {
      const ThetaMatrix t = ThetaMatrix::preset("wick", 1, sigma);
      const PolySymbol Z = scaled_z(sigma, false), Zb = scaled_z(sigma, true);
      // (sqrt2 z) * (sqrt2 zbar) = 2 z zbar + 2 hbar
      CHECK(star(Z, Zb, t).value == Z * Zb + cst(2, kHbar * Coeff(2)));
    }
  }

  SECTION("antiwick and antistandard are sign flips") {
    const ThetaMatrix aw = ThetaMatrix::preset("antiwick", 1);
    const PolySymbol Z = scaled_z(1, false), Zb = scaled_z(1, true);
    CHECK(star(Zb, Z, aw).value == Z * Zb - cst(2, kHbar * Coeff(2)));
    CHECK(star(Z, Zb, aw).value == Z * Zb);
    const ThetaMatrix as = ThetaMatrix::preset("antistandard", 1);
    CHECK(star(q1(), p1(), as).value == p1() * q1() + cst(2, ihbar(1)));
  }

  CHECK_THROWS_AS(ThetaMatrix::preset("bogus", 1), InvalidArgument);
  CHECK_THROWS_AS(ThetaMatrix::preset("wick", 1, 0), InvalidArgument);
  CHECK_THROWS_AS(ThetaMatrix::preset("moyal", 0), InvalidArgument);
}

TEST_CASE("star products of monomials", "[star]") {
  const PolySymbol p = p1(), q = q1();
  const ThetaMatrix moyal = ThetaMatrix::preset("moyal", 1);
  const ThetaMatrix standard = ThetaMatrix::preset("standard", 1);

  SECTION("unit") {
    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
      const PolySymbol f = rng.poly(2, 4);
      const StarResult r = star(f, PolySymbol::one(2), moyal);
      CHECK(r.value == f);
      CHECK(r.term_count == (f.is_zero() ? 0 : 1));
    }
  }

  SECTION("moyal p*q and q*p") {
    CHECK(star(p, q, moyal).value == p * q - cst(2, ihbar(1, 2)));
    CHECK(star(q, p, moyal).value == p * q + cst(2, ihbar(1, 2)));
    CHECK(star(p, q, moyal).term_count == 2);
  }

  SECTION("standard p*q and q*p") {
    CHECK(star(p, q, standard).value == p * q - cst(2, ihbar(1)));
    CHECK(star(q, p, standard).value == p * q);
  }

  SECTION("series stops at the lower degree") {
    const StarResult r = star(pow(p, 3) * q, pow(q, 2), standard);
    CHECK(r.term_count <= 3);
  }

  CHECK_THROWS_AS(star(p, var(3, 0), moyal), DimensionMismatch);
}

TEST_CASE("poisson bracket", "[star][poisson]") {
  const PolySymbol p = p1(), q = q1();
  CHECK(poisson(q, p) == PolySymbol::one(2));
  Rng rng(9);
  const PolySymbol f = rng.poly(2, 4);
  CHECK(poisson(f, f).is_zero());
  CHECK(poisson(pow(p, 2), q) == p.scaled(Coeff(-2)));
  CHECK_THROWS_AS(poisson(var(3, 0), var(3, 1)), InvalidArgument);
}

TEST_CASE("classical limit residual", "[star][limit]") {
  const PolySymbol p = p1(), q = q1();
  CHECK(classical_limit_residual(q, p, ThetaMatrix::preset("moyal", 1)).is_zero());
  CHECK(classical_limit_residual(q, p, ThetaMatrix::preset("standard", 1)).is_zero());

  Rng rng(41);
  for (int t = 0; t < 30; ++t) {
    const std::size_t d = t % 2 == 0 ? 2 : 4;
    const ThetaMatrix theta = ThetaMatrix::from_q(rng.symmetric_q(d));
    const PolySymbol f = rng.poly(d, 4), g = rng.poly(d, 4);
    REQUIRE(classical_limit_residual(f, g, theta).is_zero());
  }

  CHECK_THROWS_AS(classical_limit_residual(p, q, ThetaMatrix::raw(rng.raw_theta(2))), InvalidArgument);
}

TEST_CASE("exp_quadratic_diff", "[star][eqd]") {
  const PolySymbol p = p1(), q = q1();
  CHECK(exp_quadratic_diff(CoeffMatrix(2), p * q) == p * q);

  // off-diagonal c/2 entries realize exp(c d_p d_q)
  CoeffMatrix S(2);
  S(0, 1) = S(1, 0) = Coeff(rat(3, 2));
  CHECK(exp_quadratic_diff(S, p * q) == p * q + cst(2, Coeff(3)));

  // Weyl -> standard bridge: S = (i hbar / 2)(Q_st - 0)
  const RatMatrix qst = ordering_q(Ordering::Standard, 1);
  const CoeffMatrix bridge = qst.map([](const GaussRat& g) { return Coeff::hbar(1, g * irat(1, 2)); });
  CHECK(exp_quadratic_diff(bridge, p * q) == p * q - cst(2, ihbar(1, 2)));

  CoeffMatrix bad(2);
  bad(0, 1) = Coeff(1);
  CHECK_THROWS_AS(exp_quadratic_diff(bad, p), InvalidArgument);
  CHECK_THROWS_AS(exp_quadratic_diff(CoeffMatrix(3), p), DimensionMismatch);
}

TEST_CASE("star invariants on random symbols", "[star][property]") {
  Rng rng(1234);
  for (int t = 0; t < 60; ++t) {
    const std::size_t d = t % 2 == 0 ? 2 : 4;
    const ThetaMatrix theta =
        t % 3 == 0 ? ThetaMatrix::raw(rng.raw_theta(d)) : ThetaMatrix::from_q(rng.symmetric_q(d));
    const PolySymbol f = rng.poly(d, 4, 3), g = rng.poly(d, 4, 3), h = rng.poly(d, 4, 3);

    const PolySymbol left = star(star(f, g, theta).value, h, theta).value;
    const PolySymbol right = star(f, star(g, h, theta).value, theta).value;
    REQUIRE(left == right);

    REQUIRE(star(f, PolySymbol::one(d), theta).value == f);
    REQUIRE(star(PolySymbol::one(d), f, theta).value == f);

    if (theta.mode() == ThetaMatrix::Mode::FromQ)
      REQUIRE(hbar_part(star(f, g, theta).value, 0) == hbar_part(f, 0) * hbar_part(g, 0));
  }
}

TEST_CASE("moyal commutator has only odd hbar powers", "[star][property]") {
  Rng rng(88);
  for (int t = 0; t < 40; ++t) {
    const std::size_t d = t % 2 == 0 ? 2 : 4;
    const ThetaMatrix moyal = ThetaMatrix::preset("moyal", d / 2);
    // hbar-free inputs so every hbar power comes from the product itself
    const PolySymbol f = rng.poly(d, 4, 3, false), g = rng.poly(d, 4, 3, false);
    const PolySymbol c = star(f, g, moyal).value - star(g, f, moyal).value;
    for (const auto& [k, coeff] : c.terms())
      for (std::size_t m = 0; m < coeff.powers().size(); m += 2) REQUIRE(coeff.powers()[m].is_zero());
  }
}

TEST_CASE("exp_quadratic_diff composes additively", "[star][property]") {
  Rng rng(17);
  for (int t = 0; t < 40; ++t) {
    const std::size_t d = t % 2 == 0 ? 2 : 4;
    auto sym = [&] {
      return rng.symmetric_q(d).map([](const GaussRat& g) { return Coeff::hbar(1, g); });
    };
    const CoeffMatrix s1 = sym(), s2 = sym();
    const PolySymbol f = rng.poly(d, 6, 4);
    REQUIRE(exp_quadratic_diff(s1, exp_quadratic_diff(s2, f)) == exp_quadratic_diff(s1 + s2, f));
  }
}
