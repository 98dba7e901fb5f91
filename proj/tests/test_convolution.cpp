#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cstar/twisted.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace cstar;
using cstar::oracle::legendre_sup;
using namespace cstar::testing;

namespace {

constexpr double kPi = std::numbers::pi;

GridFunction gaussian_1d(int N, double L, double shift = 0.0) {
  return GridFunction::sample({N}, {L}, [&](std::span<const double> x) {
    return cplx(std::exp(-(x[0] - shift) * (x[0] - shift) / 2.0));
  });
}

/// Sum of a few random complex Gaussian bumps, decayed far inside the box.
struct Bumps {
  std::vector<std::array<double, 5>> b;  // x0, y0, width, re, im
  Bumps(Rng& rng, int count) {
    for (int i = 0; i < count; ++i)
      b.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.6, 1.4), rng.uniform(-1, 1),
                   rng.uniform(-1, 1)});
  }
  cplx operator()(double x, double y) const {
    cplx s = 0.0;
    for (const auto& e : b)
      s += cplx(e[3], e[4]) * std::exp(-((x - e[0]) * (x - e[0]) + (y - e[1]) * (y - e[1])) / e[2]);
    return s;
  }
  GridFunction grid(int N, double L) const {
    return GridFunction::sample({N, N}, {L, L}, [&](std::span<const double> x) { return (*this)(x[0], x[1]); });
  }
};

/// Literal double sum over grid pairs, no factorization.
GridFunction naive_twisted(const GridFunction& g1, const GridFunction& g2, const Eigen::Matrix2cd& theta,
                           bool second_form) {
  const int N = g1.N(0);
  const double h = g1.spacing(0);
  GridFunction out(g1.Ns(), g1.Ls());
  auto at = [&](const GridFunction& g, int i, int j) -> cplx {
    if (i < 0 || j < 0 || i >= N || j >= N) return 0.0;
    return g[static_cast<std::size_t>(i) * N + j];
  };
  for (int s0 = 0; s0 < N; ++s0)
    for (int s1 = 0; s1 < N; ++s1) {
      cplx acc = 0.0;
      for (int t0 = 0; t0 < N; ++t0)
        for (int t1 = 0; t1 < N; ++t1) {
          const Eigen::Vector2cd s(g1.coordinate(0, s0), g1.coordinate(1, s1));
          const Eigen::Vector2cd t(g1.coordinate(0, t0), g1.coordinate(1, t1));
          const Eigen::Vector2cd diff = s - t;
          const int d0 = s0 - t0 + N / 2, d1 = s1 - t1 + N / 2;
          if (!second_form) {
            acc += at(g1, d0, d1) * at(g2, t0, t1) * std::exp(-cplx(0, 1) * diff.dot(theta * t));
          } else {
            acc += at(g1, t0, t1) * at(g2, d0, d1) * std::exp(-cplx(0, 1) * t.dot(theta * diff));
          }
        }
      out[static_cast<std::size_t>(s0) * N + s1] = acc * h * h / (2 * kPi);
    }
  return out;
}

} // namespace

TEST_CASE("fourier of a Gaussian", "[convolution][fourier]") {
  const GridFunction f = gaussian_1d(512, 12.0);
  Warnings w;
  const GridFunction fh = fourier(f, false, &w);
  CHECK(w.empty());
  double err = 0.0;
  std::vector<double> s;
  for (std::size_t i = 0; i < fh.size(); ++i) {
    fh.point(i, s);
    err = std::max(err, std::abs(fh[i] - std::exp(-s[0] * s[0] / 2)));
  }
  CHECK(err < 1e-8);

  // d = 2: exp(-|x|^2) -> exp(-|s|^2/4)/2
  const GridFunction g = GridFunction::sample({64, 64}, {8.0, 8.0}, [](std::span<const double> x) {
    return cplx(std::exp(-x[0] * x[0] - x[1] * x[1]));
  });
  const GridFunction gh = fourier(g);
  err = 0.0;
  for (std::size_t i = 0; i < gh.size(); ++i) {
    gh.point(i, s);
    err = std::max(err, std::abs(gh[i] - 0.5 * std::exp(-(s[0] * s[0] + s[1] * s[1]) / 4)));
  }
  CHECK(err < 1e-10);
}

TEST_CASE("fourier shift theorem", "[convolution][fourier]") {
  for (double a : {0.7, -1.3, 2.0}) {
    const GridFunction f = fourier(gaussian_1d(512, 12.0));
    const GridFunction fa = fourier(gaussian_1d(512, 12.0, a));
    double err = 0.0;
    std::vector<double> s;
    for (std::size_t i = 0; i < f.size(); ++i) {
      f.point(i, s);
      err = std::max(err, std::abs(fa[i] - std::polar(1.0, -s[0] * a) * f[i]));
    }
    CHECK(err < 1e-8);
  }
}

TEST_CASE("fourier round trip", "[convolution][fourier]") {
  Rng rng(31);
  for (int t = 0; t < 5; ++t) {
    const GridFunction f = Bumps(rng, 3).grid(32, 8.0);
    const GridFunction back = fourier(fourier(f), true);
    CHECK(back.same_grid(f));
    CHECK(max_difference(back, f) < 1e-12);
  }
}

TEST_CASE("fourier warns on undecayed input", "[convolution][fourier]") {
  const GridFunction f = gaussian_1d(64, 3.0);
  Warnings w;
  fourier(f, false, &w);
  REQUIRE(w.messages.size() == 1);
  CHECK(w.messages[0].find("edge magnitude") != std::string::npos);
}

TEST_CASE("grid function validation and csv round trip", "[convolution][grid]") {
  CHECK_THROWS_AS(GridFunction({12}, {1.0}), InvalidArgument);
  CHECK_THROWS_AS(GridFunction({8}, {-1.0}), InvalidArgument);
  CHECK_THROWS_AS(GridFunction({8, 8}, {1.0}), InvalidArgument);

  Rng rng(2);
  const GridFunction f = Bumps(rng, 2).grid(8, 4.0);
  std::stringstream ss;
  write_grid_csv(ss, f);
  const std::string text = ss.str();
  CHECK(text.substr(0, text.find('\n')) == "2,8,8,4,4");
  std::stringstream in(text);
  const GridFunction g = read_grid_csv(in);
  CHECK(g.same_grid(f));
  CHECK(max_difference(f, g) == 0.0);

  std::stringstream bad1("2,8,8,4\n");
  CHECK_THROWS_AS(read_grid_csv(bad1), ParseError);
  std::stringstream bad2("1,4,1\n1,0\n2,0\n");
  CHECK_THROWS_AS(read_grid_csv(bad2), ParseError);
  std::stringstream bad3("1,2,1\n1,0\nx,0\n");
  CHECK_THROWS_AS(read_grid_csv(bad3), ParseError);
  std::stringstream bad4("1,3,1\n1,0\n1,0\n1,0\n");
  CHECK_THROWS_AS(read_grid_csv(bad4), ParseError);
}

TEST_CASE("twisted convolution matches the literal double sum", "[convolution][twisted]") {
  Rng rng(8);
  Eigen::Matrix2cd theta;
  theta << cplx(0.1, 0.05), -0.3, 0.2, cplx(0.0, -0.1);
  const GridFunction g1 = Bumps(rng, 2).grid(16, 5.0), g2 = Bumps(rng, 2).grid(16, 5.0);
  const GridFunction fast = twisted_convolve(g1, g2, theta);
  CHECK(max_difference(fast, naive_twisted(g1, g2, theta, false)) < 1e-12);
  const GridFunction fast2 = twisted_convolve(g1, g2, theta, TwistForm::ShiftSecond);
  CHECK(max_difference(fast2, naive_twisted(g1, g2, theta, true)) < 1e-12);
}

TEST_CASE("twisted convolution forms agree", "[convolution][twisted][property]") {
  Rng rng(19);
  for (int t = 0; t < 4; ++t) {
    Eigen::Matrix2cd theta;
    theta << rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3);
    const GridFunction g1 = Bumps(rng, 3).grid(32, 8.0), g2 = Bumps(rng, 3).grid(32, 8.0);
    const GridFunction a = twisted_convolve(g1, g2, theta, TwistForm::ShiftFirst);
    const GridFunction b = twisted_convolve(g1, g2, theta, TwistForm::ShiftSecond);
    CHECK(max_difference(a, b) < 1e-10);
    // theta and theta^T are related by swapping the arguments
    const GridFunction c = twisted_convolve(g2, g1, theta.transpose(), TwistForm::ShiftSecond);
    CHECK(max_difference(a, c) < 1e-10);
  }
}

TEST_CASE("untwisted convolution matches the FFT route", "[convolution][twisted]") {
  Rng rng(4);
  const GridFunction x1 = Bumps(rng, 2).grid(128, 10.0), x2 = Bumps(rng, 2).grid(128, 10.0);
  // work on the transform side so both inputs decay well inside the box
  const GridFunction g1 = fourier(x1), g2 = fourier(x2);
  const GridFunction direct = twisted_convolve(g1, g2, Eigen::Matrix2cd::Zero());
  GridFunction prod = fourier(g1, true);
  const GridFunction p2 = fourier(g2, true);
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] *= p2[i];
  const GridFunction route = fourier(prod);
  CHECK(max_difference(direct, route) < 1e-7);
}

TEST_CASE("twisted Gaussians against a refined quadrature", "[convolution][twisted]") {
  Eigen::Matrix2cd theta;
  theta << 0.0, 0.1, -0.1, 0.0;
  auto g1 = [](double x, double y) { return cplx(std::exp(-(x * x + y * y) / 2)); };
  auto g2 = [](double x, double y) { return cplx(std::exp(-(x * x + 2 * y * y) / 3)) * cplx(1.0, 0.5); };
  const int N = 64;
  const double L = 10.0;
  const GridFunction G1 = GridFunction::sample({N, N}, {L, L}, [&](std::span<const double> x) { return g1(x[0], x[1]); });
  const GridFunction G2 = GridFunction::sample({N, N}, {L, L}, [&](std::span<const double> x) { return g2(x[0], x[1]); });
  const GridFunction T = twisted_convolve(G1, G2, theta);
  Rng rng(12);
  for (int probe = 0; probe < 16; ++probe) {
    const int k0 = rng.uniform_int(N / 2 - 8, N / 2 + 8), k1 = rng.uniform_int(N / 2 - 8, N / 2 + 8);
    const double s0 = T.coordinate(0, k0), s1 = T.coordinate(1, k1);
    // midpoint rule, step 0.05 on [-12, 12]^2, analytic integrand
    cplx ref = 0.0;
    const double hf = 0.05;
    for (int i = 0; i < 480; ++i)
      for (int j = 0; j < 480; ++j) {
        const double t0 = -12 + (i + 0.5) * hf, t1 = -12 + (j + 0.5) * hf;
        const double d0 = s0 - t0, d1 = s1 - t1;
        const cplx phase = d0 * (theta(0, 0) * t0 + theta(0, 1) * t1) + d1 * (theta(1, 0) * t0 + theta(1, 1) * t1);
        ref += g1(d0, d1) * g2(t0, t1) * std::exp(-cplx(0, 1) * phase);
      }
    ref *= hf * hf / (2 * kPi);
    const cplx got = T[static_cast<std::size_t>(k0) * N + k1];
    CHECK(std::abs(got - ref) < 1e-5 * std::abs(ref));
  }
}

TEST_CASE("twisted convolution rejects bad input", "[convolution][twisted]") {
  const GridFunction a = GridFunction::square(2, 8, 4.0), b = GridFunction::square(2, 16, 4.0);
  CHECK_THROWS_AS(twisted_convolve(a, b, Eigen::Matrix2cd::Zero()), InvalidArgument);
  CHECK_THROWS_AS(twisted_convolve(GridFunction::square(1, 8, 4.0), GridFunction::square(1, 8, 4.0),
                                   Eigen::Matrix2cd::Zero()),
                  InvalidArgument);
  CHECK_THROWS_AS(twisted_convolve(a, a, Eigen::Matrix3cd::Zero()), DimensionMismatch);
}

TEST_CASE("intertwining", "[convolution][intertwine]") {
  const GaussianSymbol f = GaussianSymbol::gaussian(-Eigen::MatrixXcd::Identity(2, 2));
  SECTION("untwisted") {
    const auto r = verify_intertwining(f, f, Eigen::MatrixXcd::Zero(2, 2), {.N = 64, .L = 8.0});
    CHECK(r.conclusive);
    CHECK(r.residual < 1e-6);
  }
  SECTION("moyal and standard at hbar = 0.1") {
    for (const char* name : {"moyal", "standard"}) {
      const auto r = verify_intertwining(f, f, ThetaMatrix::preset(name, 1), 0.1);
      CHECK(r.conclusive);
      CHECK(r.residual < 1e-4);
    }
  }
  SECTION("symplectic convention") {
    Eigen::MatrixXcd M(2, 2);
    M << -1.0, 0.3, 0.3, -0.7;
    const GaussianSymbol g = GaussianSymbol::gaussian(M);
    for (const char* name : {"moyal", "standard", "wick"}) {
      const auto r = verify_intertwining(g, f, ThetaMatrix::preset(name, 1), 0.1,
                                         {.N = 64, .L = 8.0, .convention = FourierConvention::Symplectic});
      CHECK(r.conclusive);
      CHECK(r.residual < 1e-4);
    }
  }
  SECTION("divergent series is inconclusive") {
    const GaussianSymbol up = GaussianSymbol::gaussian(Eigen::MatrixXcd::Identity(2, 2));
    const auto r = verify_intertwining(up, up, ThetaMatrix::preset("moyal", 1), 1.0, {.N = 16, .L = 4.0});
    CHECK_FALSE(r.conclusive);
    CHECK(std::isnan(r.residual));
  }
}

TEST_CASE("young_dual", "[convolution][young]") {
  auto d = young_dual(0.5, 2.0);
  CHECK(d.a == Catch::Approx(0.5).epsilon(1e-15));
  CHECK(d.rho == 2.0);
  d = young_dual(1.0, 2.0);
  CHECK(d.a == Catch::Approx(0.25).epsilon(1e-15));
  CHECK(young_dual(3.7, 2.0).rho == 2.0);
  CHECK_THROWS_AS(young_dual(1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(young_dual(1.0, 0.5), InvalidArgument);
  CHECK_THROWS_AS(young_dual(0.0, 2.0), InvalidArgument);
}

TEST_CASE("young_dual Legendre and involution", "[convolution][young][property]") {
  for (const auto& [a, rho] : std::vector<std::pair<double, double>>{{0.5, 2}, {1, 2}, {0.3, 1.5}, {2, 3}, {0.8, 2.5}}) {
    const YoungDual dual = young_dual(a, rho);
    for (double y : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0})
      CHECK(std::abs(legendre_sup(y, dual.a, dual.rho) - a * std::pow(std::abs(y), rho)) < 1e-6);
    const YoungDual back = young_dual(dual.a, dual.rho);
    CHECK(std::abs(back.a - a) < 1e-12);
    CHECK(std::abs(back.rho - rho) < 1e-12);
  }
}
