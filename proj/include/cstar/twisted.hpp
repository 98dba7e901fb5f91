#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cstar/grid.hpp"
#include "cstar/star_gaussian.hpp"
#include "cstar/theta.hpp"

namespace cstar {

/// Which of the two equivalent integrals is summed.
enum class TwistForm {
  /// int g1(s - t) g2(t) exp(-i (s - t).theta t) dt
  ShiftFirst,
  /// int g1(t) g2(s - t) exp(-i t.theta (s - t)) dt
  ShiftSecond,
};

namespace detail {

/// Sum over t of a(s - t) b(t) exp(-i (s - t).theta t) on a 2-d grid.
/// exp(-i (s-t).theta t) = exp(-i s.theta t) exp(i t.theta t); the first factor
/// splits into one exponential per axis for fixed s.
inline GridFunction twisted_sum(const GridFunction& a, const GridFunction& b, const Eigen::Matrix2cd& theta) {
  const int N0 = a.N(0), N1 = a.N(1);
  const double h0 = a.spacing(0), h1 = a.spacing(1);
  const double weight = h0 * h1 / (2.0 * std::numbers::pi);
  const cplx I(0.0, 1.0);

  std::vector<double> br(b.size()), bi(b.size());
  for (int k0 = 0; k0 < N0; ++k0)
    for (int k1 = 0; k1 < N1; ++k1) {
      const double t0 = b.coordinate(0, k0), t1 = b.coordinate(1, k1);
      const cplx quad = t0 * (theta(0, 0) * t0 + theta(0, 1) * t1) + t1 * (theta(1, 0) * t0 + theta(1, 1) * t1);
      const std::size_t i = static_cast<std::size_t>(k0) * N1 + k1;
      const cplx v = b[i] * std::exp(I * quad);
      br[i] = v.real();
      bi[i] = v.imag();
    }
  std::vector<double> ar(a.size()), ai(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ar[i] = a[i].real();
    ai[i] = a[i].imag();
  }

  GridFunction out(a.Ns(), a.Ls());
  std::vector<double> e0r(N0), e0i(N0), e1r(N1), e1i(N1);
  for (int s0 = 0; s0 < N0; ++s0)
    for (int s1 = 0; s1 < N1; ++s1) {
      const double x0 = a.coordinate(0, s0), x1 = a.coordinate(1, s1);
      // w = theta^T s, factor exp(-i w.t)
      const cplx w0 = x0 * theta(0, 0) + x1 * theta(1, 0);
      const cplx w1 = x0 * theta(0, 1) + x1 * theta(1, 1);
      for (int k = 0; k < N0; ++k) {
        const cplx e = std::exp(-I * w0 * b.coordinate(0, k));
        e0r[k] = e.real();
        e0i[k] = e.imag();
      }
      for (int k = 0; k < N1; ++k) {
        const cplx e = std::exp(-I * w1 * b.coordinate(1, k));
        e1r[k] = e.real();
        e1i[k] = e.imag();
      }
      // index of s - t is s - t + N/2 per axis
      const int lo0 = std::max(0, s0 - N0 / 2 + 1), hi0 = std::min(N0 - 1, s0 + N0 / 2);
      const int lo1 = std::max(0, s1 - N1 / 2 + 1), hi1 = std::min(N1 - 1, s1 + N1 / 2);
      double accr = 0.0, acci = 0.0;
      for (int t0 = lo0; t0 <= hi0; ++t0) {
        const std::size_t arow = static_cast<std::size_t>(s0 - t0 + N0 / 2) * N1;
        const std::size_t brow = static_cast<std::size_t>(t0) * N1;
        double rr = 0.0, ri = 0.0;
        for (int t1 = lo1; t1 <= hi1; ++t1) {
          const std::size_t ia = arow + static_cast<std::size_t>(s1 - t1 + N1 / 2);
          const std::size_t ib = brow + static_cast<std::size_t>(t1);
          const double pr = br[ib] * e1r[t1] - bi[ib] * e1i[t1];
          const double pi = br[ib] * e1i[t1] + bi[ib] * e1r[t1];
          rr += ar[ia] * pr - ai[ia] * pi;
          ri += ar[ia] * pi + ai[ia] * pr;
        }
        accr += rr * e0r[t0] - ri * e0i[t0];
        acci += rr * e0i[t0] + ri * e0r[t0];
      }
      out[static_cast<std::size_t>(s0) * N1 + s1] = weight * cplx(accr, acci);
    }
  return out;
}

} // namespace detail

/// (2 pi)^{-d/2} int g1(s - t) g2(t) exp(-i (s - t).theta t) dt by the
/// trapezoid rule on the common grid (d = 2). Samples of s - t that fall off
/// the grid count as zero. Both forms sum the same set of products.
inline GridFunction twisted_convolve(const GridFunction& g1, const GridFunction& g2, const Eigen::MatrixXcd& theta,
                                     TwistForm form = TwistForm::ShiftFirst) {
  if (g1.dim() != 2) throw InvalidArgument("twisted_convolve: only d = 2 is supported");
  if (!g1.same_grid(g2)) throw InvalidArgument("twisted_convolve: grid mismatch");
  if (theta.rows() != 2 || theta.cols() != 2)
    throw DimensionMismatch("twisted_convolve: theta", 2, static_cast<std::size_t>(theta.rows()));
  if (g1.L(0) != g1.L(1) || g1.N(0) != g1.N(1))
    throw InvalidArgument("twisted_convolve: grid must be square");
  const Eigen::Matrix2cd t = theta;
  // ShiftSecond with (g1, g2, theta) is ShiftFirst with (g2, g1, theta^T)
  if (form == TwistForm::ShiftSecond) return detail::twisted_sum(g2, g1, t.transpose());
  return detail::twisted_sum(g1, g2, t);
}

/// f~(s) = f^(-Omega s) resampled from a transform on a square 2-d grid.
inline GridFunction symplectic_resample(const GridFunction& fhat) {
  if (fhat.dim() != 2 || fhat.N(0) != fhat.N(1) || fhat.L(0) != fhat.L(1))
    throw InvalidArgument("symplectic_resample: need a square 2-d grid");
  const int N = fhat.N(0);
  GridFunction out(fhat.Ns(), fhat.Ls());
  // -Omega (s0, s1) = (-s1, s0); coordinate index k <-> value (k - N/2) h
  for (int k0 = 0; k0 < N; ++k0)
    for (int k1 = 0; k1 < N; ++k1) {
      const int src0 = N - k1;  // index of -s1
      const int src1 = k0;
      if (src0 >= N) continue;  // -(-L') is outside [-L', L')
      out[static_cast<std::size_t>(k0) * N + k1] = fhat[static_cast<std::size_t>(src0) * N + src1];
    }
  return out;
}

enum class FourierConvention { Fourier, Symplectic };

inline const char* convention_name(FourierConvention c) {
  return c == FourierConvention::Fourier ? "fourier" : "symplectic";
}

struct IntertwiningResult {
  double residual = std::numeric_limits<double>::quiet_NaN();
  /// False when the star series did not converge; residual is then NaN.
  bool conclusive = false;
  ConvergenceDiagnostic star_diagnostic;
  Warnings warnings;
};

struct IntertwiningOptions {
  int N = 128;
  double L = 8.0;
  int M_max = 24;
  FourierConvention convention = FourierConvention::Fourier;
};

/// sup over the transform grid of |F(f1 * f2) - F(f1) twisted F(f2)|, both
/// sides computed independently: the left from the Gaussian star partial sum,
/// the right from transformed samples of f1 and f2.
inline IntertwiningResult verify_intertwining(const GaussianSymbol& f1, const GaussianSymbol& f2,
                                              const Eigen::MatrixXcd& theta, const IntertwiningOptions& opt = {}) {
  if (f1.dim() != 2 || f2.dim() != 2) throw InvalidArgument("verify_intertwining: only n = 1 is supported");
  IntertwiningResult res;
  const GaussianStarResult star = star_gaussian_partial(f1, f2, theta, opt.M_max);
  res.star_diagnostic = star.diagnostic;
  if (star.diagnostic.verdict == Convergence::Diverging) {
    res.warnings.add("verify_intertwining: star series diverges on the reference grid; inconclusive");
    return res;
  }
  auto sampled = [&](const GaussianSymbol& f) {
    return GridFunction::sample({opt.N, opt.N}, {opt.L, opt.L}, [&](std::span<const double> x) {
      const std::array<cplx, 2> z{x[0], x[1]};
      return f.eval(z);
    });
  };
  GridFunction lhs = fourier(sampled(star.partial_sum), false, &res.warnings);
  GridFunction h1 = fourier(sampled(f1), false, &res.warnings);
  GridFunction h2 = fourier(sampled(f2), false, &res.warnings);
  Eigen::MatrixXcd t = theta;
  if (opt.convention == FourierConvention::Symplectic) {
    lhs = symplectic_resample(lhs);
    h1 = symplectic_resample(h1);
    h2 = symplectic_resample(h2);
    Eigen::Matrix2cd omega;
    omega << 0.0, 1.0, -1.0, 0.0;
    t = -omega * theta * omega;
  }
  const GridFunction rhs = twisted_convolve(h1, h2, t);
  res.residual = max_difference(lhs, rhs);
  res.conclusive = true;
  return res;
}

inline IntertwiningResult verify_intertwining(const GaussianSymbol& f1, const GaussianSymbol& f2,
                                              const ThetaMatrix& theta, double hbar_value,
                                              const IntertwiningOptions& opt = {}) {
  return verify_intertwining(f1, f2, theta.numeric(hbar_value), opt);
}

struct YoungDual {
  double a = 0;
  double rho = 0;
};

/// Conjugate exponent rho' = rho/(rho-1) and a' with (a' rho')^rho (a rho)^rho' = 1.
inline YoungDual young_dual(double a, double rho) {
  require(rho > 1.0 && std::isfinite(rho), "young_dual: rho must be > 1");
  require(a > 0.0 && std::isfinite(a), "young_dual: a must be > 0");
  const double rp = rho / (rho - 1.0);
  return {std::pow(a * rho, -1.0 / (rho - 1.0)) / rp, rp};
}

} // namespace cstar
