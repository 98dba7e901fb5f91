#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <iomanip>
#include <istream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <fftw3.h>

#include "cstar/coeff.hpp"
#include "cstar/error.hpp"

namespace cstar {

/// Complex samples on the box prod_j [-L_j, L_j) with N_j points per axis,
/// x_k = -L + k h, h = 2L/N. Samples are row-major (last axis fastest).
class GridFunction {
public:
  GridFunction() = default;
  GridFunction(std::vector<int> N, std::vector<double> L) : N_(std::move(N)), L_(std::move(L)) {
    if (N_.empty() || N_.size() != L_.size()) throw InvalidArgument("GridFunction: need one N and one L per axis");
    std::size_t total = 1;
    for (std::size_t j = 0; j < N_.size(); ++j) {
      if (N_[j] < 2 || (N_[j] & (N_[j] - 1)) != 0)
        throw InvalidArgument("GridFunction: N_" + std::to_string(j + 1) + " must be a power of two >= 2");
      if (!(L_[j] > 0) || !std::isfinite(L_[j])) throw InvalidArgument("GridFunction: L must be positive");
      total *= static_cast<std::size_t>(N_[j]);
    }
    samples_.assign(total, 0.0);
  }

  /// Square grid: same N and L on every axis.
  static GridFunction square(std::size_t d, int N, double L) {
    return GridFunction(std::vector<int>(d, N), std::vector<double>(d, L));
  }

  template <class F>
  static GridFunction sample(std::vector<int> N, std::vector<double> L, F&& fn) {
    GridFunction g(std::move(N), std::move(L));
    std::vector<double> x(g.dim());
    for (std::size_t i = 0; i < g.size(); ++i) {
      g.point(i, x);
      g.samples_[i] = fn(std::span<const double>(x));
    }
    g.check_finite();
    return g;
  }

  std::size_t dim() const { return N_.size(); }
  std::size_t size() const { return samples_.size(); }
  int N(std::size_t j) const { return N_[j]; }
  double L(std::size_t j) const { return L_[j]; }
  const std::vector<int>& Ns() const { return N_; }
  const std::vector<double>& Ls() const { return L_; }
  double spacing(std::size_t j) const { return 2.0 * L_[j] / N_[j]; }
  double coordinate(std::size_t j, int k) const { return -L_[j] + k * spacing(j); }

  std::vector<cplx>& samples() { return samples_; }
  const std::vector<cplx>& samples() const { return samples_; }
  cplx& operator[](std::size_t i) { return samples_[i]; }
  cplx operator[](std::size_t i) const { return samples_[i]; }

  /// Coordinates of flat sample i.
  void point(std::size_t i, std::vector<double>& x) const {
    x.resize(dim());
    for (std::size_t j = dim(); j-- > 0;) {
      const int k = static_cast<int>(i % static_cast<std::size_t>(N_[j]));
      i /= static_cast<std::size_t>(N_[j]);
      x[j] = coordinate(j, k);
    }
  }

  bool same_grid(const GridFunction& o) const { return N_ == o.N_ && L_ == o.L_; }

  /// Grid of the transform: Nyquist box L' = N pi / (2L) with the same N.
  GridFunction dual_grid() const {
    std::vector<double> Ld(dim());
    for (std::size_t j = 0; j < dim(); ++j) Ld[j] = N_[j] * std::numbers::pi / (2.0 * L_[j]);
    return GridFunction(N_, Ld);
  }

  /// Largest |sample| with a first or last index on some axis.
  double edge_magnitude() const {
    double m = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      std::size_t r = i;
      bool edge = false;
      for (std::size_t j = dim(); j-- > 0;) {
        const int kj = static_cast<int>(r % static_cast<std::size_t>(N_[j]));
        r /= static_cast<std::size_t>(N_[j]);
        if (kj == 0 || kj == N_[j] - 1) edge = true;
      }
      if (edge) m = std::max(m, std::abs(samples_[i]));
    }
    return m;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& c : samples_) m = std::max(m, std::abs(c));
    return m;
  }

  void check_finite() const {
    for (const auto& c : samples_)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw InvalidArgument("GridFunction: non-finite sample");
  }

  GridFunction& operator-=(const GridFunction& o) {
    if (!same_grid(o)) throw InvalidArgument("GridFunction: grid mismatch");
    for (std::size_t i = 0; i < size(); ++i) samples_[i] -= o.samples_[i];
    return *this;
  }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }

private:
  std::vector<int> N_;
  std::vector<double> L_;
  std::vector<cplx> samples_;
};

/// sup |a - b| over a common grid.
inline double max_difference(const GridFunction& a, const GridFunction& b) { return (a - b).max_abs(); }

inline constexpr double kEdgeDecayThreshold = 1e-10;

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

} // namespace detail

/// Continuum-normalized transform (2 pi)^{-d/2} int e^{-i sigma.x} f(x) dx,
/// sampled on f.dual_grid(). With `inverse` the sign of the exponent flips and
/// the result lives on the dual grid of the input, so fourier(fourier(f), true)
/// returns f on its original grid.
inline GridFunction fourier(const GridFunction& f, bool inverse = false, Warnings* warnings = nullptr) {
  const double edge = f.edge_magnitude();
  if (edge > kEdgeDecayThreshold && warnings) {
    std::ostringstream os;
    os << "fourier: input not decayed at the box boundary (edge magnitude " << std::scientific
       << std::setprecision(3) << edge << ")";
    warnings->add(os.str());
  }
  const std::size_t d = f.dim();
  GridFunction out = f.dual_grid();
  const double s = inverse ? 1.0 : -1.0;

  std::vector<cplx> buf(f.samples());
  // (-1)^k shifts the origin of the output index to the grid centre
  for (std::size_t i = 0; i < buf.size(); ++i) {
    std::size_t r = i;
    int parity = 0;
    for (std::size_t j = d; j-- > 0;) {
      parity += static_cast<int>(r % static_cast<std::size_t>(f.N(j)));
      r /= static_cast<std::size_t>(f.N(j));
    }
    if (parity % 2) buf[i] = -buf[i];
  }

  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    auto* data = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan plan = fftw_plan_dft(static_cast<int>(d), f.Ns().data(), data, data,
                                   inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }

  double scale = 1.0;
  for (std::size_t j = 0; j < d; ++j) scale *= f.spacing(j) / std::sqrt(2.0 * std::numbers::pi);
  std::vector<double> y(d);
  for (std::size_t i = 0; i < buf.size(); ++i) {
    out.point(i, y);
    double phase = 0.0;
    for (std::size_t j = 0; j < d; ++j) phase -= s * y[j] * f.L(j);
    out[i] = scale * buf[i] * std::polar(1.0, phase);
  }
  return out;
}

/// Text format: first line "d,N_1,..,N_d,L_1,..,L_d", then one "re,im" line
/// per sample in row-major order.
inline void write_grid_csv(std::ostream& os, const GridFunction& g) {
  os << g.dim();
  for (int n : g.Ns()) os << ',' << n;
  os << std::setprecision(17);
  for (double l : g.Ls()) os << ',' << l;
  os << '\n';
  for (const auto& c : g.samples()) os << c.real() << ',' << c.imag() << '\n';
}

inline GridFunction read_grid_csv(std::istream& is) {
  auto split = [](const std::string& line) {
    std::vector<std::string> parts;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    return parts;
  };
  auto number = [](const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ParseError("grid csv: not a number: '" + s + "'");
    }
    while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
    if (used != s.size()) throw ParseError("grid csv: not a number: '" + s + "'");
    return v;
  };
  std::string line;
  if (!std::getline(is, line)) throw ParseError("grid csv: missing header");
  const auto head = split(line);
  if (head.empty()) throw ParseError("grid csv: empty header");
  const double dd = number(head[0]);
  if (dd < 1 || dd != std::floor(dd)) throw ParseError("grid csv: bad dimension");
  const auto d = static_cast<std::size_t>(dd);
  if (head.size() != 1 + 2 * d) throw ParseError("grid csv: header must be d,N_1..N_d,L_1..L_d");
  std::vector<int> N(d);
  std::vector<double> L(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double n = number(head[1 + j]);
    if (n != std::floor(n) || n < 1 || n > 1 << 20) throw ParseError("grid csv: bad point count");
    N[j] = static_cast<int>(n);
    L[j] = number(head[1 + d + j]);
  }
  GridFunction g;
  try {
    g = GridFunction(N, L);
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("grid csv: ") + e.what());
  }
  std::size_t i = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto parts = split(line);
    if (parts.size() != 2) throw ParseError("grid csv: sample line must be re,im");
    if (i >= g.size()) throw ParseError("grid csv: too many samples");
    g[i++] = cplx(number(parts[0]), number(parts[1]));
  }
  if (i != g.size()) throw ParseError("grid csv: expected " + std::to_string(g.size()) + " samples, got " +
                                      std::to_string(i));
  try {
    g.check_finite();
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("grid csv: ") + e.what());
  }
  return g;
}

} // namespace cstar
