#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include <gmpxx.h>

#include "cstar/error.hpp"

namespace cstar {

template <class T>
struct LpTraits;

template <>
struct LpTraits<double> {
  static constexpr double eps = 1e-11;
  static bool negative(double v) { return v < -eps; }
  static bool positive(double v) { return v > eps; }
  static void normalize(double&) {}
};

template <>
struct LpTraits<mpq_class> {
  static bool negative(const mpq_class& v) { return sgn(v) < 0; }
  static bool positive(const mpq_class& v) { return sgn(v) > 0; }
  static void normalize(mpq_class& v) { v.canonicalize(); }
};

enum class Sense { LessEqual, GreaterEqual, Equal };

template <class T>
struct LpConstraint {
  std::vector<T> a;
  Sense sense = Sense::LessEqual;
  T b = 0;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <class T>
struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  T value = 0;
  std::vector<T> x;
};

/// minimize c.x subject to the constraints and x >= 0. Dense two-phase
/// tableau simplex; Bland's rule for both entering and leaving variables.
template <class T>
LpResult<T> simplex(const std::vector<T>& c, const std::vector<LpConstraint<T>>& rows) {
  using Tr = LpTraits<T>;
  const std::size_t n = c.size();
  const std::size_t m = rows.size();
  for (const auto& r : rows)
    if (r.a.size() != n) throw DimensionMismatch("simplex: constraint", n, r.a.size());

  // columns: originals, one slack/surplus per inequality, one artificial per >= or = row
  std::size_t n_slack = 0, n_art = 0;
  std::vector<Sense> sense(m);
  std::vector<bool> flip(m);
  for (std::size_t i = 0; i < m; ++i) {
    T b = rows[i].b;
    Tr::normalize(b);
    flip[i] = Tr::negative(b);
    Sense s = rows[i].sense;
    if (flip[i] && s != Sense::Equal) s = s == Sense::LessEqual ? Sense::GreaterEqual : Sense::LessEqual;
    sense[i] = s;
    if (s != Sense::Equal) ++n_slack;
    if (s != Sense::LessEqual) ++n_art;
  }
  const std::size_t art0 = n + n_slack, cols = art0 + n_art;
  std::vector<std::vector<T>> tab(m, std::vector<T>(cols + 1, T(0)));
  std::vector<std::size_t> basis(m);
  std::size_t si = n, ai = art0;
  for (std::size_t i = 0; i < m; ++i) {
    const T sign = flip[i] ? T(-1) : T(1);
    for (std::size_t j = 0; j < n; ++j) {
      tab[i][j] = sign * rows[i].a[j];
      Tr::normalize(tab[i][j]);
    }
    tab[i][cols] = sign * rows[i].b;
    Tr::normalize(tab[i][cols]);
    if (sense[i] == Sense::LessEqual) {
      tab[i][si] = 1;
      basis[i] = si++;
    } else {
      if (sense[i] == Sense::GreaterEqual) tab[i][si++] = -1;
      tab[i][ai] = 1;
      basis[i] = ai++;
    }
  }

  auto pivot = [&](std::size_t r, std::size_t col, std::vector<T>& obj) {
    const T pv = tab[r][col];
    for (auto& v : tab[r]) v /= pv;
    for (std::size_t i = 0; i < tab.size(); ++i) {
      if (i == r || tab[i][col] == T(0)) continue;
      const T f = tab[i][col];
      for (std::size_t j = 0; j <= cols; ++j) tab[i][j] -= f * tab[r][j];
    }
    if (obj[col] != T(0)) {
      const T f = obj[col];
      for (std::size_t j = 0; j <= cols; ++j) obj[j] -= f * tab[r][j];
    }
    basis[r] = col;
  };

  // reduced-cost row for cost vector cost (last entry holds -objective)
  auto price = [&](const std::vector<T>& cost) {
    std::vector<T> obj(cost);
    obj.resize(cols + 1, T(0));
    for (std::size_t i = 0; i < tab.size(); ++i) {
      const T cb = obj[basis[i]];
      if (cb == T(0)) continue;
      for (std::size_t j = 0; j <= cols; ++j) obj[j] -= cb * tab[i][j];
    }
    return obj;
  };

  // returns false when unbounded
  auto run = [&](std::vector<T>& obj, std::size_t allowed) {
    for (;;) {
      std::size_t enter = allowed;
      for (std::size_t j = 0; j < allowed; ++j)
        if (Tr::negative(obj[j])) {
          enter = j;
          break;
        }
      if (enter == allowed) return true;
      std::size_t leave = tab.size();
      T best = 0;
      for (std::size_t i = 0; i < tab.size(); ++i) {
        if (!Tr::positive(tab[i][enter])) continue;
        const T ratio = tab[i][cols] / tab[i][enter];
        if (leave == tab.size() || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == tab.size()) return false;
      pivot(leave, enter, obj);
    }
  };

  LpResult<T> res;
  if (n_art > 0) {
    std::vector<T> cost1(cols, T(0));
    for (std::size_t j = art0; j < cols; ++j) cost1[j] = 1;
    std::vector<T> obj = price(cost1);
    run(obj, cols);
    if (Tr::positive(-obj[cols])) {
      res.status = LpStatus::Infeasible;
      return res;
    }
    // drive zero-valued artificials out of the basis; drop redundant rows
    for (std::size_t i = 0; i < tab.size();) {
      if (basis[i] < art0) {
        ++i;
        continue;
      }
      std::size_t col = art0;
      for (std::size_t j = 0; j < art0; ++j)
        if (Tr::positive(tab[i][j]) || Tr::negative(tab[i][j])) {
          col = j;
          break;
        }
      if (col == art0) {
        tab.erase(tab.begin() + static_cast<std::ptrdiff_t>(i));
        basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(i));
        continue;
      }
      pivot(i, col, obj);
      ++i;
    }
  }
  std::vector<T> cost2(cols, T(0));
  for (std::size_t j = 0; j < n; ++j) {
    cost2[j] = c[j];
    Tr::normalize(cost2[j]);
  }
  std::vector<T> obj = price(cost2);
  if (!run(obj, art0)) {
    res.status = LpStatus::Unbounded;
    return res;
  }
  res.status = LpStatus::Optimal;
  res.value = -obj[cols];
  res.x.assign(n, T(0));
  for (std::size_t i = 0; i < tab.size(); ++i)
    if (basis[i] < n) res.x[basis[i]] = tab[i][cols];
  return res;
}

} // namespace cstar
