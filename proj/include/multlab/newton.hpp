#pragma once

#include "multlab/error.hpp"
#include "multlab/exponent.hpp"
#include "multlab/monomial_ideal.hpp"
#include "multlab/rational.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace multlab {

/// Supporting half-space normal . x >= rhs of a Newton polyhedron; normal >= 0.
struct Facet {
  std::vector<Coord> normal;
  Coord rhs = 0;

  bool satisfied_by(std::span<const Coord> x) const {
    __int128 s = 0;
    for (std::size_t j = 0; j < normal.size(); ++j) s += static_cast<__int128>(normal[j]) * x[j];
    return s >= rhs;
  }

  friend auto operator<=>(const Facet&, const Facet&) = default;
  friend bool operator==(const Facet&, const Facet&) = default;
};

namespace detail {

inline Coord det(std::vector<std::vector<Coord>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  if (n == 2) return checked_add(checked_mul(m[0][0], m[1][1]), -checked_mul(m[0][1], m[1][0]));
  Coord total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c] == 0) continue;
    std::vector<std::vector<Coord>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Coord> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != c) row.push_back(m[r][k]);
      }
      minor.push_back(std::move(row));
    }
    Coord term = checked_mul(m[0][c], det(std::move(minor)));
    total = checked_add(total, (c % 2 == 0) ? term : -term);
  }
  return total;
}

/// Vector orthogonal to the d-1 rows of `rows` (generalized cross product).
inline std::vector<Coord> orthogonal_complement(const std::vector<std::vector<Coord>>& rows, std::size_t d) {
  std::vector<Coord> n(d);
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<std::vector<Coord>> minor;
    for (const auto& r : rows) {
      std::vector<Coord> row;
      for (std::size_t k = 0; k < d; ++k) {
        if (k != i) row.push_back(r[k]);
      }
      minor.push_back(std::move(row));
    }
    Coord v = det(std::move(minor));
    n[i] = (i % 2 == 0) ? v : -v;
  }
  return n;
}

/// Normalizes a candidate normal to a nonnegative primitive vector; false if
/// it has mixed signs or vanishes.
inline bool orient_normal(std::vector<Coord>& n) {
  bool pos = false, neg = false;
  for (Coord c : n) {
    pos |= c > 0;
    neg |= c < 0;
  }
  if (pos == neg) return false;
  Coord g = 0;
  for (Coord& c : n) {
    if (neg) c = -c;
    g = std::gcd(g, c);
  }
  for (Coord& c : n) c /= g;
  return true;
}

inline Coord dot(std::span<const Coord> a, std::span<const Coord> b) {
  Coord s = 0;
  for (std::size_t j = 0; j < a.size(); ++j) s = checked_add(s, checked_mul(a[j], b[j]));
  return s;
}

inline std::vector<Facet> facets_2d(const std::vector<Exponent>& gens) {
  // gens: lex sorted antichain, so first coordinate ascending, second descending.
  std::vector<const Exponent*> hull;
  auto cross = [](const Exponent& o, const Exponent& a, const Exponent& b) {
    return static_cast<__int128>(a[0] - o[0]) * (b[1] - o[1]) - static_cast<__int128>(a[1] - o[1]) * (b[0] - o[0]);
  };
  for (const auto& p : gens) {
    while (hull.size() >= 2 && cross(*hull[hull.size() - 2], *hull.back(), p) <= 0) hull.pop_back();
    hull.push_back(&p);
  }
  std::vector<Facet> out;
  out.push_back({{1, 0}, (*hull.front())[0]});
  out.push_back({{0, 1}, (*hull.back())[1]});
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    const Exponent& p = *hull[i];
    const Exponent& q = *hull[i + 1];
    std::vector<Coord> n{p[1] - q[1], q[0] - p[0]};
    orient_normal(n);
    Coord rhs = dot(n, p.coords());
    out.push_back({std::move(n), rhs});
  }
  return out;
}

/// Facets of conv(gens) + R^d_{>=0} by enumerating every hyperplane spanned by
/// k generators and d-k coordinate directions, keeping the valid ones.
inline std::vector<Facet> facets_general(const std::vector<Exponent>& gens, std::size_t d) {
  std::vector<Facet> out;
  const std::size_t G = gens.size();
  std::vector<std::size_t> pts;
  std::vector<std::size_t> dirs;

  auto consider = [&]() {
    std::vector<std::vector<Coord>> rows;
    const Exponent& base = gens[pts[0]];
    for (std::size_t i = 1; i < pts.size(); ++i) {
      std::vector<Coord> r(d);
      for (std::size_t j = 0; j < d; ++j) r[j] = gens[pts[i]][j] - base[j];
      rows.push_back(std::move(r));
    }
    for (std::size_t e : dirs) {
      std::vector<Coord> r(d, 0);
      r[e] = 1;
      rows.push_back(std::move(r));
    }
    std::vector<Coord> n = orthogonal_complement(rows, d);
    if (!orient_normal(n)) return;
    Coord rhs = dot(n, base.coords());
    for (const auto& g : gens) {
      if (dot(n, g.coords()) < rhs) return;
    }
    out.push_back({std::move(n), rhs});
  };

  for (std::size_t k = 1; k <= d && k <= G; ++k) {
    // choose k generator indices and d-k coordinate directions
    std::vector<std::size_t> pi(k);
    std::iota(pi.begin(), pi.end(), 0);
    while (true) {
      std::size_t nd = d - k;
      std::vector<std::size_t> di(nd);
      std::iota(di.begin(), di.end(), 0);
      while (true) {
        pts = pi;
        dirs = di;
        consider();
        // next direction combination
        std::size_t i = nd;
        while (i > 0 && di[i - 1] == d - nd + i - 1) --i;
        if (i == 0) break;
        ++di[i - 1];
        for (std::size_t j = i; j < nd; ++j) di[j] = di[j - 1] + 1;
      }
      std::size_t i = k;
      while (i > 0 && pi[i - 1] == G - k + i - 1) --i;
      if (i == 0) break;
      ++pi[i - 1];
      for (std::size_t j = i; j < k; ++j) pi[j] = pi[j - 1] + 1;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

/// Newton polyhedron conv(gens) + R^d_{>=0} of a nonzero monomial ideal, in
/// inequality form, together with the box [0, M_1] x ... x [0, M_d] of
/// componentwise generator maxima. Every minimal lattice point lies in that box:
/// a point with a_j > M_j stays in the polyhedron after lowering a_j by one.
class NewtonPolyhedron {
 public:
  explicit NewtonPolyhedron(const MonomialIdeal& I) : dim_(I.dim()), box_(I.dim()) {
    if (I.is_zero()) throw ZeroIdealError("Newton polyhedron of the zero ideal is empty");
    for (std::size_t j = 0; j < dim_; ++j) box_[j] = I.max_coord(j);
    if (dim_ == 1) {
      facets_.push_back({{1}, I.gens().front()[0]});
    } else if (dim_ == 2) {
      facets_ = detail::facets_2d(I.gens());
    } else {
      facets_ = detail::facets_general(I.gens(), dim_);
    }
    std::sort(facets_.begin(), facets_.end());
    facets_.erase(std::unique(facets_.begin(), facets_.end()), facets_.end());
  }

  std::size_t dim() const { return dim_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const std::vector<Coord>& box() const { return box_; }

  bool contains(std::span<const Coord> a) const {
    for (Coord c : a) {
      if (c < 0) return false;
    }
    return std::all_of(facets_.begin(), facets_.end(), [&](const Facet& f) { return f.satisfied_by(a); });
  }
  bool contains(const Exponent& a) const {
    if (a.dim() != dim_) throw DimensionError("point has wrong dimension for Newton polyhedron");
    return contains(a.coords());
  }

  /// k * NP(I), which is NP(I^k).
  NewtonPolyhedron scaled(Coord k) const {
    NewtonPolyhedron out = *this;
    for (auto& f : out.facets_) f.rhs = checked_mul(f.rhs, k);
    for (auto& b : out.box_) b = checked_mul(b, k);
    return out;
  }

  /// Monomial ideal generated by the lattice points of the polyhedron.
  MonomialIdeal lattice_ideal() const {
    const std::size_t d = dim_;
    std::vector<Exponent> gens;
    std::vector<Coord> prefix(d, 0);
    auto solve_last = [&](std::vector<Coord>& a) -> bool {
      // least admissible last coordinate given the first d-1
      Coord need = 0;
      for (const auto& f : facets_) {
        __int128 partial = 0;
        for (std::size_t j = 0; j + 1 < d; ++j) partial += static_cast<__int128>(f.normal[j]) * a[j];
        __int128 gap = static_cast<__int128>(f.rhs) - partial;
        Coord w = f.normal[d - 1];
        if (w == 0) {
          if (gap > 0) return false;
          continue;
        }
        if (gap > 0) {
          __int128 q = (gap + w - 1) / w;
          need = std::max<Coord>(need, static_cast<Coord>(q));
        }
      }
      if (need > box_[d - 1]) return false;
      a[d - 1] = need;
      return true;
    };
    auto rec = [&](auto&& self, std::size_t j) -> void {
      if (j + 1 == d) {
        std::vector<Coord> a = prefix;
        if (!solve_last(a)) return;
        for (std::size_t i = 0; i + 1 < d; ++i) {
          if (a[i] == 0) continue;
          --a[i];
          bool lower_inside = contains(a);
          ++a[i];
          if (lower_inside) return;
        }
        gens.emplace_back(std::move(a));
        return;
      }
      for (Coord c = 0; c <= box_[j]; ++c) {
        prefix[j] = c;
        self(self, j + 1);
      }
      prefix[j] = 0;
    };
    rec(rec, 0);
    return MonomialIdeal(d, std::move(gens));
  }

 private:
  std::size_t dim_;
  std::vector<Coord> box_;
  std::vector<Facet> facets_;
};

namespace detail {

/// Phase-one simplex over exact rationals for
///   lambda >= 0, sum(lambda) = 1, sum_e lambda_e * e <= a.
/// Bland's rule keeps it finite.
inline bool convex_combination_below(const std::vector<Exponent>& gens, const Exponent& a) {
  const std::size_t G = gens.size();
  const std::size_t d = a.dim();
  const std::size_t cols = G + d + 1;  // lambda, slacks, artificial
  const std::size_t rows = d + 1;
  std::vector<std::vector<Rational>> T(rows, std::vector<Rational>(cols + 1));
  for (std::size_t e = 0; e < G; ++e) T[0][e] = 1;
  T[0][G + d] = 1;
  T[0][cols] = 1;
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t e = 0; e < G; ++e) T[j + 1][e] = gens[e][j];
    T[j + 1][G + j] = 1;
    T[j + 1][cols] = a[j];
  }
  std::vector<std::size_t> basis(rows);
  basis[0] = G + d;
  for (std::size_t j = 0; j < d; ++j) basis[j + 1] = G + j;

  // reduced costs for minimizing the artificial variable
  std::vector<Rational> cost(cols + 1);
  for (std::size_t c = 0; c <= cols; ++c) cost[c] = -T[0][c];
  cost[G + d] = 0;

  for (std::size_t iter = 0; iter < 100000; ++iter) {
    std::size_t enter = cols;
    for (std::size_t c = 0; c < cols; ++c) {
      if (cost[c] < 0) {
        enter = c;
        break;
      }
    }
    if (enter == cols) return cost[cols] == 0;
    std::size_t leave = rows;
    Rational best;
    for (std::size_t r = 0; r < rows; ++r) {
      if (T[r][enter] <= 0) continue;
      Rational ratio = T[r][cols] / T[r][enter];
      if (leave == rows || ratio < best || (ratio == best && basis[r] < basis[leave])) {
        best = ratio;
        leave = r;
      }
    }
    if (leave == rows) throw InternalError("unbounded phase-one problem");
    Rational piv = T[leave][enter];
    for (auto& v : T[leave]) v /= piv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == leave || T[r][enter] == 0) continue;
      Rational f = T[r][enter];
      for (std::size_t c = 0; c <= cols; ++c) T[r][c] -= f * T[leave][c];
    }
    Rational f = cost[enter];
    for (std::size_t c = 0; c <= cols; ++c) cost[c] -= f * T[leave][c];
    basis[leave] = enter;
  }
  throw InternalError("simplex iteration limit exceeded");
}

}  // namespace detail

/// a lies in conv(gens(I)) + R^d_{>=0}, decided by exact linear feasibility.
inline bool newton_contains(const MonomialIdeal& I, const Exponent& a) {
  if (I.is_zero()) throw ZeroIdealError("newton_contains on the zero ideal");
  if (a.dim() != I.dim()) throw DimensionError("point " + a.str() + " has wrong dimension for ideal");
  if (contains(I, a)) return true;
  return detail::convex_combination_below(I.gens(), a);
}

/// Integral closure: the monomials whose exponents lie in the Newton polyhedron.
inline MonomialIdeal integral_closure(const MonomialIdeal& I) {
  if (I.is_zero()) throw ZeroIdealError("integral closure of the zero ideal");
  if (I.is_unit()) return I;
  return NewtonPolyhedron(I).lattice_ideal();
}

}  // namespace multlab
