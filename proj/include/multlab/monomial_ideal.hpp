#pragma once

#include "multlab/error.hpp"
#include "multlab/exponent.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace multlab {

/// The ambient ring k[x_1..x_d] localized at (x_1..x_d); only d matters here.
struct RingContext {
  std::size_t dim;

  explicit RingContext(std::size_t d) : dim(d) {
    if (d == 0) throw DimensionError("ring dimension must be at least 1");
  }
  friend bool operator==(const RingContext&, const RingContext&) = default;
};

namespace detail {

inline void require_dims(const std::vector<Exponent>& gens, std::size_t d) {
  for (const auto& g : gens) {
    if (g.dim() != d) {
      throw DimensionError("generator " + g.str() + " does not have dimension " + std::to_string(d));
    }
  }
}

/// Minimal elements of a finite point set under componentwise order, lex sorted.
inline std::vector<Exponent> minimal_elements(std::vector<Exponent> pts, std::size_t d) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.empty()) return pts;
  std::vector<Exponent> kept;
  if (d == 1) {
    kept.push_back(pts.front());
    return kept;
  }
  if (d == 2) {
    // Lex order puts every divisor of p before p, so a running min of the
    // second coordinate decides minimality.
    Coord min_b = std::numeric_limits<Coord>::max();
    for (auto& p : pts) {
      if (p[1] < min_b) {
        min_b = p[1];
        kept.push_back(std::move(p));
      }
    }
    return kept;
  }
  for (auto& p : pts) {
    bool dominated = std::any_of(kept.begin(), kept.end(), [&](const Exponent& q) { return q.divides(p); });
    if (!dominated) kept.push_back(std::move(p));
  }
  return kept;
}

}  // namespace detail

/// A monomial ideal stored as its minimal generators (a staircase antichain),
/// sorted lexicographically so that equal ideals compare equal.
class MonomialIdeal {
 public:
  MonomialIdeal(std::size_t dim, std::vector<Exponent> gens) : dim_(dim) {
    if (dim == 0) throw std::invalid_argument("ideal dimension must be at least 1");
    detail::require_dims(gens, dim);
    gens_ = detail::minimal_elements(std::move(gens), dim);
  }

  static MonomialIdeal zero(std::size_t dim) { return MonomialIdeal(dim, {}); }
  static MonomialIdeal unit(std::size_t dim) { return MonomialIdeal(dim, {Exponent(dim)}); }
  static MonomialIdeal principal(const Exponent& e) { return MonomialIdeal(e.dim(), {e}); }

  std::size_t dim() const { return dim_; }
  const std::vector<Exponent>& gens() const { return gens_; }
  std::size_t size() const { return gens_.size(); }
  bool is_zero() const { return gens_.empty(); }
  bool is_unit() const { return gens_.size() == 1 && gens_.front().is_zero(); }

  /// Largest j-th coordinate over the minimal generators.
  Coord max_coord(std::size_t j) const {
    Coord m = 0;
    for (const auto& g : gens_) m = std::max(m, g[j]);
    return m;
  }

  /// Exponent k with x_j^k a minimal generator, if there is one.
  std::optional<Coord> pure_power(std::size_t j) const {
    for (const auto& g : gens_) {
      bool pure = true;
      for (std::size_t i = 0; i < dim_; ++i) {
        if (i != j && g[i] != 0) {
          pure = false;
          break;
        }
      }
      if (pure) return g[j];
    }
    return std::nullopt;
  }

  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      if (i) s += ',';
      s += gens_[i].str();
    }
    return s + "]";
  }

  friend bool operator==(const MonomialIdeal&, const MonomialIdeal&) = default;
  friend std::ostream& operator<<(std::ostream& os, const MonomialIdeal& I) { return os << I.str(); }

 private:
  std::size_t dim_;
  std::vector<Exponent> gens_;
};

inline void require_same_dim(const MonomialIdeal& I, const MonomialIdeal& J) {
  if (I.dim() != J.dim()) {
    throw DimensionError("ideal dimension mismatch: " + std::to_string(I.dim()) + " vs " +
                         std::to_string(J.dim()));
  }
}

inline MonomialIdeal minimalize(std::vector<Exponent> gens, std::size_t dim) {
  return MonomialIdeal(dim, std::move(gens));
}

inline bool contains(const MonomialIdeal& I, const Exponent& a) {
  if (a.dim() != I.dim()) throw DimensionError("point " + a.str() + " has wrong dimension for ideal");
  return std::any_of(I.gens().begin(), I.gens().end(), [&](const Exponent& g) { return g.divides(a); });
}

/// I is contained in J.
inline bool is_subset(const MonomialIdeal& I, const MonomialIdeal& J) {
  require_same_dim(I, J);
  return std::all_of(I.gens().begin(), I.gens().end(), [&](const Exponent& g) { return contains(J, g); });
}

inline MonomialIdeal sum(const MonomialIdeal& I, const MonomialIdeal& J) {
  require_same_dim(I, J);
  std::vector<Exponent> all = I.gens();
  all.insert(all.end(), J.gens().begin(), J.gens().end());
  return MonomialIdeal(I.dim(), std::move(all));
}

inline MonomialIdeal product(const MonomialIdeal& I, const MonomialIdeal& J) {
  require_same_dim(I, J);
  std::vector<Exponent> all;
  all.reserve(I.size() * J.size());
  for (const auto& u : I.gens()) {
    for (const auto& v : J.gens()) all.push_back(u + v);
  }
  return MonomialIdeal(I.dim(), std::move(all));
}

/// I^n by repeated squaring; n = 0 gives the unit ideal.
inline MonomialIdeal power(const MonomialIdeal& I, std::int64_t n) {
  if (n < 0) throw std::invalid_argument("ideal power must be nonnegative");
  MonomialIdeal result = MonomialIdeal::unit(I.dim());
  MonomialIdeal base = I;
  while (n > 0) {
    if (n & 1) result = product(result, base);
    n >>= 1;
    if (n > 0) base = product(base, base);
  }
  return result;
}

inline MonomialIdeal intersect(const MonomialIdeal& I, const MonomialIdeal& J) {
  require_same_dim(I, J);
  std::vector<Exponent> all;
  all.reserve(I.size() * J.size());
  for (const auto& u : I.gens()) {
    for (const auto& v : J.gens()) all.push_back(lcm(u, v));
  }
  return MonomialIdeal(I.dim(), std::move(all));
}

/// (I : x^g).
inline MonomialIdeal colon(const MonomialIdeal& I, const Exponent& g) {
  std::vector<Exponent> all;
  all.reserve(I.size());
  for (const auto& u : I.gens()) all.push_back(quotient(u, g));
  return MonomialIdeal(I.dim(), std::move(all));
}

/// (I : J) as the intersection of (I : x^g) over the generators g of J.
inline MonomialIdeal colon(const MonomialIdeal& I, const MonomialIdeal& J) {
  require_same_dim(I, J);
  if (J.is_zero()) throw ZeroIdealError("colon by the zero ideal is undefined");
  std::optional<MonomialIdeal> acc;
  for (const auto& g : J.gens()) {
    MonomialIdeal q = colon(I, g);
    acc = acc ? intersect(*acc, q) : q;
    if (acc->is_zero()) break;
  }
  return *acc;
}

/// m^k: every exponent of total degree k.
inline MonomialIdeal m_power(const RingContext& ctx, std::int64_t k) {
  if (k < 0) throw std::invalid_argument("power of the maximal ideal must be nonnegative");
  const std::size_t d = ctx.dim;
  std::vector<Exponent> all;
  Exponent cur(d);
  auto rec = [&](auto&& self, std::size_t j, Coord remaining) -> void {
    if (j + 1 == d) {
      cur[j] = remaining;
      all.push_back(cur);
      return;
    }
    for (Coord c = remaining; c >= 0; --c) {
      cur[j] = c;
      self(self, j + 1, remaining - c);
    }
  };
  rec(rec, 0, k);
  return MonomialIdeal(d, std::move(all));
}

inline MonomialIdeal maximal_ideal(const RingContext& ctx) { return m_power(ctx, 1); }

inline bool is_m_primary(const MonomialIdeal& I) {
  if (I.is_zero()) return false;
  for (std::size_t j = 0; j < I.dim(); ++j) {
    if (!I.pure_power(j)) return false;
  }
  return true;
}

/// Pure-power exponents (k_1..k_d) of an m-primary ideal.
inline std::vector<Coord> pure_power_bounds(const MonomialIdeal& I) {
  std::vector<Coord> k(I.dim());
  for (std::size_t j = 0; j < I.dim(); ++j) {
    auto p = I.pure_power(j);
    if (!p) throw NotMPrimaryError("ideal " + I.str() + " is not m-primary (no pure power of x" + std::to_string(j + 1) + ")");
    k[j] = *p;
  }
  return k;
}

/// Number of standard monomials, i.e. the length of R/I.
///
/// For each point of the box over the first d-1 coordinates, the standard
/// monomials above it are those with last coordinate below the least last
/// coordinate of a generator dividing it; that least value is a prefix
/// minimum over the box.
inline std::int64_t colength(const MonomialIdeal& I) {
  const std::vector<Coord> k = pure_power_bounds(I);
  const std::size_t d = I.dim();
  if (d == 1) return k[0];
  if (d == 2) {
    // gens are lex sorted: first coordinate ascending, second descending
    const auto& g = I.gens();
    std::int64_t total = 0;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
      total = checked_add(total, checked_mul(g[i + 1][0] - g[i][0], g[i][1]));
    }
    return total;
  }
  const std::size_t m = d - 1;
  std::vector<std::size_t> stride(m);
  std::size_t cells = 1;
  for (std::size_t j = m; j-- > 0;) {
    stride[j] = cells;
    if (k[j] > 0 && cells > std::size_t{400'000'000} / static_cast<std::size_t>(k[j])) {
      throw InternalError("colength box too large for " + I.str());
    }
    cells *= static_cast<std::size_t>(k[j]);
  }
  if (cells == 0) return 0;
  std::vector<Coord> least(cells, k[d - 1]);
  for (const auto& g : I.gens()) {
    std::size_t idx = 0;
    bool inside = true;
    for (std::size_t j = 0; j < m; ++j) {
      if (g[j] >= k[j]) {
        inside = false;
        break;
      }
      idx += static_cast<std::size_t>(g[j]) * stride[j];
    }
    if (inside) least[idx] = std::min(least[idx], g[d - 1]);
  }
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t idx = 0; idx < cells; ++idx) {
      if ((idx / stride[j]) % static_cast<std::size_t>(k[j]) != 0) {
        least[idx] = std::min(least[idx], least[idx - stride[j]]);
      }
    }
  }
  std::int64_t total = 0;
  for (Coord v : least) total = checked_add(total, v);
  return total;
}

}  // namespace multlab
