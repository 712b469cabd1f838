#pragma once

#include "multlab/error.hpp"
#include "multlab/rational.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace multlab {

/// Half-space coeffs . x <= bound.
struct HalfSpace {
  std::vector<Rational> coeffs;
  Rational bound;
};

namespace detail {

/// Scales so the first nonzero coefficient has absolute value 1 and merges
/// parallel constraints, keeping the tightest. Returns nullopt when some
/// constraint with zero coefficients is violated (empty polytope).
inline std::optional<std::vector<HalfSpace>> normalize_constraints(std::vector<HalfSpace> hs) {
  std::vector<HalfSpace> out;
  for (auto& h : hs) {
    auto it = std::find_if(h.coeffs.begin(), h.coeffs.end(), [](const Rational& c) { return c != 0; });
    if (it == h.coeffs.end()) {
      if (h.bound < 0) return std::nullopt;
      continue;
    }
    Rational s = abs(*it);
    for (auto& c : h.coeffs) c /= s;
    h.bound /= s;
    auto same = std::find_if(out.begin(), out.end(), [&](const HalfSpace& o) { return o.coeffs == h.coeffs; });
    if (same == out.end()) {
      out.push_back(std::move(h));
    } else if (h.bound < same->bound) {
      same->bound = h.bound;
    }
  }
  return out;
}

inline Rational volume_rec(std::vector<HalfSpace> hs, std::size_t d) {
  auto norm = normalize_constraints(std::move(hs));
  if (!norm) return 0;
  hs = std::move(*norm);
  if (d == 1) {
    std::optional<Rational> lo, hi;
    for (const auto& h : hs) {
      Rational v = h.bound / h.coeffs[0];
      if (h.coeffs[0] > 0) {
        if (!hi || v < *hi) hi = v;
      } else {
        if (!lo || v > *lo) lo = v;
      }
    }
    if (!lo || !hi) throw InternalError("unbounded polytope in volume computation");
    return *hi > *lo ? Rational(*hi - *lo) : Rational(0);
  }
  // Lasserre: vol_d(P) = (1/d) * sum_i bound_i / |a_ik| * vol_{d-1}(facet_i projected along x_k)
  Rational total = 0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const auto& f = hs[i];
    if (f.bound == 0) continue;
    std::size_t k = 0;
    for (std::size_t j = 0; j < d; ++j) {
      if (abs(f.coeffs[j]) > abs(f.coeffs[k])) k = j;
    }
    const Rational akk = f.coeffs[k];
    // substitute x_k = (bound_i - sum_{j != k} a_ij x_j) / a_ik into the rest
    std::vector<HalfSpace> sub;
    for (std::size_t r = 0; r < hs.size(); ++r) {
      if (r == i) continue;
      const auto& h = hs[r];
      HalfSpace s;
      Rational ratio = h.coeffs[k] / akk;
      for (std::size_t j = 0; j < d; ++j) {
        if (j == k) continue;
        s.coeffs.push_back(h.coeffs[j] - ratio * f.coeffs[j]);
      }
      s.bound = h.bound - ratio * f.bound;
      sub.push_back(std::move(s));
    }
    Rational facet = volume_rec(std::move(sub), d - 1);
    if (facet != 0) total += f.bound / abs(akk) * facet;
  }
  return total / d;
}

}  // namespace detail

/// Exact volume of the bounded polytope {x in R^d : a_i . x <= b_i}.
inline Rational polytope_volume(const std::vector<HalfSpace>& constraints, std::size_t d) {
  for (const auto& h : constraints) {
    if (h.coeffs.size() != d) throw DimensionError("half-space has wrong dimension");
  }
  return detail::volume_rec(constraints, d);
}

/// Helpers for the common shapes.
inline HalfSpace nonnegativity(std::size_t d, std::size_t j) {
  HalfSpace h{std::vector<Rational>(d, 0), 0};
  h.coeffs[j] = -1;
  return h;
}

inline HalfSpace upper_bound(std::size_t d, std::size_t j, const Rational& v) {
  HalfSpace h{std::vector<Rational>(d, 0), v};
  h.coeffs[j] = 1;
  return h;
}

}  // namespace multlab
