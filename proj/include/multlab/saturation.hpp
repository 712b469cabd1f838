#pragma once

#include "multlab/error.hpp"
#include "multlab/monomial_ideal.hpp"

#include <cstdint>
#include <deque>
#include <unordered_set>

namespace multlab {

/// (I : x_j^inf): drop the j-th coordinate of every generator.
inline MonomialIdeal colon_variable_infinity(const MonomialIdeal& I, std::size_t j) {
  std::vector<Exponent> all = I.gens();
  for (auto& g : all) g[j] = 0;
  return MonomialIdeal(I.dim(), std::move(all));
}

/// I^sat = (I : m^inf), computed as the intersection of (I : x_j^inf) over j.
/// The two agree because (x_1^k, ..., x_d^k) and m^k are cofinal.
inline MonomialIdeal saturation(const MonomialIdeal& I) {
  if (I.is_zero()) throw ZeroIdealError("saturation of the zero ideal");
  MonomialIdeal acc = colon_variable_infinity(I, 0);
  for (std::size_t j = 1; j < I.dim(); ++j) acc = intersect(acc, colon_variable_infinity(I, j));
  return acc;
}

/// Saturation by iterating J <- (J : m) to a fixpoint.
inline MonomialIdeal saturation_by_colon_iteration(const MonomialIdeal& I, std::int64_t max_steps = 1'000'000) {
  if (I.is_zero()) throw ZeroIdealError("saturation of the zero ideal");
  const MonomialIdeal m = maximal_ideal(RingContext(I.dim()));
  MonomialIdeal cur = I;
  for (std::int64_t step = 0; step < max_steps; ++step) {
    MonomialIdeal next = colon(cur, m);
    if (next == cur) return cur;
    cur = std::move(next);
  }
  throw InternalError("saturation did not stabilize");
}

inline constexpr std::int64_t kDefaultBfsCap = 10'000'000;

/// Length of I^sat / I, i.e. of H^0_m(R/I): the monomials of I^sat outside I,
/// found by an upward breadth-first search from the generators of I^sat that
/// never steps into I.
inline std::int64_t sat_quotient_length(const MonomialIdeal& I, std::int64_t cap = kDefaultBfsCap) {
  if (I.is_zero()) throw ZeroIdealError("saturation quotient of the zero ideal");
  const MonomialIdeal sat = saturation(I);
  std::unordered_set<Exponent, ExponentHash> seen;
  std::deque<Exponent> queue;
  for (const auto& g : sat.gens()) {
    if (!contains(I, g) && seen.insert(g).second) queue.push_back(g);
  }
  while (!queue.empty()) {
    if (static_cast<std::int64_t>(seen.size()) > cap) {
      throw InternalError("saturation quotient search exceeded " + std::to_string(cap) + " monomials");
    }
    Exponent cur = std::move(queue.front());
    queue.pop_front();
    for (std::size_t j = 0; j < cur.dim(); ++j) {
      Exponent up = cur;
      up[j] = checked_add(up[j], 1);
      if (contains(I, up) || seen.count(up)) continue;
      seen.insert(up);
      queue.push_back(std::move(up));
    }
  }
  return static_cast<std::int64_t>(seen.size());
}

}  // namespace multlab
