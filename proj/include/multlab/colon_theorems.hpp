#pragma once

#include "multlab/error.hpp"
#include "multlab/estimate.hpp"
#include "multlab/family.hpp"
#include "multlab/limits.hpp"
#include "multlab/monomial_ideal.hpp"
#include "multlab/newton.hpp"
#include "multlab/report.hpp"
#include "multlab/saturation.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

namespace multlab {

enum class Relation { at_most, equal, none };

inline const char* relation_name(Relation r) {
  switch (r) {
    case Relation::at_most: return "<=";
    case Relation::equal: return "=";
    case Relation::none: return "n/a";
  }
  return "?";
}

/// Limit of the colon family {(I_n : K)} compared against a reference value.
struct ColonReport {
  std::string family;
  MonomialIdeal K = MonomialIdeal::unit(1);
  LimitEstimate estimate;
  std::optional<double> reference;
  Relation relation = Relation::none;
  std::optional<std::int64_t> witness_w;
  Status status = Status::pass;

  CheckReport report(std::string check) const {
    CheckReport r{std::move(check)};
    r.status = status;
    r.add("family", family);
    r.add("K", K.str());
    r.add("colon_limit", estimate.limit);
    if (reference) r.add("reference", *reference);
    r.add("relation", relation_name(relation));
    if (witness_w) r.add("witness_w", std::to_string(*witness_w));
    r.series = {{"colon", estimate}};
    return r;
  }
};

/// lim d! l(R/(I_n : K)) / n^d, which must not exceed e_W(F).
inline ColonReport colon_limit(const IdealFamily& F, const MonomialIdeal& K, std::int64_t N, const Tolerance& tol,
                               const EvalOptions& opts = {}) {
  ColonReport out;
  out.family = F.descriptor();
  out.K = K;
  out.estimate = ew_multiplicity(colon_family(F, K), N, tol, opts);
  const double ew = ew_multiplicity(F, N, tol, opts).limit;
  out.reference = ew;
  const bool below = out.estimate.limit <= ew + tol.bound(ew);
  out.relation = !below ? Relation::none : (tol.agree(out.estimate.limit, ew) ? Relation::equal : Relation::at_most);
  out.status = below ? Status::pass : Status::fail;
  return out;
}

struct NoetherianColonReport {
  ColonReport power;    // {(I^n : K)}
  ColonReport closure;  // {(closure(I^n) : K)}
  Rational exact;       // e(I)
  Status status = Status::pass;

  CheckReport report() const {
    CheckReport r{"noetherian-colon"};
    r.status = status;
    r.add("e_exact", exact);
    r.add("power_colon_limit", power.estimate.limit);
    r.add("closure_colon_limit", closure.estimate.limit);
    r.series = {{"power", power.estimate}, {"closure", closure.estimate}};
    return r;
  }
};

/// For m-primary I and K, lim d! l(R/(I^n : K)) / n^d equals e(I), and the
/// same holds with closure(I^n) in place of I^n.
inline NoetherianColonReport noetherian_colon_check(const MonomialIdeal& I, const MonomialIdeal& K, std::int64_t N,
                                                    const Tolerance& tol, const EvalOptions& opts = {}) {
  if (!is_m_primary(I)) throw NotMPrimaryError("base ideal " + I.str() + " is not m-primary");
  if (!is_m_primary(K)) throw NotMPrimaryError("colon ideal " + K.str() + " is not m-primary");
  NoetherianColonReport out;
  out.exact = hs_multiplicity_exact(I).value;
  const double e = to_double(out.exact);
  auto run = [&](const IdealFamily& F) {
    ColonReport r;
    r.family = F.descriptor();
    r.K = K;
    r.estimate = ew_multiplicity(colon_family(F, K), N, tol, opts);
    r.reference = e;
    r.relation = tol.agree(r.estimate.limit, e) ? Relation::equal : Relation::none;
    r.status = r.relation == Relation::equal ? Status::pass : Status::fail;
    return r;
  };
  if (I.is_unit()) throw FamilyError("noetherian colon check needs a proper ideal");
  out.power = run(power_family(I));
  out.closure = run(closure_power_family(I));
  bool ok = out.power.status == Status::pass && out.closure.status == Status::pass &&
            tol.agree(out.power.estimate.limit, out.closure.estimate.limit);
  out.status = ok ? Status::pass : Status::fail;
  return out;
}

/// (F(w n) : K) contained in F(w (n-1)) for 1 <= n <= N.
inline bool verify_shift(const IdealFamily& F, const MonomialIdeal& K, std::int64_t w, std::int64_t N) {
  for (std::int64_t n = 1; n <= N; ++n) {
    if (!is_subset(colon(F.eval(w * n), K), F.eval(w * (n - 1)))) return false;
  }
  return true;
}

/// The constructive shift b (t + 1) for a divisorial filtration: b_i is the
/// least value of v_i on K, b their product, and t = max(t_i + 1) where t_i is
/// the positive integer with 1/(t_i + 1) < a_i - ceil(a_i - 1) <= 1/t_i.
inline std::int64_t constructive_shift(const SlabSystem& S, const MonomialIdeal& K) {
  std::int64_t b = 1;
  std::int64_t t = 0;
  for (const auto& s : S.slabs) {
    Coord bi = -1;
    for (const auto& g : K.gens()) {
      Coord v = detail::dot(s.weights, g.coords());
      if (bi < 0 || v < bi) bi = v;
    }
    b = checked_mul(b, bi);
    Rational frac_part = s.threshold - Rational(ceil_of(s.threshold - 1));  // in (0, 1]
    std::int64_t ti = to_int64(floor_of(Rational(1) / frac_part));
    t = std::max(t, ti + 1);
  }
  return checked_mul(b, t + 1);
}

struct ShiftReport {
  std::int64_t constructive_w = 0;
  bool constructive_verified = false;
  std::optional<std::int64_t> least_w;
  LimitEstimate colon_estimate;
  Rational exact;  // d! vol of the slab union
  bool limit_agrees = false;
  Status status = Status::pass;

  CheckReport report() const {
    CheckReport r{"shift"};
    r.status = status;
    r.add("constructive_w", std::to_string(constructive_w));
    r.add("constructive_verified", constructive_verified);
    r.add("least_verified_w", least_w ? std::to_string(*least_w) : std::string("none"));
    r.add("colon_limit", colon_estimate.limit);
    r.add("exact", exact);
    r.add("limit_agrees", limit_agrees);
    r.series = {{"colon", colon_estimate}};
    return r;
  }
};

/// For a divisorial filtration F and proper K, finds w with
/// (F(wn) : K) in F(w(n-1)) for n <= N (both the constructive value and the
/// least verified one up to `cap`) and compares the colon limit with
/// d! vol of the slab union.
inline ShiftReport divisorial_shift(const SlabSystem& S, const MonomialIdeal& K, std::int64_t N, const Tolerance& tol,
                                    const EvalOptions& opts = {}, std::int64_t cap = 64) {
  S.validate();
  if (K.is_zero() || K.is_unit()) throw PreconditionError("shift needs a nonzero proper ideal K");
  if (K.dim() != S.dim()) throw DimensionError("K dimension differs from slab system");
  const IdealFamily F = divisorial_family(S);
  ShiftReport out;
  out.constructive_w = constructive_shift(S, K);
  out.constructive_verified = verify_shift(F, K, out.constructive_w, N);
  const std::int64_t search_top = out.constructive_verified ? std::min(cap, out.constructive_w) : cap;
  for (std::int64_t w = 1; w <= search_top; ++w) {
    if (verify_shift(F, K, w, N)) {
      out.least_w = w;
      break;
    }
  }
  out.colon_estimate = ew_multiplicity(colon_family(F, K), N, tol, opts);
  out.exact = slab_union_volume(S).value * factorial(S.dim());
  out.limit_agrees = tol.agree(out.colon_estimate.limit, to_double(out.exact));
  const bool verified = out.constructive_verified || out.least_w.has_value();
  if (!verified) throw InternalError("no shift w <= " + std::to_string(cap) + " verified up to n = " + std::to_string(N));
  out.status = out.limit_agrees ? Status::pass : Status::fail;
  return out;
}

struct ReesReport {
  bool closures_equal = true;
  std::optional<std::int64_t> first_closure_difference;
  bool limits_equal = false;
  LimitEstimate left, right;
  Status status = Status::pass;

  std::string verdict() const {
    if (closures_equal && limits_equal) return "consistent (closures equal, limits equal)";
    if (!closures_equal && !limits_equal) return "consistent (closures differ, limits differ)";
    if (!closures_equal) return "inconclusive at horizon (limits equal, closures differ)";
    return "inconsistent (closures equal, limits differ)";
  }

  CheckReport report() const {
    CheckReport r{"rees"};
    r.status = status;
    r.add("closures_equal_at_horizon", closures_equal);
    if (first_closure_difference) r.add("first_closure_difference_n", std::to_string(*first_closure_difference));
    r.add("left_colon_limit", left.limit);
    r.add("right_colon_limit", right.limit);
    r.add("limits_equal", limits_equal);
    r.add("verdict", verdict());
    r.series = {{"left", left}, {"right", right}};
    return r;
  }
};

/// Finite-horizon shadow of: for F(n) in G(n), the integral closures of the
/// Rees algebras agree iff the (. : K) colon limits agree. Degreewise closure
/// equality up to N is only a necessary condition for equal closed algebras,
/// so equal limits with differing closures is reported as inconclusive.
inline ReesReport rees_horizon_check(const IdealFamily& F, const IdealFamily& G, const MonomialIdeal& K,
                                     std::int64_t N, const Tolerance& tol, const EvalOptions& opts = {}) {
  if (F.dim() != G.dim()) throw DimensionError("Rees check on families of different dimension");
  for (std::int64_t n = 1; n <= N; ++n) {
    if (!is_subset(F.eval(n), G.eval(n))) {
      throw PreconditionError("F(" + std::to_string(n) + ") is not contained in G(" + std::to_string(n) + ")");
    }
  }
  ReesReport out;
  auto equal = parallel_map<char>(static_cast<std::size_t>(N), opts.threads, [&](std::size_t i) -> char {
    const auto n = static_cast<std::int64_t>(i) + 1;
    return integral_closure(F.eval(n)) == integral_closure(G.eval(n));
  });
  for (std::int64_t n = 1; n <= N; ++n) {
    if (!equal[static_cast<std::size_t>(n - 1)]) {
      out.closures_equal = false;
      out.first_closure_difference = n;
      break;
    }
  }
  out.left = ew_multiplicity(colon_family(F, K), N, tol, opts);
  out.right = ew_multiplicity(colon_family(G, K), N, tol, opts);
  out.limits_equal = tol.agree(out.left.limit, out.right.limit);
  if (out.closures_equal == out.limits_equal) {
    out.status = Status::pass;
  } else {
    out.status = out.closures_equal ? Status::fail : Status::inconclusive;
  }
  return out;
}

struct MinkowskiEqualityReport {
  MinkowskiReport minkowski;
  std::optional<std::pair<std::int64_t, std::int64_t>> rescaling;
  std::int64_t search_cap = 0;
  Status status = Status::pass;

  CheckReport report() const {
    CheckReport r = minkowski.report();
    r.check = "minkowski-equality";
    r.status = status;
    r.add("rescaling",
          rescaling ? "(" + std::to_string(rescaling->first) + "," + std::to_string(rescaling->second) + ")"
                    : "none with a,b <= " + std::to_string(search_cap));
    return r;
  }
};

/// Equality in the Minkowski inequality for {(F(n) : K)}, {(G(n) : K)} versus
/// existence of a, b with closure(F(an)) = closure(G(bn)), the latter searched
/// for a, b <= cap and n <= search_horizon.
inline MinkowskiEqualityReport minkowski_equality_check(const IdealFamily& F, const IdealFamily& G,
                                                        const MonomialIdeal& K, std::int64_t N, const Tolerance& tol,
                                                        const EvalOptions& opts = {}, std::int64_t cap = 12,
                                                        std::int64_t search_horizon = 20) {
  if (F.kind() != FamilyKind::divisorial || G.kind() != FamilyKind::divisorial) {
    throw PreconditionError("Minkowski equality check expects divisorial families");
  }
  MinkowskiEqualityReport out;
  out.search_cap = cap;
  out.minkowski = minkowski_check(colon_family(F, K), colon_family(G, K), N, tol, opts);
  for (std::int64_t a = 1; a <= cap && !out.rescaling; ++a) {
    for (std::int64_t b = 1; b <= cap; ++b) {
      bool same = true;
      for (std::int64_t n = 1; n <= search_horizon && same; ++n) {
        same = integral_closure(F.eval(a * n)) == integral_closure(G.eval(b * n));
      }
      if (same) {
        out.rescaling = std::make_pair(a, b);
        break;
      }
    }
  }
  const bool eq = out.minkowski.equality;
  if (!out.minkowski.holds) {
    out.status = Status::fail;
  } else if (eq == out.rescaling.has_value()) {
    out.status = Status::pass;
  } else {
    out.status = eq ? Status::inconclusive : Status::fail;
  }
  return out;
}

struct WeakEpReport {
  LimitEstimate estimate;
  std::int64_t r = 0;
  bool k_m_primary = false;
  bool saturation_identity = true;
  std::optional<std::int64_t> first_identity_failure;
  std::optional<LimitEstimate> epsilon;
  bool bounded_by_epsilon = true;
  Status status = Status::pass;

  CheckReport report() const {
    CheckReport c{"weakep"};
    c.status = status;
    c.add("r", std::to_string(r));
    c.add("weakep_limit", estimate.limit);
    c.add("converged", estimate.converged);
    if (k_m_primary) {
      c.add("saturation_identity", saturation_identity);
      if (first_identity_failure) c.add("first_identity_failure_n", std::to_string(*first_identity_failure));
      c.add("epsilon", epsilon->limit);
      c.add("bounded_by_epsilon", bounded_by_epsilon);
    }
    c.series = {{"weakep", estimate}};
    if (epsilon) c.series.emplace_back("epsilon", *epsilon);
    return c;
  }
};

/// lim d! l(H^0_m(R/(I_n : K))) / n^d for a filtration satisfying A(r). With K
/// m-primary, also checks (I_n : K)^sat = I_n^sat and the bound by epsilon(F).
inline WeakEpReport weakep_limit(const IdealFamily& F, const MonomialIdeal& K, std::int64_t r, std::int64_t N,
                                 const Tolerance& tol, const EvalOptions& opts = {}) {
  if (r < 1) throw PreconditionError("weakep needs a declared A(r) exponent r >= 1");
  auto ar = ar_check(F, r, N);
  if (!ar.passed) {
    throw PreconditionError("A(" + std::to_string(r) + ") fails at n = " + std::to_string(*ar.first_failure));
  }
  auto filt = verify_filtration(F, N);
  if (!filt.passed) throw PreconditionError("family is not a filtration at n = " + std::to_string(*filt.first_failure));
  WeakEpReport out;
  out.r = r;
  const IdealFamily Q = colon_family(F, K);
  out.estimate = fit_limit(sat_length_sequence(Q, sample_ladder(N), opts), F.dim(), tol);
  out.k_m_primary = is_m_primary(K);
  if (out.k_m_primary) {
    auto same = parallel_map<char>(static_cast<std::size_t>(N), opts.threads, [&](std::size_t i) -> char {
      const auto n = static_cast<std::int64_t>(i) + 1;
      return saturation(Q.eval(n)) == saturation(F.eval(n));
    });
    for (std::int64_t n = 1; n <= N; ++n) {
      if (!same[static_cast<std::size_t>(n - 1)]) {
        out.saturation_identity = false;
        out.first_identity_failure = n;
        break;
      }
    }
    out.epsilon = epsilon_limit(F, N, tol, opts);
    out.bounded_by_epsilon = out.estimate.limit <= out.epsilon->limit + tol.bound(out.epsilon->limit);
  }
  out.status = (out.estimate.converged && out.saturation_identity && out.bounded_by_epsilon) ? Status::pass
                                                                                             : Status::fail;
  return out;
}

/// Least r <= cap with A(r) holding up to N, if any.
inline std::optional<std::int64_t> least_ar_exponent(const IdealFamily& F, std::int64_t N, std::int64_t cap = 16) {
  for (std::int64_t r = 1; r <= cap; ++r) {
    if (ar_check(F, r, N).passed) return r;
  }
  return std::nullopt;
}

struct WeakEpNoetherianReport {
  WeakEpReport power;
  WeakEpReport closure;
  LimitEstimate epsilon;
  bool matches_epsilon = false;
  bool closure_matches = false;
  Status status = Status::pass;

  CheckReport report() const {
    CheckReport c{"weakep-noetherian"};
    c.status = status;
    c.add("epsilon", epsilon.limit);
    c.add("power_weakep_limit", power.estimate.limit);
    c.add("closure_weakep_limit", closure.estimate.limit);
    c.add("power_r", std::to_string(power.r));
    c.add("closure_r", std::to_string(closure.r));
    c.add("matches_epsilon", matches_epsilon);
    c.add("closure_matches", closure_matches);
    c.series = {{"power", power.estimate}, {"closure", closure.estimate}, {"epsilon", epsilon}};
    return c;
  }
};

/// For nonzero I (grade >= 1 holds automatically in a domain) and m-primary K:
/// the weakep limit of {I^n} equals epsilon({I^n}), and {closure(I^n)} gives
/// the same limit.
inline WeakEpNoetherianReport weakep_noetherian_check(const MonomialIdeal& I, const MonomialIdeal& K, std::int64_t N,
                                                      const Tolerance& tol, const EvalOptions& opts = {}) {
  if (I.is_zero()) throw ZeroIdealError("weakep check needs a nonzero ideal");
  if (!is_m_primary(K)) throw NotMPrimaryError("colon ideal " + K.str() + " is not m-primary");
  const IdealFamily P = power_family(I);
  const IdealFamily C = closure_power_family(I);
  auto rp = least_ar_exponent(P, N);
  auto rc = least_ar_exponent(C, N);
  if (!rp || !rc) throw PreconditionError("no A(r) exponent r <= 16 found up to the horizon");
  WeakEpNoetherianReport out;
  out.power = weakep_limit(P, K, *rp, N, tol, opts);
  out.closure = weakep_limit(C, K, *rc, N, tol, opts);
  out.epsilon = epsilon_limit(P, N, tol, opts);
  out.matches_epsilon = tol.agree(out.power.estimate.limit, out.epsilon.limit);
  out.closure_matches = tol.agree(out.closure.estimate.limit, out.power.estimate.limit);
  const bool ok = out.matches_epsilon && out.closure_matches && out.power.status == Status::pass &&
                  out.closure.status == Status::pass;
  out.status = ok ? Status::pass : Status::fail;
  return out;
}

}  // namespace multlab
