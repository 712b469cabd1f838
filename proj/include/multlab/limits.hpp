#pragma once

#include "multlab/error.hpp"
#include "multlab/estimate.hpp"
#include "multlab/family.hpp"
#include "multlab/monomial_ideal.hpp"
#include "multlab/newton.hpp"
#include "multlab/parallel.hpp"
#include "multlab/polytope.hpp"
#include "multlab/rational.hpp"
#include "multlab/report.hpp"
#include "multlab/saturation.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace multlab {

/// Persistent (key, n) -> length store; implemented by the CLI's file cache.
class LengthStore {
 public:
  virtual ~LengthStore() = default;
  virtual std::optional<std::int64_t> get(const std::string& key, std::int64_t n) = 0;
  virtual void put(const std::string& key, std::int64_t n, std::int64_t length) = 0;
};

struct EvalOptions {
  unsigned threads = 1;
  LengthStore* store = nullptr;
};

struct LengthPoint {
  std::int64_t n;
  std::int64_t length;
};

namespace detail {

inline std::string hex_key(const std::string& text) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(stable_hash(text)));
  return buf;
}

template <class Measure>
std::vector<LengthPoint> measured_sequence(const IdealFamily& F, const std::vector<std::int64_t>& ns,
                                           const EvalOptions& opts, const std::string& key, Measure measure) {
  return parallel_map<LengthPoint>(ns.size(), opts.threads, [&](std::size_t i) {
    const std::int64_t n = ns[i];
    if (opts.store) {
      if (auto hit = opts.store->get(key, n)) return LengthPoint{n, *hit};
    }
    std::int64_t len = measure(F.eval(n), n);
    if (opts.store) opts.store->put(key, n, len);
    return LengthPoint{n, len};
  });
}

inline std::vector<Sample> to_samples(const std::vector<LengthPoint>& pts, std::size_t d) {
  std::vector<Sample> out;
  for (const auto& p : pts) out.push_back({p.n, Rational(p.length), normalize(Rational(p.length), p.n, d)});
  return out;
}

}  // namespace detail

/// Exact colengths l(R/F(n)) for each n.
inline std::vector<LengthPoint> length_sequence(const IdealFamily& F, const std::vector<std::int64_t>& ns,
                                                const EvalOptions& opts = {}) {
  return detail::measured_sequence(F, ns, opts, F.fingerprint_hex(), [](const MonomialIdeal& I, std::int64_t n) {
    if (!is_m_primary(I)) {
      throw NotMPrimaryError("family member at n = " + std::to_string(n) + " is not m-primary: " + I.str());
    }
    return colength(I);
  });
}

/// Exact l(I_n^sat / I_n) for each n.
inline std::vector<LengthPoint> sat_length_sequence(const IdealFamily& F, const std::vector<std::int64_t>& ns,
                                                    const EvalOptions& opts = {}) {
  return detail::measured_sequence(F, ns, opts, detail::hex_key("sat-quotient:" + F.descriptor()),
                                   [](const MonomialIdeal& I, std::int64_t) { return sat_quotient_length(I); });
}

inline LimitEstimate fit_limit(const std::vector<LengthPoint>& lengths, std::size_t d, const Tolerance& tol) {
  return fit_limit(detail::to_samples(lengths, d), tol);
}

/// Estimate of e_W(F) = lim d! l(R/I_n) / n^d over the default ladder up to N.
inline LimitEstimate ew_multiplicity(const IdealFamily& F, std::int64_t N, const Tolerance& tol,
                                     const EvalOptions& opts = {}) {
  return fit_limit(length_sequence(F, sample_ladder(N), opts), F.dim(), tol);
}

/// Estimate of epsilon(F) = lim d! l(H^0_m(R/I_n)) / n^d; F must be a filtration up to N.
inline LimitEstimate epsilon_limit(const IdealFamily& F, std::int64_t N, const Tolerance& tol,
                                   const EvalOptions& opts = {}) {
  auto filt = verify_filtration(F, N);
  if (!filt.passed) {
    throw PreconditionError("family is not a filtration: F(" + std::to_string(*filt.first_failure + 1) +
                            ") is not contained in F(" + std::to_string(*filt.first_failure) + ")");
  }
  return fit_limit(sat_length_sequence(F, sample_ladder(N), opts), F.dim(), tol);
}

// ---------------------------------------------------------------------------
// Exact volumes

enum class VolumeMethod { newton_complement, slab_union };

struct VolumeResult {
  Rational value;
  VolumeMethod method;
};

/// e(I) = d! vol({x >= 0} \ NP(I)) for m-primary I. The complement lies in the
/// box spanned by the pure powers, so it is vol(box) - vol(box cap NP(I)).
inline VolumeResult hs_multiplicity_exact(const MonomialIdeal& I) {
  const auto k = pure_power_bounds(I);
  const std::size_t d = I.dim();
  if (I.is_unit()) return {0, VolumeMethod::newton_complement};
  Rational box = 1;
  std::vector<HalfSpace> hs;
  for (std::size_t j = 0; j < d; ++j) {
    box *= k[j];
    hs.push_back(nonnegativity(d, j));
    hs.push_back(upper_bound(d, j, k[j]));
  }
  NewtonPolyhedron np(I);
  for (const auto& f : np.facets()) {
    HalfSpace h{std::vector<Rational>(d), -Rational(f.rhs)};
    for (std::size_t j = 0; j < d; ++j) h.coeffs[j] = -Rational(f.normal[j]);
    hs.push_back(std::move(h));
  }
  Rational inside = polytope_volume(hs, d);
  return {(box - inside) * factorial(d), VolumeMethod::newton_complement};
}

/// vol(union_i {x >= 0 : w_i . x < a_i}) by inclusion-exclusion over subsets.
inline VolumeResult slab_union_volume(const SlabSystem& S) {
  S.validate();
  const std::size_t d = S.dim();
  const std::size_t r = S.slabs.size();
  if (r > 20) throw InternalError("too many slabs for inclusion-exclusion");
  Rational total = 0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << r); ++mask) {
    std::vector<HalfSpace> hs;
    for (std::size_t j = 0; j < d; ++j) hs.push_back(nonnegativity(d, j));
    int bits = 0;
    for (std::size_t i = 0; i < r; ++i) {
      if (!(mask >> i & 1)) continue;
      ++bits;
      HalfSpace h{std::vector<Rational>(d), S.slabs[i].threshold};
      for (std::size_t j = 0; j < d; ++j) h.coeffs[j] = S.slabs[i].weights[j];
      hs.push_back(std::move(h));
    }
    Rational v = polytope_volume(hs, d);
    total += (bits % 2 == 1) ? v : Rational(-v);
  }
  return {total, VolumeMethod::slab_union};
}

/// e_W(F) when a closed form is known independently of sampling: power and
/// closure-power families of an m-primary ideal, divisorial families, products
/// of those power kinds, and rescalings of any of them.
inline std::optional<Rational> exact_family_multiplicity(const IdealFamily& F) {
  auto power_kind = [](const IdealFamily& G) {
    return (G.kind() == FamilyKind::power || G.kind() == FamilyKind::closure_power) && is_m_primary(*G.ideal());
  };
  switch (F.kind()) {
    case FamilyKind::power:
    case FamilyKind::closure_power:
      if (power_kind(F)) return hs_multiplicity_exact(*F.ideal()).value;
      return std::nullopt;
    case FamilyKind::divisorial:
      return slab_union_volume(*F.slabs()).value * factorial(F.dim());
    case FamilyKind::product: {
      const auto& c = F.children();
      if (power_kind(c[0]) && power_kind(c[1])) {
        return hs_multiplicity_exact(product(*c[0].ideal(), *c[1].ideal())).value;
      }
      return std::nullopt;
    }
    case FamilyKind::rescale: {
      auto inner = exact_family_multiplicity(F.children()[0]);
      if (!inner) return std::nullopt;
      Rational scale = 1;
      for (std::size_t i = 0; i < F.dim(); ++i) scale *= *F.factor();
      return *inner * scale;
    }
    default:
      return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Theorem checks on graded / weakly graded families

struct VolumeMultiplicityReport {
  LimitEstimate colength_limit;      // d! l(R/I_n) / n^d
  LimitEstimate multiplicity_limit;  // e(I_n) / n^d
  std::optional<Rational> exact;
  bool agree = false;

  CheckReport report() const {
    CheckReport r{"volmult"};
    r.status = agree ? Status::pass : Status::fail;
    r.add("ew_fitted", colength_limit.limit);
    r.add("mult_seq_fitted", multiplicity_limit.limit);
    if (exact) r.add("exact", *exact);
    r.add("agree", agree);
    r.series = {{"lengths", colength_limit}, {"multiplicities", multiplicity_limit}};
    return r;
  }
};

inline VolumeMultiplicityReport volume_multiplicity_check(const IdealFamily& F, std::int64_t N, const Tolerance& tol,
                                                          const EvalOptions& opts = {}) {
  VolumeMultiplicityReport out;
  out.colength_limit = ew_multiplicity(F, N, tol, opts);
  const auto ns = sample_ladder(N);
  const std::size_t d = F.dim();
  auto samples = parallel_map<Sample>(ns.size(), opts.threads, [&](std::size_t i) {
    MonomialIdeal I = F.eval(ns[i]);
    if (!is_m_primary(I)) throw NotMPrimaryError("family member at n = " + std::to_string(ns[i]) + " is not m-primary");
    Rational e = hs_multiplicity_exact(I).value;
    // e(I_n) is already scaled by d!, so only divide by n^d
    return Sample{ns[i], e, normalize(e, ns[i], d) / factorial(d)};
  });
  out.multiplicity_limit = fit_limit(std::move(samples), tol);
  out.exact = exact_family_multiplicity(F);
  out.agree = tol.agree(out.colength_limit.limit, out.multiplicity_limit.limit);
  return out;
}

/// lhs <= rhs and lhs == rhs for lhs = X^{1/d}, rhs = Y^{1/d} + Z^{1/d},
/// decided exactly for d <= 2.
struct MinkowskiRelation {
  bool holds;
  bool equality;
};

inline MinkowskiRelation minkowski_relation_exact(const Rational& X, const Rational& Y, const Rational& Z,
                                                  std::size_t d) {
  if (d == 1) return {X <= Y + Z, X == Y + Z};
  if (d == 2) {
    // sqrt X <= sqrt Y + sqrt Z  <=>  X - Y - Z <= 2 sqrt(YZ)
    Rational diff = X - Y - Z;
    if (diff < 0) return {true, false};
    Rational sq = diff * diff;
    Rational four = 4 * Y * Z;
    return {sq <= four, sq == four};
  }
  double lhs = std::pow(to_double(X), 1.0 / d);
  double rhs = std::pow(to_double(Y), 1.0 / d) + std::pow(to_double(Z), 1.0 / d);
  double eps = 1e-12 * std::max(1.0, rhs);
  return {lhs <= rhs + eps, std::abs(lhs - rhs) <= eps};
}

struct MinkowskiReport {
  LimitEstimate left, right, product;
  std::optional<Rational> exact_left, exact_right, exact_product;
  double lhs = 0, rhs = 0;
  bool holds = false;
  bool equality = false;
  bool exact = false;
  bool fit_matches_exact = true;

  CheckReport report() const {
    CheckReport r{"minkowski"};
    r.status = holds && fit_matches_exact ? Status::pass : Status::fail;
    r.add("lhs", lhs);
    r.add("rhs", rhs);
    r.add("method", exact ? "exact" : "fitted");
    r.add("relation", !holds ? "violated" : (equality ? "equality" : "strict inequality"));
    r.add("ew_left", left.limit);
    r.add("ew_right", right.limit);
    r.add("ew_product", product.limit);
    if (exact) {
      r.add("exact_left", *exact_left);
      r.add("exact_right", *exact_right);
      r.add("exact_product", *exact_product);
      r.add("fit_matches_exact", fit_matches_exact);
    }
    r.series = {{"left", left}, {"right", right}, {"product", product}};
    return r;
  }
};

inline MinkowskiReport minkowski_check(const IdealFamily& F, const IdealFamily& G, std::int64_t N,
                                       const Tolerance& tol, const EvalOptions& opts = {}) {
  if (F.dim() != G.dim()) throw DimensionError("Minkowski check on families of different dimension");
  const std::size_t d = F.dim();
  const IdealFamily FG = product_family(F, G);
  MinkowskiReport out;
  out.left = ew_multiplicity(F, N, tol, opts);
  out.right = ew_multiplicity(G, N, tol, opts);
  out.product = ew_multiplicity(FG, N, tol, opts);
  out.exact_left = exact_family_multiplicity(F);
  out.exact_right = exact_family_multiplicity(G);
  out.exact_product = exact_family_multiplicity(FG);
  auto root = [d](double v) { return std::pow(std::max(v, 0.0), 1.0 / static_cast<double>(d)); };
  if (out.exact_left && out.exact_right && out.exact_product) {
    out.exact = true;
    auto rel = minkowski_relation_exact(*out.exact_product, *out.exact_left, *out.exact_right, d);
    out.holds = rel.holds;
    out.equality = rel.equality;
    out.lhs = root(to_double(*out.exact_product));
    out.rhs = root(to_double(*out.exact_left)) + root(to_double(*out.exact_right));
    out.fit_matches_exact = tol.agree(out.left.limit, to_double(*out.exact_left)) &&
                            tol.agree(out.right.limit, to_double(*out.exact_right)) &&
                            tol.agree(out.product.limit, to_double(*out.exact_product));
  } else {
    out.lhs = root(out.product.limit);
    out.rhs = root(out.left.limit) + root(out.right.limit);
    out.holds = out.lhs <= out.rhs + tol.bound(out.rhs);
    out.equality = std::abs(out.lhs - out.rhs) <= tol.bound(out.rhs);
  }
  return out;
}

struct ClosureMultReport {
  bool contained = true;
  std::optional<std::int64_t> first_uncontained;
  bool closures_equal = true;
  std::optional<std::int64_t> first_closure_difference;
  std::int64_t closure_differences = 0;
  std::int64_t horizon = 0;
  LimitEstimate left, right;
  Status status = Status::pass;

  CheckReport report() const {
    CheckReport r{"closure"};
    r.status = status;
    r.add("contained", contained);
    if (first_uncontained) r.add("first_uncontained_n", std::to_string(*first_uncontained));
    r.add("closures_equal", closures_equal);
    r.add("closure_differences", std::to_string(closure_differences) + "/" + std::to_string(horizon));
    if (first_closure_difference) r.add("first_closure_difference_n", std::to_string(*first_closure_difference));
    r.add("ew_left", left.limit);
    r.add("ew_right", right.limit);
    r.series = {{"left", left}, {"right", right}};
    return r;
  }
};

/// If F(n) is in G(n) and their integral closures agree for all n <= N, the
/// two family multiplicities must agree. When the closures differ the
/// implication does not apply and the report says so.
inline ClosureMultReport closure_equal_mult_check(const IdealFamily& F, const IdealFamily& G, std::int64_t N,
                                                  const Tolerance& tol, const EvalOptions& opts = {}) {
  if (F.dim() != G.dim()) throw DimensionError("closure check on families of different dimension");
  ClosureMultReport out;
  out.horizon = N;
  struct Row {
    bool contained;
    bool closures_equal;
  };
  auto rows = parallel_map<Row>(static_cast<std::size_t>(N), opts.threads, [&](std::size_t i) {
    const auto n = static_cast<std::int64_t>(i) + 1;
    MonomialIdeal a = F.eval(n), b = G.eval(n);
    return Row{is_subset(a, b), integral_closure(a) == integral_closure(b)};
  });
  for (std::int64_t n = 1; n <= N; ++n) {
    const Row& row = rows[static_cast<std::size_t>(n - 1)];
    if (!row.contained && out.contained) {
      out.contained = false;
      out.first_uncontained = n;
    }
    if (!row.closures_equal) {
      if (out.closures_equal) out.first_closure_difference = n;
      out.closures_equal = false;
      ++out.closure_differences;
    }
  }
  out.left = ew_multiplicity(F, N, tol, opts);
  out.right = ew_multiplicity(G, N, tol, opts);
  if (!out.contained) {
    out.status = Status::fail;
  } else if (!out.closures_equal) {
    out.status = Status::not_applicable;
  } else {
    out.status = tol.agree(out.left.limit, out.right.limit) ? Status::pass : Status::fail;
  }
  return out;
}

}  // namespace multlab
