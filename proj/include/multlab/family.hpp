#pragma once

#include "multlab/error.hpp"
#include "multlab/monomial_ideal.hpp"
#include "multlab/newton.hpp"
#include "multlab/rational.hpp"
#include "multlab/saturation.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace multlab {

enum class FamilyKind { power, closure_power, divisorial, colon, colon_power, rescale, product, table };

inline const char* kind_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::power: return "power";
    case FamilyKind::closure_power: return "closure-power";
    case FamilyKind::divisorial: return "divisorial";
    case FamilyKind::colon: return "colon";
    case FamilyKind::colon_power: return "colon-power";
    case FamilyKind::rescale: return "rescale";
    case FamilyKind::product: return "product";
    case FamilyKind::table: return "table";
  }
  return "?";
}

/// One monomial valuation v(x^b) = weights . b together with its threshold.
struct Slab {
  std::vector<Coord> weights;
  Rational threshold;
  friend bool operator==(const Slab&, const Slab&) = default;
};

/// Data of the divisorial filtration I_n = cap_i {v_i >= ceil(n * a_i)}.
struct SlabSystem {
  std::vector<Slab> slabs;

  std::size_t dim() const { return slabs.empty() ? 0 : slabs.front().weights.size(); }

  void validate() const {
    if (slabs.empty()) throw FamilyError("slab system is empty");
    const std::size_t d = dim();
    if (d == 0) throw FamilyError("slab weights must be nonempty");
    for (const auto& s : slabs) {
      if (s.weights.size() != d) throw DimensionError("slab weight vectors differ in length");
      for (Coord w : s.weights) {
        if (w <= 0) throw FamilyError("slab weights must be strictly positive");
      }
      if (s.threshold <= 0) throw FamilyError("slab thresholds must be positive");
    }
  }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < slabs.size(); ++i) {
      if (i) out += ';';
      out += Exponent(slabs[i].weights).str() + ">=" + to_fraction_string(slabs[i].threshold);
    }
    return out;
  }
  friend bool operator==(const SlabSystem&, const SlabSystem&) = default;
};

/// Witnesses declared by a constructor: x^c with c I_m I_n in I_{m+n}, and s
/// with m^{sn} in I_n. Both are claims to be checked, not facts.
struct FamilyMeta {
  std::optional<Exponent> witness;
  std::optional<std::int64_t> linear_bound;
};

struct FamilyNode;

/// A family n -> I_n of monomial ideals with I_0 = R. Evaluation is pure and
/// memoized; copies share the memo.
class IdealFamily {
 public:
  explicit IdealFamily(std::shared_ptr<FamilyNode> node) : node_(std::move(node)) {}

  MonomialIdeal eval(std::int64_t n) const;
  MonomialIdeal operator()(std::int64_t n) const { return eval(n); }

  std::size_t dim() const;
  FamilyKind kind() const;
  const std::string& descriptor() const;
  std::uint64_t fingerprint() const;
  std::string fingerprint_hex() const;
  const FamilyMeta& meta() const;

  /// Base ideal of power / closure-power families, K of colon families.
  const std::optional<MonomialIdeal>& ideal() const;
  const std::optional<SlabSystem>& slabs() const;
  const std::vector<IdealFamily>& children() const;
  const std::optional<Rational>& factor() const;

 private:
  std::shared_ptr<FamilyNode> node_;
};

struct FamilyNode {
  FamilyKind kind;
  std::size_t dim;
  std::string descriptor;
  FamilyMeta meta;
  std::function<MonomialIdeal(std::int64_t)> compute;
  std::optional<MonomialIdeal> ideal;
  std::optional<SlabSystem> slabs;
  std::vector<IdealFamily> children;
  std::optional<Rational> factor;

  std::mutex memo_mutex;
  std::map<std::int64_t, MonomialIdeal> memo;
};

/// 64-bit FNV-1a; stable across runs and platforms.
inline std::uint64_t stable_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline MonomialIdeal IdealFamily::eval(std::int64_t n) const {
  if (n < 0) throw FamilyError("family index must be nonnegative");
  if (n == 0) return MonomialIdeal::unit(node_->dim);
  {
    std::lock_guard lock(node_->memo_mutex);
    auto it = node_->memo.find(n);
    if (it != node_->memo.end()) return it->second;
  }
  MonomialIdeal value = node_->compute(n);
  std::lock_guard lock(node_->memo_mutex);
  return node_->memo.emplace(n, std::move(value)).first->second;
}

inline std::size_t IdealFamily::dim() const { return node_->dim; }
inline FamilyKind IdealFamily::kind() const { return node_->kind; }
inline const std::string& IdealFamily::descriptor() const { return node_->descriptor; }
inline std::uint64_t IdealFamily::fingerprint() const { return stable_hash(node_->descriptor); }
inline std::string IdealFamily::fingerprint_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fingerprint()));
  return buf;
}
inline const FamilyMeta& IdealFamily::meta() const { return node_->meta; }
inline const std::optional<MonomialIdeal>& IdealFamily::ideal() const { return node_->ideal; }
inline const std::optional<SlabSystem>& IdealFamily::slabs() const { return node_->slabs; }
inline const std::vector<IdealFamily>& IdealFamily::children() const { return node_->children; }
inline const std::optional<Rational>& IdealFamily::factor() const { return node_->factor; }

namespace detail {

inline std::shared_ptr<FamilyNode> make_node(FamilyKind kind, std::size_t dim, std::string descriptor) {
  auto node = std::make_shared<FamilyNode>();
  node->kind = kind;
  node->dim = dim;
  node->descriptor = std::move(descriptor);
  return node;
}

/// Least s with m^s inside the m-primary ideal I.
inline std::int64_t least_m_power_inside(const MonomialIdeal& I) {
  const auto k = pure_power_bounds(I);
  std::int64_t upper = 1;
  for (Coord c : k) upper += c - 1;
  RingContext ctx(I.dim());
  for (std::int64_t s = 1; s < upper; ++s) {
    if (is_subset(m_power(ctx, s), I)) return s;
  }
  return std::max<std::int64_t>(upper, 1);
}

inline Exponent least_degree_generator(const MonomialIdeal& K) {
  const Exponent* best = &K.gens().front();
  for (const auto& g : K.gens()) {
    if (g.degree() < best->degree()) best = &g;
  }
  return *best;
}

inline void require_proper_nonzero(const MonomialIdeal& I, const char* what) {
  if (I.is_zero()) throw FamilyError(std::string(what) + " of the zero ideal");
  if (I.is_unit()) throw FamilyError(std::string(what) + " of the unit ideal");
}

}  // namespace detail

inline IdealFamily power_family(const MonomialIdeal& I) {
  detail::require_proper_nonzero(I, "power family");
  auto node = detail::make_node(FamilyKind::power, I.dim(), "power(" + I.str() + ")");
  node->ideal = I;
  node->meta.witness = Exponent(I.dim());
  if (is_m_primary(I)) node->meta.linear_bound = detail::least_m_power_inside(I);
  node->compute = [I](std::int64_t n) { return power(I, n); };
  return IdealFamily(std::move(node));
}

/// n -> closure(I^n). Uses NP(I^n) = n * NP(I), so only NP(I) is built.
inline IdealFamily closure_power_family(const MonomialIdeal& I) {
  detail::require_proper_nonzero(I, "closure-power family");
  auto node = detail::make_node(FamilyKind::closure_power, I.dim(), "closure-power(" + I.str() + ")");
  node->ideal = I;
  node->meta.witness = Exponent(I.dim());
  if (is_m_primary(I)) node->meta.linear_bound = detail::least_m_power_inside(I);
  auto np = std::make_shared<const NewtonPolyhedron>(I);
  node->compute = [np](std::int64_t n) { return np->scaled(n).lattice_ideal(); };
  return IdealFamily(std::move(node));
}

/// Monomials with weights . b >= threshold.
inline MonomialIdeal valuation_ideal(const std::vector<Coord>& weights, Coord threshold) {
  const std::size_t d = weights.size();
  if (threshold <= 0) return MonomialIdeal::unit(d);
  std::vector<Exponent> all;
  std::vector<Coord> b(d, 0);
  auto rec = [&](auto&& self, std::size_t j, Coord partial) -> void {
    if (j + 1 == d) {
      Coord gap = threshold - partial;
      b[j] = gap > 0 ? (gap + weights[j] - 1) / weights[j] : 0;
      all.emplace_back(b);
      return;
    }
    Coord top = (threshold + weights[j] - 1) / weights[j];
    for (Coord c = 0; c <= top; ++c) {
      b[j] = c;
      self(self, j + 1, checked_add(partial, checked_mul(c, weights[j])));
    }
    b[j] = 0;
  };
  rec(rec, 0, 0);
  return MonomialIdeal(d, std::move(all));
}

inline IdealFamily divisorial_family(const SlabSystem& S) {
  S.validate();
  const std::size_t d = S.dim();
  auto node = detail::make_node(FamilyKind::divisorial, d, "divisorial(" + S.str() + ")");
  node->slabs = S;
  node->meta.witness = Exponent(d);
  Rational worst = 0;
  for (const auto& s : S.slabs) {
    Coord wmin = *std::min_element(s.weights.begin(), s.weights.end());
    worst = std::max(worst, Rational(s.threshold / wmin));
  }
  node->meta.linear_bound = std::max<std::int64_t>(1, to_int64(ceil_of(worst)));
  node->compute = [S](std::int64_t n) {
    std::optional<MonomialIdeal> acc;
    for (const auto& s : S.slabs) {
      Coord t = to_int64(ceil_of(s.threshold * n));
      MonomialIdeal v = valuation_ideal(s.weights, t);
      acc = acc ? intersect(*acc, v) : v;
    }
    return *acc;
  };
  return IdealFamily(std::move(node));
}

/// n -> (F(n) : K).
inline IdealFamily colon_family(const IdealFamily& F, const MonomialIdeal& K) {
  if (K.is_zero()) throw ZeroIdealError("colon family by the zero ideal");
  if (K.dim() != F.dim()) throw DimensionError("colon ideal dimension differs from family");
  auto node = detail::make_node(FamilyKind::colon, F.dim(), "colon(" + F.descriptor() + "," + K.str() + ")");
  node->ideal = K;
  node->children = {F};
  if (F.meta().witness) {
    // c d^2 with d any monomial of K
    node->meta.witness = *F.meta().witness + scaled(detail::least_degree_generator(K), 2);
  }
  node->meta.linear_bound = F.meta().linear_bound;
  node->compute = [F, K](std::int64_t n) { return colon(F.eval(n), K); };
  return IdealFamily(std::move(node));
}

/// n -> (F(n) : K^{n+1}).
inline IdealFamily colon_power_family(const IdealFamily& F, const MonomialIdeal& K) {
  if (K.is_zero()) throw ZeroIdealError("colon-power family by the zero ideal");
  if (K.dim() != F.dim()) throw DimensionError("colon ideal dimension differs from family");
  auto node =
      detail::make_node(FamilyKind::colon_power, F.dim(), "colon-power(" + F.descriptor() + "," + K.str() + ")");
  node->ideal = K;
  node->children = {F};
  if (F.meta().witness) node->meta.witness = *F.meta().witness + detail::least_degree_generator(K);
  node->meta.linear_bound = F.meta().linear_bound;
  node->compute = [F, K](std::int64_t n) { return colon(F.eval(n), power(K, n + 1)); };
  return IdealFamily(std::move(node));
}

/// n -> F(floor(a n)).
inline IdealFamily rescale_family(const IdealFamily& F, const Rational& a) {
  if (a <= 0) throw FamilyError("rescale factor must be positive");
  auto node = detail::make_node(FamilyKind::rescale, F.dim(),
                                "rescale(" + F.descriptor() + "," + to_fraction_string(a) + ")");
  node->children = {F};
  node->factor = a;
  if (F.meta().witness && F.meta().witness->is_zero()) {
    MonomialIdeal first = F.eval(1);
    if (!first.is_zero()) node->meta.witness = detail::least_degree_generator(first);
  }
  if (F.meta().linear_bound) {
    node->meta.linear_bound = *F.meta().linear_bound * (to_int64(floor_of(a)) + 1);
  }
  node->compute = [F, a](std::int64_t n) { return F.eval(to_int64(floor_of(a * n))); };
  return IdealFamily(std::move(node));
}

/// n -> F(n) G(n).
inline IdealFamily product_family(const IdealFamily& F, const IdealFamily& G) {
  if (F.dim() != G.dim()) throw DimensionError("product of families of different dimension");
  auto node = detail::make_node(FamilyKind::product, F.dim(),
                                "product(" + F.descriptor() + "," + G.descriptor() + ")");
  node->children = {F, G};
  if (F.meta().witness && G.meta().witness) node->meta.witness = *F.meta().witness + *G.meta().witness;
  if (F.meta().linear_bound && G.meta().linear_bound) {
    node->meta.linear_bound = *F.meta().linear_bound + *G.meta().linear_bound;
  }
  if (F.kind() == FamilyKind::power && G.kind() == FamilyKind::power) {
    // I^n J^n = (IJ)^n
    MonomialIdeal IJ = product(*F.ideal(), *G.ideal());
    node->compute = [IJ](std::int64_t n) { return power(IJ, n); };
  } else {
    node->compute = [F, G](std::int64_t n) { return product(F.eval(n), G.eval(n)); };
  }
  return IdealFamily(std::move(node));
}

/// values[n-1] is I_n; evaluation beyond the table is an error.
inline IdealFamily table_family(std::vector<MonomialIdeal> values) {
  if (values.empty()) throw FamilyError("table family needs at least one entry");
  const std::size_t d = values.front().dim();
  std::string desc = "table(";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].dim() != d) throw DimensionError("table entries differ in dimension");
    if (i) desc += ';';
    desc += values[i].str();
  }
  desc += ")";
  auto node = detail::make_node(FamilyKind::table, d, std::move(desc));
  auto shared = std::make_shared<const std::vector<MonomialIdeal>>(std::move(values));
  node->compute = [shared](std::int64_t n) {
    if (n > static_cast<std::int64_t>(shared->size())) {
      throw FamilyError("table family has no entry for n = " + std::to_string(n) + " (length " +
                        std::to_string(shared->size()) + ")");
    }
    return (*shared)[static_cast<std::size_t>(n - 1)];
  };
  return IdealFamily(std::move(node));
}

/// Generator exponent base + n * step.
struct AffineExponent {
  std::vector<Coord> base;
  std::vector<Coord> step;
  friend bool operator==(const AffineExponent&, const AffineExponent&) = default;

  Exponent at(std::int64_t n) const {
    std::vector<Coord> v(base.size());
    for (std::size_t j = 0; j < base.size(); ++j) v[j] = checked_add(base[j], checked_mul(step[j], n));
    return Exponent(std::move(v));
  }
};

/// Table family with I_n generated by affine exponent formulas, n = 1..length.
inline IdealFamily table_family_from_formula(std::size_t dim, std::int64_t length,
                                             const std::vector<AffineExponent>& gens) {
  if (length < 1) throw FamilyError("table length must be positive");
  std::vector<MonomialIdeal> values;
  for (std::int64_t n = 1; n <= length; ++n) {
    std::vector<Exponent> g;
    for (const auto& a : gens) {
      if (a.base.size() != dim || a.step.size() != dim) throw DimensionError("formula generator has wrong dimension");
      g.push_back(a.at(n));
    }
    values.emplace_back(dim, std::move(g));
  }
  return table_family(std::move(values));
}

// ---------------------------------------------------------------------------
// Structural verification

struct IndexVerdict {
  bool passed = true;
  std::optional<std::int64_t> first_failure;
};

struct PairVerdict {
  bool passed = true;
  std::optional<std::pair<std::int64_t, std::int64_t>> first_failure;
};

/// x^c u v in F(m+n) for all generators u of F(m), v of F(n), m, n >= 1, m+n <= N.
inline PairVerdict verify_weakly_graded(const IdealFamily& F, const Exponent& c, std::int64_t N) {
  if (c.dim() != F.dim()) throw DimensionError("witness has wrong dimension");
  for (std::int64_t m = 1; m < N; ++m) {
    const MonomialIdeal Im = F.eval(m);
    for (std::int64_t n = 1; m + n <= N; ++n) {
      const MonomialIdeal In = F.eval(n);
      const MonomialIdeal target = F.eval(m + n);
      for (const auto& u : Im.gens()) {
        const Exponent cu = c + u;
        for (const auto& v : In.gens()) {
          if (!contains(target, cu + v)) return {false, std::make_pair(m, n)};
        }
      }
    }
  }
  return {};
}

/// m^{sn} contained in F(n) for 1 <= n <= N.
inline IndexVerdict verify_bounded_below(const IdealFamily& F, std::int64_t s, std::int64_t N) {
  if (s < 1) throw std::invalid_argument("linear bound s must be positive");
  RingContext ctx(F.dim());
  for (std::int64_t n = 1; n <= N; ++n) {
    if (!is_subset(m_power(ctx, checked_mul(s, n)), F.eval(n))) return {false, n};
  }
  return {};
}

/// F(n+1) contained in F(n) for 1 <= n < N.
inline IndexVerdict verify_filtration(const IdealFamily& F, std::int64_t N) {
  for (std::int64_t n = 1; n < N; ++n) {
    if (!is_subset(F.eval(n + 1), F.eval(n))) return {false, n};
  }
  return {};
}

/// I_n^sat cap m^{rn} = I_n cap m^{rn} for 1 <= n <= N.
inline IndexVerdict ar_check(const IdealFamily& F, std::int64_t r, std::int64_t N) {
  if (r < 1) throw std::invalid_argument("A(r) needs r >= 1");
  RingContext ctx(F.dim());
  for (std::int64_t n = 1; n <= N; ++n) {
    const MonomialIdeal In = F.eval(n);
    if (In.is_zero()) return {false, n};
    const MonomialIdeal mr = m_power(ctx, checked_mul(r, n));
    if (intersect(saturation(In), mr) != intersect(In, mr)) return {false, n};
  }
  return {};
}

}  // namespace multlab
