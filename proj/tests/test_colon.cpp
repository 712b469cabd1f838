#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace multlab;
using oracle::ideal;

namespace {

const MonomialIdeal kM = ideal(2, {{1, 0}, {0, 1}});

IdealFamily e2_family(std::int64_t length) {
  return table_family_from_formula(2, length, {{{0, 0}, {2, 0}}, {{1, 2}, {0, 0}}, {{0, 0}, {0, 2}}});
}

SlabSystem single_slab() { return SlabSystem{{Slab{{1, 2}, Rational(1)}}}; }

}  // namespace

TEST(ColonLimit, Examples) {
  Tolerance tol;
  auto e2 = colon_limit(e2_family(50), kM, 50, tol);
  EXPECT_NEAR(e2.estimate.limit, 0.0, 1e-6);
  EXPECT_EQ(e2.status, Status::pass);
  auto d = colon_limit(divisorial_family(single_slab()), kM, 200, tol);
  EXPECT_TRUE(tol.agree(d.estimate.limit, 0.5));
  EXPECT_EQ(d.relation, Relation::equal);
  auto P = power_family(ideal(2, {{2, 0}, {0, 3}}));
  auto u = colon_limit(P, MonomialIdeal::unit(2), 60, tol);
  EXPECT_EQ(u.relation, Relation::equal);
  EXPECT_DOUBLE_EQ(u.estimate.limit, *u.reference);
}

TEST(NoetherianColon, Examples) {
  Tolerance tol;
  auto r = noetherian_colon_check(ideal(2, {{2, 0}, {0, 3}}), kM, 80, tol);
  EXPECT_EQ(r.exact, Rational(6));
  EXPECT_TRUE(tol.agree(r.power.estimate.limit, 6.0));
  EXPECT_TRUE(tol.agree(r.closure.estimate.limit, 6.0));
  EXPECT_EQ(r.status, Status::pass);
  auto m = noetherian_colon_check(kM, m_power(RingContext(2), 2), 80, tol);
  EXPECT_TRUE(tol.agree(m.power.estimate.limit, 1.0));
  EXPECT_THROW(noetherian_colon_check(ideal(2, {{2, 0}, {1, 1}}), kM, 20, tol), NotMPrimaryError);
}

TEST(DivisorialShift, Examples) {
  Tolerance tol;
  auto r = divisorial_shift(single_slab(), kM, 100, tol);
  EXPECT_EQ(r.least_w, std::optional<std::int64_t>(1));
  EXPECT_TRUE(r.constructive_verified);
  EXPECT_TRUE(r.limit_agrees);
  EXPECT_EQ(r.exact, Rational(1, 2));
  EXPECT_THROW(divisorial_shift(single_slab(), MonomialIdeal::unit(2), 20, tol), PreconditionError);
  EXPECT_THROW(divisorial_shift(single_slab(), MonomialIdeal::zero(2), 20, tol), PreconditionError);
}

TEST(DivisorialShift, ConstructiveShiftVerifiesOnRandomSystems) {
  std::mt19937 rng(123);
  std::uniform_int_distribution<Coord> w(1, 3);
  std::uniform_int_distribution<int> num(1, 5), den(1, 3);
  for (int trial = 0; trial < 12; ++trial) {
    SlabSystem S{{Slab{{w(rng), w(rng)}, Rational(num(rng), den(rng))}}};
    if (trial % 2) S.slabs.push_back({{w(rng), w(rng)}, Rational(num(rng), den(rng))});
    auto K = trial % 3 ? kM : ideal(2, {{2, 0}, {1, 1}, {0, 3}});
    const std::int64_t w0 = constructive_shift(S, K);
    EXPECT_GE(w0, 1);
    EXPECT_TRUE(verify_shift(divisorial_family(S), K, w0, 12)) << S.str() << " w=" << w0;
  }
}

TEST(ReesHorizon, Examples) {
  Tolerance tol;
  auto F = power_family(ideal(2, {{2, 0}, {0, 2}}));
  auto G = power_family(m_power(RingContext(2), 2));
  auto same = rees_horizon_check(F, G, kM, 60, tol);
  EXPECT_TRUE(same.closures_equal);
  EXPECT_TRUE(same.limits_equal);
  EXPECT_EQ(same.status, Status::pass);
  auto H = power_family(ideal(2, {{1, 0}, {0, 2}}));
  auto diff = rees_horizon_check(F, H, kM, 60, tol);
  EXPECT_FALSE(diff.closures_equal);
  EXPECT_FALSE(diff.limits_equal);
  EXPECT_EQ(diff.status, Status::pass);
  EXPECT_EQ(rees_horizon_check(F, F, kM, 20, tol).status, Status::pass);
  EXPECT_THROW(rees_horizon_check(H, F, kM, 10, tol), PreconditionError);
  // e2: closures differ at every n, both limits vanish
  auto J = table_family_from_formula(2, 30, {{{0, 0}, {1, 0}}, {{1, 1}, {0, 0}}, {{0, 0}, {0, 1}}});
  auto e2 = rees_horizon_check(e2_family(30), J, kM, 30, tol);
  EXPECT_EQ(e2.status, Status::inconclusive);
}

TEST(MinkowskiEquality, Examples) {
  Tolerance tol;
  auto D = divisorial_family(single_slab());
  auto r = minkowski_equality_check(D, D, kM, 60, tol);
  EXPECT_TRUE(r.minkowski.equality);
  EXPECT_EQ(r.rescaling, (std::optional<std::pair<std::int64_t, std::int64_t>>(std::make_pair(1, 1))));
  EXPECT_EQ(r.status, Status::pass);
  auto D2 = divisorial_family(SlabSystem{{Slab{{1, 2}, Rational(2)}}});
  auto s = minkowski_equality_check(D, D2, kM, 60, tol);
  EXPECT_TRUE(s.minkowski.equality);
  EXPECT_EQ(s.rescaling, (std::optional<std::pair<std::int64_t, std::int64_t>>(std::make_pair(2, 1))));
  auto E = divisorial_family(SlabSystem{{Slab{{2, 1}, Rational(1)}}});
  auto t = minkowski_equality_check(D, E, kM, 60, tol);
  EXPECT_FALSE(t.minkowski.equality);
  EXPECT_FALSE(t.rescaling.has_value());
  EXPECT_EQ(t.status, Status::pass);
  EXPECT_THROW(minkowski_equality_check(power_family(kM), D, kM, 20, tol), PreconditionError);
}

TEST(WeakEp, TheoremItems) {
  Tolerance tol;
  auto I = ideal(2, {{2, 0}, {1, 1}});
  auto K = ideal(2, {{2, 0}, {0, 2}});
  auto P = power_family(I);
  for (std::int64_t n = 1; n <= 30; ++n) {
    EXPECT_EQ(saturation(colon(power(I, n), K)), ideal(2, {{n, 0}}));
    EXPECT_EQ(saturation(power(I, n)), ideal(2, {{n, 0}}));
    EXPECT_EQ(sat_quotient_length(power(I, n)), n * (n + 1) / 2);
  }
  auto r = weakep_limit(P, K, 2, 60, tol);
  EXPECT_TRUE(r.saturation_identity);
  EXPECT_TRUE(tol.agree(r.estimate.limit, 1.0));
  EXPECT_EQ(r.status, Status::pass);
  EXPECT_THROW(weakep_limit(P, K, 1, 20, tol), PreconditionError);
  EXPECT_EQ(least_ar_exponent(P, 20), std::optional<std::int64_t>(2));

  auto both = weakep_noetherian_check(I, K, 60, tol);
  EXPECT_TRUE(both.matches_epsilon);
  EXPECT_TRUE(both.closure_matches);
  EXPECT_EQ(both.status, Status::pass);

  auto J = ideal(2, {{2, 0}, {0, 3}});
  auto mp = weakep_noetherian_check(J, kM, 60, tol);
  EXPECT_TRUE(tol.agree(mp.power.estimate.limit, 6.0));
  EXPECT_TRUE(tol.agree(mp.closure.estimate.limit, 6.0));
}

TEST(ColonProperties, ColonLimitNeverExceedsFamilyMultiplicity) {
  std::mt19937 rng(2718);
  Tolerance tol;
  for (int trial = 0; trial < 15; ++trial) {
    auto I = oracle::random_ideal(rng, 2, 4, 3, true);
    auto K = oracle::random_ideal(rng, 2, 2, 2, false);
    if (I.is_unit() || K.is_unit()) continue;
    auto r = colon_limit(power_family(I), K, 60, tol);
    EXPECT_EQ(r.status, Status::pass) << I.str() << " : " << K.str();
    for (const auto& s : r.estimate.samples) {
      EXPECT_LE(s.raw, Rational(colength(power(I, s.n))));
    }
  }
}
