// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include "multlab/cli/config.hpp"
#include "multlab/cli/runner.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using namespace multlab;
using oracle::ideal;
namespace fs = std::filesystem;

namespace {

constexpr double kRel = 0.02;
constexpr double kZeroAbs = 1e-6;
constexpr double kMinkowskiSlack = 1e-9;

const MonomialIdeal kM = ideal(2, {{1, 0}, {0, 1}});

struct Criterion {
  bool ok = true;
  std::vector<std::string> notes;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back("FAILED: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

bool within_rel(double value, double reference) { return std::abs(value - reference) <= kRel * std::abs(reference); }

std::string fmt(double v) { return to_decimal_string(v); }

IdealFamily e2_I(std::int64_t length) {
  return table_family_from_formula(2, length, {{{0, 0}, {2, 0}}, {{1, 2}, {0, 0}}, {{0, 0}, {0, 2}}});
}

IdealFamily e2_J(std::int64_t length) {
  return table_family_from_formula(2, length, {{{0, 0}, {1, 0}}, {{1, 1}, {0, 0}}, {{0, 0}, {0, 1}}});
}

SlabSystem divisorial_12() { return SlabSystem{{Slab{{1, 2}, Rational(1)}}}; }

Criterion ac1() {
  Criterion c;
  auto I = e2_I(50);
  auto J = e2_J(50);
  for (std::int64_t n = 1; n <= 50; ++n) {
    c.require(colength(I.eval(n)) == 6 * n - 2, "colength of I_" + std::to_string(n) + " is 6n-2");
  }
  Tolerance zero{0.0, kZeroAbs};
  auto ew = ew_multiplicity(I, 50, zero);
  c.require(std::abs(ew.limit) <= kZeroAbs, "e_W(I) = 0, got " + fmt(ew.limit));
  auto QI = colon_family(I, kM);
  auto QJ = colon_family(J, kM);
  for (std::int64_t n = 1; n <= 10; ++n) {
    c.require(integral_closure(QI.eval(n)) != integral_closure(QJ.eval(n)),
              "closures of (I_n:m), (J_n:m) differ at n=" + std::to_string(n));
  }
  auto li = ew_multiplicity(QI, 50, zero);
  auto lj = ew_multiplicity(QJ, 50, zero);
  c.require(std::abs(li.limit) <= kZeroAbs, "colon limit of I is 0, got " + fmt(li.limit));
  c.require(std::abs(lj.limit) <= kZeroAbs, "colon limit of J is 0, got " + fmt(lj.limit));
  c.note("e_W=" + fmt(ew.limit) + " colon limits " + fmt(li.limit) + ", " + fmt(lj.limit));
  return c;
}

Criterion ac2() {
  Criterion c;
  auto D = divisorial_family(divisorial_12());
  const Rational exact = slab_union_volume(divisorial_12()).value * 2;
  c.require(exact == Rational(1, 2), "2! slab volume = 1/2");
  auto est = ew_multiplicity(D, 200, Tolerance{});
  c.require(within_rel(est.limit, 0.5), "divisorial e_W within 2% of 1/2, got " + fmt(est.limit));
  for (std::int64_t n = 2; n <= 200; n += 2) {
    c.require(hs_multiplicity_exact(D.eval(n)).value / (n * n) == Rational(1, 2),
              "e(I_n)/n^2 = 1/2 at n=" + std::to_string(n));
  }
  std::mt19937 rng(2024);
  int done = 0;
  double worst = 0;
  while (done < 25) {
    auto I = oracle::random_ideal(rng, 2, 6, 4, true);
    if (I.is_unit()) continue;
    ++done;
    const double e = to_double(hs_multiplicity_exact(I).value);
    auto fit = ew_multiplicity(power_family(I), 200, Tolerance{});
    worst = std::max(worst, std::abs(fit.limit - e) / e);
    c.require(within_rel(fit.limit, e), I.str() + ": fit " + fmt(fit.limit) + " vs e " + fmt(e));
  }
  c.note("divisorial fit " + fmt(est.limit) + "; worst relative error over 25 power families " + fmt(worst));
  return c;
}

Criterion ac3() {
  Criterion c;
  std::mt19937 rng(77);
  int done = 0;
  while (done < 50) {
    auto I = oracle::random_ideal(rng, 2, 5, 3, true);
    auto J = oracle::random_ideal(rng, 2, 5, 3, true);
    if (I.is_unit() || J.is_unit()) continue;
    ++done;
    auto r = minkowski_check(power_family(I), power_family(J), 40, Tolerance{});
    c.require(r.lhs <= r.rhs + kMinkowskiSlack && r.holds, I.str() + " " + J.str());
  }
  auto strict = minkowski_check(power_family(ideal(2, {{1, 0}, {0, 2}})), power_family(ideal(2, {{2, 0}, {0, 1}})), 60,
                                Tolerance{});
  c.require(strict.exact && strict.holds && !strict.equality, "strict pair classified strict by the exact oracle");
  c.require(*strict.exact_left == 2 && *strict.exact_right == 2 && *strict.exact_product == 6, "strict pair values 2, 2, 6");
  c.require(std::abs(strict.lhs - std::sqrt(6.0)) < 1e-12 && std::abs(strict.rhs - 2 * std::sqrt(2.0)) < 1e-12,
            "strict pair sqrt6 vs 2 sqrt2");
  auto eq = minkowski_check(power_family(ideal(2, {{2, 0}, {0, 2}})), power_family(ideal(2, {{3, 0}, {0, 3}})), 60,
                            Tolerance{});
  c.require(eq.exact && eq.equality, "equality pair classified equal by the exact oracle");
  c.require(*eq.exact_product == 25 && *eq.exact_left == 4 && *eq.exact_right == 9, "equality pair 5 = 2 + 3");
  c.note("50 random pairs; strict " + fmt(strict.lhs) + " < " + fmt(strict.rhs) + "; equality " + fmt(eq.lhs) +
         " = " + fmt(eq.rhs));
  return c;
}

Criterion ac4() {
  Criterion c;
  Tolerance tol;
  std::vector<std::pair<IdealFamily, MonomialIdeal>> pairs = {
      {e2_I(60), kM},
      {divisorial_family(divisorial_12()), kM},
      {power_family(ideal(2, {{2, 0}, {0, 3}})), kM},
      {power_family(ideal(2, {{3, 0}, {1, 1}, {0, 4}})), ideal(2, {{2, 0}, {0, 1}})},
      {divisorial_family(SlabSystem{{Slab{{1, 1}, Rational(1)}, Slab{{1, 3}, Rational(2)}}}), ideal(2, {{1, 1}})},
      {power_family(ideal(2, {{2, 0}, {0, 2}})), MonomialIdeal::unit(2)},
  };
  for (const auto& [F, K] : pairs) {
    auto r = colon_limit(F, K, 60, tol);
    c.require(r.status == Status::pass, "colon limit <= e_W for " + F.descriptor() + " : " + K.str());
  }
  auto six = colon_limit(power_family(ideal(2, {{2, 0}, {0, 3}})), kM, 200, tol);
  c.require(within_rel(six.estimate.limit, 6.0), "(x2,y3) colon m -> 6, got " + fmt(six.estimate.limit));
  auto D = divisorial_family(divisorial_12());
  auto shift = divisorial_shift(divisorial_12(), kM, 100, tol);
  c.require(shift.least_w == std::optional<std::int64_t>(1), "w = 1 verified");
  for (std::int64_t n = 1; n <= 100; ++n) {
    c.require(colon(D.eval(n), kM) == D.eval(n - 1), "(I_n:m) = I_{n-1} at n=" + std::to_string(n));
  }
  c.require(within_rel(shift.colon_estimate.limit, 0.5), "shift colon limit 1/2, got " + fmt(shift.colon_estimate.limit));
  c.note("colon (x2,y3):m " + fmt(six.estimate.limit) + "; divisorial colon limit " +
         fmt(shift.colon_estimate.limit) + "; constructive w " + std::to_string(shift.constructive_w));
  return c;
}

Criterion ac5() {
  Criterion c;
  Tolerance tol;
  auto I = ideal(2, {{2, 0}, {1, 1}});
  auto K = ideal(2, {{2, 0}, {0, 2}});
  for (std::int64_t n = 1; n <= 30; ++n) {
    const auto In = power(I, n);
    const auto xn = ideal(2, {{n, 0}});
    c.require(saturation(colon(In, K)) == xn && saturation(In) == xn, "saturations equal (x^n) at n=" + std::to_string(n));
    c.require(sat_quotient_length(In) == n * (n + 1) / 2, "sat quotient n(n+1)/2 at n=" + std::to_string(n));
  }
  auto r = weakep_noetherian_check(I, K, 100, tol);
  c.require(within_rel(r.power.estimate.limit, 1.0), "weakep limit 1, got " + fmt(r.power.estimate.limit));
  c.require(within_rel(r.epsilon.limit, 1.0), "epsilon 1, got " + fmt(r.epsilon.limit));
  c.require(within_rel(r.closure.estimate.limit, r.power.estimate.limit), "power and closure-power weakep agree");
  c.note("weakep " + fmt(r.power.estimate.limit) + ", closure " + fmt(r.closure.estimate.limit) + ", epsilon " +
         fmt(r.epsilon.limit));
  return c;
}

Criterion ac6() {
  Criterion c;
  auto D = divisorial_family(divisorial_12());
  auto P = power_family(ideal(2, {{2, 0}, {1, 1}}));
  c.require(ar_check(D, 1, 30).passed, "A(1) for the divisorial family");
  c.require(ar_check(P, 2, 30).passed, "A(2) for powers of (x2,xy)");
  auto neg = ar_check(P, 1, 20);
  c.require(!neg.passed && neg.first_failure && *neg.first_failure <= 20, "A(1) fails for powers of (x2,xy)");
  if (neg.first_failure) c.note("A(1) first fails at n=" + std::to_string(*neg.first_failure));
  return c;
}

Criterion ac7() {
  Criterion c;
  // structural examples
  auto D = divisorial_family(divisorial_12());
  auto P = power_family(ideal(2, {{2, 0}, {1, 1}}));
  c.require(verify_filtration(D, 30).passed, "divisorial family is a filtration");
  c.require(verify_filtration(P, 20).passed, "power family is a filtration");
  auto shuffled = table_family({ideal(2, {{2, 0}, {0, 2}}), kM, ideal(2, {{3, 0}, {0, 3}})});
  c.require(!verify_filtration(shuffled, 3).passed, "shuffled table is not a filtration");
  c.require(verify_weakly_graded(P, Exponent({0, 0}), 20).passed, "power family graded");
  auto C = colon_family(power_family(m_power(RingContext(2), 2)), kM);
  c.require(verify_weakly_graded(C, Exponent({2, 0}), 20).passed, "colon family weakly graded with witness x^2");
  auto corrupted = table_family({kM, ideal(2, {{3, 0}, {0, 3}}), ideal(2, {{3, 0}, {0, 3}})});
  auto wg = verify_weakly_graded(corrupted, Exponent({0, 0}), 3);
  c.require(!wg.passed && wg.first_failure, "corrupted table fails weak gradedness with (m,n)");
  c.require(verify_bounded_below(D, 1, 30).passed, "divisorial bounded below with s=1");
  c.require(!verify_bounded_below(P, 3, 4).passed, "powers of (x2,xy) not bounded below");
  c.require(verify_bounded_below(power_family(kM), 1, 20).passed, "powers of m bounded below with s=1");

  // oracle equivalences on 200 random instances
  std::mt19937 rng(4242);
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + trial % 3;
    auto I = oracle::random_ideal(rng, d, 5, 4, false);
    auto J = oracle::random_ideal(rng, d, 5, 4, false);
    auto Ip = oracle::random_ideal(rng, d, 5, 4, true);
    bool ok = I.gens() == oracle::naive_minimal(I.gens());
    ok = ok && colength(Ip) == oracle::box_colength(Ip, 5);
    const auto s = sum(I, J), in = intersect(I, J), co = colon(I, J), pr = product(I, J);
    oracle::for_box(d, 10, [&](const Exponent& a) {
      const bool inI = oracle::raw_contains(I.gens(), a), inJ = oracle::raw_contains(J.gens(), a);
      bool col = true;
      for (const auto& g : J.gens()) col = col && oracle::raw_contains(I.gens(), a + g);
      bool prod = false;
      for (const auto& g : I.gens()) {
        for (const auto& h : J.gens()) prod = prod || (g + h).divides(a);
      }
      ok = ok && contains(s, a) == (inI || inJ) && contains(in, a) == (inI && inJ) && contains(co, a) == col &&
           contains(pr, a) == prod;
    });
    if (!I.is_unit()) {
      auto cl = integral_closure(I);
      ok = ok && is_subset(I, cl) && integral_closure(cl) == cl && is_subset(cl, integral_closure(sum(I, J)));
      auto sat = saturation(I);
      ok = ok && saturation(sat) == sat && colon(sat, maximal_ideal(RingContext(d))) == sat &&
           sat == saturation_by_colon_iteration(I);
      if (d == 2) {
        oracle::for_box(2, 6, [&](const Exponent& a) {
          ok = ok && newton_contains(I, a) == oracle::newton_by_multiples(I.gens(), a, 5);
        });
      }
    }
    if (!ok) {
      ++mismatches;
      c.require(false, "oracle mismatch on I=" + I.str() + " J=" + J.str());
    }
  }
  c.note("200 random instances, " + std::to_string(mismatches) + " mismatches");
  return c;
}

std::map<std::string, std::string> csv_bytes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".csv") continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    out[e.path().filename().string()] = s.str();
  }
  return out;
}

Criterion ac8() {
  Criterion c;
  const char* text = R"({
    "dimension": 2,
    "ideals": {"m": [[1, 0], [0, 1]], "I": [[2, 0], [0, 3]], "A": [[1, 0], [0, 2]], "B": [[2, 0], [0, 1]],
               "X": [[2, 0], [1, 1]], "K": [[2, 0], [0, 2]]},
    "families": {
      "E": {"kind": "table", "length": 60,
            "generators": [{"base": [0, 0], "step": [2, 0]}, {"base": [1, 2], "step": [0, 0]}, {"base": [0, 0], "step": [0, 2]}]},
      "D": {"kind": "divisorial", "slabs": [{"weights": [1, 2], "threshold": 1}, {"weights": [3, 1], "threshold": "4/3"}]},
      "P": {"kind": "power", "ideal": "I"},
      "PA": {"kind": "power", "ideal": "A"},
      "PB": {"kind": "power", "ideal": "B"},
      "PX": {"kind": "power", "ideal": "X"}
    },
    "tasks": [
      {"name": "e2", "op": "mult", "family": "E", "horizon": 60, "expect": 0},
      {"name": "div", "op": "mult", "family": "D", "horizon": 120},
      {"name": "colon", "op": "colon-limit", "family": "P", "ideal": "m", "horizon": 80},
      {"name": "mink", "op": "minkowski", "left": "PA", "right": "PB", "horizon": 60},
      {"name": "weakep", "op": "weakep", "family": "PX", "ideal": "K", "r": 2, "horizon": 40}
    ]
  })";
  auto job = cli::parse_config(text);
  const fs::path root = fs::temp_directory_path() / "multlab_acceptance_ac8";
  fs::remove_all(root);
  fs::create_directories(root);
  auto run_with = [&](const std::string& tag, std::optional<std::string> cache, unsigned threads) {
    cli::RunOptions opts;
    opts.out_dir = root / tag;
    opts.cache = std::move(cache);
    opts.threads = threads;
    auto r = cli::run(job, opts);
    c.require(r.exit_code == 0, tag + " exit code 0");
    return csv_bytes(root / tag);
  };
  const std::string cache = (root / "lengths.cache").string();
  auto cold = run_with("cold", cache, 1);
  auto warm = run_with("warm", cache, 4);
  auto none = run_with("none", std::nullopt, 3);
  auto again = run_with("again", std::nullopt, 1);
  c.require(!cold.empty(), "CSV files were written");
  c.require(cold == warm, "cold and warm cache give identical CSV bytes");
  c.require(cold == none, "no cache with 3 threads gives identical CSV bytes");
  c.require(cold == again, "repeat run gives identical CSV bytes");
  c.note(std::to_string(cold.size()) + " CSV files compared across 4 runs");
  return c;
}

}  // namespace

int main() {
  struct Entry {
    const char* id;
    const char* title;
    Criterion (*fn)();
  };
  const Entry entries[] = {
      {"AC1", "e2 reproduction", ac1},
      {"AC2", "volume = multiplicity oracle agreement", ac2},
      {"AC3", "Minkowski suite", ac3},
      {"AC4", "colon limits and divisorial shift", ac4},
      {"AC5", "weakep and saturation identities", ac5},
      {"AC6", "A(r) suite", ac6},
      {"AC7", "structural verifications and oracle equivalences", ac7},
      {"AC8", "determinism and cache", ac8},
  };
  int failed = 0;
  for (const auto& e : entries) {
    const auto start = std::chrono::steady_clock::now();
    Criterion c;
    try {
      c = e.fn();
    } catch (const std::exception& ex) {
      c.require(false, std::string("exception: ") + ex.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (c.ok ? "PASS " : "FAIL ") << e.id << " " << e.title << " (" << fmt(secs) << " s)";
    if (!c.notes.empty()) std::cout << ": " << c.notes.front();
    std::cout << '\n';
    for (std::size_t i = 1; i < c.notes.size() && i < 12; ++i) std::cout << "      " << c.notes[i] << '\n';
    failed += !c.ok;
  }
  std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criteria failed" : std::string("acceptance: all criteria pass"))
            << '\n';
  return failed ? 1 : 0;
}
