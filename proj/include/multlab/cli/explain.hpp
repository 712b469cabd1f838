#pragma once

#include <map>
#include <optional>
#include <string>

namespace multlab::cli {

inline const std::map<std::string, std::string>& explanations() {
  static const std::map<std::string, std::string> text = {
      {"mult",
       "Estimates e_W(F) = lim d! l(R/F(n)) / n^d from exact colengths on a geometric ladder of n up to the "
       "horizon. Passes when the fit converges and, if an expected value is given, agrees with it."},
      {"epsilon",
       "Estimates epsilon(F) = lim d! l(H^0_m(R/F(n))) / n^d for a filtration, using l(F(n)^sat / F(n))."},
      {"volmult",
       "Compares lim d! l(R/F(n)) / n^d with lim e(F(n)) / n^d for a family of m-primary ideals; both limits "
       "equal d! times the covolume of the limiting Newton region."},
      {"minkowski",
       "Checks e_W(FG)^(1/d) <= e_W(F)^(1/d) + e_W(G)^(1/d), exactly when closed forms exist, otherwise on "
       "fitted limits."},
      {"ar",
       "Checks the A(r) condition F(n)^sat cap m^(rn) = F(n) cap m^(rn) for every n up to the horizon."},
      {"colon-limit",
       "Estimates lim d! l(R/(F(n) : K)) / n^d and checks it does not exceed e_W(F); when F is bounded below "
       "linearly and weakly graded, the two agree."},
      {"rees",
       "For F(n) inside G(n): integral closures of the Rees algebras agree exactly when the (. : K) colon "
       "limits agree. Degreewise closure equality up to the horizon is a necessary condition only, so equal "
       "limits with differing closures is inconclusive."},
      {"weakep",
       "Estimates lim d! l(H^0_m(R/(F(n) : K))) / n^d for a filtration satisfying A(r); for m-primary K it also "
       "checks (F(n) : K)^sat = F(n)^sat and the bound by epsilon(F)."},
      {"shift",
       "For a divisorial filtration and proper K, exhibits w with (F(wn) : K) inside F(w(n-1)) and compares "
       "the colon limit with d! vol of the slab union."},
      {"closure",
       "If F(n) is inside G(n) and the integral closures agree for every n, the multiplicities e_W agree. "
       "When the closures differ the check is not applicable."},
      {"noetherian-colon",
       "For m-primary I and K, lim d! l(R/(I^n : K)) / n^d = e(I), and likewise with the integral closure of "
       "I^n."},
      {"minkowski-equality",
       "For divisorial families, equality in the Minkowski inequality of the colon families holds exactly "
       "when closure(F(an)) = closure(G(bn)) for some a, b and all n."},
      {"weakep-noetherian",
       "For a nonzero ideal I and m-primary K, the weakep limits of {I^n} and of {closure(I^n)} both equal "
       "epsilon(I)."},
      {"filtration", "Checks F(n+1) is contained in F(n) for every n below the horizon."},
      {"weakly-graded",
       "Checks x^c F(m) F(n) is contained in F(m+n) for m + n up to the horizon, with the declared or given "
       "witness c."},
      {"bounded-below", "Checks m^(sn) is contained in F(n) for every n up to the horizon."},
  };
  return text;
}

inline std::optional<std::string> explain(const std::string& check) {
  const auto& t = explanations();
  auto it = t.find(check);
  if (it == t.end()) return std::nullopt;
  return it->second;
}

}  // namespace multlab::cli
