#pragma once

#include "multlab/exponent.hpp"
#include "multlab/family.hpp"
#include "multlab/monomial_ideal.hpp"
#include "multlab/rational.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace multlab::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FormulaSpec {
  std::int64_t length = 0;
  std::vector<AffineExponent> generators;
  friend bool operator==(const FormulaSpec&, const FormulaSpec&) = default;
};

struct FamilySpec {
  std::string kind;
  std::optional<std::string> ideal, family, left, right;
  std::vector<Slab> slabs;
  std::optional<Rational> factor;
  std::vector<MonomialIdeal> values;
  std::optional<FormulaSpec> formula;
  friend bool operator==(const FamilySpec&, const FamilySpec&) = default;
};

struct TaskSpec {
  std::string name;
  std::string op;
  std::optional<std::string> family, left, right, ideal, base, output;
  std::optional<std::int64_t> horizon, r, s;
  std::optional<double> tolerance, abs_tolerance;
  std::optional<std::vector<Coord>> witness;
  std::optional<Rational> expect;
  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

struct JobConfig {
  std::size_t dimension = 0;
  std::map<std::string, MonomialIdeal> ideals;
  std::map<std::string, FamilySpec> families;
  std::vector<TaskSpec> tasks;
  std::optional<std::string> cache;
  std::optional<unsigned> threads;
  friend bool operator==(const JobConfig&, const JobConfig&) = default;
};

/// Argument roles each task op accepts; the first list is required.
struct OpSignature {
  std::vector<std::string> required;
  std::vector<std::string> optional;
  bool limit = true;
};

inline const std::map<std::string, OpSignature>& op_signatures() {
  static const std::map<std::string, OpSignature> ops = {
      {"mult", {{"family"}, {"expect"}}},
      {"epsilon", {{"family"}, {"expect"}}},
      {"volmult", {{"family"}, {}}},
      {"minkowski", {{"left", "right"}, {}}},
      {"ar", {{"family", "r"}, {}, false}},
      {"colon-limit", {{"family", "ideal"}, {}}},
      {"rees", {{"left", "right", "ideal"}, {}}},
      {"weakep", {{"family", "ideal", "r"}, {}}},
      {"shift", {{"family", "ideal"}, {}}},
      {"closure", {{"left", "right"}, {}}},
      {"noetherian-colon", {{"base", "ideal"}, {}}},
      {"minkowski-equality", {{"left", "right", "ideal"}, {}}},
      {"weakep-noetherian", {{"base", "ideal"}, {}}},
      {"filtration", {{"family"}, {}, false}},
      {"weakly-graded", {{"family"}, {"witness"}, false}},
      {"bounded-below", {{"family"}, {"s"}, false}},
  };
  return ops;
}

namespace detail {

using json = nlohmann::json;

inline void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
  }
}

inline std::vector<Coord> parse_vector(const json& j, std::size_t d, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an exponent vector");
  std::vector<Coord> v;
  for (const auto& x : j) {
    if (!x.is_number_integer() || x.get<std::int64_t>() < 0) {
      throw ConfigError(where + ": exponent entries must be nonnegative integers");
    }
    v.push_back(x.get<std::int64_t>());
  }
  if (v.size() != d) {
    throw ConfigError(where + ": dimension mismatch, vector of length " + std::to_string(v.size()) +
                      " in dimension " + std::to_string(d));
  }
  return v;
}

inline MonomialIdeal parse_ideal(const json& j, std::size_t d, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": ideal literal must be a list of exponent vectors");
  std::vector<Exponent> gens;
  for (const auto& e : j) gens.emplace_back(parse_vector(e, d, where));
  return MonomialIdeal(d, std::move(gens));
}

inline Rational parse_rational_value(const json& j, const std::string& where) {
  try {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ": expected an integer or a \"p/q\" string");
}

inline std::string get_string(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

inline std::optional<std::string> opt_string(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  return get_string(obj, key, where);
}

inline std::optional<std::int64_t> opt_int(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  if (!obj.at(key).is_number_integer()) throw ConfigError(where + ": \"" + key + "\" must be an integer");
  return obj.at(key).get<std::int64_t>();
}

inline std::optional<double> opt_double(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  if (!obj.at(key).is_number()) throw ConfigError(where + ": \"" + key + "\" must be a number");
  return obj.at(key).get<double>();
}

inline std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline FamilySpec parse_family(const json& j, std::size_t d, const std::string& where) {
  reject_unknown(j, {"kind", "ideal", "family", "left", "right", "slabs", "factor", "values", "length", "generators"},
                 where);
  if (!j.contains("kind")) throw ConfigError(where + ": missing \"kind\"");
  FamilySpec f;
  f.kind = get_string(j, "kind", where);
  auto need = [&](const char* key) {
    if (!j.contains(key)) throw ConfigError(where + ": family kind \"" + f.kind + "\" needs \"" + key + "\"");
  };
  if (f.kind == "power" || f.kind == "closure-power") {
    need("ideal");
    f.ideal = get_string(j, "ideal", where);
  } else if (f.kind == "divisorial") {
    need("slabs");
    if (!j.at("slabs").is_array() || j.at("slabs").empty()) throw ConfigError(where + ": \"slabs\" must be a nonempty list");
    for (const auto& s : j.at("slabs")) {
      reject_unknown(s, {"weights", "threshold"}, where + ".slabs");
      if (!s.contains("weights") || !s.contains("threshold")) {
        throw ConfigError(where + ".slabs: each slab needs \"weights\" and \"threshold\"");
      }
      Slab slab{parse_vector(s.at("weights"), d, where + ".slabs"), parse_rational_value(s.at("threshold"), where)};
      for (Coord w : slab.weights) {
        if (w <= 0) throw ConfigError(where + ".slabs: weights must be strictly positive");
      }
      if (slab.threshold <= 0) throw ConfigError(where + ".slabs: thresholds must be positive");
      f.slabs.push_back(std::move(slab));
    }
  } else if (f.kind == "colon" || f.kind == "colon-power") {
    need("family");
    need("ideal");
    f.family = get_string(j, "family", where);
    f.ideal = get_string(j, "ideal", where);
  } else if (f.kind == "rescale") {
    need("family");
    need("factor");
    f.family = get_string(j, "family", where);
    f.factor = parse_rational_value(j.at("factor"), where);
    if (*f.factor <= 0) throw ConfigError(where + ": rescale factor must be positive");
  } else if (f.kind == "product") {
    need("left");
    need("right");
    f.left = get_string(j, "left", where);
    f.right = get_string(j, "right", where);
  } else if (f.kind == "table") {
    if (j.contains("values")) {
      if (!j.at("values").is_array() || j.at("values").empty()) throw ConfigError(where + ": \"values\" must be a nonempty list");
      for (const auto& v : j.at("values")) f.values.push_back(parse_ideal(v, d, where + ".values"));
    } else {
      need("generators");
      need("length");
      FormulaSpec formula;
      formula.length = *opt_int(j, "length", where);
      if (formula.length < 1) throw ConfigError(where + ": table length must be positive");
      for (const auto& g : j.at("generators")) {
        reject_unknown(g, {"base", "step"}, where + ".generators");
        formula.generators.push_back({parse_vector(g.at("base"), d, where + ".generators"),
                                      parse_vector(g.at("step"), d, where + ".generators")});
      }
      f.formula = std::move(formula);
    }
  } else {
    throw ConfigError(where + ": unknown family kind \"" + f.kind + "\"");
  }
  // keys that do not belong to this kind
  static const std::map<std::string, std::set<std::string>> allowed = {
      {"power", {"kind", "ideal"}},
      {"closure-power", {"kind", "ideal"}},
      {"divisorial", {"kind", "slabs"}},
      {"colon", {"kind", "family", "ideal"}},
      {"colon-power", {"kind", "family", "ideal"}},
      {"rescale", {"kind", "family", "factor"}},
      {"product", {"kind", "left", "right"}},
      {"table", {"kind", "values", "length", "generators"}},
  };
  reject_unknown(j, allowed.at(f.kind), where);
  return f;
}

inline TaskSpec parse_task(const json& j, std::size_t d, const std::string& where) {
  reject_unknown(j, {"name", "op", "family", "left", "right", "ideal", "base", "output", "horizon", "r", "s",
                     "tolerance", "abs_tolerance", "witness", "expect"},
                 where);
  if (!j.contains("name") || !j.contains("op")) throw ConfigError(where + ": tasks need \"name\" and \"op\"");
  TaskSpec t;
  t.name = get_string(j, "name", where);
  t.op = get_string(j, "op", where);
  const auto& ops = op_signatures();
  auto sig = ops.find(t.op);
  if (sig == ops.end()) throw ConfigError(where + ": unknown op \"" + t.op + "\"");
  t.family = opt_string(j, "family", where);
  t.left = opt_string(j, "left", where);
  t.right = opt_string(j, "right", where);
  t.ideal = opt_string(j, "ideal", where);
  t.base = opt_string(j, "base", where);
  t.output = opt_string(j, "output", where);
  t.horizon = opt_int(j, "horizon", where);
  t.r = opt_int(j, "r", where);
  t.s = opt_int(j, "s", where);
  t.tolerance = opt_double(j, "tolerance", where);
  t.abs_tolerance = opt_double(j, "abs_tolerance", where);
  if (j.contains("witness")) t.witness = parse_vector(j.at("witness"), d, where + ".witness");
  if (j.contains("expect")) t.expect = parse_rational_value(j.at("expect"), where + ".expect");

  std::set<std::string> roles;
  for (auto it = j.begin(); it != j.end(); ++it) roles.insert(it.key());
  for (const auto& req : sig->second.required) {
    if (!roles.count(req)) throw ConfigError(where + ": op \"" + t.op + "\" needs \"" + req + "\"");
  }
  static const std::set<std::string> generic = {"name", "op", "output", "horizon", "tolerance", "abs_tolerance"};
  for (const auto& key : roles) {
    bool ok = generic.count(key) || std::count(sig->second.required.begin(), sig->second.required.end(), key) ||
              std::count(sig->second.optional.begin(), sig->second.optional.end(), key);
    if (!ok) throw ConfigError(where + ": op \"" + t.op + "\" does not take \"" + key + "\"");
  }
  if (sig->second.limit && t.horizon && *t.horizon < 4) {
    throw ConfigError(where + ": limit tasks need horizon >= 4");
  }
  if (t.horizon && *t.horizon < 1) throw ConfigError(where + ": horizon must be positive");
  if (t.r && *t.r < 1) throw ConfigError(where + ": r must be positive");
  if (t.s && *t.s < 1) throw ConfigError(where + ": s must be positive");
  return t;
}

inline void resolve_references(const JobConfig& job) {
  auto ideal_ref = [&](const std::optional<std::string>& ref, const std::string& where) {
    if (ref && !job.ideals.count(*ref)) throw ConfigError(where + ": unresolved ideal reference \"" + *ref + "\"");
  };
  auto family_ref = [&](const std::optional<std::string>& ref, const std::string& where) {
    if (ref && !job.families.count(*ref)) throw ConfigError(where + ": unresolved family reference \"" + *ref + "\"");
  };
  for (const auto& [name, f] : job.families) {
    const std::string where = "families." + name;
    ideal_ref(f.ideal, where);
    family_ref(f.family, where);
    family_ref(f.left, where);
    family_ref(f.right, where);
  }
  // cycles among family references
  std::map<std::string, int> state;
  std::function<void(const std::string&)> visit = [&](const std::string& name) {
    int& s = state[name];
    if (s == 2) return;
    if (s == 1) throw ConfigError("families." + name + ": cyclic family reference");
    s = 1;
    const auto& f = job.families.at(name);
    for (const auto* ref : {&f.family, &f.left, &f.right}) {
      if (*ref) visit(**ref);
    }
    state[name] = 2;
  };
  for (const auto& [name, f] : job.families) visit(name);

  std::set<std::string> names;
  for (std::size_t i = 0; i < job.tasks.size(); ++i) {
    const auto& t = job.tasks[i];
    const std::string where = "tasks[" + std::to_string(i) + "]";
    if (!names.insert(t.name).second) throw ConfigError(where + ": duplicate task name \"" + t.name + "\"");
    family_ref(t.family, where);
    family_ref(t.left, where);
    family_ref(t.right, where);
    ideal_ref(t.ideal, where);
    ideal_ref(t.base, where);
  }
}

}  // namespace detail

/// Parses and validates a job document; unknown keys are rejected.
inline JobConfig parse_config(const std::string& text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("syntax error at " + detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                      e.what());
  }
  detail::reject_unknown(doc, {"dimension", "ideals", "families", "tasks", "cache", "threads"}, "config");
  JobConfig job;
  if (!doc.contains("dimension") || !doc.at("dimension").is_number_integer() || doc.at("dimension").get<std::int64_t>() < 1) {
    throw ConfigError("config: \"dimension\" must be a positive integer");
  }
  job.dimension = doc.at("dimension").get<std::size_t>();
  const std::size_t d = job.dimension;
  if (doc.contains("ideals")) {
    if (!doc.at("ideals").is_object()) throw ConfigError("config: \"ideals\" must be an object");
    for (auto it = doc.at("ideals").begin(); it != doc.at("ideals").end(); ++it) {
      job.ideals.emplace(it.key(), detail::parse_ideal(it.value(), d, "ideals." + it.key()));
    }
  }
  if (doc.contains("families")) {
    if (!doc.at("families").is_object()) throw ConfigError("config: \"families\" must be an object");
    for (auto it = doc.at("families").begin(); it != doc.at("families").end(); ++it) {
      job.families.emplace(it.key(), detail::parse_family(it.value(), d, "families." + it.key()));
    }
  }
  if (doc.contains("tasks")) {
    if (!doc.at("tasks").is_array()) throw ConfigError("config: \"tasks\" must be a list");
    std::size_t i = 0;
    for (const auto& t : doc.at("tasks")) job.tasks.push_back(detail::parse_task(t, d, "tasks[" + std::to_string(i++) + "]"));
  }
  if (doc.contains("cache")) job.cache = detail::get_string(doc, "cache", "config");
  if (doc.contains("threads")) {
    auto t = detail::opt_int(doc, "threads", "config");
    if (*t < 1) throw ConfigError("config: \"threads\" must be positive");
    job.threads = static_cast<unsigned>(*t);
  }
  detail::resolve_references(job);
  return job;
}

/// Canonical serialization; parse_config(render(job)) == job.
inline std::string render(const JobConfig& job) {
  using detail::json;
  auto ideal_json = [](const MonomialIdeal& I) {
    json a = json::array();
    for (const auto& g : I.gens()) a.push_back(g.vec());
    return a;
  };
  json doc;
  doc["dimension"] = job.dimension;
  doc["ideals"] = json::object();
  for (const auto& [name, I] : job.ideals) doc["ideals"][name] = ideal_json(I);
  doc["families"] = json::object();
  for (const auto& [name, f] : job.families) {
    json o;
    o["kind"] = f.kind;
    if (f.ideal) o["ideal"] = *f.ideal;
    if (f.family) o["family"] = *f.family;
    if (f.left) o["left"] = *f.left;
    if (f.right) o["right"] = *f.right;
    if (f.factor) o["factor"] = to_fraction_string(*f.factor);
    if (!f.slabs.empty()) {
      json s = json::array();
      for (const auto& slab : f.slabs) s.push_back({{"weights", slab.weights}, {"threshold", to_fraction_string(slab.threshold)}});
      o["slabs"] = s;
    }
    if (!f.values.empty()) {
      json v = json::array();
      for (const auto& I : f.values) v.push_back(ideal_json(I));
      o["values"] = v;
    }
    if (f.formula) {
      o["length"] = f.formula->length;
      json g = json::array();
      for (const auto& a : f.formula->generators) g.push_back({{"base", a.base}, {"step", a.step}});
      o["generators"] = g;
    }
    doc["families"][name] = o;
  }
  doc["tasks"] = json::array();
  for (const auto& t : job.tasks) {
    json o;
    o["name"] = t.name;
    o["op"] = t.op;
    if (t.family) o["family"] = *t.family;
    if (t.left) o["left"] = *t.left;
    if (t.right) o["right"] = *t.right;
    if (t.ideal) o["ideal"] = *t.ideal;
    if (t.base) o["base"] = *t.base;
    if (t.output) o["output"] = *t.output;
    if (t.horizon) o["horizon"] = *t.horizon;
    if (t.r) o["r"] = *t.r;
    if (t.s) o["s"] = *t.s;
    if (t.tolerance) o["tolerance"] = *t.tolerance;
    if (t.abs_tolerance) o["abs_tolerance"] = *t.abs_tolerance;
    if (t.witness) o["witness"] = *t.witness;
    if (t.expect) o["expect"] = to_fraction_string(*t.expect);
    doc["tasks"].push_back(o);
  }
  if (job.cache) doc["cache"] = *job.cache;
  if (job.threads) doc["threads"] = *job.threads;
  return doc.dump(2) + "\n";
}

/// Instantiates every named family, resolving references.
inline std::map<std::string, IdealFamily> build_families(const JobConfig& job) {
  std::map<std::string, IdealFamily> built;
  std::function<IdealFamily(const std::string&)> get = [&](const std::string& name) -> IdealFamily {
    if (auto it = built.find(name); it != built.end()) return it->second;
    const FamilySpec& f = job.families.at(name);
    auto ideal = [&]() -> const MonomialIdeal& { return job.ideals.at(*f.ideal); };
    std::optional<IdealFamily> fam;
    try {
      if (f.kind == "power") fam = power_family(ideal());
      else if (f.kind == "closure-power") fam = closure_power_family(ideal());
      else if (f.kind == "divisorial") fam = divisorial_family(SlabSystem{f.slabs});
      else if (f.kind == "colon") fam = colon_family(get(*f.family), ideal());
      else if (f.kind == "colon-power") fam = colon_power_family(get(*f.family), ideal());
      else if (f.kind == "rescale") fam = rescale_family(get(*f.family), *f.factor);
      else if (f.kind == "product") fam = product_family(get(*f.left), get(*f.right));
      else if (f.kind == "table") {
        fam = f.formula ? table_family_from_formula(job.dimension, f.formula->length, f.formula->generators)
                        : table_family(f.values);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("families." + name + ": " + e.what());
    }
    built.emplace(name, *fam);
    return *fam;
  };
  for (const auto& [name, f] : job.families) get(name);
  return built;
}

}  // namespace multlab::cli
