#pragma once

#include "multlab/estimate.hpp"
#include "multlab/rational.hpp"

#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace multlab {

enum class Status { pass, fail, inconclusive, not_applicable };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inconclusive: return "inconclusive";
    case Status::not_applicable: return "n/a";
  }
  return "?";
}

/// Uniform summary of one check: ordered key/value details plus any sampled
/// series, which the CLI turns into CSV files.
struct CheckReport {
  std::string check;
  Status status = Status::pass;
  std::vector<std::pair<std::string, std::string>> details;
  std::vector<std::pair<std::string, LimitEstimate>> series;

  CheckReport() = default;
  explicit CheckReport(std::string name) : check(std::move(name)) {}

  void add(std::string key, std::string value) { details.emplace_back(std::move(key), std::move(value)); }
  void add(std::string key, double value) { add(std::move(key), to_decimal_string(value)); }
  void add(std::string key, bool value) { add(std::move(key), std::string(value ? "true" : "false")); }
  void add(std::string key, const char* value) { add(std::move(key), std::string(value)); }
  void add(std::string key, const Rational& value) { add(std::move(key), to_fraction_string(value)); }
};

/// CSV with header "n,length,normalized,exact": decimal with 12 significant
/// digits, then the exact p/q value of the normalized sample.
inline void write_csv(std::ostream& os, const LimitEstimate& est) {
  os << "n,length,normalized,exact\n";
  for (const auto& s : est.samples) {
    os << s.n << ',' << to_fraction_string(s.raw) << ',' << to_decimal_string(to_double(s.normalized)) << ','
       << to_fraction_string(s.normalized) << '\n';
  }
}

inline std::string csv_string(const LimitEstimate& est) {
  std::ostringstream os;
  write_csv(os, est);
  return os.str();
}

}  // namespace multlab
