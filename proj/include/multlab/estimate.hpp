#pragma once

#include "multlab/error.hpp"
#include "multlab/rational.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

namespace multlab {

/// Agreement threshold: relative, with an absolute floor for limits at zero.
struct Tolerance {
  double rel = 0.02;
  double abs = 1e-6;

  double bound(double reference) const { return std::max(rel * std::abs(reference), abs); }
  bool agree(double value, double reference) const { return std::abs(value - reference) <= bound(reference); }
};

/// One point of a normalized sequence: raw is the length (or multiplicity)
/// at n, normalized is d! * raw / n^d.
struct Sample {
  std::int64_t n = 0;
  Rational raw;
  Rational normalized;
};

struct LimitEstimate {
  std::vector<Sample> samples;
  double limit = 0.0;
  double residual = 0.0;
  bool converged = false;
  int model_terms = 0;  // 2: L + c1/n, 3: adds c2/n^2
};

inline std::int64_t factorial(std::size_t d) {
  std::int64_t f = 1;
  for (std::size_t i = 2; i <= d; ++i) f *= static_cast<std::int64_t>(i);
  return f;
}

inline Rational normalize(const Rational& raw, std::int64_t n, std::size_t d) {
  BigInt denom = 1;
  for (std::size_t i = 0; i < d; ++i) denom *= n;
  return raw * factorial(d) / Rational(denom);
}

/// Eight geometrically spaced indices in [4, N]; when N is too small to give
/// eight distinct values, the largest unused indices below N fill in.
inline std::vector<std::int64_t> sample_ladder(std::int64_t N, int count = 8) {
  if (N < 4) throw std::invalid_argument("limit horizon must be at least 4");
  std::set<std::int64_t> ns;
  const double lo = 4.0;
  for (int i = 0; i < count; ++i) {
    double t = count == 1 ? 1.0 : static_cast<double>(i) / (count - 1);
    auto n = static_cast<std::int64_t>(std::llround(lo * std::pow(static_cast<double>(N) / lo, t)));
    ns.insert(std::clamp<std::int64_t>(n, 4, N));
  }
  for (std::int64_t n = N; static_cast<int>(ns.size()) < count && n >= 1; --n) ns.insert(n);
  return {ns.begin(), ns.end()};
}

/// Least-squares fit of normalized values to L + c1/n (+ c2/n^2 when there
/// are at least six samples) over the tail half of the samples.
inline LimitEstimate fit_limit(std::vector<Sample> samples, const Tolerance& tol) {
  if (samples.size() < 4) throw std::invalid_argument("limit fit needs at least 4 samples");
  std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) { return a.n < b.n; });
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].n == samples[i - 1].n) throw std::invalid_argument("duplicate sample index");
  }
  const std::size_t k = samples.size();
  const int terms = k >= 6 ? 3 : 2;
  const std::size_t tail = std::max<std::size_t>((k + 1) / 2, std::min<std::size_t>(k, 4));
  const std::size_t first = k - tail;

  Eigen::MatrixXd A(tail, terms);
  Eigen::VectorXd b(tail);
  for (std::size_t i = 0; i < tail; ++i) {
    const auto& s = samples[first + i];
    double inv = 1.0 / static_cast<double>(s.n);
    A(i, 0) = 1.0;
    A(i, 1) = inv;
    if (terms == 3) A(i, 2) = inv * inv;
    b(i) = to_double(s.normalized);
  }
  Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);

  LimitEstimate est;
  est.model_terms = terms;
  est.limit = x(0);
  Eigen::VectorXd r = A * x - b;
  est.residual = tail ? r.cwiseAbs().maxCoeff() : 0.0;
  est.converged = est.residual <= tol.bound(est.limit);
  est.samples = std::move(samples);
  return est;
}

}  // namespace multlab
