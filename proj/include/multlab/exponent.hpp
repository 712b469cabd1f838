#pragma once

#include "multlab/error.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace multlab {

using Coord = std::int64_t;

inline Coord checked_add(Coord a, Coord b) {
  Coord r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("exponent overflow in addition");
  return r;
}

inline Coord checked_mul(Coord a, Coord b) {
  Coord r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("exponent overflow in multiplication");
  return r;
}

/// A point of the nonnegative integer lattice N^d, standing for the monomial x^a.
class Exponent {
 public:
  Exponent() = default;
  explicit Exponent(std::size_t dim) : coords_(dim, 0) {}
  Exponent(std::initializer_list<Coord> coords) : coords_(coords) { validate(); }
  explicit Exponent(std::vector<Coord> coords) : coords_(std::move(coords)) { validate(); }

  static Exponent unit_vector(std::size_t dim, std::size_t j, Coord k = 1) {
    Exponent e(dim);
    e.coords_.at(j) = k;
    return e;
  }

  std::size_t dim() const { return coords_.size(); }
  Coord operator[](std::size_t j) const { return coords_[j]; }
  Coord& operator[](std::size_t j) { return coords_[j]; }
  std::span<const Coord> coords() const { return coords_; }
  const std::vector<Coord>& vec() const { return coords_; }

  Coord degree() const {
    Coord s = 0;
    for (Coord c : coords_) s = checked_add(s, c);
    return s;
  }

  bool is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](Coord c) { return c == 0; });
  }

  /// Componentwise <=, i.e. x^this divides x^other.
  bool divides(const Exponent& other) const {
    for (std::size_t j = 0; j < coords_.size(); ++j) {
      if (coords_[j] > other.coords_[j]) return false;
    }
    return true;
  }

  friend Exponent operator+(const Exponent& a, const Exponent& b) {
    require_same_dim(a, b);
    Exponent r(a.dim());
    for (std::size_t j = 0; j < a.dim(); ++j) r.coords_[j] = checked_add(a.coords_[j], b.coords_[j]);
    return r;
  }

  /// Componentwise max(a - b, 0): the exponent of x^a : x^b.
  friend Exponent quotient(const Exponent& a, const Exponent& b) {
    require_same_dim(a, b);
    Exponent r(a.dim());
    for (std::size_t j = 0; j < a.dim(); ++j) r.coords_[j] = std::max<Coord>(a.coords_[j] - b.coords_[j], 0);
    return r;
  }

  friend Exponent lcm(const Exponent& a, const Exponent& b) {
    require_same_dim(a, b);
    Exponent r(a.dim());
    for (std::size_t j = 0; j < a.dim(); ++j) r.coords_[j] = std::max(a.coords_[j], b.coords_[j]);
    return r;
  }

  friend Exponent scaled(const Exponent& a, Coord k) {
    Exponent r(a.dim());
    for (std::size_t j = 0; j < a.dim(); ++j) r.coords_[j] = checked_mul(a.coords_[j], k);
    return r;
  }

  friend auto operator<=>(const Exponent&, const Exponent&) = default;
  friend bool operator==(const Exponent&, const Exponent&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Exponent& e) {
    os << '[';
    for (std::size_t j = 0; j < e.dim(); ++j) os << (j ? "," : "") << e.coords_[j];
    return os << ']';
  }

  std::string str() const {
    std::string s = "[";
    for (std::size_t j = 0; j < coords_.size(); ++j) {
      if (j) s += ',';
      s += std::to_string(coords_[j]);
    }
    return s + "]";
  }

  static void require_same_dim(const Exponent& a, const Exponent& b) {
    if (a.dim() != b.dim()) {
      throw DimensionError("exponent dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                           std::to_string(b.dim()));
    }
  }

 private:
  void validate() const {
    for (Coord c : coords_) {
      if (c < 0) throw std::invalid_argument("exponent entries must be nonnegative");
    }
  }

  std::vector<Coord> coords_;
};

struct ExponentHash {
  std::size_t operator()(const Exponent& e) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Coord c : e.coords()) {
      h ^= static_cast<std::size_t>(c) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace multlab
