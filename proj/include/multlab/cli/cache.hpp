#pragma once

#include "multlab/limits.hpp"

#include <cstdint>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace multlab::cli {

struct CacheError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Append-only length cache, one "fingerprint,n,length" line per entry.
/// Unreadable lines are skipped with a warning; two different lengths for the
/// same key are a hard error.
class LengthCache : public LengthStore {
 public:
  explicit LengthCache(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      auto entry = parse_line(line);
      if (!entry) {
        warnings_.push_back(path_ + ":" + std::to_string(lineno) + ": skipped unreadable cache line");
        continue;
      }
      auto [key, n, length] = *entry;
      auto [it, inserted] = entries_.emplace(std::make_pair(key, n), length);
      if (!inserted && it->second != length) {
        throw CacheError(path_ + ":" + std::to_string(lineno) + ": conflicting lengths for " + key + " at n = " +
                         std::to_string(n));
      }
    }
  }

  std::optional<std::int64_t> get(const std::string& key, std::int64_t n) override {
    std::lock_guard lock(mu_);
    auto it = entries_.find({key, n});
    if (it == entries_.end()) return std::nullopt;
    ++hits_;
    return it->second;
  }

  void put(const std::string& key, std::int64_t n, std::int64_t length) override {
    std::lock_guard lock(mu_);
    auto [it, inserted] = entries_.emplace(std::make_pair(key, n), length);
    if (!inserted) {
      if (it->second != length) {
        throw CacheError("conflicting lengths for " + key + " at n = " + std::to_string(n) + ": cached " +
                         std::to_string(it->second) + ", computed " + std::to_string(length));
      }
      return;
    }
    std::ofstream out(path_, std::ios::app);
    if (!out) throw CacheError("cannot write cache file " + path_);
    out << key << ',' << n << ',' << length << '\n';
  }

  const std::vector<std::string>& warnings() const { return warnings_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t hits() const { return hits_; }

 private:
  static std::optional<std::tuple<std::string, std::int64_t, std::int64_t>> parse_line(const std::string& line) {
    std::istringstream ss(line);
    std::string key, n_text, len_text, extra;
    if (!std::getline(ss, key, ',') || !std::getline(ss, n_text, ',') || !std::getline(ss, len_text, ',')) {
      return std::nullopt;
    }
    if (std::getline(ss, extra) || key.empty()) return std::nullopt;
    try {
      std::size_t p1 = 0, p2 = 0;
      std::int64_t n = std::stoll(n_text, &p1);
      std::int64_t len = std::stoll(len_text, &p2);
      if (p1 != n_text.size() || p2 != len_text.size() || n < 0 || len < 0) return std::nullopt;
      return std::make_tuple(key, n, len);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

  std::string path_;
  std::map<std::pair<std::string, std::int64_t>, std::int64_t> entries_;
  std::vector<std::string> warnings_;
  std::size_t hits_ = 0;
  std::mutex mu_;
};

}  // namespace multlab::cli
