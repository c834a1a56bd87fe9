#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bigint.hpp"

namespace kronlab {

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Integer partition stored densely as weakly decreasing positive parts.
///
/// Trailing zeros are stripped on construction, so two partitions compare
/// equal iff their stored parts are equal. `part(i)` is 1-based and total:
/// it returns 0 past the last row.
class Partition {
 public:
  Partition() = default;

  explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i] <= 0) throw std::invalid_argument("partition parts must be positive");
      if (i > 0 && parts_[i] > parts_[i - 1])
        throw std::invalid_argument("partition parts must be weakly decreasing");
      size_ += parts_[i];
    }
  }

  Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

  /// `value^multiplicity`, e.g. rectangle(3, 2) == (3,3).
  static Partition rectangle(int value, int multiplicity) {
    if (value < 0 || multiplicity < 0) throw std::invalid_argument("negative rectangle");
    if (value == 0) return {};
    return Partition(std::vector<int>(static_cast<std::size_t>(multiplicity), value));
  }

  std::span<const int> parts() const { return parts_; }
  const std::vector<int>& vec() const { return parts_; }
  int size() const { return size_; }
  int length() const { return static_cast<int>(parts_.size()); }
  bool empty() const { return parts_.empty(); }
  int first() const { return part(1); }

  int part(int i) const {
    if (i < 1 || i > length()) return 0;
    return parts_[static_cast<std::size_t>(i - 1)];
  }

  bool operator==(const Partition& other) const { return parts_ == other.parts_; }
  std::strong_ordering operator<=>(const Partition& other) const {
    return parts_ <=> other.parts_;
  }

 private:
  std::vector<int> parts_;
  int size_ = 0;
};

/// Canonical text: `8,2^5` for (8,2,2,2,2,2); the empty partition is "".
inline std::string to_text(const Partition& p) {
  std::string out;
  auto parts = p.parts();
  for (std::size_t i = 0; i < parts.size();) {
    std::size_t j = i;
    while (j < parts.size() && parts[j] == parts[i]) ++j;
    if (!out.empty()) out += ',';
    out += std::to_string(parts[i]);
    if (j - i > 1) {
      out += '^';
      out += std::to_string(j - i);
    }
    i = j;
  }
  return out;
}

/// Inverse of to_text. Also accepts "-" for the empty partition and
/// non-grouped runs such as `2,2^3`.
inline Partition parse_partition(std::string_view text) {
  if (text.empty() || text == "-") return {};
  auto parse_int = [&](std::string_view tok) {
    if (tok.empty() || tok.size() > 6)
      throw ParseError("bad partition syntax: '" + std::string(text) + "'");
    int v = 0;
    for (char c : tok) {
      if (c < '0' || c > '9') throw ParseError("bad partition syntax: '" + std::string(text) + "'");
      v = v * 10 + (c - '0');
    }
    return v;
  };
  std::vector<int> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = text.find(',', pos);
    std::string_view item = text.substr(pos, comma == std::string_view::npos ? comma : comma - pos);
    std::size_t caret = item.find('^');
    int value = 0;
    int mult = 1;
    if (caret == std::string_view::npos) {
      value = parse_int(item);
    } else {
      value = parse_int(item.substr(0, caret));
      mult = parse_int(item.substr(caret + 1));
    }
    if (value == 0 || mult == 0)
      throw ParseError("partition parts and multiplicities must be positive: '" + std::string(text) + "'");
    if (!parts.empty() && value > parts.back())
      throw ParseError("partition parts must be weakly decreasing: '" + std::string(text) + "'");
    parts.insert(parts.end(), static_cast<std::size_t>(mult), value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return Partition(std::move(parts));
}

inline Partition conjugate(const Partition& p) {
  std::vector<int> out(static_cast<std::size_t>(p.first()), 0);
  for (int row : p.parts())
    for (int c = 0; c < row; ++c) ++out[static_cast<std::size_t>(c)];
  return Partition(std::move(out));
}

inline bool is_self_conjugate(const Partition& p) { return conjugate(p) == p; }

/// Side of the largest square inside the diagram.
inline int durfee(const Partition& p) {
  int k = 0;
  while (p.part(k + 1) >= k + 1) ++k;
  return k;
}

/// durfee(pad(a, n)), which does not depend on n once the padding is valid.
inline int stable_durfee(const Partition& a) {
  int k = 1;
  while (a.part(k) >= k + 1) ++k;
  return k;
}

/// a[n] = (n - |a|, a_1, a_2, ...); requires n >= |a| + a_1.
inline Partition pad(const Partition& a, int n) {
  if (n < a.size() + a.first())
    throw std::invalid_argument("pad: n=" + std::to_string(n) + " is below |a|+a_1=" +
                                std::to_string(a.size() + a.first()) + " for a=" + to_text(a));
  std::vector<int> parts;
  parts.reserve(a.parts().size() + 1);
  parts.push_back(n - a.size());
  parts.insert(parts.end(), a.parts().begin(), a.parts().end());
  return Partition(std::move(parts));
}

/// Smallest n for which pad(a, n) is defined.
inline int min_pad(const Partition& a) { return a.size() + a.first(); }

inline Partition scale(int factor, const Partition& p) {
  if (factor < 1) throw std::invalid_argument("scale factor must be positive");
  std::vector<int> parts(p.parts().begin(), p.parts().end());
  for (int& x : parts) x *= factor;
  return Partition(std::move(parts));
}

inline Partition add(const Partition& a, const Partition& b) {
  std::vector<int> parts(static_cast<std::size_t>(std::max(a.length(), b.length())));
  for (int i = 1; i <= static_cast<int>(parts.size()); ++i)
    parts[static_cast<std::size_t>(i - 1)] = a.part(i) + b.part(i);
  return Partition(std::move(parts));
}

/// Diagram inclusion inner ⊆ outer.
inline bool contains(const Partition& outer, const Partition& inner) {
  if (inner.length() > outer.length()) return false;
  for (int i = 1; i <= inner.length(); ++i)
    if (inner.part(i) > outer.part(i)) return false;
  return true;
}

namespace detail {

template <class F>
void enumerate_partitions(int remaining, int max_part, std::vector<int>& current,
                          const Partition* bound, F& emit) {
  if (remaining == 0) {
    emit(current);
    return;
  }
  int row = static_cast<int>(current.size()) + 1;
  int cap = std::min(remaining, max_part);
  if (bound) cap = std::min(cap, bound->part(row));
  for (int v = cap; v >= 1; --v) {
    current.push_back(v);
    enumerate_partitions(remaining - v, v, current, bound, emit);
    current.pop_back();
  }
}

}  // namespace detail

/// Every partition of n, in reverse lexicographic order: (n), (n-1,1), ...
inline const std::vector<Partition>& partitions_of(int n) {
  if (n < 0) throw std::invalid_argument("partitions_of: negative size");
  static std::mutex mutex;
  static std::map<int, std::vector<Partition>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<Partition> out;
  std::vector<int> current;
  auto emit = [&](const std::vector<int>& parts) { out.emplace_back(parts); };
  detail::enumerate_partitions(n, n, current, nullptr, emit);
  return cache.emplace(n, std::move(out)).first->second;
}

/// Partitions of n whose diagram fits inside `bound`, reverse lexicographic.
inline std::vector<Partition> partitions_within(int n, const Partition& bound) {
  std::vector<Partition> out;
  if (n < 0 || n > bound.size()) return out;
  std::vector<int> current;
  auto emit = [&](const std::vector<int>& parts) { out.emplace_back(parts); };
  detail::enumerate_partitions(n, n, current, &bound, emit);
  return out;
}

/// Index of p inside partitions_of(|p|).
inline std::size_t partition_index(const Partition& p) {
  const auto& all = partitions_of(p.size());
  auto it = std::lower_bound(all.begin(), all.end(), p, std::greater<>{});
  if (it == all.end() || *it != p) throw std::logic_error("partition_index: not found");
  return static_cast<std::size_t>(it - all.begin());
}

/// z_rho = prod_i i^{m_i} m_i!.
inline BigInt centralizer_order(const Partition& rho) {
  BigInt z = 1;
  auto parts = rho.parts();
  for (std::size_t i = 0; i < parts.size();) {
    std::size_t j = i;
    while (j < parts.size() && parts[j] == parts[i]) ++j;
    int m = static_cast<int>(j - i);
    z *= pow_int(BigInt(parts[i]), static_cast<unsigned>(m)) * factorial(m);
    i = j;
  }
  return z;
}

/// A partition read as a conjugacy class of S_n.
class CycleType {
 public:
  CycleType() = default;
  explicit CycleType(Partition rho) : rho_(std::move(rho)), z_(kronlab::centralizer_order(rho_)) {}

  const Partition& partition() const { return rho_; }
  const BigInt& centralizer_order() const { return z_; }
  int degree() const { return rho_.size(); }
  /// (-1)^{n - l(rho)}
  int sign() const { return ((rho_.size() - rho_.length()) % 2 == 0) ? 1 : -1; }

 private:
  Partition rho_;
  BigInt z_ = 1;
};

struct PartitionHash {
  std::size_t operator()(const Partition& p) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int x : p.parts()) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

struct Triple {
  Partition first;
  Partition second;
  Partition third;

  bool operator==(const Triple&) const = default;
  std::strong_ordering operator<=>(const Triple&) const = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    PartitionHash h;
    std::size_t a = h(t.first);
    a ^= h(t.second) + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2);
    a ^= h(t.third) + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2);
    return a;
  }
};

}  // namespace kronlab

template <>
struct std::hash<kronlab::Partition> : kronlab::PartitionHash {};
