#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bigint.hpp"
#include "concurrency.hpp"
#include "partition.hpp"

namespace kronlab {

namespace detail {

inline void append_u16(std::string& s, int v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
}

inline int read_u16(const std::string& s, std::size_t pos) {
  return static_cast<unsigned char>(s[pos]) | (static_cast<unsigned char>(s[pos + 1]) << 8);
}

// Layout: [len(shape)] [shape parts...] [cycle parts...], two bytes each.
inline std::string character_key(std::span<const int> shape, std::span<const int> cycles) {
  std::string key;
  key.reserve(2 * (1 + shape.size() + cycles.size()));
  append_u16(key, static_cast<int>(shape.size()));
  for (int x : shape) append_u16(key, x);
  for (int x : cycles) append_u16(key, x);
  return key;
}

inline std::pair<Partition, Partition> decode_character_key(const std::string& key) {
  int len = read_u16(key, 0);
  std::vector<int> shape, cycles;
  std::size_t pos = 2;
  for (int i = 0; i < len; ++i, pos += 2) shape.push_back(read_u16(key, pos));
  for (; pos + 1 < key.size(); pos += 2) cycles.push_back(read_u16(key, pos));
  return {Partition(std::move(shape)), Partition(std::move(cycles))};
}

}  // namespace detail

/// Memoized Murnaghan–Nakayama evaluation of irreducible S_n characters.
///
/// chi^shape(cycles) is expanded by removing border strips of length
/// cycles[0] (the largest remaining cycle) and recursing on the tail of the
/// cycle type. Every intermediate (shape, tail) pair is memoized, so a full
/// table row reuses nearly all of its subproblems.
///
/// The table persists to a text file:
///
///     1
///     n<TAB>shape<TAB>cycle-type<TAB>decimal-value
///
/// with canonical partition text and one record per line.
class CharacterCache {
 public:
  static constexpr int kFormatVersion = 1;

  BigInt character(const Partition& shape, const Partition& cycles) {
    if (shape.size() != cycles.size())
      throw std::invalid_argument("character: |shape|=" + std::to_string(shape.size()) +
                                  " differs from |cycle type|=" + std::to_string(cycles.size()));
    if (shape.size() > 0xffff || shape.first() > 0xffff)
      throw std::invalid_argument("character: degree too large");
    return evaluate(shape.vec(), cycles.parts());
  }

  std::size_t size() const { return memo_.size(); }
  void clear() { memo_.clear(); }

  void save(const std::filesystem::path& file) const {
    std::vector<std::string> lines;
    lines.reserve(memo_.size());
    memo_.for_each([&](const std::string& key, const BigInt& value) {
      auto [shape, cycles] = detail::decode_character_key(key);
      lines.push_back(std::to_string(shape.size()) + '\t' + to_text(shape) + '\t' + to_text(cycles) +
                      '\t' + to_decimal(value));
    });
    std::sort(lines.begin(), lines.end());
    auto tmp = file;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write character cache " + tmp.string());
      out << kFormatVersion << '\n';
      for (const auto& line : lines) out << line << '\n';
      if (!out) throw std::runtime_error("failed writing character cache " + tmp.string());
    }
    std::filesystem::rename(tmp, file);
  }

  /// Merges records from `file`; returns the number of records read. A record
  /// that disagrees with an entry already present is a hard error.
  std::size_t load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open character cache " + file.string());
    std::string line;
    if (!std::getline(in, line) || line != std::to_string(kFormatVersion))
      throw std::runtime_error("character cache " + file.string() + ": unsupported format header '" + line + "'");
    std::size_t count = 0;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::vector<std::string> fields;
      std::size_t pos = 0;
      while (true) {
        std::size_t tab = line.find('\t', pos);
        fields.push_back(line.substr(pos, tab == std::string::npos ? tab : tab - pos));
        if (tab == std::string::npos) break;
        pos = tab + 1;
      }
      auto bad = [&](const std::string& why) {
        return std::runtime_error("character cache " + file.string() + ":" + std::to_string(lineno) + ": " + why);
      };
      if (fields.size() != 4) throw bad("expected 4 fields");
      Partition shape, cycles;
      BigInt value;
      try {
        shape = parse_partition(fields[1]);
        cycles = parse_partition(fields[2]);
        value = from_decimal(fields[3]);
      } catch (const std::invalid_argument& e) {
        throw bad(e.what());
      }
      if (fields[0] != std::to_string(shape.size()) || shape.size() != cycles.size())
        throw bad("size mismatch");
      std::string key = detail::character_key(shape.parts(), cycles.parts());
      const BigInt& stored = memo_.insert(key, value);
      if (stored != value) throw bad("conflicts with an existing entry");
      ++count;
    }
    return count;
  }

 private:
  BigInt evaluate(const std::vector<int>& shape, std::span<const int> cycles) {
    if (cycles.empty()) return shape.empty() ? 1 : 0;
    int n = 0;
    for (int c : cycles) n += c;
    if (shape.size() == 1) return 1;
    if (shape.front() == 1) return ((n - static_cast<int>(cycles.size())) % 2 == 0) ? 1 : -1;

    std::string key = detail::character_key(shape, cycles);
    if (const BigInt* hit = memo_.find(key)) return *hit;

    const int strip = cycles.front();
    const auto rest = cycles.subspan(1);
    const int len = static_cast<int>(shape.size());
    std::vector<int> beta(shape.size());
    for (int i = 0; i < len; ++i) beta[i] = shape[i] + (len - 1 - i);
    std::vector<char> occupied(static_cast<std::size_t>(beta.front() + 1), 0);
    for (int b : beta) occupied[b] = 1;

    BigInt total = 0;
    std::vector<int> moved(beta.size());
    std::vector<int> next;
    for (int i = 0; i < len; ++i) {
      const int to = beta[i] - strip;
      if (to < 0 || occupied[to]) continue;
      int crossed = 0;
      for (int j = i + 1; j < len && beta[j] > to; ++j) ++crossed;
      moved = beta;
      moved[i] = to;
      std::sort(moved.begin(), moved.end(), std::greater<>{});
      next.clear();
      for (int j = 0; j < len; ++j) {
        int part = moved[j] - (len - 1 - j);
        if (part > 0) next.push_back(part);
      }
      BigInt sub = evaluate(next, rest);
      if (crossed % 2 == 0)
        total += sub;
      else
        total -= sub;
    }
    return memo_.insert(std::move(key), std::move(total));
  }

  ConcurrentMemo<std::string, BigInt> memo_;
};

inline CharacterCache& character_cache() {
  static CharacterCache cache;
  return cache;
}

inline BigInt character(const Partition& shape, const Partition& cycles) {
  return character_cache().character(shape, cycles);
}

inline BigInt character(const Partition& shape, const CycleType& rho) {
  return character(shape, rho.partition());
}

/// Hook length formula. Independent of the Murnaghan–Nakayama path.
inline BigInt dimension(const Partition& shape) {
  if (shape.empty()) throw std::invalid_argument("dimension: empty partition");
  Partition conj = conjugate(shape);
  BigInt hooks = 1;
  for (int i = 1; i <= shape.length(); ++i)
    for (int j = 1; j <= shape.part(i); ++j) hooks *= shape.part(i) - j + conj.part(j) - i + 1;
  return factorial(shape.size()) / hooks;
}

/// n!/z_rho for every rho in partitions_of(n).
inline const std::vector<BigInt>& class_sizes(int n) {
  static std::mutex mutex;
  static std::map<int, std::vector<BigInt>> cache;
  const auto& classes = partitions_of(n);
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  BigInt nfact = factorial(n);
  std::vector<BigInt> sizes;
  sizes.reserve(classes.size());
  for (const auto& rho : classes) sizes.push_back(nfact / centralizer_order(rho));
  return cache.emplace(n, std::move(sizes)).first->second;
}

using CharacterRow = std::shared_ptr<const std::vector<BigInt>>;

/// chi^shape at every class of S_n, ordered as partitions_of(n).
inline CharacterRow character_row(const Partition& shape) {
  static ConcurrentMemo<Partition, CharacterRow, PartitionHash> rows;
  return rows.get_or_compute(shape, [&] {
    const auto& classes = partitions_of(shape.size());
    auto row = std::make_shared<std::vector<BigInt>>();
    row->reserve(classes.size());
    for (const auto& rho : classes) row->push_back(character(shape, rho));
    return CharacterRow(std::move(row));
  });
}

}  // namespace kronlab
