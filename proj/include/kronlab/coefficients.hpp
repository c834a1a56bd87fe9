#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "bigint.hpp"
#include "characters.hpp"
#include "concurrency.hpp"
#include "partition.hpp"

namespace kronlab {

/// Raised when an exact identity that must hold by construction fails,
/// e.g. a class sum that is not divisible by n!.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

inline ConcurrentMemo<Triple, Coefficient, TripleHash>& kronecker_memo() {
  static ConcurrentMemo<Triple, Coefficient, TripleHash> memo;
  return memo;
}

inline Coefficient kronecker_class_sum(const Partition& a, const Partition& b, const Partition& c) {
  const int n = a.size();
  const auto& sizes = class_sizes(n);
  CharacterRow ra = character_row(a);
  CharacterRow rb = character_row(b);
  CharacterRow rc = character_row(c);
  BigInt total = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if ((*ra)[i] == 0 || (*rb)[i] == 0 || (*rc)[i] == 0) continue;
    total += sizes[i] * (*ra)[i] * (*rb)[i] * (*rc)[i];
  }
  BigInt nfact = factorial(n);
  BigInt quotient, remainder;
  boost::multiprecision::divide_qr(total, nfact, quotient, remainder);
  if (remainder != 0 || quotient < 0)
    throw ConsistencyError("kronecker class sum for (" + to_text(a) + " | " + to_text(b) + " | " + to_text(c) +
                           ") gave " + to_decimal(total) + ", not a non-negative multiple of n!");
  return quotient;
}

}  // namespace detail

/// Kronecker coefficient g(a,b,c) = <chi^a chi^b, chi^c>, evaluated as
/// sum_rho (n!/z_rho) chi^a(rho) chi^b(rho) chi^c(rho) / n!.
inline Coefficient kronecker(const Partition& a, const Partition& b, const Partition& c) {
  if (a.size() != b.size() || a.size() != c.size())
    throw std::invalid_argument("kronecker: partitions must have equal size, got " + std::to_string(a.size()) +
                                ", " + std::to_string(b.size()) + ", " + std::to_string(c.size()));
  if (a.size() == 0) return 1;
  Triple key{a, b, c};
  return detail::kronecker_memo().get_or_compute(key, [&] { return detail::kronecker_class_sum(a, b, c); });
}

namespace detail {

// Counts LR tableaux of skew shape outer/inner with content `weight`.
// Cells are filled in reading order (rows top to bottom, each row right to
// left). A value placed at (r, c) must keep rows weakly increasing, columns
// strictly increasing, stay <= r, and keep the reading word a lattice word.
class LrCounter {
 public:
  LrCounter(const Partition& outer, const Partition& inner, const Partition& weight)
      : inner_(inner), weight_(weight) {
    for (int r = 1; r <= outer.length(); ++r) {
      grid_.emplace_back(static_cast<std::size_t>(outer.part(r) + 2), 0);
      for (int c = outer.part(r); c > inner.part(r); --c) cells_.push_back({r, c, c < outer.part(r)});
    }
    used_.assign(static_cast<std::size_t>(weight.length() + 1), 0);
  }

  BigInt count() {
    total_ = 0;
    visit(0);
    return total_;
  }

 private:
  struct Cell {
    int row;
    int col;
    bool has_right;
  };

  void visit(std::size_t index) {
    if (index == cells_.size()) {
      ++total_;
      return;
    }
    const Cell& cell = cells_[index];
    int hi = std::min(cell.row, weight_.length());
    if (cell.has_right) hi = std::min(hi, at(cell.row, cell.col + 1));
    int lo = 1;
    if (cell.row > 1 && cell.col > inner_.part(cell.row - 1)) lo = at(cell.row - 1, cell.col) + 1;
    for (int v = lo; v <= hi; ++v) {
      if (used_[v] >= weight_.part(v)) continue;
      if (v > 1 && used_[v] >= used_[v - 1]) continue;
      ++used_[v];
      at(cell.row, cell.col) = v;
      visit(index + 1);
      --used_[v];
    }
    at(cell.row, cell.col) = 0;
  }

  int& at(int row, int col) { return grid_[static_cast<std::size_t>(row - 1)][static_cast<std::size_t>(col)]; }

  const Partition& inner_;
  const Partition& weight_;
  std::vector<std::vector<int>> grid_;
  std::vector<Cell> cells_;
  std::vector<int> used_;
  BigInt total_;
};

inline ConcurrentMemo<Triple, Coefficient, TripleHash>& lr_memo() {
  static ConcurrentMemo<Triple, Coefficient, TripleHash> memo;
  return memo;
}

struct VectorPartitionHash {
  std::size_t operator()(const std::vector<Partition>& v) const noexcept {
    std::size_t h = 0;
    for (const auto& p : v) h ^= PartitionHash{}(p) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

inline ConcurrentMemo<std::vector<Partition>, Coefficient, VectorPartitionHash>& lr3_memo() {
  static ConcurrentMemo<std::vector<Partition>, Coefficient, VectorPartitionHash> memo;
  return memo;
}

}  // namespace detail

/// Littlewood–Richardson coefficient c^outer_{inner, weight}: the number of
/// LR tableaux of shape outer/inner and content weight. Zero when either
/// factor does not fit inside outer.
inline Coefficient lr(const Partition& outer, const Partition& inner, const Partition& weight) {
  if (inner.size() + weight.size() != outer.size())
    throw std::invalid_argument("lr: |" + to_text(inner) + "| + |" + to_text(weight) + "| != |" + to_text(outer) + "|");
  if (!contains(outer, inner) || !contains(outer, weight)) return 0;
  if (inner.empty() || weight.empty()) return 1;
  Triple key{outer, inner, weight};
  return detail::lr_memo().get_or_compute(key, [&] {
    // Fill whichever skew shape has fewer rows of freedom; c is symmetric in
    // the two lower indices.
    const bool swap = weight.length() > inner.length();
    const Partition& skew_inner = swap ? weight : inner;
    const Partition& content = swap ? inner : weight;
    return detail::LrCounter(outer, skew_inner, content).count();
  });
}

/// Multi-LR coefficient c^outer_{a b c} = sum_tau c^outer_{a tau} c^tau_{b c}.
inline Coefficient lr3(const Partition& outer, const Partition& a, const Partition& b, const Partition& c) {
  if (a.size() + b.size() + c.size() != outer.size())
    throw std::invalid_argument("lr3: sizes of " + to_text(a) + ", " + to_text(b) + ", " + to_text(c) +
                                " do not add up to |" + to_text(outer) + "|");
  if (!contains(outer, a) || !contains(outer, b) || !contains(outer, c)) return 0;
  if (b.empty()) return lr(outer, a, c);
  if (c.empty()) return lr(outer, a, b);
  if (a.empty()) return lr(outer, b, c);
  std::vector<Partition> key{outer, a, b, c};
  return detail::lr3_memo().get_or_compute(key, [&] {
    BigInt total = 0;
    for (const Partition& tau : partitions_within(b.size() + c.size(), outer)) {
      if (!contains(tau, b) || !contains(tau, c)) continue;
      Coefficient outer_part = lr(outer, a, tau);
      if (outer_part == 0) continue;
      total += outer_part * lr(tau, b, c);
    }
    return total;
  });
}

}  // namespace kronlab
