#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bigint.hpp"
#include "coefficients.hpp"
#include "concurrency.hpp"
#include "partition.hpp"
#include "reduced.hpp"
#include "report.hpp"

namespace kronlab {

/// Degree caps for direct computation. Beyond them verifiers fall back to
/// certificates or report not-desk-feasible.
struct Budget {
  int reduced_degree = 36;    // padded degree n0 for a direct reduced coefficient
  int kronecker_degree = 20;  // n for a direct class-sum g
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dvir's bound applied to the stable Durfee sizes. True means the reduced
/// coefficient is certified to vanish.
inline bool dvir_vanishing(const Partition& alpha, const Partition& beta, const Partition& gamma) {
  std::array<int, 3> d{stable_durfee(alpha), stable_durfee(beta), stable_durfee(gamma)};
  std::sort(d.begin(), d.end());
  return d[2] > 2 * d[0] * d[1];
}

/// {1, 1^2, 1^4, 1^6, 21, 31}
inline const std::array<Partition, 6>& exclusion_set() {
  static const std::array<Partition, 6> set{Partition{1},          Partition{1, 1},
                                            Partition{1, 1, 1, 1}, Partition{1, 1, 1, 1, 1, 1},
                                            Partition{2, 1},       Partition{3, 1}};
  return set;
}

inline bool in_exclusion_set(const Partition& nu) {
  const auto& set = exclusion_set();
  return std::find(set.begin(), set.end(), nu) != set.end();
}

/// Hypotheses of the rectangle positivity lemma for g(s^r, s^r, nu[rs]):
/// nu not excluded, r > 3 l^{3/2}, s >= 3 l^2, |nu| <= rs/6, l = max(l(nu)+1, 9).
inline bool ip_preconditions(std::int64_t s, std::int64_t r, const Partition& nu) {
  if (s < 1 || r < 1 || in_exclusion_set(nu)) return false;
  const BigInt ell = std::max(nu.length() + 1, 9);
  const BigInt rr = r, ss = s;
  return rr * rr > 9 * ell * ell * ell && ss >= 3 * ell * ell && 6 * BigInt(nu.size()) <= rr * ss;
}

struct FamilyParameters {
  Partition gamma;
  int ell = 0;             // max(l(gamma)+1, 9)
  int durfee = 0;          // stable Durfee size of gamma
  int b = 0;               // rows of the rectangle a^b
  int a = 0;               // smallest admissible part size
  std::vector<int> a_values;  // all admissible a for this b
  std::int64_t n_min = 0;  // ceil(3 l^2 / a)
};

/// Parameters (a, b, N) making (a^b, a^b, gamma) a saturation counterexample.
///
/// b is the least integer with b^2 >= 9 l^3 and
/// 18 d b^2 >= (|gamma| + 6b)^2 (the squared form of
/// b >= |gamma| / (6 sqrt(d/2) - 6)), further raised until the smallest
/// admissible a satisfies 6|gamma| <= (b+1) a, which the rectangle lemma needs
/// for |N gamma| <= rs/6.
inline FamilyParameters construct_family(const Partition& gamma) {
  if (gamma.part(2) < 3)
    throw std::invalid_argument("construct_family: need gamma_2 >= 3, got gamma=" + to_text(gamma));
  FamilyParameters f;
  f.gamma = gamma;
  f.ell = std::max(gamma.length() + 1, 9);
  f.durfee = stable_durfee(gamma);
  const BigInt ell = f.ell, d = f.durfee, size = gamma.size();

  auto b_ok = [&](int b) {
    const BigInt bb = b;
    return bb * bb >= 9 * ell * ell * ell && 18 * d * bb * bb >= (size + 6 * bb) * (size + 6 * bb);
  };
  auto smallest_a = [&](int b) { return std::max(1, (gamma.size() + 6 * b - 1) / (6 * b)); };
  int b = 1;
  while (!b_ok(b) || 6 * gamma.size() > (b + 1) * smallest_a(b)) ++b;
  f.b = b;
  for (int a = smallest_a(b); 2 * a * a < f.durfee; ++a) f.a_values.push_back(a);
  if (f.a_values.empty()) throw std::logic_error("construct_family: no admissible a for " + to_text(gamma));
  f.a = f.a_values.front();
  f.n_min = (3 * static_cast<std::int64_t>(f.ell) * f.ell + f.a - 1) / f.a;
  return f;
}

/// Checks every inequality the family parameters promise.
inline VerificationReport verify_family(const Partition& gamma) {
  VerificationReport report;
  report.claim = "family gamma=" + to_text(gamma);
  if (gamma.part(2) < 3) {
    report.steps.push_back(timed_step("precondition gamma_2 >= 3", [&](ReportStep& s) {
      s.set("gamma_2", std::to_string(gamma.part(2)));
      s.verdict = Status::kFail;
    }));
    report.finalize();
    return report;
  }
  FamilyParameters f = construct_family(gamma);
  const BigInt ell = f.ell, d = f.durfee, b = f.b, a = f.a, size = gamma.size();
  auto verdict = [](bool ok) { return ok ? Status::kPass : Status::kFail; };
  report.steps.push_back(timed_step("parameters", [&](ReportStep& s) {
    s.set("ell", std::to_string(f.ell)).set("stable_durfee", std::to_string(f.durfee));
    s.set("b", std::to_string(f.b)).set("a", std::to_string(f.a)).set("N_min", std::to_string(f.n_min));
    std::string as;
    for (int x : f.a_values) as += (as.empty() ? "" : ",") + std::to_string(x);
    s.set("admissible_a", as);
  }));
  report.steps.push_back(timed_step("b >= 3 ell^{3/2}  (b^2 >= 9 ell^3)", [&](ReportStep& s) {
    s.set("b^2", to_decimal(b * b)).set("9 ell^3", to_decimal(9 * ell * ell * ell));
    s.verdict = verdict(b * b >= 9 * ell * ell * ell);
  }));
  report.steps.push_back(timed_step("b >= |gamma|/(6 sqrt(d/2) - 6)  (18 d b^2 >= (|gamma|+6b)^2)", [&](ReportStep& s) {
    s.set("18 d b^2", to_decimal(18 * d * b * b)).set("(|gamma|+6b)^2", to_decimal((size + 6 * b) * (size + 6 * b)));
    s.verdict = verdict(18 * d * b * b >= (size + 6 * b) * (size + 6 * b));
  }));
  report.steps.push_back(timed_step("|gamma|/(6b) <= a < sqrt(d/2)", [&](ReportStep& s) {
    s.set("6ab", to_decimal(6 * a * b)).set("|gamma|", to_decimal(size)).set("2a^2", to_decimal(2 * a * a));
    s.set("d", to_decimal(d));
    s.verdict = verdict(6 * a * b >= size && 2 * a * a < d);
  }));
  report.steps.push_back(timed_step("N_min a >= 3 ell^2", [&](ReportStep& s) {
    s.set("N_min a", to_decimal(BigInt(f.n_min) * a)).set("3 ell^2", to_decimal(3 * ell * ell));
    s.verdict = verdict(BigInt(f.n_min) * a >= 3 * ell * ell);
  }));
  const Partition rect = Partition::rectangle(f.a, f.b);
  report.steps.push_back(timed_step("vanishing: dvir certificate for (a^b, a^b, gamma)", [&](ReportStep& s) {
    s.set("alpha", to_text(rect)).set("stable_durfee(alpha)", std::to_string(stable_durfee(rect)));
    s.verdict = verdict(dvir_vanishing(rect, rect, gamma));
  }));
  for (std::int64_t n : {f.n_min, f.n_min + 1}) {
    report.steps.push_back(timed_step("positivity: rectangle lemma preconditions at N=" + std::to_string(n), [&](ReportStep& s) {
      const std::int64_t sv = n * f.a, rv = f.b + 1;
      const Partition nu = scale(static_cast<int>(n), gamma);
      s.set("s", std::to_string(sv)).set("r", std::to_string(rv)).set("nu", to_text(nu));
      s.verdict = verdict(ip_preconditions(sv, rv, nu));
    }));
  }
  report.finalize();
  return report;
}

/// Certificate chain for the triple (1^{k^2-1}, 1^{k^2-1}, k^{k-1}) with N=k:
/// vanishing by Dvir, then
///   gbar(k a, k a, k gamma) >= g(k^{k^2-1}[k^3], ..., (k^2)^{k-1}[k^3])
///                          = g(k^{k^2}, k^{k^2}, (k^2)^k)
///                          = g((k^2)^k, (k^2)^k, (k^2)^k)   (transpose two slots)
///                          >= g(k^k, k^k, k^k) > 0          (semigroup, self-conjugate)
inline VerificationReport theorem12_chain(int k, const Budget& budget = {}) {
  VerificationReport report;
  report.claim = "thm12 k=" + std::to_string(k);
  if (k < 3) {
    report.steps.push_back(timed_step("precondition k >= 3", [&](ReportStep& s) {
      s.set("k", std::to_string(k));
      s.verdict = Status::kFail;
    }));
    report.finalize();
    return report;
  }
  auto verdict = [](bool ok) { return ok ? Status::kPass : Status::kFail; };
  const int k2 = k * k, k3 = k * k * k;
  const Partition alpha = Partition::rectangle(1, k2 - 1);
  const Partition gamma = Partition::rectangle(k, k - 1);
  const Partition ka = scale(k, alpha);     // k^{k^2-1}
  const Partition kg = scale(k, gamma);     // (k^2)^{k-1}
  const Partition square = Partition::rectangle(k, k);
  const Partition tall = Partition::rectangle(k, k2);
  const Partition wide = Partition::rectangle(k2, k);

  report.steps.push_back(timed_step("vanishing: dvir certificate for (1^{k^2-1}, 1^{k^2-1}, k^{k-1})", [&](ReportStep& s) {
    s.set("alpha", to_text(alpha)).set("gamma", to_text(gamma));
    s.set("stable_durfee(alpha)", std::to_string(stable_durfee(alpha)));
    s.set("stable_durfee(gamma)", std::to_string(stable_durfee(gamma)));
    s.verdict = verdict(dvir_vanishing(alpha, alpha, gamma));
  }));
  report.steps.push_back(timed_step("pad identity k^{k^2-1}[k^3] = k^{k^2}", [&](ReportStep& s) {
    Partition padded = pad(ka, k3);
    s.set("lhs", to_text(padded)).set("rhs", to_text(tall));
    s.verdict = verdict(padded == tall);
  }));
  report.steps.push_back(timed_step("pad identity (k^2)^{k-1}[k^3] = (k^2)^k", [&](ReportStep& s) {
    Partition padded = pad(kg, k3);
    s.set("lhs", to_text(padded)).set("rhs", to_text(wide));
    s.verdict = verdict(padded == wide);
  }));
  report.steps.push_back(timed_step("stabilization lower bound at n=k^3", [&](ReportStep& s) {
    // the padded sequence is weakly increasing, so any valid n bounds gbar from below
    s.set("n", std::to_string(k3)).set("min_valid_n", std::to_string(std::max(min_pad(ka), min_pad(kg))));
    bool ok = k3 >= min_pad(ka) && k3 >= min_pad(kg);
    if (ok && k3 <= budget.reduced_degree) {
      Coefficient g = kronecker(tall, tall, wide);
      s.set("g(k^{k^2}, k^{k^2}, (k^2)^k)", to_decimal(g));
      ok = g > 0;
    }
    s.verdict = verdict(ok);
  }));
  report.steps.push_back(timed_step("transpose symmetry: (k^{k^2})' = (k^2)^k", [&](ReportStep& s) {
    s.set("conjugate", to_text(conjugate(tall)));
    s.verdict = verdict(conjugate(tall) == wide);
  }));
  report.steps.push_back(timed_step("semigroup: (k^2)^k = k^k + (k^2-k)^k with (k^2-k)^k a sum of k-1 copies of k^k", [&](ReportStep& s) {
    Partition rest = Partition::rectangle(k2 - k, k);
    Partition acc;
    for (int i = 0; i < k - 1; ++i) acc = add(acc, square);
    s.set("k^k", to_text(square)).set("(k^2-k)^k", to_text(rest));
    s.set("k^k self-conjugate", is_self_conjugate(square) ? "true" : "false");
    s.verdict = verdict(add(square, rest) == wide && acc == rest && is_self_conjugate(square));
  }));
  report.steps.push_back(timed_step("base positivity g(k^k, k^k, k^k) > 0", [&](ReportStep& s) {
    const bool direct = k3 <= budget.reduced_degree && k2 <= budget.kronecker_degree;
    s.set("self-conjugate", is_self_conjugate(square) ? "true" : "false");
    if (direct) {
      Coefficient g = kronecker(square, square, square);
      s.set("method", "class-sum").set("g", to_decimal(g));
      s.verdict = verdict(g > 0 && is_self_conjugate(square));
    } else {
      s.set("method", "self-conjugate certificate");
      s.verdict = verdict(is_self_conjugate(square));
    }
  }));
  report.finalize();
  return report;
}

namespace detail {

// Matches (1^{k^2-1}, 1^{k^2-1}, k^{k-1}) with N = k, in any argument order.
inline std::optional<int> theorem12_instance(const Partition& alpha, const Partition& beta, const Partition& gamma,
                                             int scale_factor) {
  const std::array<const Partition*, 3> args{&alpha, &beta, &gamma};
  const int k = scale_factor;
  if (k < 3) return std::nullopt;
  const Partition column = Partition::rectangle(1, k * k - 1);
  const Partition rect = Partition::rectangle(k, k - 1);
  for (int odd = 0; odd < 3; ++odd) {
    bool ok = *args[odd] == rect;
    for (int j = 0; j < 3; ++j)
      if (j != odd) ok = ok && *args[j] == column;
    if (ok) return k;
  }
  return std::nullopt;
}

inline bool is_rectangle(const Partition& p) { return !p.empty() && p.part(1) == p.part(p.length()); }

}  // namespace detail

/// Attempts to show that (alpha, beta, gamma) violates saturation at N:
/// gbar(alpha, beta, gamma) = 0 and gbar(N alpha, N beta, N gamma) > 0.
inline VerificationReport verify_saturation_counterexample(const Partition& alpha, const Partition& beta,
                                                           const Partition& gamma, int scale_factor,
                                                           const Budget& budget = {}) {
  VerificationReport report;
  report.claim = "saturation counterexample (" + to_text(alpha) + " | " + to_text(beta) + " | " + to_text(gamma) +
                 "), N=" + std::to_string(scale_factor);
  if (scale_factor < 1) throw std::invalid_argument("N must be positive");

  report.steps.push_back(timed_step("vanishing: gbar(alpha, beta, gamma) = 0", [&](ReportStep& s) {
    const bool dvir = dvir_vanishing(alpha, beta, gamma);
    const int n0 = stable_degree(alpha, beta, gamma);
    s.set("dvir_certificate", dvir ? "true" : "false").set("n0", std::to_string(n0));
    if (n0 <= budget.reduced_degree) {
      Coefficient v = reduced_stable(alpha, beta, gamma);
      s.set("method", "stable").set("gbar", to_decimal(v));
      s.verdict = v == 0 ? Status::kPass : Status::kFail;
    } else {
      s.set("method", dvir ? "dvir" : "none");
      s.verdict = dvir ? Status::kPass : Status::kNotDeskFeasible;
    }
  }));

  const Partition na = scale(scale_factor, alpha), nb = scale(scale_factor, beta), ng = scale(scale_factor, gamma);
  std::optional<VerificationReport> chain;
  report.steps.push_back(timed_step("positivity: gbar(N alpha, N beta, N gamma) > 0", [&](ReportStep& s) {
    const int n0 = stable_degree(na, nb, ng);
    s.set("scaled", to_text(na) + " | " + to_text(nb) + " | " + to_text(ng)).set("n0", std::to_string(n0));
    if (n0 <= budget.reduced_degree) {
      ReducedValue v = reduced(na, nb, ng);
      s.set("method", std::string(method_name(v.method))).set("gbar", to_decimal(v.value));
      s.verdict = v.value > 0 ? Status::kPass : Status::kFail;
      return;
    }
    if (auto k = detail::theorem12_instance(alpha, beta, gamma, scale_factor)) {
      chain = theorem12_chain(*k, budget);
      s.set("method", "thm12 chain certificate").set("k", std::to_string(*k));
      s.verdict = chain->status;
      return;
    }
    // rectangle lemma: gbar(N a^b, N a^b, N nu) >= g(s^{b+1}, s^{b+1}, (N nu)[rs])
    const std::array<const Partition*, 3> args{&alpha, &beta, &gamma};
    for (int odd = 0; odd < 3; ++odd) {
      const Partition& x = *args[(odd + 1) % 3];
      const Partition& y = *args[(odd + 2) % 3];
      if (x != y || !detail::is_rectangle(x)) continue;
      const std::int64_t sv = static_cast<std::int64_t>(scale_factor) * x.part(1);
      const std::int64_t rv = x.length() + 1;
      const Partition nu = scale(scale_factor, *args[odd]);
      if (ip_preconditions(sv, rv, nu)) {
        s.set("method", "rectangle lemma certificate").set("s", std::to_string(sv)).set("r", std::to_string(rv));
        s.set("nu", to_text(nu));
        s.verdict = Status::kPass;
        return;
      }
    }
    s.set("method", "none");
    s.verdict = Status::kNotDeskFeasible;
  }));
  if (chain)
    for (auto& step : chain->steps) {
      step.description = "thm12 chain: " + step.description;
      report.steps.push_back(std::move(step));
    }
  report.finalize();
  return report;
}

/// The 1^5, 1^5, 3^2 instance at N = 2, plus the padded value at n = 18.
inline VerificationReport verify_prop24(const Budget& budget = {}) {
  const Partition alpha = Partition::rectangle(1, 5);
  const Partition gamma = Partition::rectangle(3, 2);
  VerificationReport report = verify_saturation_counterexample(alpha, alpha, gamma, 2, budget);
  report.claim = "prop24";
  report.steps.push_back(timed_step("padded lower bound g(2alpha[18], 2alpha[18], 2gamma[18]) > 0", [&](ReportStep& s) {
    const Partition a18 = pad(scale(2, alpha), 18);
    const Partition g18 = pad(scale(2, gamma), 18);
    s.set("lambda", to_text(a18)).set("nu", to_text(g18));
    if (18 > budget.kronecker_degree) {
      s.verdict = Status::kNotDeskFeasible;
      return;
    }
    Coefficient g = kronecker(a18, a18, g18);
    s.set("g", to_decimal(g));
    s.verdict = g > 0 ? Status::kPass : Status::kFail;
  }));
  report.finalize();
  return report;
}

/// Canonical triple order: sizes ascending, then each slot reverse-lex.
inline bool canonical_less(const Triple& x, const Triple& y) {
  auto sizes = [](const Triple& t) { return std::array<int, 3>{t.first.size(), t.second.size(), t.third.size()}; };
  if (sizes(x) != sizes(y)) return sizes(x) < sizes(y);
  if (x.first != y.first) return x.first > y.first;
  if (x.second != y.second) return x.second > y.second;
  return x.third > y.third;
}

/// All ordered triples with |alpha|+|beta|+|gamma| <= total, canonical order.
inline std::vector<Triple> triples_up_to(int total) {
  std::vector<Triple> out;
  for (int a = 0; a <= total; ++a)
    for (int b = 0; a + b <= total; ++b)
      for (int c = 0; a + b + c <= total; ++c)
        for (const auto& x : partitions_of(a))
          for (const auto& y : partitions_of(b))
            for (const auto& z : partitions_of(c)) out.push_back({x, y, z});
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

struct MaxScanRow {
  int n = 0;
  int total_bound = 0;  // 3n
  std::size_t triples = 0;
  Coefficient max_reduced;
  std::vector<Triple> argmax;
  Coefficient max_kronecker;  // over lambda, mu, nu |- n
  BigInt upper_bound;         // ceil((3n/2) p(3n)^6 3^{3n/2} sqrt(n!))
  bool within_bound = false;
};

/// (2B)^2 for B = (3n/2) p(3n)^6 3^{3n/2} sqrt(n!); exact integer.
inline BigInt max_bound_doubled_squared(int n) {
  const BigInt p = partitions_of(3 * n).size();
  return 9 * BigInt(n) * n * pow_int(p, 12) * pow_int(BigInt(3), static_cast<unsigned>(3 * n)) * factorial(n);
}

inline BigInt max_bound_ceil(int n) {
  const BigInt x = max_bound_doubled_squared(n);
  const BigInt r = isqrt(x);
  return r * r == x ? (r + 1) / 2 : r / 2 + 1;
}

/// Exhaustive maximum of gbar over total size <= 3m, for m = 1..n.
inline std::vector<MaxScanRow> max_scan(int n, unsigned jobs = default_jobs(), const Budget& budget = {}) {
  if (n < 1) throw std::invalid_argument("max_scan: n must be positive");
  if (6 * n > budget.reduced_degree || n > budget.kronecker_degree)
    throw BudgetExceeded("max_scan: n=" + std::to_string(n) + " needs padded degree " + std::to_string(6 * n) +
                         " (budget " + std::to_string(budget.reduced_degree) + ")");
  const std::vector<Triple> triples = triples_up_to(3 * n);
  std::vector<Coefficient> values(triples.size());
  parallel_for(triples.size(), jobs, [&](std::size_t i) {
    values[i] = reduced(triples[i].first, triples[i].second, triples[i].third).value;
  });

  std::vector<MaxScanRow> rows;
  for (int m = 1; m <= n; ++m) {
    MaxScanRow row;
    row.n = m;
    row.total_bound = 3 * m;
    for (std::size_t i = 0; i < triples.size(); ++i) {
      const Triple& t = triples[i];
      if (t.first.size() + t.second.size() + t.third.size() > 3 * m) continue;
      ++row.triples;
      if (values[i] > row.max_reduced) {
        row.max_reduced = values[i];
        row.argmax.clear();
      }
      if (values[i] == row.max_reduced) row.argmax.push_back(t);
    }
    const auto& ps = partitions_of(m);
    std::vector<Coefficient> gs(ps.size() * ps.size() * ps.size());
    parallel_for(gs.size(), jobs, [&](std::size_t i) {
      const std::size_t p = ps.size();
      gs[i] = kronecker(ps[i / (p * p)], ps[(i / p) % p], ps[i % p]);
    });
    for (const auto& g : gs) row.max_kronecker = std::max(row.max_kronecker, g);
    row.upper_bound = max_bound_ceil(m);
    row.within_bound = 4 * row.max_reduced * row.max_reduced <= max_bound_doubled_squared(m);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace kronlab
