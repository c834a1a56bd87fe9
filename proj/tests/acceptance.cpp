// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "kronlab_cli.hpp"
#include "oracles.hpp"

using namespace kronlab;

namespace {

// pinned limits
constexpr double kPaperValueSeconds = 60.0;
constexpr double kIdentitySeconds = 600.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Check {
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back(what);
    }
  }
};

std::string triple_text(const Partition& a, const Partition& b, const Partition& c) {
  return "(" + to_text(a) + " | " + to_text(b) + " | " + to_text(c) + ")";
}

Check exact_values() {
  Check c;
  c.expect(kronecker(Partition({2, 2}), Partition({2, 2}), Partition({2, 2})) == 1, "g(2^2,2^2,2^2) != 1");
  c.expect(kronecker(Partition({1, 1}), Partition({1, 1}), Partition({1, 1})) == 0, "g(1^2,1^2,1^2) != 0");

  auto t0 = Clock::now();
  Partition l({8, 2, 2, 2, 2, 2});
  Coefficient g18 = kronecker(l, l, Partition({6, 6, 6}));
  double s18 = seconds_since(t0);
  c.expect(g18 == 8, "g(8 2^5, 8 2^5, 6^3) = " + to_decimal(g18));
  c.expect(s18 < kPaperValueSeconds, "g at n=18 took " + std::to_string(s18) + " s");

  const Partition c5 = Partition::rectangle(1, 5);
  c.expect(stable_degree(c5, c5, Partition({3, 3})) == 16, "n0 for (1^5,1^5,3^2) is not 16");
  c.expect(reduced_stable(c5, c5, Partition({3, 3})) == 0, "stable gbar(1^5,1^5,3^2) != 0");
  c.expect(dvir_vanishing(c5, c5, Partition({3, 3})), "no Dvir certificate for (1^5,1^5,3^2)");

  t0 = Clock::now();
  const Partition r5 = Partition::rectangle(2, 5);
  Coefficient g12 = reduced_bdo(r5, r5, Partition({6, 6}));
  double s12 = seconds_since(t0);
  c.expect(g12 == 12, "BDO gbar(2^5,2^5,6^2) = " + to_decimal(g12));
  c.expect(s12 < kPaperValueSeconds, "BDO gbar took " + std::to_string(s12) + " s");
  c.notes.push_back("g(n=18) " + std::to_string(s18) + " s, BDO gbar " + std::to_string(s12) + " s");
  return c;
}

Check identity_suites() {
  Check c;
  auto t0 = Clock::now();
  const auto triples = triples_up_to(10);
  std::vector<char> ok(triples.size());
  parallel_for(triples.size(), default_jobs(), [&](std::size_t i) {
    const auto& t = triples[i];
    ok[i] = reduced_bdo(t.first, t.second, t.third) == reduced_stable(t.first, t.second, t.third);
  });
  std::size_t bad = 0;
  for (std::size_t i = 0; i < ok.size(); ++i)
    if (!ok[i] && bad++ == 0)
      c.expect(false, "BDO != stable at " + triple_text(triples[i].first, triples[i].second, triples[i].third));
  double s = seconds_since(t0);
  c.expect(s < kIdentitySeconds, "BDO suite took " + std::to_string(s) + " s");

  int sign = 0;
  try {
    sign = validate_bor_sign(5);
  } catch (const SignConventionError& e) {
    c.expect(false, e.what());
  }
  c.expect(sign == kBorSign, "validated BOR sign differs from the frozen constant");
  std::size_t bor_count = 0;
  for (int n = 1; n <= 6; ++n) {
    const auto& ps = partitions_of(n);
    for (const auto& a : ps)
      for (const auto& b : ps)
        for (const auto& x : ps) {
          ++bor_count;
          if (kronecker_via_bor(a, b, x) != kronecker(a, b, x)) c.expect(false, "BOR mismatch at " + triple_text(a, b, x));
        }
  }
  c.notes.push_back(std::to_string(triples.size()) + " BDO instances in " + std::to_string(s) + " s; " +
                    std::to_string(bor_count) + " BOR instances, sign " + std::to_string(sign));
  return c;
}

Check character_integrity() {
  Check c;
  for (int n = 1; n <= 10; ++n) {
    const auto& ps = partitions_of(n);
    const auto& sizes = class_sizes(n);
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (std::size_t j = 0; j < ps.size(); ++j) {
        BigInt col = 0, row = 0;
        for (const auto& lambda : ps) col += character(lambda, ps[i]) * character(lambda, ps[j]);
        for (std::size_t r = 0; r < ps.size(); ++r) row += sizes[r] * character(ps[i], ps[r]) * character(ps[j], ps[r]);
        c.expect(col == (i == j ? centralizer_order(ps[i]) : BigInt(0)), "column orthogonality n=" + std::to_string(n));
        c.expect(row == (i == j ? factorial(n) : BigInt(0)), "row orthogonality n=" + std::to_string(n));
      }
  }
  for (int n = 1; n <= 14; ++n) {
    BigInt sum = 0;
    for (const auto& lambda : partitions_of(n)) sum += dimension(lambda) * dimension(lambda);
    c.expect(sum == factorial(n), "sum of dim^2 != n! at n=" + std::to_string(n));
  }
  CharacterCache first;
  for (int n = 1; n <= 10; ++n)
    for (const auto& lambda : partitions_of(n))
      for (const auto& rho : partitions_of(n)) first.character(lambda, rho);
  auto dir = std::filesystem::temp_directory_path() / ("kronlab_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  first.save(dir / "a.tsv");
  CharacterCache second;
  second.load(dir / "a.tsv");
  bool same = second.size() == first.size();
  for (int n = 1; n <= 10 && same; ++n)
    for (const auto& lambda : partitions_of(n))
      for (const auto& rho : partitions_of(n)) same = same && second.character(lambda, rho) == first.character(lambda, rho);
  second.save(dir / "b.tsv");
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    return std::string((std::istreambuf_iterator<char>(in)), {});
  };
  c.expect(same && second.size() == first.size(), "reloaded cache values differ");
  c.expect(slurp(dir / "a.tsv") == slurp(dir / "b.tsv"), "cache files differ after round trip");
  std::filesystem::remove_all(dir);
  return c;
}

Check lemma_suites() {
  Check c;
  for (int n = 1; n <= 8; ++n) {
    const auto& ps = partitions_of(n);
    for (const auto& a : ps)
      for (const auto& b : ps)
        for (const auto& x : ps) {
          Coefficient g = kronecker(a, b, x);
          bool sym = kronecker(b, a, x) == g && kronecker(a, x, b) == g && kronecker(x, b, a) == g &&
                     kronecker(b, x, a) == g && kronecker(x, a, b) == g;
          bool tr = kronecker(conjugate(a), conjugate(b), x) == g && kronecker(a, conjugate(b), conjugate(x)) == g;
          if (!sym || !tr) c.expect(false, "symmetry fails at " + triple_text(a, b, x));
          if (g > 0 && durfee(a) > 2 * durfee(b) * durfee(x)) c.expect(false, "Dvir fails at " + triple_text(a, b, x));
        }
  }

  std::mt19937_64 rng(2024);
  int semigroup = 0;
  for (int attempt = 0; attempt < 4000 && semigroup < 300; ++attempt) {
    int n = 1 + static_cast<int>(rng() % 7);
    int m = 1 + static_cast<int>(rng() % static_cast<unsigned>(12 - n));
    auto l = oracle::random_partition(rng, n), mu = oracle::random_partition(rng, n), nu = oracle::random_partition(rng, n);
    auto a = oracle::random_partition(rng, m), b = oracle::random_partition(rng, m), x = oracle::random_partition(rng, m);
    if (kronecker(a, b, x) == 0) continue;
    ++semigroup;
    if (kronecker(add(l, a), add(mu, b), add(nu, x)) < kronecker(l, mu, nu))
      c.expect(false, "semigroup fails at " + triple_text(l, mu, nu) + " + " + triple_text(a, b, x));
  }
  c.expect(semigroup >= 100, "too few semigroup samples");

  int scaled = 0;
  for (int n = 1; n <= 4; ++n) {
    const auto& ps = partitions_of(n);
    for (const auto& a : ps)
      for (const auto& b : ps)
        for (const auto& x : ps) {
          Coefficient g1 = kronecker(a, b, x);
          if (g1 == 0) continue;
          ++scaled;
          Coefficient g2 = kronecker(scale(2, a), scale(2, b), scale(2, x));
          Coefficient g3 = kronecker(scale(3, a), scale(3, b), scale(3, x));
          if (g2 < g1 || g3 < g2) c.expect(false, "scaling not monotone at " + triple_text(a, b, x));
        }
  }

  for (int n = 0; n <= 10; ++n)
    for (const auto& l : partitions_of(n))
      for (int a = 0; a <= n; ++a)
        for (const auto& mu : partitions_of(a))
          for (const auto& nu : partitions_of(n - a)) {
            Coefficient v = lr(l, mu, nu);
            if (v * v > binomial(n, a)) c.expect(false, "LR bound fails at " + triple_text(l, mu, nu));
          }
  for (int n = 0; n <= 9; ++n)
    for (const auto& l : partitions_of(n))
      for (int a = 0; a <= n; ++a)
        for (int b = 0; a + b <= n; ++b) {
          std::vector<int> sz{a, b, n - a - b};
          BigInt bound = multinomial(sz);
          for (const auto& x : partitions_of(a))
            for (const auto& y : partitions_of(b))
              for (const auto& z : partitions_of(n - a - b)) {
                Coefficient v = lr3(l, x, y, z);
                if (v * v > bound) c.expect(false, "lr3 bound fails at " + to_text(l) + "; " + triple_text(x, y, z));
              }
        }
  c.notes.push_back(std::to_string(semigroup) + " semigroup samples, " + std::to_string(scaled) + " scaled triples");
  return c;
}

Check theorem_verification() {
  Check c;
  c.expect(verify_prop24().status == Status::kPass, "prop24 does not pass");
  VerificationReport k3 = theorem12_chain(3);
  c.expect(k3.status == Status::kPass, "thm12 k=3 does not pass");
  const ReportStep* base = k3.find_step("base positivity");
  bool direct = false;
  if (base)
    for (const auto& [key, value] : base->values)
      if (key == "g") direct = from_decimal(value) > 0;
  c.expect(direct, "thm12 k=3 base case not computed directly");
  for (int k : {4, 5}) {
    VerificationReport r = theorem12_chain(k);
    c.expect(r.status == Status::kPass, "thm12 k=" + std::to_string(k) + " does not pass");
    const ReportStep* s = r.find_step("base positivity");
    bool cert = false;
    if (s)
      for (const auto& [key, value] : s->values)
        if (key == "method") cert = value == "self-conjugate certificate";
    c.expect(cert, "thm12 k=" + std::to_string(k) + " base not certified by self-conjugacy");
  }
  for (const char* text : {"3,3", "4,3", "3,3,3", "5,5,1"}) {
    Partition gamma = parse_partition(text);
    FamilyParameters f = construct_family(gamma);
    const BigInt ell = f.ell, b = f.b, a = f.a, d = f.durfee, size = gamma.size();
    bool ok = b * b >= 9 * ell * ell * ell && 18 * d * b * b >= (size + 6 * b) * (size + 6 * b) &&
              6 * a * b >= size && 2 * a * a < d && BigInt(f.n_min) * a >= 3 * ell * ell;
    Partition rect = Partition::rectangle(f.a, f.b);
    ok = ok && dvir_vanishing(rect, rect, gamma);
    for (std::int64_t n : {f.n_min, f.n_min + 1})
      ok = ok && ip_preconditions(n * f.a, f.b + 1, scale(static_cast<int>(n), gamma));
    ok = ok && verify_family(gamma).status == Status::kPass;
    c.expect(ok, std::string("family inequalities fail for gamma=") + text);
  }
  return c;
}

Check specialization() {
  Check c;
  std::size_t count = 0;
  for (int n = 0; n <= 8; ++n)
    for (const auto& a : partitions_of(n))
      for (int k = 0; k <= n; ++k)
        for (const auto& b : partitions_of(k))
          for (const auto& x : partitions_of(n - k)) {
            ++count;
            if (reduced(a, b, x).value != lr(a, b, x)) c.expect(false, "gbar != lr at " + triple_text(a, b, x));
          }
  c.notes.push_back(std::to_string(count) + " instances");
  return c;
}

struct CliResult {
  int code;
  std::string out;
};

CliResult run_cli(std::vector<std::string> args) {
  std::vector<std::string> full{"kronlab", "--no-cache", "--format", "json"};
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : full) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str()};
}

// separate process, so no memo is shared with this one
CliResult run_binary(const std::vector<std::string>& args) {
  std::string cmd = std::string(KRONLAB_CLI_PATH) + " --no-cache --format json";
  for (const auto& a : args) cmd += " '" + a + "'";
  std::string out;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  int status = ::pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string stripped(const std::string& json_text) {
  try {
    return cli::strip_timing(nlohmann::ordered_json::parse(json_text)).dump();
  } catch (const std::exception&) {
    return "<unparseable>";
  }
}

Check max_scanner() {
  Check c;
  auto one = max_scan(3, 1), eight = max_scan(3, 8);
  c.expect(one.size() == 3 && eight.size() == 3, "expected three rows");
  for (std::size_t i = 0; i < one.size() && i < eight.size(); ++i) {
    const auto& r = one[i];
    c.expect(r.max_reduced >= r.max_kronecker, "max gbar < max g at n=" + std::to_string(r.n));
    c.expect(r.within_bound, "upper bound violated at n=" + std::to_string(r.n));
    c.expect(r.max_reduced == eight[i].max_reduced && r.argmax == eight[i].argmax &&
                 r.max_kronecker == eight[i].max_kronecker,
             "jobs 1 and 8 disagree at n=" + std::to_string(r.n));
  }
  CliResult j1 = run_binary({"--jobs", "1", "scan-max", "3"});
  CliResult j8 = run_binary({"--jobs", "8", "scan-max", "3"});
  c.expect(j1.code == 0 && j8.code == 0, "scan-max exited nonzero");
  c.expect(stripped(j1.out) == stripped(j8.out), "scan-max JSON differs between --jobs 1 and --jobs 8");
  if (!one.empty()) c.notes.push_back("max gbar up to total 9: " + to_decimal(one.back().max_reduced));
  return c;
}

Check determinism() {
  Check c;
  const std::vector<std::vector<std::string>> commands{
      {"g", "2,2", "2,2", "2,2"},
      {"g", "1,1", "1,1", "1,1"},
      {"g", "8,2^5", "8,2^5", "6^3"},
      {"rkron", "1^5", "1^5", "3,3", "--method", "stable"},
      {"rkron", "2^5", "2^5", "6,6", "--method", "bdo"},
      {"lr", "2,1", "1", "1,1"},
      {"verify", "prop24"},
      {"verify", "thm12", "--k", "3"},
      {"verify", "thm12", "--k", "4"},
      {"verify", "thm12", "--k", "5"},
      {"verify", "family", "--gamma", "3,3"},
      {"verify", "family", "--gamma", "4,3"},
      {"verify", "family", "--gamma", "3^3"},
      {"verify", "family", "--gamma", "5,5,1"},
      {"scan-max", "3"},
      {"identity", "bdo", "--total", "10"},
      {"identity", "bor", "--n", "6"},
  };
  for (const auto& cmd : commands) {
    std::string name;
    for (const auto& a : cmd) name += (name.empty() ? "" : " ") + a;
    CliResult first = run_binary(cmd), second = run_binary(cmd), inproc = run_cli(cmd);
    std::string s1 = stripped(first.out);
    c.expect(first.code == second.code && first.code == inproc.code, "exit codes differ for '" + name + "'");
    c.expect(s1 != "<unparseable>", "no JSON from '" + name + "'");
    c.expect(s1 == stripped(second.out) && s1 == stripped(inproc.out), "JSON differs across runs of '" + name + "'");
  }
  c.notes.push_back(std::to_string(commands.size()) + " commands, 3 runs each");
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
      {"exact paper values", exact_values},
      {"identity suites (BDO = stabilization, BOR inversion)", identity_suites},
      {"character integrity", character_integrity},
      {"lemma suites", lemma_suites},
      {"theorem verification", theorem_verification},
      {"LR specialization", specialization},
      {"max scanner", max_scanner},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = Clock::now();
    Check c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.ok = false;
      c.notes.push_back(std::string("exception: ") + e.what());
    }
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2f s", seconds_since(t0));
    std::cout << (c.ok ? "[PASS] " : "[FAIL] ") << (i + 1) << ". " << criteria[i].first << "  (" << timing;
    for (const auto& n : c.notes) std::cout << "; " << n;
    std::cout << ")" << std::endl;
    failed += !c.ok;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
