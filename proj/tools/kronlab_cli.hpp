#pragma once

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kronlab/kronlab.hpp"

namespace kronlab::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kVerifyFail = 1, kUsage = 2, kBudget = 3 };

using Json = nlohmann::ordered_json;

/// Exclusive advisory lock on the cache directory for the life of a run.
class CacheLock {
 public:
  explicit CacheLock(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    fd_ = ::open((dir / "lock").c_str(), O_CREAT | O_RDWR, 0644);
    if (fd_ < 0) throw std::runtime_error("cannot open lock file in " + dir.string());
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      throw std::runtime_error("cannot lock " + dir.string());
    }
  }
  CacheLock(const CacheLock&) = delete;
  CacheLock& operator=(const CacheLock&) = delete;
  ~CacheLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }

 private:
  int fd_ = -1;
};

inline std::filesystem::path default_cache_dir() {
  if (const char* xdg = std::getenv("XDG_DATA_HOME"); xdg && *xdg) return std::filesystem::path(xdg) / "kronlab";
  if (const char* home = std::getenv("HOME"); home && *home)
    return std::filesystem::path(home) / ".local" / "share" / "kronlab";
  return std::filesystem::temp_directory_path() / "kronlab";
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + csv_field(fields[i]);
  return out + '\n';
}

inline std::string display(const Partition& p) { return p.empty() ? "-" : to_text(p); }

/// Removes every "timing" member, recursively. What remains is the
/// deterministic comparison surface of an output document.
inline Json strip_timing(Json doc) {
  if (doc.is_object()) {
    doc.erase("timing");
    for (auto& [k, v] : doc.items()) v = strip_timing(v);
  } else if (doc.is_array()) {
    for (auto& v : doc) v = strip_timing(v);
  }
  return doc;
}

struct Options {
  std::string cache_dir;
  bool no_cache = false;
  unsigned jobs = default_jobs();
  std::string format = "plain";
  std::optional<int> budget;

  Budget caps() const {
    Budget b;
    if (budget) b.reduced_degree = b.kronecker_degree = *budget;
    return b;
  }
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Partition parse_arg(const std::string& text, const char* what) {
  try {
    return parse_partition(text);
  } catch (const ParseError& e) {
    throw UsageError(std::string(what) + ": " + e.what());
  }
}

class Runner {
 public:
  Runner(const Options& opts, std::ostream& out) : opts_(opts), out_(out) {}

  int emit(Json doc, const std::string& plain, const std::vector<std::vector<std::string>>& csv, int code) {
    doc["version"] = kVersion;
    doc["timing"] = {{"wall_ms", format_ms(elapsed_ms())}};
    if (opts_.format == "json") {
      out_ << doc.dump(2) << '\n';
    } else if (opts_.format == "csv") {
      for (const auto& row : csv) out_ << csv_row(row);
    } else {
      out_ << plain;
    }
    return code;
  }

  int cmd_g(const std::string& l, const std::string& m, const std::string& n) {
    Partition a = parse_arg(l, "lambda"), b = parse_arg(m, "mu"), c = parse_arg(n, "nu");
    if (a.size() != b.size() || a.size() != c.size())
      throw UsageError("g: partitions must have equal size (got " + std::to_string(a.size()) + ", " +
                       std::to_string(b.size()) + ", " + std::to_string(c.size()) + ")");
    if (a.size() > opts_.caps().kronecker_degree)
      throw BudgetExceeded("g: degree " + std::to_string(a.size()) + " exceeds budget " +
                           std::to_string(opts_.caps().kronecker_degree));
    Coefficient v = kronecker(a, b, c);
    Json doc{{"command", "g"},
             {"inputs", {{"lambda", to_text(a)}, {"mu", to_text(b)}, {"nu", to_text(c)}}},
             {"result", to_decimal(v)},
             {"method", "class-sum"}};
    return emit(doc, "g(" + display(a) + " | " + display(b) + " | " + display(c) + ") = " + to_decimal(v) + '\n',
                {{"command", "lambda", "mu", "nu", "result", "method"},
                 {"g", to_text(a), to_text(b), to_text(c), to_decimal(v), "class-sum"}},
                kOk);
  }

  int cmd_rkron(const std::string& x, const std::string& y, const std::string& z, const std::string& method_text,
                int threshold) {
    Partition a = parse_arg(x, "alpha"), b = parse_arg(y, "beta"), c = parse_arg(z, "gamma");
    Method requested;
    try {
      requested = parse_method(method_text);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    Method used = resolve_method(a, b, c, requested, threshold);
    const Budget caps = opts_.caps();
    if (used == Method::kStable && stable_degree(a, b, c) > caps.reduced_degree)
      throw BudgetExceeded("rkron: padded degree " + std::to_string(stable_degree(a, b, c)) + " exceeds budget " +
                           std::to_string(caps.reduced_degree));
    if (used == Method::kBdo && bdo_ordering(a, b, c).k() > caps.kronecker_degree)
      throw BudgetExceeded("rkron: BDO Kronecker degree " + std::to_string(bdo_ordering(a, b, c).k()) +
                           " exceeds budget " + std::to_string(caps.kronecker_degree));
    ReducedValue v = reduced(a, b, c, used, threshold);
    std::string m(method_name(v.method));
    Json doc{{"command", "rkron"},
             {"inputs", {{"alpha", to_text(a)}, {"beta", to_text(b)}, {"gamma", to_text(c)},
                         {"method", std::string(method_name(requested))}}},
             {"result", to_decimal(v.value)},
             {"method", m}};
    return emit(doc,
                "gbar(" + display(a) + " | " + display(b) + " | " + display(c) + ") = " + to_decimal(v.value) +
                    "  [method " + m + "]\n",
                {{"command", "alpha", "beta", "gamma", "result", "method"},
                 {"rkron", to_text(a), to_text(b), to_text(c), to_decimal(v.value), m}},
                kOk);
  }

  int cmd_lr(const std::string& l, const std::string& m, const std::string& n) {
    Partition a = parse_arg(l, "lambda"), b = parse_arg(m, "mu"), c = parse_arg(n, "nu");
    if (b.size() + c.size() != a.size())
      throw UsageError("lr: |mu| + |nu| must equal |lambda| (got " + std::to_string(b.size()) + " + " +
                       std::to_string(c.size()) + " vs " + std::to_string(a.size()) + ")");
    Coefficient v = lr(a, b, c);
    Json doc{{"command", "lr"},
             {"inputs", {{"lambda", to_text(a)}, {"mu", to_text(b)}, {"nu", to_text(c)}}},
             {"result", to_decimal(v)},
             {"method", "lr-tableaux"}};
    return emit(doc, "c(" + display(a) + "; " + display(b) + ", " + display(c) + ") = " + to_decimal(v) + '\n',
                {{"command", "lambda", "mu", "nu", "result", "method"},
                 {"lr", to_text(a), to_text(b), to_text(c), to_decimal(v), "lr-tableaux"}},
                kOk);
  }

  int cmd_verify(const std::string& claim, const VerificationReport& report, Json inputs) {
    Json doc{{"command", "verify"},
             {"inputs", inputs},
             {"result", status_name(report.status)},
             {"method", claim},
             {"report", to_json(report)}};
    std::vector<std::vector<std::string>> csv{{"claim", "status", "step", "description", "verdict", "key", "value"}};
    for (std::size_t i = 0; i < report.steps.size(); ++i) {
      const auto& s = report.steps[i];
      if (s.values.empty())
        csv.push_back({report.claim, status_name(report.status), std::to_string(i + 1), s.description,
                       status_name(s.verdict), "", ""});
      for (const auto& [k, v] : s.values)
        csv.push_back({report.claim, status_name(report.status), std::to_string(i + 1), s.description,
                       status_name(s.verdict), k, v});
    }
    int code = report.status == Status::kPass ? kOk : report.status == Status::kFail ? kVerifyFail : kBudget;
    return emit(doc, render_plain(report), csv, code);
  }

  int cmd_scan_max(int n) {
    if (n < 1) throw UsageError("scan-max: n must be positive");
    std::vector<MaxScanRow> rows = max_scan(n, opts_.jobs, opts_.caps());
    Json table = Json::array();
    std::ostringstream plain;
    std::vector<std::vector<std::string>> csv{
        {"n", "total_bound", "triples", "max_reduced", "max_kronecker", "upper_bound", "within_bound", "argmax"}};
    plain << "n  total<=  triples  max_gbar  max_g  upper_bound  argmax\n";
    for (const auto& r : rows) {
      Json argmax = Json::array();
      std::string joined;
      for (const auto& t : r.argmax) {
        argmax.push_back(Json::array({to_text(t.first), to_text(t.second), to_text(t.third)}));
        joined += (joined.empty() ? "" : ";") + display(t.first) + "|" + display(t.second) + "|" + display(t.third);
      }
      table.push_back({{"n", std::to_string(r.n)},
                       {"total_bound", std::to_string(r.total_bound)},
                       {"triples", std::to_string(r.triples)},
                       {"max_reduced", to_decimal(r.max_reduced)},
                       {"max_kronecker", to_decimal(r.max_kronecker)},
                       {"upper_bound", to_decimal(r.upper_bound)},
                       {"within_bound", r.within_bound},
                       {"argmax", argmax}});
      csv.push_back({std::to_string(r.n), std::to_string(r.total_bound), std::to_string(r.triples),
                     to_decimal(r.max_reduced), to_decimal(r.max_kronecker), to_decimal(r.upper_bound),
                     r.within_bound ? "true" : "false", joined});
      plain << r.n << "  " << r.total_bound << "  " << r.triples << "  " << to_decimal(r.max_reduced) << "  "
            << to_decimal(r.max_kronecker) << "  " << to_decimal(r.upper_bound) << "  " << r.argmax.size()
            << " triple(s)\n";
    }
    Json doc{{"command", "scan-max"},
             {"inputs", {{"n", std::to_string(n)}}},
             {"result", rows.empty() ? "0" : to_decimal(rows.back().max_reduced)},
             {"method", "auto"},
             {"table", table}};
    return emit(doc, plain.str(), csv, kOk);
  }

  int cmd_identity_bdo(int total) {
    if (total < 0) throw UsageError("identity bdo: --total must be non-negative");
    if (2 * total > opts_.caps().reduced_degree)
      throw BudgetExceeded("identity bdo: padded degree up to " + std::to_string(2 * total) + " exceeds budget");
    std::vector<Triple> triples = triples_up_to(total);
    std::vector<char> ok(triples.size(), 0);
    parallel_for(triples.size(), opts_.jobs, [&](std::size_t i) {
      const Triple& t = triples[i];
      ok[i] = reduced_bdo(t.first, t.second, t.third) == reduced_stable(t.first, t.second, t.third);
    });
    return identity_result("bdo", "total", total, triples, ok, std::nullopt, [](const Triple& t) {
      return "bdo " + to_decimal(reduced_bdo(t.first, t.second, t.third)) + " vs stable " +
             to_decimal(reduced_stable(t.first, t.second, t.third));
    });
  }

  int cmd_identity_bor(int n_max) {
    if (n_max < 0) throw UsageError("identity bor: --n must be non-negative");
    if (n_max > opts_.caps().kronecker_degree)
      throw BudgetExceeded("identity bor: n exceeds budget");
    int sign = 0;
    try {
      sign = validate_bor_sign(5);
    } catch (const SignConventionError& e) {
      throw ConsistencyError(e.what());
    }
    if (sign != kBorSign) throw ConsistencyError("validated BOR sign differs from the frozen constant");
    std::vector<Triple> triples;
    for (int n = 1; n <= n_max; ++n) {
      const auto& ps = partitions_of(n);
      for (const auto& a : ps)
        for (const auto& b : ps)
          for (const auto& c : ps) triples.push_back({a, b, c});
    }
    std::vector<char> ok(triples.size(), 0);
    parallel_for(triples.size(), opts_.jobs, [&](std::size_t i) {
      const Triple& t = triples[i];
      ok[i] = kronecker_via_bor(t.first, t.second, t.third) == kronecker(t.first, t.second, t.third);
    });
    return identity_result("bor", "n", n_max, triples, ok, sign, [](const Triple& t) {
      return "bor " + to_decimal(kronecker_via_bor(t.first, t.second, t.third)) + " vs class-sum " +
             to_decimal(kronecker(t.first, t.second, t.third));
    });
  }

 private:
  template <class Describe>
  int identity_result(const std::string& name, const std::string& bound_name, int bound,
                      const std::vector<Triple>& triples, const std::vector<char>& ok, std::optional<int> sign,
                      Describe&& describe) {
    std::size_t mismatches = 0;
    std::optional<std::size_t> first;
    for (std::size_t i = 0; i < ok.size(); ++i)
      if (!ok[i]) {
        ++mismatches;
        if (!first) first = i;
      }
    Json doc{{"command", "identity"},
             {"inputs", {{"name", name}, {bound_name, std::to_string(bound)}}},
             {"result", mismatches == 0 ? "holds" : "fails"},
             {"method", name},
             {"instances", std::to_string(triples.size())},
             {"mismatches", std::to_string(mismatches)}};
    std::string plain = "identity " + name + " (" + bound_name + " <= " + std::to_string(bound) +
                        "): " + std::to_string(triples.size()) + " instances, " + std::to_string(mismatches) +
                        " mismatches\n";
    if (sign) {
      doc["sign"] = std::to_string(*sign);
      plain += "validated global sign: " + std::to_string(*sign) + '\n';
    }
    if (first) {
      const Triple& t = triples[*first];
      std::string where = display(t.first) + " | " + display(t.second) + " | " + display(t.third);
      std::string detail = describe(t);
      doc["first_discrepancy"] = {{"triple", where}, {"detail", detail}};
      plain += "first discrepancy: (" + where + "): " + detail + '\n';
    }
    std::vector<std::vector<std::string>> csv{
        {"name", bound_name, "instances", "mismatches", "sign", "result"},
        {name, std::to_string(bound), std::to_string(triples.size()), std::to_string(mismatches),
         sign ? std::to_string(*sign) : "", mismatches == 0 ? "holds" : "fails"}};
    return emit(doc, plain, csv, mismatches == 0 ? kOk : kVerifyFail);
  }

  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

  const Options& opts_;
  std::ostream& out_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Kronecker, Littlewood-Richardson and reduced Kronecker coefficients", "kronlab"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opts;
  app.add_option("--cache-dir", opts.cache_dir, "character cache directory");
  app.add_flag("--no-cache", opts.no_cache, "do not read or write the character cache");
  app.add_option("--jobs", opts.jobs, "worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--format", opts.format, "output format")->check(CLI::IsMember({"plain", "json", "csv"}));
  app.add_option("--budget", opts.budget, "degree cap for direct computation")->check(CLI::PositiveNumber);
  app.set_version_flag("--version", kVersion);

  std::string x, y, z, method = "auto";
  int threshold = kDefaultBdoThreshold;
  auto positional = [&](CLI::App* sub, std::array<const char*, 3> names) {
    sub->add_option(names[0], x, "partition, e.g. 8,2^5 (- for empty)")->required();
    sub->add_option(names[1], y)->required();
    sub->add_option(names[2], z)->required();
  };
  auto* g = app.add_subcommand("g", "Kronecker coefficient g(lambda, mu, nu)");
  positional(g, {"lambda", "mu", "nu"});
  auto* rk = app.add_subcommand("rkron", "reduced Kronecker coefficient gbar(alpha, beta, gamma)");
  positional(rk, {"alpha", "beta", "gamma"});
  rk->add_option("--method", method, "stable | bdo | auto");
  rk->add_option("--threshold", threshold, "largest k for which auto picks bdo");
  auto* lrc = app.add_subcommand("lr", "Littlewood-Richardson coefficient c^lambda_{mu nu}");
  positional(lrc, {"lambda", "mu", "nu"});

  auto* verify = app.add_subcommand("verify", "verify a saturation counterexample claim");
  verify->require_subcommand(1);
  auto* prop24 = verify->add_subcommand("prop24", "the (1^5, 1^5, 3^2), N=2 instance");
  int k = 3;
  auto* thm12 = verify->add_subcommand("thm12", "the (1^{k^2-1}, 1^{k^2-1}, k^{k-1}) chain");
  thm12->add_option("--k", k)->required();
  std::string family_gamma;
  auto* family = verify->add_subcommand("family", "rectangle family parameters for gamma");
  family->add_option("--gamma", family_gamma)->required();
  std::string ca, cb, cg;
  int scale_n = 2;
  auto* custom = verify->add_subcommand("custom", "any triple and scale factor");
  custom->add_option("--alpha", ca)->required();
  custom->add_option("--beta", cb)->required();
  custom->add_option("--gamma", cg)->required();
  custom->add_option("--N", scale_n)->required()->check(CLI::PositiveNumber);

  int scan_n = 1;
  auto* scan = app.add_subcommand("scan-max", "exhaustive maximum of gbar over total size <= 3n");
  scan->add_option("n", scan_n)->required();

  auto* identity = app.add_subcommand("identity", "exhaustive identity cross-check");
  identity->require_subcommand(1);
  int total = 0, bor_n = 0;
  auto* id_bdo = identity->add_subcommand("bdo", "BDO expansion against stabilization");
  id_bdo->add_option("--total", total)->required();
  auto* id_bor = identity->add_subcommand("bor", "BOR inversion against the class sum");
  id_bor->add_option("--n", bor_n)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (dynamic_cast<const CLI::CallForVersion*>(&e) ? std::string(kVersion) + "\n" : app.help());
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    std::optional<CacheLock> lock;
    std::filesystem::path cache_file;
    std::size_t loaded = 0;
    if (!opts.no_cache) {
      std::filesystem::path dir = opts.cache_dir.empty() ? default_cache_dir() : std::filesystem::path(opts.cache_dir);
      lock.emplace(dir);
      cache_file = dir / "characters.tsv";
      if (std::filesystem::exists(cache_file)) character_cache().load(cache_file);
      loaded = character_cache().size();
    }

    Runner runner(opts, out);
    int code = kOk;
    const Budget caps = opts.caps();
    if (*g) {
      code = runner.cmd_g(x, y, z);
    } else if (*rk) {
      code = runner.cmd_rkron(x, y, z, method, threshold);
    } else if (*lrc) {
      code = runner.cmd_lr(x, y, z);
    } else if (*prop24) {
      code = runner.cmd_verify("prop24", verify_prop24(caps), Json::object());
    } else if (*thm12) {
      code = runner.cmd_verify("thm12", theorem12_chain(k, caps), {{"k", std::to_string(k)}});
    } else if (*family) {
      Partition gm = parse_arg(family_gamma, "gamma");
      code = runner.cmd_verify("family", verify_family(gm), {{"gamma", to_text(gm)}});
    } else if (*custom) {
      Partition a = parse_arg(ca, "alpha"), b = parse_arg(cb, "beta"), c = parse_arg(cg, "gamma");
      code = runner.cmd_verify("custom", verify_saturation_counterexample(a, b, c, scale_n, caps),
                               {{"alpha", to_text(a)}, {"beta", to_text(b)}, {"gamma", to_text(c)},
                                {"N", std::to_string(scale_n)}});
    } else if (*scan) {
      code = runner.cmd_scan_max(scan_n);
    } else if (*id_bdo) {
      code = runner.cmd_identity_bdo(total);
    } else if (*id_bor) {
      code = runner.cmd_identity_bor(bor_n);
    }

    if (lock && character_cache().size() != loaded) character_cache().save(cache_file);
    return code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 4;
  }
}

}  // namespace kronlab::cli
