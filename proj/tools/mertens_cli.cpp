// mertens: compute, verify and tabulate the constants M(q,a), B(q,a), C(q,a).
//
// Exit codes: 0 success, 1 usage error, 2 verification failure, 3 numeric fault.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "mertens/arith.hpp"
#include "mertens/characters.hpp"
#include "mertens/constants.hpp"
#include "mertens/result_file.hpp"
#include "mertens/verify.hpp"

using namespace mertens;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerify = 2;
constexpr int kExitNumeric = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<ConstantKind> parse_kinds(const std::string& list) {
  std::vector<ConstantKind> kinds;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      const ConstantKind k = parse_kind(item);
      if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  }
  if (kinds.empty()) throw UsageError("--kinds: no constant kinds given");
  std::sort(kinds.begin(), kinds.end());
  return kinds;
}

// sum-over-a checks for every complete (q, kind) of the file, M and B only
std::vector<IdentityReport> sum_over_a_reports(const ResultFile& file) {
  const PrecisionContext ctx = file.context();
  const RecordSet set(file.records);
  const MpReal gamma = compute_gamma(ctx);
  const MpReal B = compute_meissel_mertens(ctx);
  std::vector<IdentityReport> out;
  for (ConstantKind kind : {ConstantKind::M, ConstantKind::B}) {
    for (std::int64_t q : set.moduli(kind)) {
      const auto* values = set.complete(kind, q);
      if (!values) continue;
      std::vector<ConstantRecord> recs;
      for (const auto& [a, v] : *values) recs.push_back(*set.find(kind, q, a));
      out.push_back(kind == ConstantKind::M ? check_sum_over_a(q, recs, gamma, B, ctx)
                                            : check_b_sum_over_a(q, recs, B, ctx));
    }
  }
  return out;
}

int cmd_compute(std::int64_t q_from, std::int64_t q_to, const std::string& kinds_arg, int digits,
                const std::string& out_path, bool resume, unsigned threads) {
  if (q_from < 3 || q_to < q_from) throw UsageError("need 3 <= --q-from <= --q-to");
  if (digits < 20 || digits > 1000) throw UsageError("--digits must be in [20, 1000]");
  const auto kinds = parse_kinds(kinds_arg);

  ResultFile file;
  file.target_digits = digits;
  if (resume && std::filesystem::exists(out_path)) {
    file = load_result_file(out_path);
    if (file.target_digits != digits) {
      throw UsageError("--resume: existing file was computed for " + std::to_string(file.target_digits) + " digits");
    }
  }
  const PrecisionContext ctx = file.context();

  std::vector<std::pair<std::int64_t, std::vector<ConstantKind>>> work;
  for (std::int64_t q = q_from; q <= q_to; ++q) {
    std::vector<ConstantKind> todo;
    for (ConstantKind k : kinds) {
      if (!file.has(q, k)) todo.push_back(k);
    }
    if (!todo.empty()) work.emplace_back(q, std::move(todo));
  }
  if (work.empty()) {
    std::cerr << "nothing to compute\n";
    if (!std::filesystem::exists(out_path)) save_result_file(out_path, file);
    return kExitOk;
  }

  // shared constants first, so the workers only read the caches
  compute_gamma(ctx);
  compute_meissel_mertens(ctx);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, work.size()));

  std::mutex mutex;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> fault{false};
  std::string fault_message;
  const auto start = std::chrono::steady_clock::now();

  auto worker = [&]() {
    for (;;) {
      if (fault.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= work.size()) return;
      const auto& [q, todo] = work[i];
      try {
        ModulusComputation mc(q, select_params(q, digits), ctx);
        for (ConstantKind k : todo) {
          const auto t0 = std::chrono::steady_clock::now();
          auto recs = mc.compute(k);
          const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          const int worst = std::min_element(recs.begin(), recs.end(), [](const auto& x, const auto& y) {
                              return x.certified_digits < y.certified_digits;
                            })->certified_digits;
          std::lock_guard<std::mutex> lock(mutex);
          for (auto& r : recs) file.records.push_back(std::move(r));
          file.timing.push_back({q, k, secs});
          const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
          std::fprintf(stderr, "q=%lld %s: %zu residues, >= %d digits, %.2fs (elapsed %.1fs)\n",
                       static_cast<long long>(q), to_string(k).c_str(), static_cast<std::size_t>(euler_phi(q)),
                       worst, secs, total);
        }
        std::lock_guard<std::mutex> lock(mutex);
        file.normalize();
        save_result_file(out_path, file);
      } catch (const NumericFault& e) {
        std::lock_guard<std::mutex> lock(mutex);
        if (!fault.exchange(true)) fault_message = "q=" + std::to_string(q) + ": " + e.what();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  file.normalize();
  if (fault) {
    save_result_file(out_path, file);
    std::cerr << "numeric fault: " << fault_message << "\n";
    return kExitNumeric;
  }

  file.identities = sum_over_a_reports(file);
  file.normalize();
  save_result_file(out_path, file);
  int failures = 0;
  for (const auto& r : file.identities) {
    if (!r.passed) {
      ++failures;
      std::cerr << r.describe() << "\n";
    }
  }
  std::fprintf(stderr, "%zu records, %zu sum-over-a checks, %d failed\n", file.records.size(), file.identities.size(),
               failures);
  return failures ? kExitVerify : kExitOk;
}

int cmd_verify(const std::string& in_path, std::int64_t q_cap) {
  ResultFile file = load_result_file(in_path);
  const PrecisionContext ctx = file.context();
  std::vector<ConstantRecord> kept;
  std::int64_t q_max = 0;
  for (const auto& r : file.records) {
    if (q_cap > 0 && r.q > q_cap) continue;
    q_max = std::max(q_max, r.q);
    kept.push_back(r);
  }
  const RecordSet set(kept);
  const auto reports = verify_all(set, ctx);

  std::map<std::string, std::pair<int, int>> tally;  // label -> (checked, failed)
  MpReal worst(64);
  for (const auto& r : reports) {
    std::string label = to_string(r.kind);
    if (r.kind != IdentityKind::ThreeConstants) label += " (" + to_string(r.constant) + ")";
    auto& t = tally[label];
    ++t.first;
    if (!r.passed) {
      ++t.second;
      std::cout << r.describe() << "\n";
    }
    if (r.residual > worst) worst = r.residual;
  }
  int failed = 0;
  for (const auto& [label, t] : tally) {
    std::printf("%-28s %6d checked %6d failed\n", label.c_str(), t.first, t.second);
    failed += t.second;
  }
  std::printf("largest residual %s, threshold %s\n", worst.to_scientific_up(3).c_str(),
              residual_threshold(ctx).to_scientific(3).c_str());
  if (q_max >= 3) {
    const auto counts = enumerate_identities(q_max);
    std::printf("identities for q <= %lld: total %lld, independent %lld\n", static_cast<long long>(q_max),
                static_cast<long long>(counts.total), static_cast<long long>(counts.independent));
  }
  return failed ? kExitVerify : kExitOk;
}

int cmd_table(const std::string& in_path, int digits, const std::string& kinds_arg, std::int64_t only_q) {
  if (digits <= 0) throw UsageError("--digits must be positive");
  const ResultFile file = load_result_file(in_path);
  const auto kinds = parse_kinds(kinds_arg);
  for (ConstantKind kind : kinds) {
    std::vector<const ConstantRecord*> rows;
    for (const auto& r : file.records) {
      if (r.kind == kind && (only_q == 0 || r.q == only_q)) rows.push_back(&r);
    }
    if (rows.empty()) continue;
    for (const auto* r : rows) {
      if (r->certified_digits < digits) {
        throw UsageError(to_string(kind) + "(" + std::to_string(r->q) + ", " + std::to_string(r->a) + ") has only " +
                         std::to_string(r->certified_digits) + " certified digits");
      }
    }
    std::printf("%3s %3s  %-*s  %s\n", "q", "a", digits + 6, (to_string(kind) + "(q,a)").c_str(), "digits");
    std::int64_t last_q = 0;
    for (const auto* r : rows) {
      std::string v = r->value.to_fixed(digits);
      if (v[0] != '-') v = " " + v;
      if (last_q != 0 && r->q != last_q) std::printf("\n");
      last_q = r->q;
      std::printf("%3lld %3lld  %s…  %d\n", static_cast<long long>(r->q), static_cast<long long>(r->a), v.c_str(),
                  r->certified_digits);
    }
  }
  return kExitOk;
}

int cmd_constants(const std::string& name, int digits) {
  if (digits < 1 || digits > 1000) throw UsageError("--digits must be in [1, 1000]");
  const PrecisionContext ctx = PrecisionContext::for_digits(digits);
  MpReal v;
  if (name == "gamma") {
    v = compute_gamma(ctx);
  } else if (name == "meissel-mertens") {
    v = compute_meissel_mertens(ctx);
  } else {
    throw UsageError("unknown constant '" + name + "' (expected gamma or meissel-mertens)");
  }
  std::printf("%s\n", v.to_fixed(digits).c_str());
  return kExitOk;
}

int cmd_characters(std::int64_t q) {
  if (q < 3) throw UsageError("--q must be >= 3");
  const CharacterGroup g = build_group(q);
  std::printf("modulus %lld, %zu characters\n", static_cast<long long>(q), g.size());
  for (const auto& c : g.components()) {
    std::printf("component: generator %lld of order %ld\n", static_cast<long long>(c.generator), c.order);
  }
  std::printf("chi(r) = exp(2 pi i t / L); columns list t for r = 1..%lld, '.' where gcd(r, q) > 1\n",
              static_cast<long long>(q - 1));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Character& chi = g[i];
    std::printf("%4zu  L=%-3ld %s conductor %-4lld", i, chi.order(), chi.parity() > 0 ? "even" : "odd ",
                static_cast<long long>(chi.conductor()));
    for (std::int64_t r = 1; r < q; ++r) {
      const auto t = chi.exponent_at(r);
      if (t) {
        std::printf(" %ld", *t);
      } else {
        std::printf(" .");
      }
    }
    std::printf("\n");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mertens-type constants for primes in arithmetic progressions"};
  app.require_subcommand(1);

  auto* compute = app.add_subcommand("compute", "compute M, B, C for a range of moduli");
  std::int64_t q_from = 0, q_to = 0;
  std::string kinds = "M,B,C";
  int digits = 100;
  std::string out_path;
  bool resume = false;
  unsigned threads = 0;
  compute->add_option("--q-from", q_from, "smallest modulus")->required();
  compute->add_option("--q-to", q_to, "largest modulus")->required();
  compute->add_option("--kinds", kinds, "comma-separated subset of M,B,C")->capture_default_str();
  compute->add_option("--digits", digits, "target decimal digits (20..1000)")->capture_default_str();
  compute->add_option("--out", out_path, "result file")->required();
  compute->add_flag("--resume", resume, "skip (q, kind) pairs already in the result file");
  compute->add_option("--threads", threads, "worker threads (default: available cores)");

  auto* verify = app.add_subcommand("verify", "check identities over a result file");
  std::string in_path;
  std::int64_t q_cap = 0;
  verify->add_option("--in", in_path, "result file")->required();
  verify->add_option("--q-max", q_cap, "ignore records with larger q");

  auto* table = app.add_subcommand("table", "print stored values, truncated");
  int table_digits = 40;
  std::string table_kinds = "M,B,C";
  std::int64_t table_q = 0;
  table->add_option("--in", in_path, "result file")->required();
  table->add_option("--digits", table_digits, "digits to print")->required();
  table->add_option("--kinds", table_kinds, "comma-separated subset of M,B,C")->capture_default_str();
  table->add_option("--q", table_q, "only this modulus");

  auto* constants = app.add_subcommand("constants", "Euler's constant or the Meissel-Mertens constant");
  std::string name;
  int const_digits = 100;
  constants->add_option("name", name, "gamma | meissel-mertens")->required();
  constants->add_option("--digits", const_digits, "digits after the point")->required();

  auto* characters = app.add_subcommand("characters", "list the Dirichlet characters mod q");
  std::int64_t char_q = 0;
  characters->add_option("--q", char_q, "modulus")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*compute) return cmd_compute(q_from, q_to, kinds, digits, out_path, resume, threads);
    if (*verify) return cmd_verify(in_path, q_cap);
    if (*table) return cmd_table(in_path, table_digits, table_kinds, table_q);
    if (*constants) return cmd_constants(name, const_digits);
    if (*characters) return cmd_characters(char_q);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericFault& e) {
    std::cerr << "numeric fault: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
