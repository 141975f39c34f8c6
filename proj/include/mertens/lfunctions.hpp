#pragma once

#include <atomic>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mertens/bernoulli.hpp"
#include "mertens/characters.hpp"
#include "mertens/mp.hpp"

namespace mertens {

/// Raised when a computation cannot be trusted: |L| too close to its own
/// error bound, a logarithm argument off the right half-plane, or a
/// combined value with a non-negligible imaginary part.
class NumericFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Euler-Maclaurin truncation: partial sum up to N (a multiple of the
/// period) and T correction terms (T even).
struct EmParams {
  std::int64_t N = 0;
  int T = 0;
};

/// Shared bookkeeping for one tail computation. U is the smallest |L|
/// value seen so far; it only ever decreases.
class TailAssembly {
 public:
  TailAssembly(std::int64_t prime_cutoff, EmParams em) : prime_cutoff_(prime_cutoff), em_(em) {}

  std::int64_t prime_cutoff() const { return prime_cutoff_; }
  const EmParams& em() const { return em_; }

  void observe(double abs_l) {
    double cur = min_abs_l_.load();
    while (abs_l < cur && !min_abs_l_.compare_exchange_weak(cur, abs_l)) {
    }
  }
  /// Running minimum of |L|; +inf before any evaluation.
  double U() const { return min_abs_l_.load(); }

 private:
  std::int64_t prime_cutoff_;
  EmParams em_;
  std::atomic<double> min_abs_l_{std::numeric_limits<double>::infinity()};
};

struct ZetaValue {
  MpReal value;
  MpReal error_bound;  // magnitude of the first omitted correction term
};

/// zeta(s) by Euler-Maclaurin with explicit (N, T). s >= 2.
ZetaValue zeta_em(int s, std::int64_t N, int T, mpfr_prec_t bits);
MpReal zeta_em(int s, std::int64_t N, int T, const PrecisionContext& ctx);

/// zeta(s) with parameters chosen so the truncation error is below the
/// precision of `bits`. Cached per (s, bits).
MpReal zeta(int s, mpfr_prec_t bits);

/// zeta(s) * prod_{p | q} (1 - p^-s), the L-function of the principal
/// character mod q. s >= 2.
MpReal l_principal(std::int64_t q, int s, const PrecisionContext& ctx);
MpReal l_principal(std::int64_t q, int s, mpfr_prec_t bits);

/// Euler-Maclaurin evaluation of L(chi, s) for nonprincipal characters of
/// one modulus. Partial sums are grouped by residue class, so each (s)
/// costs one pass over r < N shared by all characters.
class LSeriesEvaluator {
 public:
  LSeriesEvaluator(std::int64_t modulus, EmParams em, mpfr_prec_t bits);

  std::int64_t modulus() const { return modulus_; }
  const EmParams& em() const { return em_; }

  /// L_{T,N}(chi, s). Throws InvalidArgument for principal chi or a modulus
  /// mismatch.
  MpComplex evaluate(const Character& chi, int s);

  /// q^T |B_T| / T! * s (s+1) ... (s+T-2) * N^(1-s-T).
  MpReal error_bound(int s) const;

 private:
  const std::vector<MpReal>& class_sums(int s);
  const std::vector<MpComplex>& chi_bernoulli_row(const Character& chi);

  std::int64_t modulus_;
  EmParams em_;
  mpfr_prec_t bits_;
  std::vector<std::int64_t> units_;        // 1 <= r < N with gcd(r, q) = 1
  std::vector<MpReal> powers_;             // r^-s for the last computed s
  std::vector<MpReal> inverses_;           // 1 / r
  int powers_s_ = 0;
  std::map<int, std::vector<MpReal>> class_sums_;
  std::unique_ptr<BernoulliPolyTable> bernoulli_;
  std::map<std::vector<long>, std::vector<MpComplex>> chi_bernoulli_;
};

/// L_{T,N}(chi, s) for a nonprincipal chi; the mod-q L-series, i.e. Euler
/// factors at p | q are absent.
MpComplex l_em(const Character& chi, int s, const EmParams& em, const PrecisionContext& ctx);

/// Logarithms of Euler-product tails L_P(chi, s) = prod_{p > P} (1 - chi(p) p^-s)^-1
/// and the Mobius-accelerated prime sums built from them, for characters
/// of one modulus (or the trivial character mod 1).
class EulerTail {
 public:
  EulerTail(std::int64_t modulus, std::int64_t prime_cutoff, EmParams em, const PrecisionContext& ctx);

  TailAssembly& assembly() { return assembly_; }
  const TailAssembly& assembly() const { return assembly_; }
  const std::vector<std::int64_t>& primes() const { return primes_; }
  LSeriesEvaluator& evaluator() { return evaluator_; }

  /// log L_P(chi, s), principal branch, cached per (chi, s).
  MpComplex log_tail(const Character& chi, int s);

  /// sum_{k <= K, mu(k) != 0} mu(k)/k log L_P(chi^k, k m) ~ sum_{p > P} chi(p) / p^m.
  MpComplex prime_tail_sum(const Character& chi, int m, int K);

  /// p^-s for every prime p <= P, cached per s.
  const std::vector<MpReal>& prime_powers(int s);

  /// Largest |log L_P| observed; above 1 indicates a parameter or branch fault.
  double max_abs_log_tail() const { return max_abs_log_; }

 private:
  std::int64_t modulus_;
  PrecisionContext ctx_;
  std::vector<std::int64_t> primes_;
  TailAssembly assembly_;
  LSeriesEvaluator evaluator_;
  std::map<int, std::vector<MpReal>> prime_powers_;
  std::map<std::pair<std::vector<long>, int>, MpComplex> log_cache_;
  double max_abs_log_ = 0.0;
};

/// Single-shot forms of the EulerTail operations.
MpComplex log_l_tail(const Character& chi, int s, std::int64_t prime_cutoff, const EmParams& em,
                     TailAssembly& assembly, const PrecisionContext& ctx);
MpComplex prime_tail_sum(const Character& chi, int m, std::int64_t prime_cutoff, int K, const EmParams& em,
                         TailAssembly& assembly, const PrecisionContext& ctx);

}  // namespace mertens
