#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mertens/lfunctions.hpp"
#include "mertens/mp.hpp"

namespace mertens {

enum class ConstantKind { M, B, C };

std::string to_string(ConstantKind kind);
ConstantKind parse_kind(const std::string& name);

/// Truncation schedule for one (q, digits) computation.
struct Params {
  std::int64_t prime_cutoff = 9600;  // A q
  int K = 26;                        // Mobius truncation for the m = 1 sums
  std::int64_t N = 0;                // Euler-Maclaurin partial-sum length, multiple of q
  int T = 0;                         // Euler-Maclaurin correction terms, even
  int m_max = 0;                     // truncation of the m-sums for B and C

  EmParams em() const { return {N, T}; }
  bool operator==(const Params&) const = default;
};

struct ConstantRecord {
  std::int64_t q = 0;
  std::int64_t a = 0;
  ConstantKind kind = ConstantKind::M;
  MpReal value;
  MpReal error_bound;
  int certified_digits = 0;
  Params params;
  std::optional<MpReal> log_value;  // log C(q, a), C records only
};

Params select_params(std::int64_t q, int digits);

/// 2 (Aq)^(1-K) (phi(q) - 1) / (K^2 (Aq - 1)), with Aq = A * q.
MpReal bound_E1(std::int64_t q, std::int64_t A, int K, const PrecisionContext& ctx);
/// The same bound expressed through the prime cutoff P = A q directly.
MpReal bound_E1_cutoff(std::int64_t q, std::int64_t prime_cutoff, int K, mpfr_prec_t bits);

/// 2 (phi(q)-1) (K+T-2)^(T-2) q^T |B_T| / ((N-1) U N^(T-1) T!).
MpReal bound_E2(std::int64_t q, int K, std::int64_t N, int T, const MpReal& U, const PrecisionContext& ctx);

/// Euler's constant by Euler-Maclaurin on the harmonic sum with explicit
/// parameters; the second member is the first omitted term.
std::pair<MpReal, MpReal> gamma_em(std::int64_t N0, int J, mpfr_prec_t bits);
/// Euler's constant to the context precision (cached per precision).
MpReal compute_gamma(const PrecisionContext& ctx);

/// B = sum_p (log(1 - 1/p) + 1/p), via Mobius-accelerated prime zeta tails
/// beyond the cutoff P0.
MpReal meissel_mertens_with_cutoff(std::int64_t P0, const PrecisionContext& ctx);
/// Cached per precision, P0 = 1000.
MpReal compute_meissel_mertens(const PrecisionContext& ctx);

/// Largest d with total_bound + 10 ulp(value) < 10^-d, capped at target +
/// guard digits. Returns 0 when the bound is >= 1.
int certify_digits(const MpReal& value, const MpReal& total_bound, const PrecisionContext& ctx);

/// All constants of the requested kinds for one modulus. The L-function
/// tail data is computed once and shared between kinds.
class ModulusComputation {
 public:
  ModulusComputation(std::int64_t q, Params params, const PrecisionContext& ctx);

  std::vector<ConstantRecord> compute(ConstantKind kind);

  /// S(chi) = sum_{k <= K} mu(k)/k log L_P(chi^k, k), indexed like the group.
  const std::vector<MpComplex>& m_sums();
  /// sum_{m >= m0} (1/m) sum_p chi(p) / p^m per character, m0 = 1 or 2.
  const std::vector<MpComplex>& power_sums(int m0);
  /// Bound on the error of sum_chi chi(a)-weighted power sums, E2 excluded.
  const MpReal& power_sums_bound(int m0);

  const CharacterGroup& group() const { return group_; }
  EulerTail& tail() { return tail_; }
  double U() const { return tail_.assembly().U(); }

 private:
  std::vector<ConstantRecord> compute_M();
  std::vector<ConstantRecord> compute_BC(ConstantKind kind);
  void check_real(const MpComplex& z, std::int64_t a, const char* what) const;
  ConstantRecord make_record(std::int64_t a, ConstantKind kind, MpReal value, MpReal bound) const;

  std::int64_t q_;
  Params params_;
  PrecisionContext ctx_;
  CharacterGroup group_;
  std::int64_t phi_;
  EulerTail tail_;
  std::vector<std::int64_t> residues_;
  std::vector<MpComplex> m_sums_;
  std::vector<MpComplex> power_sums_[2];
  MpReal power_sums_bound_[2];
  MpReal power_sums_e2_weight_[2];  // sum of 1/m over the m with a tail evaluation
  int k_used_[2] = {0, 0};
};

std::vector<ConstantRecord> compute_M_all(std::int64_t q, const Params& params, const PrecisionContext& ctx);
std::vector<ConstantRecord> compute_B_all(std::int64_t q, const Params& params, const PrecisionContext& ctx);
std::vector<ConstantRecord> compute_C_all(std::int64_t q, const Params& params, const PrecisionContext& ctx);

}  // namespace mertens
