#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mertens/constants.hpp"
#include "mertens/mp.hpp"

namespace mertens {

enum class IdentityKind { SumOverA, SumOverClasses, ThreeConstants };

std::string to_string(IdentityKind kind);
IdentityKind parse_identity_kind(const std::string& name);

struct IdentityReport {
  IdentityKind kind = IdentityKind::SumOverA;
  ConstantKind constant = ConstantKind::M;  // M or B; M for the three-constants check
  std::int64_t q1 = 0;
  std::int64_t q2 = 0;  // 0 unless a class refinement
  std::int64_t a = 0;   // 0 for sum-over-a
  MpReal residual;
  MpReal threshold;
  bool passed = false;

  std::string describe() const;
};

/// 10^-(target - 5): the default residual threshold.
MpReal residual_threshold(const PrecisionContext& ctx);

/// Records grouped by (kind, q); values indexed by residue a.
class RecordSet {
 public:
  RecordSet() = default;
  explicit RecordSet(const std::vector<ConstantRecord>& records);

  void add(const ConstantRecord& record);
  /// Values for (kind, q) if every admissible residue is present.
  const std::map<std::int64_t, MpReal>* complete(ConstantKind kind, std::int64_t q) const;
  const ConstantRecord* find(ConstantKind kind, std::int64_t q, std::int64_t a) const;
  std::vector<std::int64_t> moduli(ConstantKind kind) const;

 private:
  std::map<std::pair<ConstantKind, std::int64_t>, std::map<std::int64_t, MpReal>> values_;
  std::map<std::pair<ConstantKind, std::int64_t>, std::map<std::int64_t, ConstantRecord>> records_;
};

/// sum_{(a,q)=1} M(q,a) = gamma + B - sum_{p | q} 1/p.
IdentityReport check_sum_over_a(std::int64_t q, const std::vector<ConstantRecord>& m_records, const MpReal& gamma,
                                const MpReal& B, const PrecisionContext& ctx);

/// M(q1,a) = sum_j M(q2, a + j q1) + sum_{p | q2, p = a mod q1} 1/p, one report
/// per admissible a mod q1. For q1 = 2 the single class is synthesized as
/// M(2,1) = gamma + B - 1/2.
std::vector<IdentityReport> check_sum_over_classes(std::int64_t q1, std::int64_t q2, const RecordSet& records,
                                                   const PrecisionContext& ctx);

/// The B analogues: sum over a with B - sum_{p | q} (log(1-1/p) + 1/p), and the
/// class refinement with log(1-1/p) + 1/p as the prime correction.
IdentityReport check_b_sum_over_a(std::int64_t q, const std::vector<ConstantRecord>& b_records, const MpReal& B,
                                  const PrecisionContext& ctx);
std::vector<IdentityReport> check_b_sum_over_classes(std::int64_t q1, std::int64_t q2, const RecordSet& records,
                                                     const PrecisionContext& ctx);

/// |M(q,a) - B(q,a) + log C(q,a)|.
IdentityReport check_three_constants(const ConstantRecord& m, const ConstantRecord& b, const ConstantRecord& c,
                                     const PrecisionContext& ctx);

/// Every applicable check over a record set.
std::vector<IdentityReport> verify_all(const RecordSet& records, const PrecisionContext& ctx);

struct IdentityCounts {
  std::int64_t total = 0;
  std::int64_t independent = 0;
};

/// total = sum_{q=3}^{Q} (q - 1 - phi(q)); independent = sum_{n=2}^{Q} pi(Q/n) phi(n).
IdentityCounts enumerate_identities(std::int64_t Q);
/// The total by listing every (q1, q2, a) with 1 < q1 < q2 <= Q, q1 | q2, (a, q1) = 1.
std::int64_t count_class_identities(std::int64_t Q);
/// The independent count with the n = 1 term included.
std::int64_t independent_identities_from_one(std::int64_t Q);

/// Calls f(p) for every prime p <= limit, in increasing order, using a
/// segmented sieve.
template <class F>
void for_each_prime(std::uint64_t limit, F&& f);

/// sum_{p <= x, p = a mod q} 1/p - log log x / phi(q).
double oracle_prime_sum(std::int64_t q, std::int64_t a, std::uint64_t x);
/// prod_{p <= x, p = a mod q} (1 - 1/p) * (log x)^(1/phi(q)).
double oracle_euler_product(std::int64_t q, std::int64_t a, std::uint64_t x);

struct OracleCheckpoint {
  std::uint64_t x = 0;
  std::map<std::int64_t, double> prime_sum;      // by residue a
  std::map<std::int64_t, double> euler_product;  // by residue a
};
/// Both oracles for every residue of q at several limits, from one sieve pass.
std::vector<OracleCheckpoint> oracle_checkpoints(std::int64_t q, std::vector<std::uint64_t> limits);

}  // namespace mertens

#include "mertens/detail/sieve.hpp"
