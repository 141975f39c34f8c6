#include "mertens/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mertens/arith.hpp"

namespace mertens {

namespace {

// Correction contributed by a prime dividing the modulus.
MpReal prime_correction(ConstantKind kind, std::int64_t p, mpfr_prec_t bits) {
  MpReal inv(1L, bits);
  inv /= static_cast<long>(p);
  if (kind == ConstantKind::M) return inv;
  return log1p(-inv) + inv;
}

std::vector<std::int64_t> admissible(std::int64_t q) {
  std::vector<std::int64_t> out;
  for (std::int64_t a = 1; a < q; ++a) {
    if (gcd(a, q) == 1) out.push_back(a);
  }
  return out;
}

IdentityReport make_report(IdentityKind kind, ConstantKind constant, std::int64_t q1, std::int64_t q2,
                           std::int64_t a, const MpReal& lhs, const MpReal& rhs, const PrecisionContext& ctx) {
  IdentityReport r;
  r.kind = kind;
  r.constant = constant;
  r.q1 = q1;
  r.q2 = q2;
  r.a = a;
  r.residual = abs(lhs - rhs);
  r.threshold = residual_threshold(ctx);
  r.passed = r.residual < r.threshold;
  return r;
}

// Right-hand side of the sum-over-a identity: the full-modulus constant minus
// the primes dividing q.
MpReal sum_over_a_target(ConstantKind kind, std::int64_t q, const MpReal& gamma, const MpReal& B,
                         mpfr_prec_t bits) {
  MpReal target(bits);
  target.set(B);
  if (kind == ConstantKind::M) target += gamma;
  for (std::int64_t p : prime_divisors(q)) target -= prime_correction(kind, p, bits);
  return target;
}

IdentityReport sum_over_a(ConstantKind kind, std::int64_t q, const std::vector<ConstantRecord>& records,
                          const MpReal& gamma, const MpReal& B, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  std::map<std::int64_t, const MpReal*> by_a;
  for (const auto& r : records) {
    if (r.q != q || r.kind != kind) throw InvalidArgument("sum-over-a: record for a different (q, kind)");
    by_a[r.a] = &r.value;
  }
  MpReal lhs(bits);
  for (std::int64_t a : admissible(q)) {
    auto it = by_a.find(a);
    if (it == by_a.end()) {
      throw InvalidArgument("sum-over-a: missing " + to_string(kind) + "(" + std::to_string(q) + ", " +
                            std::to_string(a) + ")");
    }
    lhs += *it->second;
  }
  return make_report(IdentityKind::SumOverA, kind, q, 0, 0, lhs, sum_over_a_target(kind, q, gamma, B, bits), ctx);
}

std::vector<IdentityReport> sum_over_classes(ConstantKind kind, std::int64_t q1, std::int64_t q2,
                                             const RecordSet& records, const PrecisionContext& ctx) {
  if (q1 <= 1 || q2 <= q1 || q2 % q1 != 0) {
    throw InvalidArgument("sum-over-classes: need 1 < q1 < q2 with q1 | q2, got (" + std::to_string(q1) + ", " +
                          std::to_string(q2) + ")");
  }
  const mpfr_prec_t bits = ctx.bits();
  std::map<std::int64_t, MpReal> synthesized;
  const std::map<std::int64_t, MpReal>* coarse = nullptr;
  if (q1 == 2) {
    // one class mod 2: the whole constant minus the prime 2
    synthesized.emplace(1, sum_over_a_target(kind, 2, compute_gamma(ctx), compute_meissel_mertens(ctx), bits));
    coarse = &synthesized;
  } else {
    coarse = records.complete(kind, q1);
  }
  const auto* fine = records.complete(kind, q2);
  if (!coarse || !fine) throw InvalidArgument("sum-over-classes: incomplete records for one of the moduli");

  const auto divs = prime_divisors(q2);
  std::vector<IdentityReport> out;
  for (const auto& [a, lhs] : *coarse) {
    MpReal rhs(bits);
    for (std::int64_t r = a; r < q2; r += q1) {
      if (gcd(r, q2) != 1) continue;
      rhs += fine->at(r);
    }
    for (std::int64_t p : divs) {
      if (p % q1 == a) rhs += prime_correction(kind, p, bits);
    }
    out.push_back(make_report(IdentityKind::SumOverClasses, kind, q1, q2, a, lhs, rhs, ctx));
  }
  return out;
}

std::vector<ConstantRecord> as_records(ConstantKind kind, std::int64_t q, const std::map<std::int64_t, MpReal>& v) {
  std::vector<ConstantRecord> out;
  for (const auto& [a, value] : v) {
    ConstantRecord r;
    r.q = q;
    r.a = a;
    r.kind = kind;
    r.value = value;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::string to_string(IdentityKind kind) {
  switch (kind) {
    case IdentityKind::SumOverA:
      return "sum-over-a";
    case IdentityKind::SumOverClasses:
      return "sum-over-classes";
    case IdentityKind::ThreeConstants:
      return "three-constants";
  }
  return "?";
}

IdentityKind parse_identity_kind(const std::string& name) {
  if (name == "sum-over-a") return IdentityKind::SumOverA;
  if (name == "sum-over-classes") return IdentityKind::SumOverClasses;
  if (name == "three-constants") return IdentityKind::ThreeConstants;
  throw InvalidArgument("unknown identity kind '" + name + "'");
}

std::string IdentityReport::describe() const {
  std::ostringstream os;
  os << to_string(kind) << ' ';
  if (kind != IdentityKind::ThreeConstants) os << to_string(constant) << ' ';
  os << "q=" << q1;
  if (q2 != 0) os << " q2=" << q2;
  if (a != 0) os << " a=" << a;
  os << " residual=" << residual.to_scientific_up(3) << (passed ? " < " : " >= ") << threshold.to_scientific(3)
     << (passed ? " ok" : " FAIL");
  return os.str();
}

MpReal residual_threshold(const PrecisionContext& ctx) { return ten_pow_neg(ctx.target_digits - 5, 64); }

RecordSet::RecordSet(const std::vector<ConstantRecord>& records) {
  for (const auto& r : records) add(r);
}

void RecordSet::add(const ConstantRecord& record) {
  values_[{record.kind, record.q}].insert_or_assign(record.a, record.value);
  records_[{record.kind, record.q}].insert_or_assign(record.a, record);
}

const std::map<std::int64_t, MpReal>* RecordSet::complete(ConstantKind kind, std::int64_t q) const {
  auto it = values_.find({kind, q});
  if (it == values_.end()) return nullptr;
  for (std::int64_t a : admissible(q)) {
    if (!it->second.count(a)) return nullptr;
  }
  return &it->second;
}

const ConstantRecord* RecordSet::find(ConstantKind kind, std::int64_t q, std::int64_t a) const {
  auto it = records_.find({kind, q});
  if (it == records_.end()) return nullptr;
  auto jt = it->second.find(a);
  return jt == it->second.end() ? nullptr : &jt->second;
}

std::vector<std::int64_t> RecordSet::moduli(ConstantKind kind) const {
  std::vector<std::int64_t> out;
  for (const auto& [key, values] : values_) {
    if (key.first == kind) out.push_back(key.second);
  }
  return out;
}

IdentityReport check_sum_over_a(std::int64_t q, const std::vector<ConstantRecord>& m_records, const MpReal& gamma,
                                const MpReal& B, const PrecisionContext& ctx) {
  return sum_over_a(ConstantKind::M, q, m_records, gamma, B, ctx);
}

std::vector<IdentityReport> check_sum_over_classes(std::int64_t q1, std::int64_t q2, const RecordSet& records,
                                                   const PrecisionContext& ctx) {
  return sum_over_classes(ConstantKind::M, q1, q2, records, ctx);
}

IdentityReport check_b_sum_over_a(std::int64_t q, const std::vector<ConstantRecord>& b_records, const MpReal& B,
                                  const PrecisionContext& ctx) {
  return sum_over_a(ConstantKind::B, q, b_records, MpReal(ctx.bits()), B, ctx);
}

std::vector<IdentityReport> check_b_sum_over_classes(std::int64_t q1, std::int64_t q2, const RecordSet& records,
                                                     const PrecisionContext& ctx) {
  return sum_over_classes(ConstantKind::B, q1, q2, records, ctx);
}

IdentityReport check_three_constants(const ConstantRecord& m, const ConstantRecord& b, const ConstantRecord& c,
                                     const PrecisionContext& ctx) {
  if (m.kind != ConstantKind::M || b.kind != ConstantKind::B || c.kind != ConstantKind::C) {
    throw InvalidArgument("three-constants: expected one M, one B and one C record");
  }
  if (m.q != b.q || m.q != c.q || m.a != b.a || m.a != c.a) {
    throw InvalidArgument("three-constants: records for different (q, a)");
  }
  const mpfr_prec_t bits = ctx.bits();
  MpReal log_c(bits);
  if (c.log_value) {
    log_c.set(*c.log_value);
  } else {
    if (c.value.sign() <= 0) throw InvalidArgument("three-constants: C must be positive");
    log_c.set(log(c.value));
  }
  MpReal lhs(bits);
  lhs.set(m.value);
  return make_report(IdentityKind::ThreeConstants, ConstantKind::M, m.q, 0, m.a, lhs, b.value - log_c, ctx);
}

std::vector<IdentityReport> verify_all(const RecordSet& records, const PrecisionContext& ctx) {
  std::vector<IdentityReport> out;
  const MpReal gamma = compute_gamma(ctx);
  const MpReal B = compute_meissel_mertens(ctx);
  for (ConstantKind kind : {ConstantKind::M, ConstantKind::B}) {
    const auto mods = records.moduli(kind);
    for (std::int64_t q : mods) {
      const auto* values = records.complete(kind, q);
      if (!values) continue;
      out.push_back(sum_over_a(kind, q, as_records(kind, q, *values), gamma, B, ctx));
    }
    for (std::int64_t q2 : mods) {
      if (!records.complete(kind, q2)) continue;
      for (std::int64_t q1 : divisors(q2)) {
        if (q1 <= 1 || q1 >= q2) continue;
        if (q1 != 2 && !records.complete(kind, q1)) continue;
        auto reports = sum_over_classes(kind, q1, q2, records, ctx);
        out.insert(out.end(), reports.begin(), reports.end());
      }
    }
  }
  for (std::int64_t q : records.moduli(ConstantKind::M)) {
    for (std::int64_t a : admissible(q)) {
      const auto* m = records.find(ConstantKind::M, q, a);
      const auto* b = records.find(ConstantKind::B, q, a);
      const auto* c = records.find(ConstantKind::C, q, a);
      if (m && b && c) out.push_back(check_three_constants(*m, *b, *c, ctx));
    }
  }
  return out;
}

IdentityCounts enumerate_identities(std::int64_t Q) {
  if (Q < 3) throw InvalidArgument("enumerate_identities: Q must be >= 3");
  IdentityCounts c;
  for (std::int64_t q = 3; q <= Q; ++q) c.total += q - 1 - euler_phi(q);
  for (std::int64_t n = 2; n <= Q; ++n) c.independent += prime_count(Q / n) * euler_phi(n);
  return c;
}

std::int64_t count_class_identities(std::int64_t Q) {
  std::int64_t count = 0;
  for (std::int64_t q2 = 3; q2 <= Q; ++q2) {
    for (std::int64_t q1 = 2; q1 < q2; ++q1) {
      if (q2 % q1 != 0) continue;
      for (std::int64_t a = 1; a < q1; ++a) {
        if (gcd(a, q1) == 1) ++count;
      }
    }
  }
  return count;
}

std::int64_t independent_identities_from_one(std::int64_t Q) {
  if (Q < 3) throw InvalidArgument("enumerate_identities: Q must be >= 3");
  return enumerate_identities(Q).independent + prime_count(Q);
}

// ---------------------------------------------------------------------------
// sieve oracles

std::vector<OracleCheckpoint> oracle_checkpoints(std::int64_t q, std::vector<std::uint64_t> limits) {
  if (q < 2) throw InvalidArgument("oracle: q must be >= 2");
  if (limits.empty()) return {};
  std::sort(limits.begin(), limits.end());
  if (limits.front() < 3) throw InvalidArgument("oracle: x must be >= 3");

  const auto phi = static_cast<double>(euler_phi(q));
  const auto residues = admissible(q);
  std::vector<long double> inv_sum(static_cast<std::size_t>(q), 0.0L);
  std::vector<long double> log_sum(static_cast<std::size_t>(q), 0.0L);
  std::vector<OracleCheckpoint> out;
  std::size_t next = 0;

  auto snapshot = [&](std::uint64_t x) {
    OracleCheckpoint cp;
    cp.x = x;
    const long double ll = std::log(std::log(static_cast<long double>(x)));
    for (std::int64_t a : residues) {
      const auto i = static_cast<std::size_t>(a % q);
      cp.prime_sum[a] = static_cast<double>(inv_sum[i] - ll / phi);
      cp.euler_product[a] = static_cast<double>(std::exp(log_sum[i] + ll / phi));
    }
    out.push_back(std::move(cp));
  };

  for_each_prime(limits.back(), [&](std::uint64_t p) {
    while (next < limits.size() && limits[next] < p) snapshot(limits[next++]);
    const auto i = static_cast<std::size_t>(p % static_cast<std::uint64_t>(q));
    const long double inv = 1.0L / static_cast<long double>(p);
    inv_sum[i] += inv;
    log_sum[i] += std::log1p(-inv);
  });
  while (next < limits.size()) snapshot(limits[next++]);
  return out;
}

double oracle_prime_sum(std::int64_t q, std::int64_t a, std::uint64_t x) {
  if (q < 2 || gcd(a, q) != 1) throw InvalidArgument("oracle_prime_sum: need gcd(a, q) = 1");
  return oracle_checkpoints(q, {x}).front().prime_sum.at(a % q);
}

double oracle_euler_product(std::int64_t q, std::int64_t a, std::uint64_t x) {
  if (q < 2 || gcd(a, q) != 1) throw InvalidArgument("oracle_euler_product: need gcd(a, q) = 1");
  return oracle_checkpoints(q, {x}).front().euler_product.at(a % q);
}

}  // namespace mertens
