#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mertens/constants.hpp"
#include "mertens/verify.hpp"

namespace mertens {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TimingEntry {
  std::int64_t q = 0;
  ConstantKind kind = ConstantKind::M;
  double seconds = 0.0;
};

/// A persisted set of computed constants. Values are stored as decimal
/// strings truncated to target + guard digits; error bounds and residuals
/// are rounded upward. Parsing reads values rounding away from zero and
/// bounds rounding down, so render(parse(render(f))) == render(f).
struct ResultFile {
  static constexpr int kVersion = 1;

  int version = kVersion;
  int target_digits = 100;
  int guard_digits = 20;
  std::vector<ConstantRecord> records;
  std::vector<IdentityReport> identities;
  std::vector<TimingEntry> timing;

  PrecisionContext context() const { return PrecisionContext::for_digits(target_digits, guard_digits); }
  bool has(std::int64_t q, ConstantKind kind) const;
  /// Sorts records by (q, kind, a) and identities by kind and operands.
  void normalize();
};

/// JSON text; deterministic for a normalized file.
std::string render(const ResultFile& file, bool include_timing = true);
ResultFile parse_result_file(const std::string& text);

ResultFile load_result_file(const std::string& path);
/// Writes to a temporary file next to `path`, then renames it into place.
void save_result_file(const std::string& path, const ResultFile& file);

}  // namespace mertens
