#include "mertens/result_file.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace mertens {

namespace {

using nlohmann::ordered_json;

constexpr int kBoundDigits = 6;
constexpr int kResidualDigits = 3;
constexpr mpfr_prec_t kBoundBits = 128;

MpReal parse_decimal(const std::string& s, mpfr_prec_t bits, mpfr_rnd_t rnd, const char* field) {
  try {
    return MpReal(s, bits, rnd);
  } catch (const std::exception&) {
    throw FormatError(std::string("malformed decimal in field '") + field + "': " + s);
  }
}

template <class T>
T get_field(const ordered_json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad field '") + key + "': " + e.what());
  }
}

ordered_json render_record(const ConstantRecord& r, int digits) {
  ordered_json j;
  j["q"] = r.q;
  j["a"] = r.a;
  j["kind"] = to_string(r.kind);
  j["value"] = r.value.to_fixed(digits);
  j["error_bound"] = r.error_bound.to_scientific_up(kBoundDigits);
  j["certified_digits"] = r.certified_digits;
  if (r.log_value) j["log_value"] = r.log_value->to_fixed(digits);
  ordered_json p;
  const std::int64_t cutoff = r.params.prime_cutoff;
  if (r.q > 0 && cutoff % r.q == 0) {
    p["A"] = cutoff / r.q;
  } else {
    p["A"] = static_cast<double>(cutoff) / static_cast<double>(r.q);
  }
  p["cutoff"] = cutoff;
  p["K"] = r.params.K;
  p["N"] = r.params.N;
  p["T"] = r.params.T;
  p["m_max"] = r.params.m_max;
  j["params"] = p;
  return j;
}

ConstantRecord parse_record(const ordered_json& j, mpfr_prec_t bits) {
  ConstantRecord r;
  r.q = get_field<std::int64_t>(j, "q");
  r.a = get_field<std::int64_t>(j, "a");
  try {
    r.kind = parse_kind(get_field<std::string>(j, "kind"));
  } catch (const InvalidArgument& e) {
    throw FormatError(e.what());
  }
  if (r.q < 3 || r.a < 1 || r.a >= r.q) throw FormatError("record with invalid (q, a)");
  r.value = parse_decimal(get_field<std::string>(j, "value"), bits, MPFR_RNDA, "value");
  r.error_bound = parse_decimal(get_field<std::string>(j, "error_bound"), kBoundBits, MPFR_RNDD, "error_bound");
  r.certified_digits = get_field<int>(j, "certified_digits");
  if (j.contains("log_value")) {
    r.log_value = parse_decimal(get_field<std::string>(j, "log_value"), bits, MPFR_RNDA, "log_value");
  }
  const auto& p = j.contains("params") ? j.at("params") : throw FormatError("missing field 'params'");
  if (p.contains("cutoff")) {
    r.params.prime_cutoff = get_field<std::int64_t>(p, "cutoff");
  } else {
    r.params.prime_cutoff = static_cast<std::int64_t>(get_field<double>(p, "A") * static_cast<double>(r.q) + 0.5);
  }
  r.params.K = get_field<int>(p, "K");
  r.params.N = get_field<std::int64_t>(p, "N");
  r.params.T = get_field<int>(p, "T");
  r.params.m_max = get_field<int>(p, "m_max");
  return r;
}

ordered_json render_identity(const IdentityReport& r) {
  ordered_json j;
  j["identity"] = to_string(r.kind);
  j["constant"] = to_string(r.constant);
  j["q1"] = r.q1;
  j["q2"] = r.q2;
  j["a"] = r.a;
  j["residual"] = r.residual.is_zero() ? std::string("0") : r.residual.to_scientific_up(kResidualDigits);
  j["threshold"] = r.threshold.to_scientific(kResidualDigits);
  j["passed"] = r.passed;
  return j;
}

IdentityReport parse_identity(const ordered_json& j) {
  IdentityReport r;
  try {
    r.kind = parse_identity_kind(get_field<std::string>(j, "identity"));
    r.constant = parse_kind(get_field<std::string>(j, "constant"));
  } catch (const InvalidArgument& e) {
    throw FormatError(e.what());
  }
  r.q1 = get_field<std::int64_t>(j, "q1");
  r.q2 = get_field<std::int64_t>(j, "q2");
  r.a = get_field<std::int64_t>(j, "a");
  r.residual = parse_decimal(get_field<std::string>(j, "residual"), kBoundBits, MPFR_RNDD, "residual");
  r.threshold = parse_decimal(get_field<std::string>(j, "threshold"), 64, MPFR_RNDN, "threshold");
  r.passed = get_field<bool>(j, "passed");
  return r;
}

}  // namespace

bool ResultFile::has(std::int64_t q, ConstantKind kind) const {
  return std::any_of(records.begin(), records.end(), [&](const ConstantRecord& r) { return r.q == q && r.kind == kind; });
}

void ResultFile::normalize() {
  std::stable_sort(records.begin(), records.end(), [](const ConstantRecord& x, const ConstantRecord& y) {
    return std::make_tuple(x.q, static_cast<int>(x.kind), x.a) < std::make_tuple(y.q, static_cast<int>(y.kind), y.a);
  });
  std::stable_sort(identities.begin(), identities.end(), [](const IdentityReport& x, const IdentityReport& y) {
    return std::make_tuple(static_cast<int>(x.kind), static_cast<int>(x.constant), x.q1, x.q2, x.a) <
           std::make_tuple(static_cast<int>(y.kind), static_cast<int>(y.constant), y.q1, y.q2, y.a);
  });
  std::stable_sort(timing.begin(), timing.end(), [](const TimingEntry& x, const TimingEntry& y) {
    return std::make_tuple(x.q, static_cast<int>(x.kind)) < std::make_tuple(y.q, static_cast<int>(y.kind));
  });
}

std::string render(const ResultFile& file, bool include_timing) {
  ordered_json j;
  j["format"] = "mertens-constants";
  j["version"] = file.version;
  j["context"] = {{"target_digits", file.target_digits}, {"guard_digits", file.guard_digits}};
  const int digits = file.target_digits + file.guard_digits;
  ordered_json recs = ordered_json::array();
  for (const auto& r : file.records) recs.push_back(render_record(r, digits));
  j["records"] = recs;
  ordered_json ids = ordered_json::array();
  for (const auto& r : file.identities) ids.push_back(render_identity(r));
  j["identities"] = ids;
  if (include_timing) {
    ordered_json t = ordered_json::array();
    for (const auto& e : file.timing) t.push_back({{"q", e.q}, {"kind", to_string(e.kind)}, {"seconds", e.seconds}});
    j["timing"] = t;
  }
  return j.dump(1) + "\n";
}

ResultFile parse_result_file(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("not a result file: ") + e.what());
  }
  if (!j.is_object() || j.value("format", std::string()) != "mertens-constants") {
    throw FormatError("not a result file: missing format tag");
  }
  ResultFile f;
  f.version = get_field<int>(j, "version");
  if (f.version != ResultFile::kVersion) throw FormatError("unsupported result file version " + std::to_string(f.version));
  const auto& ctx = j.contains("context") ? j.at("context") : throw FormatError("missing field 'context'");
  f.target_digits = get_field<int>(ctx, "target_digits");
  f.guard_digits = get_field<int>(ctx, "guard_digits");
  if (f.target_digits < 1 || f.guard_digits < 1) throw FormatError("invalid precision context");
  const mpfr_prec_t bits = f.context().bits();
  for (const auto& r : j.value("records", ordered_json::array())) f.records.push_back(parse_record(r, bits));
  for (const auto& r : j.value("identities", ordered_json::array())) f.identities.push_back(parse_identity(r));
  for (const auto& e : j.value("timing", ordered_json::array())) {
    TimingEntry t;
    t.q = get_field<std::int64_t>(e, "q");
    try {
      t.kind = parse_kind(get_field<std::string>(e, "kind"));
    } catch (const InvalidArgument& ex) {
      throw FormatError(ex.what());
    }
    t.seconds = get_field<double>(e, "seconds");
    f.timing.push_back(t);
  }
  return f;
}

ResultFile load_result_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_result_file(ss.str());
}

void save_result_file(const std::string& path, const ResultFile& file) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << render(file);
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move result into place at " + path + ": " + ec.message());
  }
}

}  // namespace mertens
