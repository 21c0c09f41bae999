#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "xiform/classify.hpp"
#include "xiform/error.hpp"
#include "xiform/forms.hpp"
#include "xiform/obstruction.hpp"
#include "xiform/oracle.hpp"
#include "xiform/version.hpp"

namespace xiform {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// JSON encoding of domain values. Integers that fit int64 are emitted as JSON
// numbers, anything larger as a decimal string; both forms parse back.

inline json int_to_json(const Int& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() &&
      x <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(x);
  return x.str();
}

inline Int int_from_json(const json& j) {
  if (j.is_number_integer()) return Int(j.get<std::int64_t>());
  if (j.is_string()) return Int(j.get<std::string>());
  throw Error(errc::parse_error, "expected an integer (number or decimal string)");
}

inline json matrix_to_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(int_to_json(m(i, j)));
    rows.push_back(row);
  }
  json out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  out["entries"] = rows;
  return out;
}

inline IntMatrix matrix_from_json(const json& j) {
  std::size_t rows = j.at("rows").get<std::size_t>();
  std::size_t cols = j.at("cols").get<std::size_t>();
  IntMatrix m(rows, cols);
  const json& entries = j.at("entries");
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = int_from_json(entries.at(i).at(c));
  return m;
}

inline json vec_to_json(const IntVec& v) {
  json out = json::array();
  for (const Int& x : v) out.push_back(int_to_json(x));
  return out;
}

inline json bits_to_json(const std::vector<std::uint8_t>& bits) {
  json out = json::array();
  for (auto b : bits) out.push_back(static_cast<int>(b));
  return out;
}

inline json certificate_to_json(const RefutationCertificate& cert) {
  json out;
  out["kind"] = certificate_kind_name(cert.kind);
  out["dual_vector"] = bits_to_json(cert.dual_vector);
  json subs = json::array();
  const std::size_t n = cert.dual_vector.size();
  for (const auto& entry : cert.subspaces) {
    json e;
    json basis = json::array();
    for (std::uint32_t b : entry.basis) basis.push_back(bits_to_json(f2::unpack(b, n)));
    e["basis"] = basis;
    e["witness_class"] = bits_to_json(f2::unpack(entry.witness_class, n));
    e["norm_mod4"] = entry.norm_mod4;
    subs.push_back(e);
  }
  out["subspaces"] = subs;
  return out;
}

inline json witness_to_json(const LagrangianWitness& w) {
  json out;
  out["columns"] = json::array();
  for (std::size_t j = 0; j < w.span.matrix.cols(); ++j)
    out["columns"].push_back(vec_to_json(w.span.matrix.col(j)));
  out["rank"] = w.span.matrix.rows();
  return out;
}

// ---------------------------------------------------------------------------
// Input schema: {"gram": [[..]], "g": [0|1..]?, "f": [int..]?,
//                "sigma": int?, "Lambda": int?}

struct FormFile {
  GramForm form;
  std::optional<ModTwoFunctional> g;
  std::optional<IntegralFunctional> f;
  std::optional<Int> sigma;
  std::optional<Int> lambda;
};

inline FormFile parse_form_file(const json& j) {
  if (!j.is_object()) throw Error(errc::parse_error, "top level must be a JSON object");
  if (!j.contains("gram")) throw Error(errc::missing_field, "missing required field 'gram'");
  const json& gram = j.at("gram");
  if (!gram.is_array() || gram.empty())
    throw Error(errc::parse_error, "'gram' must be a non-empty array of rows");
  const std::size_t n = gram.size();
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = gram.at(i);
    if (!row.is_array() || row.size() != n)
      throw Error(errc::parse_error, "'gram' row " + std::to_string(i) +
                                         " must be an array of length " + std::to_string(n));
    for (std::size_t c = 0; c < n; ++c) {
      const json& cell = row.at(c);
      if (!cell.is_number_integer())
        throw Error(errc::parse_error, "'gram' entry (" + std::to_string(i) + "," +
                                           std::to_string(c) +
                                           ") must be an integer; floats are not accepted");
      m(i, c) = Int(cell.get<std::int64_t>());
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = i + 1; c < n; ++c)
      if (m(i, c) != m(c, i))
        throw Error(errc::not_symmetric, "gram matrix is not symmetric at (" +
                                             std::to_string(i) + "," + std::to_string(c) + ")");
  FormFile out{GramForm(m), std::nullopt, std::nullopt, std::nullopt, std::nullopt};

  if (j.contains("g")) {
    const json& g = j.at("g");
    if (!g.is_array() || g.size() != n)
      throw Error(errc::parse_error, "'g' must be an array of length " + std::to_string(n));
    ModTwoFunctional mg;
    for (const json& b : g) {
      if (!b.is_number_integer() || (b.get<int>() != 0 && b.get<int>() != 1))
        throw Error(errc::parse_error, "'g' entries must be 0 or 1");
      mg.bits.push_back(static_cast<std::uint8_t>(b.get<int>()));
    }
    out.g = mg;
  }
  if (j.contains("f")) {
    const json& f = j.at("f");
    if (!f.is_array() || f.size() != n)
      throw Error(errc::parse_error, "'f' must be an array of length " + std::to_string(n));
    IntegralFunctional fi;
    for (const json& c : f) {
      if (!c.is_number_integer())
        throw Error(errc::parse_error, "'f' entries must be integers");
      fi.coeffs.push_back(Int(c.get<std::int64_t>()));
    }
    out.f = fi;
  }
  if (j.contains("sigma")) {
    if (!j.at("sigma").is_number_integer())
      throw Error(errc::parse_error, "'sigma' must be an integer");
    out.sigma = Int(j.at("sigma").get<std::int64_t>());
  }
  if (j.contains("Lambda")) {
    if (!j.at("Lambda").is_number_integer())
      throw Error(errc::parse_error, "'Lambda' must be an integer");
    out.lambda = Int(j.at("Lambda").get<std::int64_t>());
  }
  return out;
}

inline FormFile load_form_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::parse_error, "cannot open input file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(errc::parse_error, std::string("invalid JSON: ") + e.what());
  }
  return parse_form_file(j);
}

// ---------------------------------------------------------------------------

inline std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

inline std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "unreadable";
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a_digest(ss.str());
}

/// The machine-readable output contract of every CLI subcommand. Round-trips
/// losslessly through its JSON serialization.
struct ReportDocument {
  std::string command;
  std::string input_digest;
  std::string tool_name = kToolName;
  std::string tool_version = kToolVersion;
  std::int64_t timing_ms = 0;
  json result;

  friend bool operator==(const ReportDocument& a, const ReportDocument& b) {
    return a.command == b.command && a.input_digest == b.input_digest &&
           a.tool_name == b.tool_name && a.tool_version == b.tool_version &&
           a.timing_ms == b.timing_ms && a.result == b.result;
  }
};

inline json report_to_json(const ReportDocument& r) {
  json out;
  out["tool"] = {{"name", r.tool_name}, {"version", r.tool_version}};
  out["command"] = r.command;
  out["input_digest"] = r.input_digest;
  out["timing_ms"] = r.timing_ms;
  out["result"] = r.result;
  return out;
}

inline ReportDocument report_from_json(const json& j) {
  ReportDocument r;
  r.tool_name = j.at("tool").at("name").get<std::string>();
  r.tool_version = j.at("tool").at("version").get<std::string>();
  r.command = j.at("command").get<std::string>();
  r.input_digest = j.at("input_digest").get<std::string>();
  r.timing_ms = j.at("timing_ms").get<std::int64_t>();
  r.result = j.at("result");
  return r;
}

} // namespace xiform
