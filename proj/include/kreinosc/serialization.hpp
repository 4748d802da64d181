#pragma once
// Stable on-disk formats for CLI artifacts: state vectors and check reports
// as versioned JSON, scan tables as CSV with a commented preamble.
//
// Determinism contract: identical inputs produce byte-identical files. JSON
// objects are emitted in insertion order, doubles print via the shortest
// round-trip representation (JSON) or "%.17g" (CSV), and nothing time- or
// host-dependent is ever written.

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kreinosc/checks.hpp"
#include "kreinosc/fock_basis.hpp"

namespace kreinosc {

using ojson = nlohmann::ordered_json;

inline constexpr const char* kToolkitVersion = "0.1.0";
inline constexpr const char* kStateSchema = "kreinosc-state/1";
inline constexpr const char* kReportSchema = "kreinosc-report/1";
inline constexpr const char* kScanSchema = "kreinosc-scan/1";

inline std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// State vectors. Only nonzero coefficients are stored, in basis order, each
// as [n0, n1, n2, n3, re, im].

inline ojson krein_vector_to_json(const KreinVector& v) {
  ojson j;
  j["schema"] = kStateSchema;
  j["n_max"] = v.basis()->n_max();
  ojson coeffs = ojson::array();
  for (std::int64_t i = 0; i < v.basis()->size(); ++i) {
    const cplx c = v.coeffs()(i);
    if (c == cplx(0.0, 0.0)) continue;
    const FockIndex& idx = v.basis()->index(i);
    coeffs.push_back({idx.n[0], idx.n[1], idx.n[2], idx.n[3], c.real(), c.imag()});
  }
  j["coefficients"] = std::move(coeffs);
  return j;
}

inline KreinVector krein_vector_from_json(const ojson& j) {
  if (!j.is_object() || j.value("schema", "") != kStateSchema)
    throw std::invalid_argument("krein_vector_from_json: not a kreinosc-state/1 document");
  KreinVector v(make_basis(j.at("n_max").get<int>()));
  for (const auto& row : j.at("coefficients")) {
    if (!row.is_array() || row.size() != 6)
      throw std::invalid_argument("krein_vector_from_json: coefficient rows are 6-tuples");
    const FockIndex idx(row[0].get<int>(), row[1].get<int>(), row[2].get<int>(),
                        row[3].get<int>());
    v[idx] = cplx(row[4].get<double>(), row[5].get<double>());
  }
  return v;
}

// ---------------------------------------------------------------------------
// Check reports.

inline ojson checks_to_json(const std::vector<IdentityCheck>& checks, double tol) {
  ojson arr = ojson::array();
  for (const auto& c : checks) {
    ojson item;
    item["identity"] = c.identity;
    item["guard"] = c.guard;
    item["max_residual"] = c.max_residual;
    item["pass"] = c.max_residual <= tol;
    arr.push_back(std::move(item));
  }
  return arr;
}

inline bool all_pass(const std::vector<IdentityCheck>& checks, double tol) {
  for (const auto& c : checks)
    if (!(c.max_residual <= tol)) return false;
  return true;
}

// Envelope shared by every report: schema, version, command, config echo.
inline ojson report_envelope(const std::string& command, const ojson& config,
                             std::uint64_t seed) {
  ojson j;
  j["schema"] = kReportSchema;
  j["toolkit_version"] = kToolkitVersion;
  j["command"] = command;
  j["seed"] = seed;
  j["config"] = config;
  return j;
}

// ---------------------------------------------------------------------------
// CSV scan tables: "# key=value" preamble echoing the config, then a header
// row and data rows. Cells are preformatted strings.

struct CsvTable {
  std::vector<std::pair<std::string, std::string>> preamble;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline void write_csv(std::ostream& os, const CsvTable& table) {
  os << "# " << kScanSchema << "\n";
  os << "# toolkit_version=" << kToolkitVersion << "\n";
  for (const auto& [k, v] : table.preamble) os << "# " << k << "=" << v << "\n";
  for (std::size_t i = 0; i < table.header.size(); ++i)
    os << table.header[i] << (i + 1 < table.header.size() ? "," : "");
  os << "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw std::invalid_argument("write_csv: row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i)
      os << row[i] << (i + 1 < row.size() ? "," : "");
    os << "\n";
  }
}

}  // namespace kreinosc
