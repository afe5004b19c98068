#pragma once

#include "driftscope/analysis.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace driftscope {

inline constexpr const char* kToolVersion = "0.1.0";

// One row of curves.csv.
struct CurveRow
{
  std::string dataset;
  int split = 0;
  KernelKind kernel = KernelKind::Gaussian;
  double bandwidth = 0.0;
  double re_train_nu = 0.0;
  std::optional<double> re_test_nu;
  double re_train_u = 0.0;
  std::optional<double> re_test_u;

  bool operator==(const CurveRow&) const = default;
};

std::vector<CurveRow> curve_rows(const SweepResult& sweep);

// Header: dataset,split,kernel,bandwidth,re_train_nu,re_test_nu,re_train_u,re_test_u
// Test fields are empty for all-data splits. Values round-trip exactly.
void write_curves_csv(const SweepResult& sweep, std::ostream& out);
std::vector<CurveRow> read_curves_csv(std::istream& in);

struct RunManifest
{
  std::string tool_version = kToolVersion;
  std::string descriptor_digest; // SHA-256 of the canonical descriptor JSON
  std::string input_digest;      // SHA-256 of the input file bytes
  nlohmann::ordered_json config;
  std::string timestamp; // UTC, ISO 8601

  nlohmann::ordered_json to_json() const;
};

std::string sha256_hex(std::string_view bytes);
nlohmann::ordered_json to_json(const AnalysisConfig& config);

// UTC now, or SOURCE_DATE_EPOCH when set.
std::string utc_timestamp();

// verdicts.json: object keyed by "<split>:<kernel>", plus splits, agreement
// and error ranges. Contains no timestamp so reruns are byte-identical.
nlohmann::ordered_json verdicts_json(const SweepResult& sweep,
                                     const Summary& summary,
                                     const RunManifest& manifest);

// SVG 1.1 line chart of RE against bandwidth for one (split, kernel) slice:
// train, test, train global, test global. Throws ValidationError when the
// slice is absent.
std::string render_svg(const std::vector<CurveRow>& rows, int split, KernelKind kernel);

// Writes to a sibling temporary file, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

} // namespace driftscope
