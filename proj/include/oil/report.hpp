// Report persistence: JSON reports with 17-significant-digit numbers, CSV
// spectra, and the JSON symbol file format [[degree, re, im], ...].
#pragma once

#include "oil/hardy.hpp"
#include "oil/spectral.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace oil {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "oil 0.1.0";

/// Bad flags, bad parameters or unreadable inputs (exit status 2).
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Failure to write a report (exit status 1).
class ReportIoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Report {
  std::string command;
  json params = json::object();
  std::uint64_t seed = 0;
  json results = json::object();
  json residuals = json::object();
  bool pass = true;
};

enum class ReportFormat { json, csv };

json to_json(const Report& report);

/// Pretty-printed JSON; floating-point values use %.17g and non-finite values
/// become null. Object keys are emitted in sorted order.
std::string format_json(const json& value);

/// "k,sigma" header then one row per singular value at 17 significant digits.
std::string spectrum_csv(const SingularSpectrum& s);

/// Writes format_json(to_json(report)) to path. Throws ReportIoError.
void write_report(const Report& report, const std::filesystem::path& path);
void write_text(const std::string& text, const std::filesystem::path& path);

json to_json(const SummabilityVerdict& v);

/// Parses [[degree, re, im], ...]; throws UsageError on malformed input or
/// duplicate degrees.
Symbol parse_symbol_json(const json& doc);
Symbol load_symbol_file(const std::filesystem::path& path);
json symbol_to_json(const Symbol& a);

}  // namespace oil
