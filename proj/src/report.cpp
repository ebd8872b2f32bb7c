#include "oil/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace oil {

namespace {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // keep floats recognisable as floats when they happen to be integral
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

void emit(const json& v, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent), ' ');
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + json(it.key()).dump() + ": ";
        emit(it.value(), indent + 2, out);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        emit(item, indent + 2, out);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case json::value_t::number_float:
      out += format_double(v.get<double>());
      return;
    default:
      out += v.dump();
      return;
  }
}

}  // namespace

json to_json(const Report& report) {
  return json{{"command", report.command},   {"params", report.params},
              {"seed", report.seed},         {"results", report.results},
              {"residuals", report.residuals}, {"pass", report.pass},
              {"tool_version", kToolVersion}};
}

std::string format_json(const json& value) {
  std::string out;
  emit(value, 0, out);
  out += "\n";
  return out;
}

std::string spectrum_csv(const SingularSpectrum& s) {
  std::string out = "k,sigma\n";
  char buf[64];
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", k, s.values[k]);
    out += buf;
  }
  return out;
}

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ReportIoError("cannot open " + path.string() + " for writing");
  f << text;
  f.flush();
  if (!f) throw ReportIoError("write failed for " + path.string());
}

void write_report(const Report& report, const std::filesystem::path& path) {
  write_text(format_json(to_json(report)), path);
}

json to_json(const SummabilityVerdict& v) {
  return json{{"verdict", to_string(v.verdict)},
              {"ideal", v.ideal},
              {"exponent", v.exponent},
              {"measured_exponent", v.measured_exponent},
              {"indices", v.indices},
              {"sums", v.sums}};
}

Symbol parse_symbol_json(const json& doc) {
  if (!doc.is_array()) throw UsageError("symbol file must hold a JSON array of [degree, re, im]");
  std::vector<std::pair<int, cplx>> pairs;
  std::set<int> seen;
  for (const auto& entry : doc) {
    if (!entry.is_array() || entry.size() != 3 || !entry[0].is_number_integer() ||
        !entry[1].is_number() || !entry[2].is_number()) {
      throw UsageError("malformed symbol entry " + entry.dump() + " (expected [degree, re, im])");
    }
    const int degree = entry[0].get<int>();
    if (!seen.insert(degree).second) {
      throw UsageError("duplicate symbol degree " + std::to_string(degree));
    }
    pairs.emplace_back(degree, cplx(entry[1].get<double>(), entry[2].get<double>()));
  }
  return Symbol::from_pairs(pairs);
}

Symbol load_symbol_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read symbol file " + path.string());
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::parse_error& e) {
    throw UsageError("malformed JSON in " + path.string() + ": " + e.what());
  }
  return parse_symbol_json(doc);
}

json symbol_to_json(const Symbol& a) {
  json out = json::array();
  for (const auto& [degree, c] : a.coefficients()) {
    out.push_back(json::array({degree, c.real(), c.imag()}));
  }
  return out;
}

}  // namespace oil
