#include "dtnlab/verify.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dtn {

using nlohmann::json;

namespace {

std::string label(const VerificationReport& r) { return r.name.empty() ? r.check : r.name; }

void write_text(const std::filesystem::path& file, const std::string& text) {
  std::ofstream os(file, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("emit_report: cannot write " + file.string());
  os << text;
  if (!os) throw std::runtime_error("emit_report: write failed for " + file.string());
}

}  // namespace

json summarize(std::vector<VerificationReport> reports) {
  std::stable_sort(reports.begin(), reports.end(),
                   [](const VerificationReport& a, const VerificationReport& b) { return label(a) < label(b); });
  json checks = json::array();
  int passed = 0;
  for (const auto& r : reports) {
    checks.push_back(r.to_json());
    passed += r.pass ? 1 : 0;
  }
  json out;
  out["checks"] = checks;
  out["passed"] = passed;
  out["failed"] = static_cast<int>(reports.size()) - passed;
  return out;
}

void write_table_csv(const std::filesystem::path& file, const PlotTable& table) {
  std::ofstream os(file, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("write_table_csv: cannot write " + file.string());
  for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
  os << "\n";
  char buf[40];
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", row[c]);
      os << (c ? "," : "") << buf;
    }
    os << "\n";
  }
}

std::vector<std::filesystem::path> emit_report(const std::vector<VerificationReport>& reports,
                                               const std::filesystem::path& dir) {
  if (reports.empty()) throw std::invalid_argument("emit_report: no reports");
  std::error_code ec;
  std::filesystem::create_directories(dir / "reports", ec);
  std::filesystem::create_directories(dir / "plots", ec);
  if (ec) throw std::runtime_error("emit_report: cannot create " + dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  const std::filesystem::path summary = dir / "summary.json";
  write_text(summary, summarize(reports).dump(2) + "\n");
  written.push_back(summary);
  std::vector<const VerificationReport*> sorted;
  for (const auto& r : reports) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return label(*a) < label(*b); });
  for (const VerificationReport* r : sorted) {
    const std::filesystem::path file = dir / "reports" / (label(*r) + ".json");
    write_text(file, r->to_json().dump(2) + "\n");
    written.push_back(file);
    for (const PlotTable& t : r->tables) {
      const std::filesystem::path csv = dir / "plots" / (label(*r) + "." + t.name + ".csv");
      write_table_csv(csv, t);
      written.push_back(csv);
    }
  }
  return written;
}

}  // namespace dtn
