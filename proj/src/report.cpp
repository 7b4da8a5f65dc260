#include "bvcalc/report.hpp"

#include <json.hpp>

#include <iomanip>
#include <sstream>

namespace bvcalc {

void Check::fail(std::string where, std::string residual) {
  passed = false;
  if (witnesses.size() < kMaxWitnesses) witnesses.push_back({std::move(where), std::move(residual)});
}

void Check::merge(const Check& other) {
  if (other.passed) return;
  passed = false;
  for (const auto& w : other.witnesses)
    if (witnesses.size() < kMaxWitnesses) witnesses.push_back(w);
}

bool Report::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

namespace {

nlohmann::ordered_json to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["subject"] = r.subject;
  j["passed"] = r.passed();
  nlohmann::ordered_json bounds = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.bounds) bounds[k] = v;
  j["bounds"] = bounds;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["passed"] = c.passed;
    if (!c.detail.empty()) cj["detail"] = c.detail;
    nlohmann::ordered_json ws = nlohmann::ordered_json::array();
    for (const auto& w : c.witnesses) ws.push_back({{"where", w.where}, {"residual", w.residual}});
    cj["witnesses"] = ws;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  if (!r.tables.empty()) {
    nlohmann::ordered_json t = nlohmann::ordered_json::array();
    for (const auto& [k, v] : r.tables) t.push_back({{"key", k}, {"value", v}});
    j["table"] = t;
  }
  if (r.seconds >= 0) j["seconds"] = r.seconds;
  return j;
}

std::string to_text(const Report& r) {
  std::ostringstream os;
  os << r.subject << ": " << (r.passed() ? "PASS" : "FAIL") << "\n";
  if (!r.bounds.empty()) {
    os << "  bounds:";
    for (const auto& [k, v] : r.bounds) os << " " << k << "=" << v;
    os << "\n";
  }
  for (const auto& c : r.checks) {
    os << "  [" << (c.passed ? "pass" : "FAIL") << "] " << c.name;
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    os << "\n";
    for (const auto& w : c.witnesses) os << "      at " << w.where << ": " << w.residual << "\n";
  }
  for (const auto& [k, v] : r.tables) {
    if (v.find('\n') == std::string::npos) {
      os << "  " << k << " = " << v << "\n";
      continue;
    }
    os << "  " << k << ":\n";
    std::istringstream lines(v);
    for (std::string line; std::getline(lines, line);) os << (line.empty() ? "" : "    ") << line << "\n";
  }
  if (r.seconds >= 0) os << "  time: " << std::fixed << std::setprecision(3) << r.seconds << " s\n";
  return os.str();
}

}  // namespace

std::string emit_report(const Report& r, ReportFormat format) {
  if (format == ReportFormat::machine) return to_json(r).dump(2) + "\n";
  return to_text(r);
}

std::string emit_reports(const std::vector<Report>& rs, ReportFormat format) {
  if (format == ReportFormat::machine) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rs) arr.push_back(to_json(r));
    return arr.dump(2) + "\n";
  }
  std::string out;
  for (const auto& r : rs) out += to_text(r);
  return out;
}

}  // namespace bvcalc
