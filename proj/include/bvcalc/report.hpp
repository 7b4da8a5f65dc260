#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace bvcalc {

struct Witness {
  std::string where;     // word, argument tuple or component
  std::string residual;  // exact nonzero value
};

struct Check {
  std::string name;
  bool passed = true;
  std::string detail;
  std::vector<Witness> witnesses;

  static constexpr std::size_t kMaxWitnesses = 8;
  void fail(std::string where, std::string residual);
  void merge(const Check& other);
};

struct Report {
  std::string subject;
  std::vector<std::pair<std::string, int>> bounds;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, std::string>> tables;
  double seconds = -1;  // emitted only when >= 0

  bool passed() const;
  void add(Check c) { checks.push_back(std::move(c)); }
};

enum class ReportFormat { text, machine };

std::string emit_report(const Report& r, ReportFormat format);
std::string emit_reports(const std::vector<Report>& rs, ReportFormat format);

}  // namespace bvcalc
