#include "support.hpp"

#include <doctest.h>

using namespace bvcalc;

TEST_SUITE("report") {
  TEST_CASE("reports are deterministic and carry their bounds") {
    auto f = parse_structure(std::string(fixtures::text("sl2_mutated")));
    auto run = [&] {
      Report r;
      r.subject = "mutated";
      r.bounds = {{"W", 4}};
      r.add(check_codifferential(*f.find_linf("sl2_mutated"), 4));
      return r;
    };
    Report a = run();
    Report b = run();
    std::string text = emit_report(a, ReportFormat::text);
    CHECK(text == emit_report(b, ReportFormat::text));
    CHECK(text.find("W=4") != std::string::npos);
    CHECK(text.find("e*f*h") != std::string::npos);
    CHECK(text.find("-2*e") != std::string::npos);
    CHECK(text.find("seconds") == std::string::npos);
    CHECK(!a.passed());
    std::string machine = emit_report(a, ReportFormat::machine);
    CHECK(machine == emit_report(b, ReportFormat::machine));
    CHECK(machine.find("e*f*h") != std::string::npos);
  }

  TEST_CASE("witness lists are capped") {
    Check c{"many", true, "", {}};
    for (int i = 0; i < 20; ++i) c.fail("w" + std::to_string(i), "1");
    CHECK(!c.passed);
    CHECK(c.witnesses.size() == Check::kMaxWitnesses);
    CHECK(c.witnesses.front().where == "w0");
  }

  TEST_CASE("timing only when set") {
    Report r;
    r.subject = "t";
    r.seconds = 0.5;
    CHECK(emit_report(r, ReportFormat::text).find("0.5") != std::string::npos);
  }
}
