#include "support.hpp"

#include "bvcalc/errors.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace bvcalc;

namespace {

ParseError parse_failure(const std::string& text) {
  try {
    parse_structure(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("no ParseError for:\n" << text);
  return ParseError("", 0, 0);
}

const std::string kHead = "truncation W=3 H=4 Lambda=2 A=3\n";

}  // namespace

TEST_SUITE("structure_file") {
  TEST_CASE("syntax errors carry line and column") {
    ParseError e = parse_failure(kHead + "space s\n  gen x 0\n  gen y 0\nend\nlinf l space=s\n  bracket x y = x + zz\nend\n");
    CHECK(e.line() == 7);
    CHECK(e.column() == 21);

    e = parse_failure(kHead + "space s\n  gen x 0\nend\nfrobnicate\n");
    CHECK(e.line() == 5);
    CHECK(e.column() == 1);

    e = parse_failure(kHead + "space s\n  gen x 0\n");
    CHECK(std::string(e.what()).find("not closed") != std::string::npos);

    e = parse_failure("truncation W=x\n");
    CHECK(e.line() == 1);
    CHECK(e.column() == 14);
  }

  TEST_CASE("semantic errors") {
    ParseError e = parse_failure(kHead + "space s\n  gen t 1\n  gen u 0\nend\nlinf l space=s\n  l u*u = t\nend\n");
    CHECK(std::string(e.what()).find("odd generator squared") != std::string::npos);
    CHECK(e.line() == 7);

    e = parse_failure(kHead + "space s\n  gen x 0\n  gen x 1\nend\n");
    CHECK(e.line() == 4);

    e = parse_failure(kHead + "space s\n  gen x 0\nend\nspace s\n  gen y 0\nend\n");
    CHECK(std::string(e.what()).find("duplicate") != std::string::npos);

    e = parse_failure(kHead + "space s\n  gen x 0\nend\nlinf l space=s colour=red\nend\n");
    CHECK(e.line() == 5);

    e = parse_failure(kHead + "space s\n  gen x 0\nend\nlinf l space=nowhere\nend\n");
    CHECK(e.line() == 5);

    e = parse_failure(kHead + "space s\n  gen x 0\nend\nlinf l space=s\n  l x = lambda^3*x\nend\n");
    CHECK(e.line() == 5);
    CHECK(std::string(e.what()).find("linf 'l'") != std::string::npos);

    e = parse_failure(kHead + "space s\n  gen x 0\nend\nlinf l space=s\n  l x*x*x*x = x\nend\n");
    CHECK(e.line() == 6);
  }

  TEST_CASE("an empty space and an empty structure are fine") {
    StructureFile f = parse_structure(kHead + "space empty\nend\nlinf zero space=empty\nend\nbv bz from=zero\nend\n");
    REQUIRE(f.find_space("empty"));
    CHECK(f.find_space("empty")->dim() == 0);
    REQUIRE(f.find_bv("bz"));
    CHECK(f.find_bv("bz")->delta.is_zero());
    CHECK(check_bv(*f.find_bv("bz")).passed());
  }

  TEST_CASE("polys and words") {
    auto c = fixtures::oddsymp()->carrier;
    CHECK(parse_poly(c, "-1/2*hbar*x^2*xi + 3").str() == "3 - 1/2*hbar*x^2*xi");
    auto [w, sign] = parse_word(c, "xi*x");
    CHECK(c->format(w) == "x*xi");
    CHECK(sign == 1);
    CHECK_THROWS_AS(parse_poly(c, "xi*xi"), ParseError);
    CHECK_THROWS_AS(parse_poly(c, "x^5"), ParseError);
    CHECK_THROWS_AS(parse_poly(c, "1/0"), ParseError);
    CHECK_THROWS_AS(parse_poly(c, "lambda^4*x"), ParseError);
  }

  TEST_CASE("serialize round trips") {
    for (const char* name : {"abelian", "dg", "solv", "sl2", "sl2_mutated", "oddsymp", "oddsymp_tilde"}) {
      CAPTURE(name);
      StructureFile f = fixtures::load(name);
      std::string text = serialize(f);
      StructureFile g = parse_structure(text);
      CHECK(serialize(g) == text);
      StructureFile h = parse_structure(serialize_json(f));
      CHECK(serialize(h) == text);
      REQUIRE(f.linf.size() == g.linf.size());
      for (std::size_t i = 0; i < f.linf.size(); ++i) CHECK(f.linf[i]->brackets() == g.linf[i]->brackets());
      REQUIRE(f.bv.size() == g.bv.size());
      for (std::size_t i = 0; i < f.bv.size(); ++i) CHECK(f.bv[i]->delta.table() == g.bv[i]->delta.table());
    }
  }

  TEST_CASE("collect pulls in dependencies") {
    StructureFile f;
    f.truncation = Truncation{4, -1, 4, 3};
    f.arity = 4;
    collect(f, fixtures::psi1());
    CHECK(f.bv_morphisms.size() == 1);
    CHECK(f.bv.size() == 2);
    CHECK(f.linf.size() == 1);
    StructureFile g = parse_structure(serialize(f));
    REQUIRE(g.find_bv_morphism("psi1"));
    CHECK(g.find_bv_morphism("psi1")->phi.table() == fixtures::psi1().phi.table());
  }

  TEST_CASE("shipped files match the embedded copies") {
    for (const char* name : {"abelian", "dg", "solv", "sl2", "sl2_mutated", "oddsymp", "oddsymp_tilde"}) {
      CAPTURE(name);
      std::ifstream in(std::string(BVCALC_FIXTURE_DIR) + "/" + name + ".bvs");
      REQUIRE(in);
      std::stringstream ss;
      ss << in.rdbuf();
      CHECK(ss.str() == fixtures::text(name));
      CHECK_NOTHROW(read_structure_file(std::string(BVCALC_FIXTURE_DIR) + "/" + name + ".bvs"));
    }
  }
}
