#include "support.hpp"

#include "bvcalc/errors.hpp"

#include <doctest.h>

using namespace bvcalc;

namespace {

const Truncation kT{4, -1, 4, 3};

std::vector<LInfMorphism> seeded_chain(std::uint64_t salt, int length) {
  std::mt19937_64 rng(fixtures::seed_from_env() + salt);
  std::vector<LInfMorphism> out;
  LInfPtr target = fixtures::dg();
  for (int i = 0; i < length; ++i) {
    out.push_back(fixtures::seeded_nonstrict(target, rng, 4, "m" + std::to_string(i)));
    target = out.back().source;
  }
  return out;
}

Operator random_phi(std::mt19937_64& rng) {
  LInfMorphism f = fixtures::seeded_nonstrict(fixtures::dg(), rng, 4, "r");
  return linf_to_bv(f, kT).phi;
}

}  // namespace

TEST_SUITE("morphcalc") {
  TEST_CASE("exp agrees with the set-partition formula and the convolution series") {
    std::mt19937_64 rng(fixtures::seed_from_env() + 11);
    for (int trial = 0; trial < 5; ++trial) {
      Operator phi = random_phi(rng);
      Operator e = exp_map(phi);
      for (const Word& w : phi.source().basis()) CHECK(e.on_word(w) == oracle::exp_by_partitions(phi, w));
      Operator series = oracle::unit_counit(phi.source_ptr(), phi.target_ptr());
      Operator power = series;
      for (int k = 1; k <= 4; ++k) {
        power = oracle::convolve(power, phi);
        series += power.scaled(Scalar(1) / factorial(k));
      }
      CHECK(e == series);
    }
  }

  TEST_CASE("log agrees with the convolution series") {
    std::mt19937_64 rng(fixtures::seed_from_env() + 12);
    auto c = bv_from_linf(fixtures::dg(), kT).carrier;
    for (int trial = 0; trial < 5; ++trial) {
      Operator big = oracle::random_unital(c, c, rng);
      Operator eps = oracle::unit_counit(c, c);
      Operator x = big - eps;
      Operator series(c, c, false);
      Operator power = eps;
      for (int k = 1; k <= 4; ++k) {
        power = oracle::convolve(power, x);
        series += power.scaled(Scalar(k % 2 ? 1 : -1, k));
      }
      CHECK(log_map(big) == series);
      CHECK(exp_map(log_map(big)) == big);
    }
  }

  TEST_CASE("exp and log reject unnormalized maps") {
    auto c = fixtures::oddsymp()->carrier;
    Operator bad(c, c, false);
    bad.set(c->unit(), Poly::one(c));
    CHECK_THROWS_AS(exp_map(bad), ValidationError);
    Operator zero(c, c, false);
    CHECK_THROWS_AS(log_map(zero), ValidationError);
  }

  TEST_CASE("morphism checks") {
    CHECK(check_bv_morphism(fixtures::psi1()).passed());
    CHECK(check_bv_morphism(fixtures::oddsymp_shift()).passed());
    CHECK(check_bv_morphism(identity_bv(fixtures::oddsymp())).passed());
    auto v = fixtures::oddsymp();
    Operator phi(v->carrier, v->carrier, false);
    phi.set(v->carrier->generator_word(0), parse_poly(v->carrier, "x"));
    phi.set(v->carrier->generator_word(1), parse_poly(v->carrier, "2*xi"));
    Report r = check_bv_morphism(BVMorphism("scale", v, v, phi));
    CHECK(!r.passed());
    CHECK(r.checks.back().witnesses.front().where == "hbar^1 word x*xi");
    CHECK(!check_pure(fixtures::psi1()).pure);
  }

  TEST_CASE("translation: round trips, purity and degrees") {
    for (const auto& f : seeded_chain(21, 3)) {
      BVMorphism b = linf_to_bv(f, kT);
      CHECK(check_bv_morphism(b).passed());
      CHECK(check_pure(b).pure);
      CHECK(!degree_violation(b.phi, 0));
      LInfMorphism back = bv_to_linf(b);
      CHECK(!first_difference(back, f));
      BVMorphism again = linf_to_bv(back, b.source, b.target);
      CHECK(again.phi == b.phi);
    }
    CHECK_THROWS_AS(bv_to_linf(fixtures::psi1()), ValidationError);
  }

  TEST_CASE("diamond: direct formula, associativity, units, purity") {
    auto chain = seeded_chain(31, 3);
    BVMorphism a = linf_to_bv(chain[0], kT);
    BVMorphism b = linf_to_bv(chain[1], kT);
    BVMorphism c = linf_to_bv(chain[2], kT);
    BVMorphism ab = compose_diamond(a, b);
    CHECK(ab.phi == compose_direct(a, b).phi);
    CHECK(compose_diamond(ab, c).phi == compose_diamond(a, compose_diamond(b, c)).phi);
    CHECK(compose_diamond(identity_bv(a.target), a).phi == a.phi);
    CHECK(compose_diamond(a, identity_bv(a.source)).phi == a.phi);
    CHECK(check_pure(ab).pure);
    CHECK(check_bv_morphism(ab).passed());
    CHECK_THROWS_AS(compose_direct(fixtures::oddsymp_shift(), fixtures::psi1()), ValidationError);
    BVMorphism mixed = compose_diamond(fixtures::oddsymp_shift(), fixtures::psi1());
    CHECK(check_bv_morphism(mixed).passed());
  }

  TEST_CASE("translation is functorial") {
    auto chain = seeded_chain(41, 2);
    LInfMorphism fg = compose_linf(chain[0], chain[1], 4);
    BVMorphism lhs = linf_to_bv(fg, kT);
    BVMorphism rhs = compose_diamond(linf_to_bv(chain[0], kT), linf_to_bv(chain[1], kT));
    CHECK(lhs.phi == rhs.phi);
    CHECK(linf_to_bv(identity_linf(chain[0].target), kT).phi ==
          identity_bv(std::make_shared<const BVOperator>(bv_from_linf(chain[0].target, kT))).phi);
  }

  TEST_CASE("modified structure of a BV algebra is L-infinity") {
    auto v = fixtures::oddsymp(Truncation{3, -1, 4, 3});
    LInfStructure h = modified_structure(*v, 3, "h");
    CHECK(h.space().dim() == v->carrier->basis().size());
    CHECK(h.space()[0].name == "[1]");
    CHECK(check_codifferential(h, 3).passed);
  }

  TEST_CASE("exp of p1 is the multiplication map and intertwines") {
    auto v = fixtures::oddsymp(Truncation{3, -1, 4, 3});
    BVMorphism p = p1_morphism(v, 3);
    Operator e = exp_map(p.phi);
    const Carrier& s = *p.source->carrier;
    for (const Word& w : s.basis()) {
      // [u_1]...[u_k] -> u_1 ... u_k by concatenating factor lists.
      Poly want = Poly::one(v->carrier);
      for (std::size_t g : w.factors()) want = multiply(want, Poly::monomial(v->carrier, v->carrier->basis()[g]));
      CAPTURE(s.format(w));
      CHECK(e.on_word(w) == want);
    }
    CHECK(check_bv_morphism(p).passed());
    BVMorphism step = step1_compose_with_p1(fixtures::oddsymp_shift(Truncation{3, -1, 4, 3}), 3);
    CHECK(check_bv_morphism(step).passed());
  }

  TEST_CASE("quantum master equation") {
    auto v = fixtures::oddsymp();
    Poly s = parse_poly(v->carrier, "lambda*hbar*x + lambda^2*hbar*x^2");
    CHECK(qme_check(*v, s).passed());
    Poly t = qme_propagate(fixtures::oddsymp_shift(), s);
    CHECK(t.str() == "2*lambda*hbar + lambda*hbar*x");
    CHECK(qme_check(*v, t).passed());
    CHECK_THROWS_AS(qme_check(*v, parse_poly(v->carrier, "lambda*xi")), ValidationError);
    CHECK_THROWS_AS(qme_check(*v, parse_poly(v->carrier, "hbar*x")), ValidationError);

    auto dgv = bv_from_linf(fixtures::dg(), kT);
    Report bad = qme_check(dgv, parse_poly(dgv.carrier, "lambda*a"));
    CHECK(!bad.passed());
    CHECK(bad.checks[1].witnesses.front().where == "lambda^1");
    CHECK(bad.checks[1].witnesses.front().residual.find("b") != std::string::npos);
  }

  TEST_CASE("exp of a map on a group-like element") {
    std::mt19937_64 rng(fixtures::seed_from_env() + 51);
    for (int trial = 0; trial < 5; ++trial) {
      Operator phi = random_phi(rng);
      for (const char* s : {"lambda*hbar^-1*a", "lambda*hbar^-1*a - 1/2*lambda^2*hbar^-1*a"}) {
        Comparison c = exp_on_exponential(phi, parse_poly(phi.source_ptr(), s));
        CAPTURE(s);
        CHECK(c.holds());
        CHECK(!c.lhs.is_zero());
      }
    }
    auto src = fixtures::psi1().source->carrier;
    CHECK(exp_on_exponential(fixtures::psi1().phi, parse_poly(src, "lambda*r - 2*lambda^3*r")).holds());
    CHECK_THROWS_AS(exp_on_exponential(fixtures::psi1().phi, parse_poly(src, "lambda*q*r")), ValidationError);
    CHECK_THROWS_AS(exp_on_exponential(fixtures::psi1().phi, parse_poly(src, "lambda*hbar*r")), ValidationError);
    CHECK_THROWS_AS(exp_on_exponential(fixtures::psi1().phi, parse_poly(src, "r")), ValidationError);
  }

  TEST_CASE("adjunction round trips and top terms") {
    std::vector<BVMorphism> cases{fixtures::psi1(), linf_to_bv(fixtures::borel_inclusion(), kT),
                                  linf_to_bv(seeded_chain(61, 1)[0], kT)};
    for (const BVMorphism& psi : cases) {
      CAPTURE(psi.name);
      auto h = std::make_shared<const LInfStructure>(modified_structure(*psi.target, 4, "h"));
      LInfMorphism f = adjunction_forward(psi, h);
      CHECK(check_linf_morphism(f, 4).passed);
      BVMorphism back = adjunction_backward(f, psi.source, psi.target);
      CHECK(back.phi == psi.phi);
      CHECK(!first_difference(adjunction_forward(back, h), f));
      for (int m = 1; m <= 3; ++m) CHECK(verify_top_terms(psi, m).passed);
    }
  }

  TEST_CASE("exp of a translated morphism is the coalgebra morphism with hbar weights") {
    for (const auto& f : seeded_chain(71, 2)) {
      BVMorphism b = linf_to_bv(f, kT);
      Operator e = exp_map(b.phi);
      Operator big = extend_coalgebra_morphism(f, 4);
      for (const Word& w : b.phi.source().basis()) {
        Poly::Terms want;
        for (const auto& [m, c] : big.on_word(w))
          want.emplace(Monomial{m.word, m.hbar + w.weight() - m.word.weight(), m.lambda}, c);
        CAPTURE(b.phi.source().format(w));
        CHECK(e.on_word(w).terms() == want);
      }
    }
    auto b = fixtures::oddsymp();
    CHECK(exp_map(identity_bv(b).phi) == Operator::identity(b->carrier));
  }

  TEST_CASE("at hbar = 0 exp(phi_1) intertwines the first components") {
    std::vector<BVMorphism> ms{fixtures::psi1(), fixtures::oddsymp_shift()};
    for (const auto& f : seeded_chain(81, 2)) ms.push_back(linf_to_bv(f, kT));
    for (const BVMorphism& f : ms) {
      CAPTURE(f.name);
      Operator e = exp_map(f.component(1));
      CHECK(compose(e, f.source->component(1)) == compose(f.target->component(1), e));
      for (const Word& u : f.phi.source().basis())
        for (const Word& v : f.phi.source().basis()) {
          auto uv = merge_words(f.phi.source(), u, v);
          if (!uv || !f.phi.source().admits(uv->first)) continue;
          Poly lhs = Scalar(uv->second) * e.on_word(uv->first);
          CHECK(lhs == multiply(e.on_word(u), e.on_word(v)));
        }
    }
  }

  TEST_CASE("composite with p1") {
    const Truncation t{3, -1, 4, 3};
    auto v = fixtures::oddsymp(t);
    BVMorphism p = p1_morphism(v, 3);
    CHECK(step1_compose_with_p1(identity_bv(v), 3).phi == p.phi);
    BVMorphism shift = fixtures::oddsymp_shift(t);
    BVMorphism step = step1_compose_with_p1(shift, 3);
    const Carrier& s = *step.source->carrier;
    for (const Word& w : v->carrier->basis()) {
      auto g = s.space().find(word_generator_name(*v->carrier, w));
      REQUIRE(g);
      CHECK(step.phi.on_word(s.generator_word(*g)) == exp_map(shift.phi).on_word(w));
    }
    auto h = std::make_shared<const LInfStructure>(modified_structure(*step.target, 3, "h"));
    LInfMorphism f = adjunction_forward(step, h);
    CHECK(check_linf_morphism(f, 3).passed);
    CHECK(adjunction_backward(f, step.source, step.target).phi == step.phi);
  }

  TEST_CASE("adjunction edge cases and a strict naturality square") {
    auto bsl2 = std::make_shared<const BVOperator>(bv_from_linf(fixtures::sl2(), kT));
    auto h = std::make_shared<const LInfStructure>(modified_structure(*bsl2, 4, "h"));
    LInfMorphism zero{"zero", fixtures::sl2(), h, 4, {}};
    BVMorphism z = adjunction_backward(zero, bsl2, bsl2);
    CHECK(z.phi.is_zero());
    CHECK(adjunction_forward(z, h).corolla.empty());

    BVMorphism id = identity_bv(bsl2);
    LInfMorphism fid = adjunction_forward(id, h);
    CHECK(check_linf_morphism(fid, 3).passed);

    LInfMorphism j = fixtures::borel_inclusion();
    auto bborel = std::make_shared<const BVOperator>(bv_from_linf(fixtures::borel(), kT));
    BVMorphism J = linf_to_bv(j, bborel, bsl2);
    CHECK(!first_difference(compose_linf(fid, j, 4), adjunction_forward(compose_diamond(id, J), h)));
  }

  TEST_CASE("the zero element solves the QME") {
    auto v = fixtures::oddsymp();
    CHECK(qme_check(*v, Poly(v->carrier)).passed());
  }
}
