#include "support.hpp"

#include "bvcalc/errors.hpp"

#include <doctest.h>

using namespace bvcalc;

namespace {

std::size_t gen(const LInfPtr& l, const char* name) { return *l->space().find(name); }

}  // namespace

TEST_SUITE("linfty") {
  TEST_CASE("classical brackets are stored with the suspension sign") {
    auto l = fixtures::sl2();
    const CarrierPtr& c = l->carrier();
    CHECK(l->evaluate({gen(l, "e"), gen(l, "f")}) == Poly::generator(c, gen(l, "h")));
    CHECK(l->evaluate({gen(l, "f"), gen(l, "e")}) == -Poly::generator(c, gen(l, "h")));
    CHECK(l->evaluate({gen(l, "h"), gen(l, "e")}) == Scalar(2) * Poly::generator(c, gen(l, "e")));
    CHECK(l->evaluate({gen(l, "e"), gen(l, "e")}).is_zero());
  }

  TEST_CASE("codifferential holds on the Lie fixtures up to W=4") {
    for (const auto& l : {fixtures::abelian(), fixtures::dg(), fixtures::solv(), fixtures::sl2(), fixtures::borel()}) {
      CAPTURE(l->name());
      CHECK(check_codifferential(*l, 4).passed);
      CHECK(check_jacobi_forms(*l, 4).passed);
    }
  }

  TEST_CASE("mutated sl2 fails at weight three on both paths") {
    auto l = fixtures::sl2_mutated();
    Check c = check_codifferential(*l, 4);
    REQUIRE(!c.passed);
    REQUIRE(!c.witnesses.empty());
    CHECK(c.witnesses.front().where == "n=3 word e*f*h");
    CHECK(!check_jacobi_forms(*l, 3).passed);
    CHECK(check_jacobi_forms(*l, 2).passed);
    CHECK_THROWS_AS(bv_from_linf(l, Truncation{}), ValidationError);
  }

  TEST_CASE("differential fixture: Delta(a) = b") {
    auto b = bv_from_linf(fixtures::dg(), Truncation{});
    CHECK(b.delta(parse_poly(b.carrier, "a")).str() == "b");
    CHECK(b.delta(parse_poly(b.carrier, "b")).is_zero());
    CHECK(b.delta(parse_poly(b.carrier, "a^2")).str() == "2*a*b");
  }

  TEST_CASE("Chevalley-Eilenberg operator of solv on xy") {
    auto b = bv_from_linf(fixtures::solv(), Truncation{});
    Poly v = b.delta(parse_poly(b.carrier, "x*y"));
    // Brute force: D_2(x y) = l_2(x, y) = (-1)^{|x|} [x, y] with |x| = 0.
    CHECK(v == parse_poly(b.carrier, "hbar*y"));
  }

  TEST_CASE("shape validation") {
    auto s = make_space("s", {{"a", 0, 1}, {"b", 1, 1}});
    LInfStructure l("bad", s, 2);
    auto c = l.carrier();
    l.set_bracket(c->generator_word(0), Poly::generator(c, 0));
    CHECK_THROWS_AS(l.check_shape(), ValidationError);
    CHECK_THROWS_AS(l.set_bracket(c->unit(), Poly::generator(c, 1)), ValidationError);
  }

  TEST_CASE("seeded transported structures and morphisms are valid") {
    std::mt19937_64 rng(fixtures::seed_from_env());
    for (int i = 0; i < 4; ++i) {
      LInfMorphism f = fixtures::seeded_nonstrict(fixtures::dg(), rng, 4, "t" + std::to_string(i));
      CHECK(check_codifferential(*f.source, 4).passed);
      CHECK(check_jacobi_forms(*f.source, 4).passed);
      CHECK(check_linf_morphism(f, 4).passed);
      f.check_shape();
    }
  }

  TEST_CASE("L-infinity composition is associative and unital") {
    std::mt19937_64 rng(fixtures::seed_from_env() + 1);
    LInfMorphism a = fixtures::seeded_nonstrict(fixtures::dg(), rng, 4, "a");
    LInfMorphism b = fixtures::seeded_nonstrict(a.source, rng, 4, "b");
    LInfMorphism c = fixtures::seeded_nonstrict(b.source, rng, 4, "c");
    LInfMorphism left = compose_linf(compose_linf(a, b, 4), c, 4);
    LInfMorphism right = compose_linf(a, compose_linf(b, c, 4), 4);
    CHECK(!first_difference(left, right));
    CHECK(!first_difference(compose_linf(identity_linf(a.target), a, 4), a));
    CHECK(!first_difference(compose_linf(a, identity_linf(a.source), 4), a));
    CHECK(check_linf_morphism(left, 4).passed);
  }

  TEST_CASE("a wrong morphism is caught") {
    LInfMorphism j = fixtures::borel_inclusion();
    j.set(j.key_carrier()->generator_word(0), Scalar(2) * Poly::generator(j.target->carrier(), 2));
    CHECK(!check_linf_morphism(j, 4).passed);
  }

  TEST_CASE("extended brackets are coderivations of order n") {
    std::mt19937_64 rng(fixtures::seed_from_env() + 2);
    auto t = fixtures::seeded_nonstrict(fixtures::dg(), rng, 4, "t");
    for (const auto& l : {fixtures::solv(), fixtures::sl2(), fixtures::dg(), t.source}) {
      CarrierPtr c = coalgebra_carrier(*l, 4);
      for (int n = 1; n <= 3; ++n) {
        Operator d = extend_coderivation(*l, n, c);
        CHECK(diff_order(d, n, AlgebraMap::identity_on(c), 4).holds);
        for (const Word& w : c->basis()) {
          oracle::Tensor lhs;
          for (const auto& [m, v] : d.on_word(w)) {
            const TensorPoly dm = shuffle_coproduct(c, m.word);
            for (const auto& [k, cc] : dm.terms()) oracle::add_to(lhs, k.first, k.second, v * cc);
          }
          oracle::Tensor delta = oracle::tensor_of(shuffle_coproduct(c, w));
          oracle::Tensor rhs = oracle::apply_tensor(d, delta, true);
          for (const auto& [k, v] : oracle::apply_tensor(d, delta, false)) oracle::add_to(rhs, k.first, k.second, v);
          CAPTURE(l->name());
          CAPTURE(c->format(w));
          CHECK(lhs == rhs);
        }
      }
    }
  }

  TEST_CASE("codifferential and Jacobi forms agree") {
    std::mt19937_64 rng(fixtures::seed_from_env() + 3);
    auto t = fixtures::seeded_nonstrict(fixtures::dg(), rng, 4, "t");
    for (const LInfStructure* l : {fixtures::abelian().get(), fixtures::dg().get(), fixtures::solv().get(),
                                   fixtures::sl2().get(), fixtures::sl2_mutated().get(), t.source.get()}) {
      const int m = std::min(2 * l->max_arity() - 1, 4);
      CAPTURE(l->name());
      CHECK(check_codifferential(*l, 4).passed == check_jacobi_forms(*l, m).passed);
    }
    CHECK(!check_jacobi_forms(*fixtures::sl2_mutated(), 4).passed);
  }

  TEST_CASE("extension of a composite is the composite of extensions") {
    std::mt19937_64 rng(fixtures::seed_from_env() + 4);
    LInfMorphism a = fixtures::seeded_nonstrict(fixtures::dg(), rng, 4, "a");
    LInfMorphism b = fixtures::seeded_nonstrict(a.source, rng, 4, "b");
    CHECK(extend_coalgebra_morphism(compose_linf(a, b, 4), 4) ==
          compose(extend_coalgebra_morphism(a, 4), extend_coalgebra_morphism(b, 4)));
  }
}
