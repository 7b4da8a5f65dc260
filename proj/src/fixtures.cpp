#include "bvcalc/fixtures.hpp"

#include "bvcalc/errors.hpp"

#include <cstdlib>
#include <map>

namespace bvcalc::fixtures {

namespace {

#include "fixture_texts.inc"

std::string with_truncation(std::string_view body, const Truncation& t, int arity) {
  std::string out = "truncation W=" + std::to_string(t.weight) + " H=" + std::to_string(t.hbar) +
                    " Lambda=" + std::to_string(t.lambda) + " A=" + std::to_string(arity) + "\n";
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t nl = body.find('\n', pos);
    std::string_view line = body.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos + 1);
    pos = nl == std::string_view::npos ? body.size() : nl + 1;
    if (line.rfind("truncation", 0) == 0) continue;
    out += line;
  }
  return out;
}

StructureFile cached(std::string_view name) {
  static std::map<std::string, StructureFile, std::less<>> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(std::string(name), load(name)).first;
  return it->second;
}

template <class T>
T need(T value, std::string_view what) {
  if (!value) throw InternalConsistencyError("fixture object '" + std::string(what) + "' is missing");
  return value;
}

}  // namespace

std::string_view text(std::string_view name) {
  for (const auto& [n, body] : kFixtureTexts)
    if (n == name) return body;
  throw MalformedInput("unknown fixture '" + std::string(name) + "'");
}

StructureFile load(std::string_view name, const Truncation& t, int arity) {
  return parse_structure(with_truncation(text(name), t, arity));
}

LInfPtr abelian() { return need(cached("abelian").find_linf("abelian"), "abelian"); }
LInfPtr dg() { return need(cached("dg").find_linf("dg"), "dg"); }
LInfPtr solv() { return need(cached("solv").find_linf("solv"), "solv"); }
LInfPtr sl2() { return need(cached("sl2").find_linf("sl2"), "sl2"); }
LInfPtr sl2_mutated() { return need(cached("sl2_mutated").find_linf("sl2_mutated"), "sl2_mutated"); }
LInfPtr borel() { return need(cached("sl2").find_linf("borel"), "borel"); }

LInfMorphism borel_inclusion() { return *need(cached("sl2").find_linf_morphism("j"), "j"); }

BVPtr oddsymp(const Truncation& t) { return need(load("oddsymp", t).find_bv("oddsymp"), "oddsymp"); }
BVPtr oddsymp_tilde(const Truncation& t) { return need(load("oddsymp_tilde", t).find_bv("oddsymp_tilde"), "oddsymp_tilde"); }
BVMorphism psi1(const Truncation& t) { return *need(load("oddsymp", t).find_bv_morphism("psi1"), "psi1"); }
BVMorphism oddsymp_shift(const Truncation& t) { return *need(load("oddsymp", t).find_bv_morphism("shift"), "shift"); }

std::uint64_t seed_from_env() {
  if (const char* s = std::getenv("BVCALC_SEED"); s && *s) return std::strtoull(s, nullptr, 10);
  return 20240917;
}

LInfMorphism seeded_nonstrict(const LInfPtr& target, std::mt19937_64& rng, int arity, const std::string& name) {
  std::uniform_int_distribution<int> coef(-2, 2);
  CarrierPtr keys = coalgebra_carrier(*target, arity);
  const CarrierPtr& tc = target->carrier();
  std::map<Word, Poly> corolla;
  for (const Word& w : keys->basis()) {
    if (w.is_unit()) continue;
    Poly v(tc);
    if (w.weight() == 1) {
      v = Poly::monomial(tc, w);
    } else {
      for (std::size_t g = 0; g < tc->dim(); ++g)
        if (tc->degree(g) == keys->degree(w))
          if (int c = coef(rng); c != 0) v += Scalar(c) * Poly::generator(tc, g);
    }
    if (!v.is_zero()) corolla.emplace(w, std::move(v));
  }
  auto source = std::make_shared<const LInfStructure>(transport_structure(*target, corolla, arity, name + "_src"));
  LInfMorphism f{name, source, target, arity, {}};
  for (const auto& [w, v] : corolla) f.set(w, v);
  return f;
}

}  // namespace bvcalc::fixtures
