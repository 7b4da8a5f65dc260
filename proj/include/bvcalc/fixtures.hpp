#pragma once

#include "bvcalc/structure_file.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace bvcalc::fixtures {

/// Text of a shipped fixture file (abelian, dg, solv, sl2, sl2_mutated, oddsymp, oddsymp_tilde).
std::string_view text(std::string_view name);
/// The fixture parsed with its truncation line replaced by `t` and `arity`.
StructureFile load(std::string_view name, const Truncation& t = {}, int arity = 4);

LInfPtr abelian();
LInfPtr dg();
LInfPtr solv();
LInfPtr sl2();
LInfPtr sl2_mutated();
LInfPtr borel();
/// Strict inclusion borel -> sl2.
LInfMorphism borel_inclusion();

BVPtr oddsymp(const Truncation& t = {});
/// hbar d_x d_xi + d_xi + xi d_x: odd, not square-zero.
BVPtr oddsymp_tilde(const Truncation& t = {});
/// bv(abelian) -> oddsymp, r -> 2, q -> xi.
BVMorphism psi1(const Truncation& t = {});
/// oddsymp -> oddsymp, x -> x + 2.
BVMorphism oddsymp_shift(const Truncation& t = {});

/// BVCALC_SEED if set, otherwise a fixed default.
std::uint64_t seed_from_env();

/// Morphism S -> target where S is transported from `target` along a random
/// corolla with identity linear part and integer coefficients in [-2, 2].
LInfMorphism seeded_nonstrict(const LInfPtr& target, std::mt19937_64& rng, int arity, const std::string& name);

}  // namespace bvcalc::fixtures
