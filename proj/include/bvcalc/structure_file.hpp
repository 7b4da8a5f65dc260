#pragma once

#include "bvcalc/bvinfty.hpp"
#include "bvcalc/linfty.hpp"
#include "bvcalc/morphcalc.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace bvcalc {

/// Parsed contents of a structure file. Blocks may only refer to blocks
/// defined above them.
struct StructureFile {
  Truncation truncation;
  int arity = 3;
  std::vector<SpacePtr> spaces;
  std::vector<LInfPtr> linf;
  std::vector<BVPtr> bv;
  std::vector<LInfMorphism> linf_morphisms;
  std::vector<BVMorphism> bv_morphisms;

  SpacePtr find_space(const std::string& name) const;
  LInfPtr find_linf(const std::string& name) const;
  BVPtr find_bv(const std::string& name) const;
  const LInfMorphism* find_linf_morphism(const std::string& name) const;
  const BVMorphism* find_bv_morphism(const std::string& name) const;
};

/// Block text format, or the JSON mirror when the first non-blank character is '{'.
StructureFile parse_structure(std::string_view text);
StructureFile read_structure_file(const std::string& path);

/// Canonical block text; parse_structure(serialize(f)) reproduces f.
std::string serialize(const StructureFile& f);
std::string serialize_json(const StructureFile& f);

/// One element in the carrier's generator names, e.g. "-1/2*hbar*x^2*xi + 3".
/// Odd squares and words outside the truncation are rejected.
Poly parse_poly(const CarrierPtr& c, std::string_view text);
/// A product of generators in any order, returned in normal form with the
/// sign of the reordering.
std::pair<Word, int> parse_word(const CarrierPtr& c, std::string_view text);

/// Adds the object and everything it refers to (spaces, endpoints, origins).
void collect(StructureFile& f, const LInfPtr& l);
void collect(StructureFile& f, const BVPtr& b);
void collect(StructureFile& f, const LInfMorphism& m);
void collect(StructureFile& f, const BVMorphism& m);

}  // namespace bvcalc
