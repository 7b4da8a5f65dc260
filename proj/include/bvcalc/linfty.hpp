#pragma once

#include "bvcalc/hseries.hpp"
#include "bvcalc/report.hpp"

#include <memory>
#include <string>
#include <vector>

namespace bvcalc {

/// L-infinity structure stored as symmetric degree-1 brackets on g[1]:
/// l_n(w) for each basis word w of weight n of S(g[1]). Values are
/// weight-one elements that may carry nonnegative powers of hbar.
class LInfStructure {
 public:
  /// max_size < 0 means "same as max_arity".
  LInfStructure(std::string name, SpacePtr space, int max_arity, int max_size = -1);

  const std::string& name() const { return name_; }
  const GradedSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  int max_arity() const { return max_arity_; }
  /// S(g[1]) truncated at the maximal arity; bracket keys and values live here.
  const CarrierPtr& carrier() const { return carrier_; }
  const std::map<Word, Poly>& brackets() const { return brackets_; }
  bool has_hbar() const;

  void set_bracket(const Word& w, Poly value);
  void add_bracket(const Word& w, const Poly& value);
  Poly bracket(const Word& w) const;
  /// l_n on generators listed in any order (Koszul sign applied).
  Poly evaluate(const std::vector<std::size_t>& gens) const;
  /// Multilinear extension to weight-one arguments with hbar/lambda coefficients.
  Poly evaluate(const std::vector<Poly>& args) const;

  /// Arity, weight-one values, nonnegative hbar and degree +1; throws
  /// ValidationError naming the first bad entry.
  void check_shape() const;

  void rename(std::string name) { name_ = std::move(name); }

 private:
  std::string name_;
  SpacePtr space_;
  int max_arity_;
  CarrierPtr carrier_;
  std::map<Word, Poly> brackets_;
};

using LInfPtr = std::shared_ptr<const LInfStructure>;

/// D_n on a carrier over the structure's space (any view with the parities of g[1]).
Operator extend_coderivation(const LInfStructure& l, int n, const CarrierPtr& carrier);
/// D = sum of all D_n.
Operator total_coderivation(const LInfStructure& l, const CarrierPtr& carrier);

/// Sum_{i+j=n+1} D_i D_j = 0 on all words of weight <= W, reported per n.
Check check_codifferential(const LInfStructure& l, int max_weight);

/// The m-th higher Jacobi expression on the given generators.
Poly jacobi_bracket_form(const LInfStructure& l, const std::vector<std::size_t>& args);
/// Jacobi expressions on every nondecreasing generator tuple of length <= max_m.
Check check_jacobi_forms(const LInfStructure& l, int max_m);

struct LInfMorphism {
  std::string name;
  LInfPtr source;
  LInfPtr target;
  int max_arity = 1;
  /// phi on basis words of S(g[1]) up to max_arity; values in target->carrier(), weight one.
  std::map<Word, Poly> corolla;

  Poly component(const Word& w) const;
  void set(const Word& w, Poly value);
  CarrierPtr key_carrier() const;
  bool has_hbar() const;
  void check_shape() const;
};

LInfMorphism identity_linf(const LInfPtr& l);

/// Coalgebra morphism S(g[1]) -> S(g'[1]) generated by the corolla.
Operator extend_coalgebra_morphism(const LInfMorphism& f, const CarrierPtr& source, const CarrierPtr& target);
Operator extend_coalgebra_morphism(const LInfMorphism& f, int max_weight);

/// Phi D = D' Phi on words of weight <= W.
Check check_linf_morphism(const LInfMorphism& f, int max_weight);

/// Corolla of Psi o Phi up to arity max_arity.
LInfMorphism compose_linf(const LInfMorphism& psi, const LInfMorphism& phi, int max_arity);

/// Given a target structure and a corolla with phi_1 = id on the same space,
/// the unique source structure (up to arity max_arity) making Phi a morphism.
LInfStructure transport_structure(const LInfStructure& target, const std::map<Word, Poly>& corolla, int max_arity,
                                  std::string name);

/// Carrier S(space[1]) or S(space[-1]) for structures over `l`.
CarrierPtr coalgebra_carrier(const LInfStructure& l, int max_weight, int view = 1);

}  // namespace bvcalc
