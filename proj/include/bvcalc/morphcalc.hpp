#pragma once

#include "bvcalc/bvinfty.hpp"
#include "bvcalc/hseries.hpp"
#include "bvcalc/linfty.hpp"
#include "bvcalc/report.hpp"

#include <memory>
#include <string>

namespace bvcalc {

/// phi = sum_n hbar^{n-1} phi_n from a free BV algebra S(U) to another BV algebra.
struct BVMorphism {
  std::string name;
  BVPtr source;
  BVPtr target;
  Operator phi;

  BVMorphism(std::string name, BVPtr source, BVPtr target, Operator phi);
  Operator component(int n) const { return phi.hbar_part(n - 1); }
};

/// Shuffle form of the exponential of a map with phi(1) = 0.
Operator exp_map(const Operator& phi);
/// Inverse of exp_map, for maps with Phi(1) = 1.
Operator log_map(const Operator& big_phi);

BVMorphism identity_bv(const BVPtr& b);

/// phi(1) = 0, degree 0, phi_n kills S^{>n}, exp(phi) Delta = Delta' exp(phi).
Report check_bv_morphism(const BVMorphism& f);
PurityCertificate check_pure(const BVMorphism& f);

/// log(exp(psi) o exp(phi)).
BVMorphism compose_diamond(const BVMorphism& psi, const BVMorphism& phi);
/// psi o exp(phi); requires phi pure.
BVMorphism compose_direct(const BVMorphism& psi, const BVMorphism& phi);

/// phi_hbar(w) = hbar^{|w|-1} phi(w) between the BV operators of the endpoints.
BVMorphism linf_to_bv(const LInfMorphism& f, const BVPtr& source, const BVPtr& target);
BVMorphism linf_to_bv(const LInfMorphism& f, const Truncation& t);
/// Inverse of linf_to_bv on pure morphisms.
LInfMorphism bv_to_linf(const BVMorphism& f);

/// L-infinity structure on V[1] (one generator per basis word of V, size =
/// weight) given by the modified brackets L_n, up to the given arity.
LInfStructure modified_structure(const BVOperator& v, int max_arity, const std::string& name);
/// Generator of the modified structure's space standing for a basis word of V.
std::string word_generator_name(const Carrier& v, const Word& w);

/// The projection S(V) -> V with S(V) carrying the BV operator of the
/// modified structure. `weight` bounds the number of V-factors.
BVMorphism p1_morphism(const BVPtr& v, int weight);
/// phi diamond p1 : S(V) -> V'.
BVMorphism step1_compose_with_p1(const BVMorphism& f, int weight);

/// e^{S/hbar} truncated at the lambda cap.
Poly qme_exponential(const Poly& s);
Report qme_check(const BVOperator& b, const Poly& s);
/// S' = hbar phi(e^{S/hbar}).
Poly qme_propagate(const BVMorphism& f, const Poly& s);
/// exp(phi)(e^S) against e^{phi(e^S)}, for S of degree 0, linear in the
/// generators and without a lambda^0 part.
Comparison exp_on_exponential(const Operator& phi, const Poly& s);

/// f|_{S^k} = hbar^{1-k} psi|_{S^k}, as a morphism into `target_h`,
/// which must be the modified structure of psi's target.
LInfMorphism adjunction_forward(const BVMorphism& psi, const LInfPtr& target_h);
/// phi|_{S^k} = hbar^{k-1} f|_{S^k}.
BVMorphism adjunction_backward(const LInfMorphism& f, const BVPtr& source, const BVPtr& target);

/// psi(Delta(x_1...x_m)) against the shuffle expansion through the target's
/// l^hbar_k, for every source word of weight m.
Check verify_top_terms(const BVMorphism& psi, int m);

/// First source word on which the two morphisms differ, if any.
std::optional<Word> first_difference(const LInfMorphism& a, const LInfMorphism& b);

}  // namespace bvcalc
