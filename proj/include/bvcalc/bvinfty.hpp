#pragma once

#include "bvcalc/hseries.hpp"
#include "bvcalc/linfty.hpp"
#include "bvcalc/report.hpp"

#include <memory>
#include <string>
#include <vector>

namespace bvcalc {

/// BV-infinity operator Delta = sum_n hbar^{n-1} Delta_n on a truncated S(U).
struct BVOperator {
  std::string name;
  CarrierPtr carrier;
  Operator delta;
  /// Set when the operator was built from an L-infinity structure.
  LInfPtr origin;

  BVOperator(std::string name, CarrierPtr carrier, Operator delta, LInfPtr origin = nullptr);

  /// Delta_n, the hbar^{n-1} block.
  Operator component(int n) const { return delta.hbar_part(n - 1); }
  /// Largest n with Delta_n != 0 (0 for the zero operator).
  int top_order() const;
  Poly apply(const Poly& p) const { return delta(p); }
};

using BVPtr = std::shared_ptr<const BVOperator>;

struct DopTerm {
  Poly coeff;
  std::vector<std::size_t> derivatives;  // rightmost applied first
};

/// Sum of coeff * d_{g_1} ... d_{g_k}; all terms must share one parity.
Operator differential_operator(const CarrierPtr& c, const std::vector<DopTerm>& terms);

/// Delta = sum_n hbar^{n-1} D_n on S(g[-1]). Throws ValidationError when the
/// structure fails its codifferential check at this truncation.
BVOperator bv_from_linf(const LInfPtr& l, const Truncation& t);

/// Delta(1) = 0, Delta^2 = 0 blockwise, order certificates, degree audit.
Report check_bv(const BVOperator& b, int probe_weight = -1);

struct PurityCertificate {
  std::vector<std::pair<int, bool>> verdicts;  // component n -> verdict
  bool pure = true;
  std::string witness;
};

PurityCertificate check_pure(const BVOperator& b);

/// l^hbar_n(a_1, ..., a_n) = [...[Delta, L_{a_1}], ..., L_{a_n}] 1.
Poly derived_bracket_h(const BVOperator& b, const std::vector<Poly>& args);
/// L_n = hbar^{1-n} l^hbar_n; divisibility is asserted.
Poly modified_bracket(const BVOperator& b, const std::vector<Poly>& args);
/// l_n = hbar^0 part of L_n, for hbar-free arguments.
Poly semiclassical_bracket(const BVOperator& b, const std::vector<Poly>& args);
/// [...[Delta_n, L_{a_1}], ..., L_{a_n}] 1 computed from the component directly.
Poly semiclassical_bracket_direct(const BVOperator& b, const std::vector<Poly>& args);

struct Comparison {
  Poly lhs;
  Poly rhs;
  bool holds() const { return (lhs - rhs).is_zero(); }
  std::string residual() const { return (lhs - rhs).str(); }
};

/// Delta(a_1...a_n) against the shuffle expansion through l^hbar_j.
Comparison verify_magic(const BVOperator& b, const std::vector<Poly>& factors);
/// l^hbar_{n+1} against the deviation of l^hbar_n in slot i (0-based i, i+1).
Comparison verify_deviation(const BVOperator& b, std::size_t i, const std::vector<Poly>& args);
/// Defect of l_n from being a derivation in slot i when a_i is the product b*c.
Poly multiderivation_defect(const BVOperator& b, std::size_t i, const std::vector<Poly>& args, const Poly& left,
                            const Poly& right);
/// Higher Jacobi expression for the l^hbar brackets on the arguments.
Poly jacobi_form_h(const BVOperator& b, const std::vector<Poly>& args);
/// [...[Delta^2, L_{a_1}], ..., L_{a_m}] 1.
Poly square_commutator(const BVOperator& b, const std::vector<Poly>& args);

/// L-infinity structure on U[1] from a pure operator (restriction of l_n),
/// with arity up to the carrier weight.
LInfStructure linf_from_pure_bv(const BVOperator& b, std::string name);

/// |Delta_n| = 3 - 2n; returns an empty string or a description of the violation.
std::string audit_component_degrees(const BVOperator& b);
/// l_n has degree 1 on V[2] for all basis-word tuples of total weight <= probe.
std::string audit_semiclassical_degrees(const BVOperator& b, int max_n, int probe_weight);

/// Basis-word tuples (nondecreasing, non-unit) of length n with total weight <= max_weight.
std::vector<std::vector<Word>> word_tuples(const Carrier& c, int n, int max_weight);
std::vector<Poly> as_polys(const CarrierPtr& c, const std::vector<Word>& words);
std::string format_tuple(const Carrier& c, const std::vector<Word>& words);

}  // namespace bvcalc
