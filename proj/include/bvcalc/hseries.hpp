#pragma once

#include "bvcalc/symalg.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bvcalc {

/// Linear map S(U) -> S(U')[hbar, hbar^-1][lambda] tabulated on the basis of
/// the truncated source. The coefficient of hbar^p is the block at power p.
class Operator {
 public:
  Operator(CarrierPtr source, CarrierPtr target, bool odd);

  static Operator identity(CarrierPtr carrier);
  static Operator tabulate(CarrierPtr source, CarrierPtr target, bool odd,
                           const std::function<Poly(const Word&)>& image);

  const Carrier& source() const { return *source_; }
  const Carrier& target() const { return *target_; }
  const CarrierPtr& source_ptr() const { return source_; }
  const CarrierPtr& target_ptr() const { return target_; }
  bool odd() const { return odd_; }
  const std::map<Word, Poly>& table() const { return table_; }
  bool is_zero() const { return table_.empty(); }

  /// Replaces the image of a basis word. Zero images are not stored.
  void set(const Word& w, Poly image);
  void add(const Word& w, const Poly& image);

  Poly on_word(const Word& w) const;
  Poly operator()(const Poly& p) const;

  /// The block at hbar^k, as an hbar-free operator.
  Operator hbar_part(int k) const;
  std::optional<int> min_hbar() const;
  std::optional<int> max_hbar() const;
  Operator times_hbar(int k) const;

  Operator& operator+=(const Operator& other);
  Operator& operator-=(const Operator& other);
  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  Operator scaled(const Scalar& c) const;
  friend bool operator==(const Operator& a, const Operator& b);

  /// First basis word on which two operators differ.
  friend std::optional<Word> first_difference(const Operator& a, const Operator& b);

  std::string str() const;

 private:
  CarrierPtr source_;
  CarrierPtr target_;
  bool odd_;
  std::map<Word, Poly> table_;
};

/// outer o inner.
Operator compose(const Operator& outer, const Operator& inner);

/// Checks that every stored term has degree deg(input) + d, hbar counted
/// with degree 2. Returns the first offending word, if any.
std::optional<Word> degree_violation(const Operator& op, int d);
/// Common degree of all stored terms; nullopt when empty or mixed.
std::optional<int> uniform_degree(const Operator& op);

/// Algebra morphism used in relative commutators: the identity, or the
/// map induced by the zero map on generators (constant term times 1).
struct AlgebraMap {
  enum class Kind { identity, augmentation };
  Kind kind = Kind::identity;
  CarrierPtr target;

  static AlgebraMap identity_on(CarrierPtr c) { return {Kind::identity, std::move(c)}; }
  static AlgebraMap augmentation_into(CarrierPtr c) { return {Kind::augmentation, std::move(c)}; }
  Poly operator()(const Poly& a) const;
};

using LinearMap = std::function<Poly(const Poly&)>;

/// [...[D, L_{a_1}], ..., L_{a_k}](b) over f, evaluated lazily:
/// C_k(b) = C_{k-1}(a_k b) - (-1)^{|a_k| |C_{k-1}|} f(a_k) C_{k-1}(b).
Poly iterated_commutator(const LinearMap& d, bool d_odd, const std::vector<Poly>& args, const AlgebraMap& f,
                         const Poly& b);

/// The operator b -> D(ab) - (-1)^{|a||D|} f(a) D(b), tabulated on the
/// source words whose product with a stays inside the truncation.
Operator commutator_with_mult(const Operator& d, const Poly& a, const AlgebraMap& f);

/// Multiplication operator L_a on a carrier.
Operator mult_operator(const Poly& a);

struct OrderResult {
  bool holds = true;
  int order = 0;
  int probe_weight = 0;
  std::size_t probes = 0;
  std::vector<Word> witness_args;
  Word witness_input;
  Poly witness_value;
};

/// Tests that every (order+1)-fold commutator of d with multiplication
/// operators vanishes, with a_0..a_order ranging over non-unit basis words
/// and b over basis words, total weight of a's and b at most probe_weight.
OrderResult diff_order(const Operator& d, int order, const AlgebraMap& f, int probe_weight);

/// Sum over k of coeff(k) * sum over compositions (i_1..i_k) of the weight
/// and shuffles of block(first i_1 factors) * ... * block(last i_k), with
/// Koszul signs from the source. The block values are multiplied in target.
Poly block_expansion(const Carrier& source, const Word& w, const CarrierPtr& target,
                     const std::function<Poly(const Word&)>& block, const std::function<Scalar(int)>& coeff);

/// sum_{k=0}^{cap} x^k / k!, for x without a lambda^0 part; the cap is the
/// carrier's lambda cap.
Poly exp_series(const Poly& x);

}  // namespace bvcalc
