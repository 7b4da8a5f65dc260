#pragma once

#include "bvcalc/graded.hpp"
#include "bvcalc/scalar.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bvcalc {

/// Monomial of the free graded-commutative algebra, stored as an exponent
/// vector over the ordered basis. Odd generators have exponent <= 1.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<std::uint8_t> exponents);
  static Word unit(std::size_t dim) { return Word(std::vector<std::uint8_t>(dim, 0)); }

  const std::vector<std::uint8_t>& exponents() const { return exps_; }
  std::uint8_t operator[](std::size_t i) const { return exps_[i]; }
  std::size_t dim() const { return exps_.size(); }
  /// Number of factors.
  int weight() const { return weight_; }
  bool is_unit() const { return weight_ == 0; }

  /// Generator indices with multiplicity, in basis order.
  std::vector<std::size_t> factors() const;

  friend bool operator==(const Word& a, const Word& b) { return a.exps_ == b.exps_; }
  /// Lower weight first; within a weight, earlier generators first.
  friend bool operator<(const Word& a, const Word& b) {
    if (a.weight_ != b.weight_) return a.weight_ < b.weight_;
    return b.exps_ < a.exps_;
  }

 private:
  std::vector<std::uint8_t> exps_;
  int weight_ = 0;
};

/// S(U) read through the view U = space[view_shift], truncated to words of
/// weight <= max_weight and total generator size <= max_size. Also records the
/// hbar window H used by checks and the lambda cap applied to products.
class Carrier {
 public:
  Carrier(SpacePtr space, int view_shift, int max_weight, int max_size, int hbar_cap, int lambda_cap);

  const GradedSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  int view_shift() const { return view_shift_; }
  int max_weight() const { return max_weight_; }
  int max_size() const { return max_size_; }
  int hbar_cap() const { return hbar_cap_; }
  int lambda_cap() const { return lambda_cap_; }
  std::size_t dim() const { return space_->dim(); }

  int degree(std::size_t gen) const { return shifted_degree((*space_)[gen], view_shift_); }
  bool odd(std::size_t gen) const { return is_odd(degree(gen)); }
  int degree(const Word& w) const;
  bool odd(const Word& w) const { return is_odd(degree(w)); }
  int size(const Word& w) const;
  bool admits(const Word& w) const { return w.weight() <= max_weight_ && size(w) <= max_size_; }

  /// All admissible words, in Word order.
  const std::vector<Word>& basis() const { return basis_; }
  std::optional<std::size_t> basis_index(const Word& w) const;
  Word unit() const { return Word::unit(dim()); }
  Word generator_word(std::size_t gen) const;
  std::string format(const Word& w) const;

  /// Structural equality of the truncated algebra: generator names, view
  /// degrees, sizes and the two truncation bounds. H and lambda caps are
  /// computation windows and are not compared.
  bool same_algebra(const Carrier& other) const;

 private:
  SpacePtr space_;
  int view_shift_;
  int max_weight_;
  int max_size_;
  int hbar_cap_;
  int lambda_cap_;
  std::vector<Word> basis_;
  std::map<Word, std::size_t> basis_index_;
};

using CarrierPtr = std::shared_ptr<const Carrier>;

/// Bounds shared by a computation: weight W, size (negative means W), hbar
/// window H, lambda cap.
struct Truncation {
  int weight = 4;
  int size = -1;
  int hbar = 4;
  int lambda = 3;
};

/// max_size < 0 means "same as max_weight".
CarrierPtr make_carrier(SpacePtr space, int view_shift, int max_weight, int max_size = -1, int hbar_cap = 4,
                        int lambda_cap = 3);
CarrierPtr make_carrier(SpacePtr space, int view_shift, const Truncation& t);
CarrierPtr with_view(const CarrierPtr& c, int view_shift);
void require_same_algebra(const Carrier& a, const Carrier& b, const char* context);

struct Monomial {
  Word word;
  int hbar = 0;
  int lambda = 0;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend bool operator<(const Monomial& a, const Monomial& b) {
    if (!(a.word == b.word)) return a.word < b.word;
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    return a.hbar < b.hbar;
  }
};

/// Finite exact linear combination of monomials, with polynomial (Laurent in
/// hbar) dependence on the even central variables hbar (degree 2) and lambda
/// (degree 0).
class Poly {
 public:
  using Terms = std::map<Monomial, Scalar>;

  Poly() = default;
  explicit Poly(CarrierPtr carrier) : carrier_(std::move(carrier)) {}

  static Poly one(CarrierPtr carrier);
  static Poly generator(CarrierPtr carrier, std::size_t gen);
  static Poly monomial(CarrierPtr carrier, Word word, Scalar coeff = Scalar(1), int hbar = 0, int lambda = 0);

  const Carrier& carrier() const { return *carrier_; }
  const CarrierPtr& carrier_ptr() const { return carrier_; }
  const Terms& terms() const { return terms_; }
  Terms::const_iterator begin() const { return terms_.begin(); }
  Terms::const_iterator end() const { return terms_.end(); }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  Scalar coefficient(const Monomial& m) const;

  /// Adds c*m; words outside the truncation and lambda powers above the cap are dropped.
  void add_term(const Monomial& m, const Scalar& c);

  Poly& operator+=(const Poly& other);
  Poly& operator-=(const Poly& other);
  Poly& operator*=(const Scalar& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Scalar& c, Poly a) { return a *= c; }
  Poly operator-() const;
  friend bool operator==(const Poly& a, const Poly& b);

  Poly times_hbar(int k) const;
  Poly times_lambda(int k) const;
  /// Coefficient of hbar^k, returned hbar-free.
  Poly hbar_part(int k) const;
  Poly lambda_part(int k) const;
  /// Drops every term with hbar power above `max_power`.
  Poly truncate_hbar(int max_power) const;
  std::optional<int> min_hbar() const;
  std::optional<int> max_hbar() const;
  int max_lambda() const;
  bool has_lambda() const;
  int max_weight() const;
  int max_size() const;

  /// Total degree (view degree + 2 per hbar) if homogeneous; nullopt for
  /// inhomogeneous or zero elements.
  std::optional<int> degree() const;
  /// Parity if homogeneous mod 2 (zero counts as even); nullopt otherwise.
  std::optional<bool> parity() const;

  /// Same terms read in another carrier over the same generators.
  Poly recarried(CarrierPtr carrier) const;

  std::string str() const;

 private:
  CarrierPtr carrier_;
  Terms terms_;
};

/// Parity of a homogeneous element; throws MalformedInput otherwise.
bool require_parity(const Poly& p, const char* context);

/// Sorts the factors into normal form. Returns the word and the Koszul sign
/// of the sorting permutation, or nullopt when an odd generator repeats.
std::optional<std::pair<Word, int>> normalize(const Carrier& carrier, const std::vector<std::size_t>& factors);
/// Name-based overload; names not in the carrier's space are malformed input.
std::optional<std::pair<Word, int>> normalize(const Carrier& carrier, const std::vector<std::string>& names);

/// Product u*v in normal form with its sign, or nullopt if an odd square appears.
std::optional<std::pair<Word, int>> merge_words(const Carrier& carrier, const Word& u, const Word& v);

/// Graded-commutative product, truncated to the carrier.
Poly multiply(const Poly& p, const Poly& q);

/// Left derivative by a generator: d(u g^e v) = (-1)^{|g||u|} e u g^{e-1} v.
Poly left_derivative(const Poly& p, std::size_t gen);

/// Terms of weight exactly k.
Poly project_weight(const Poly& p, int k);

class TensorPoly {
 public:
  using Key = std::pair<Word, Word>;
  explicit TensorPoly(CarrierPtr carrier) : carrier_(std::move(carrier)) {}

  const Carrier& carrier() const { return *carrier_; }
  const std::map<Key, Scalar>& terms() const { return terms_; }
  void add_term(const Word& left, const Word& right, const Scalar& c);
  Scalar coefficient(const Word& left, const Word& right) const;
  friend bool operator==(const TensorPoly& a, const TensorPoly& b) { return a.terms_ == b.terms_; }
  std::string str() const;

 private:
  CarrierPtr carrier_;
  std::map<Key, Scalar> terms_;
};

/// Permutations sigma (sigma[i] = source position placed at i) that increase
/// within each consecutive block of the given sizes.
std::vector<std::vector<std::size_t>> shuffles(const std::vector<int>& block_sizes);
void for_each_shuffle(const std::vector<int>& block_sizes,
                      const std::function<void(const std::vector<std::size_t>&)>& fn);
/// Ordered compositions (i_1, ..., i_k) of m with every part >= 1.
std::vector<std::vector<int>> compositions(int m);

/// Shuffle comultiplication on a single word.
TensorPoly shuffle_coproduct(const CarrierPtr& carrier, const Word& w);
TensorPoly shuffle_coproduct(const Poly& p);

/// Word from a subsequence of a factor list (positions must be increasing
/// in the factor list of a normal-form word, so no sign arises).
Word word_from_factors(std::size_t dim, const std::vector<std::size_t>& factors);

/// Parities of a factor list in the carrier's view.
std::vector<std::uint8_t> factor_parities(const Carrier& carrier, const std::vector<std::size_t>& factors);

}  // namespace bvcalc
