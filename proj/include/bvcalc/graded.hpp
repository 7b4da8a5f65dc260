#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace bvcalc {

inline bool is_odd(int degree) { return (degree % 2) != 0; }

/// A named homogeneous basis element. `size` is the filtration weight used
/// for truncation; it is 1 for ordinary generators and larger when a
/// generator stands for a monomial of some other algebra.
struct Generator {
  std::string name;
  int degree = 0;
  int size = 1;

  friend bool operator==(const Generator&, const Generator&) = default;
};

/// Ordered basis of a graded vector space. The list order is the total
/// order used for monomial normal forms.
class GradedSpace {
 public:
  GradedSpace() = default;
  GradedSpace(std::string label, std::vector<Generator> generators);

  const std::string& label() const { return label_; }
  std::size_t dim() const { return generators_.size(); }
  const Generator& operator[](std::size_t i) const { return generators_[i]; }
  const std::vector<Generator>& generators() const { return generators_; }
  std::optional<std::size_t> find(const std::string& name) const;

  /// Same names and sizes, every degree lowered by `offset`.
  GradedSpace shifted(int offset, std::string label) const;

 private:
  std::string label_;
  std::vector<Generator> generators_;
  std::unordered_map<std::string, std::size_t> index_;
};

using SpacePtr = std::shared_ptr<const GradedSpace>;

SpacePtr make_space(std::string label, std::vector<Generator> generators);

/// View of a space through the translation V[n], V[n]^p := V^{n+p}.
struct Shift {
  SpacePtr base;
  int offset = 0;

  int degree(std::size_t gen) const;
};

/// Degree of `g` seen in base[n].
int shifted_degree(const Generator& g, int n);

/// Sign of rearranging x_0 ... x_{m-1} into x_{p[0]} ... x_{p[m-1]}:
/// (-1)^k with k the number of inverted pairs whose degrees are both odd.
/// Throws MalformedInput unless `permutation` is a bijection of {0..m-1}.
int koszul_sign(std::span<const int> degrees, std::span<const std::size_t> permutation);

/// Same as koszul_sign but with parities (0 even, 1 odd) given directly.
int koszul_sign_parity(std::span<const std::uint8_t> odd, std::span<const std::size_t> permutation);

}  // namespace bvcalc
