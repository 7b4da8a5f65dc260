#include "bvcalc/graded.hpp"

#include "bvcalc/errors.hpp"

namespace bvcalc {

GradedSpace::GradedSpace(std::string label, std::vector<Generator> generators)
    : label_(std::move(label)), generators_(std::move(generators)) {
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    const auto& g = generators_[i];
    if (g.name.empty()) throw MalformedInput("generator with empty name in space '" + label_ + "'");
    if (g.size < 0) throw MalformedInput("generator '" + g.name + "' has negative size");
    if (!index_.emplace(g.name, i).second)
      throw MalformedInput("duplicate generator '" + g.name + "' in space '" + label_ + "'");
  }
}

std::optional<std::size_t> GradedSpace::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

GradedSpace GradedSpace::shifted(int offset, std::string label) const {
  std::vector<Generator> gens = generators_;
  for (auto& g : gens) g.degree -= offset;
  return GradedSpace(std::move(label), std::move(gens));
}

SpacePtr make_space(std::string label, std::vector<Generator> generators) {
  return std::make_shared<const GradedSpace>(std::move(label), std::move(generators));
}

int Shift::degree(std::size_t gen) const { return shifted_degree((*base)[gen], offset); }

int shifted_degree(const Generator& g, int n) { return g.degree - n; }

int koszul_sign_parity(std::span<const std::uint8_t> odd, std::span<const std::size_t> permutation) {
  const std::size_t m = odd.size();
  if (permutation.size() != m) throw MalformedInput("permutation length differs from word length");
  std::vector<bool> seen(m, false);
  for (std::size_t p : permutation) {
    if (p >= m || seen[p]) throw MalformedInput("permutation is not a bijection");
    seen[p] = true;
  }
  int inversions = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!odd[permutation[i]]) continue;
    for (std::size_t j = i + 1; j < m; ++j)
      if (odd[permutation[j]] && permutation[i] > permutation[j]) ++inversions;
  }
  return (inversions % 2) ? -1 : 1;
}

int koszul_sign(std::span<const int> degrees, std::span<const std::size_t> permutation) {
  std::vector<std::uint8_t> odd(degrees.size());
  for (std::size_t i = 0; i < degrees.size(); ++i) odd[i] = is_odd(degrees[i]) ? 1 : 0;
  return koszul_sign_parity(odd, permutation);
}

}  // namespace bvcalc
