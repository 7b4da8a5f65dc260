#include "bvcalc/symalg.hpp"

#include "bvcalc/errors.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace bvcalc {

Word::Word(std::vector<std::uint8_t> exponents) : exps_(std::move(exponents)) {
  weight_ = std::accumulate(exps_.begin(), exps_.end(), 0);
}

std::vector<std::size_t> Word::factors() const {
  std::vector<std::size_t> out;
  out.reserve(static_cast<std::size_t>(weight_));
  for (std::size_t i = 0; i < exps_.size(); ++i)
    for (int e = 0; e < exps_[i]; ++e) out.push_back(i);
  return out;
}

Word word_from_factors(std::size_t dim, const std::vector<std::size_t>& factors) {
  std::vector<std::uint8_t> exps(dim, 0);
  for (std::size_t f : factors) ++exps[f];
  return Word(std::move(exps));
}

std::vector<std::uint8_t> factor_parities(const Carrier& carrier, const std::vector<std::size_t>& factors) {
  std::vector<std::uint8_t> out(factors.size());
  for (std::size_t i = 0; i < factors.size(); ++i) out[i] = carrier.odd(factors[i]) ? 1 : 0;
  return out;
}

// ---------------------------------------------------------------------------
// Carrier

Carrier::Carrier(SpacePtr space, int view_shift, int max_weight, int max_size, int hbar_cap, int lambda_cap)
    : space_(std::move(space)),
      view_shift_(view_shift),
      max_weight_(max_weight),
      max_size_(max_size),
      hbar_cap_(hbar_cap),
      lambda_cap_(lambda_cap) {
  if (!space_) throw MalformedInput("carrier without a space");
  if (max_weight_ < 0 || max_size_ < 0) throw MalformedInput("negative truncation bound");

  // Enumerate admissible exponent vectors depth-first.
  std::vector<std::uint8_t> exps(dim(), 0);
  std::function<void(std::size_t, int, int)> rec = [&](std::size_t g, int weight, int size) {
    if (g == dim()) {
      basis_.emplace_back(exps);
      return;
    }
    const int cap = odd(g) ? 1 : max_weight_;
    const int gsize = (*space_)[g].size;
    for (int e = 0; e <= cap; ++e) {
      if (weight + e > max_weight_ || size + e * gsize > max_size_) break;
      exps[g] = static_cast<std::uint8_t>(e);
      rec(g + 1, weight + e, size + e * gsize);
    }
    exps[g] = 0;
  };
  rec(0, 0, 0);
  std::sort(basis_.begin(), basis_.end());
  for (std::size_t i = 0; i < basis_.size(); ++i) basis_index_.emplace(basis_[i], i);
}

int Carrier::degree(const Word& w) const {
  int d = 0;
  for (std::size_t g = 0; g < w.dim(); ++g) d += w[g] * degree(g);
  return d;
}

int Carrier::size(const Word& w) const {
  int s = 0;
  for (std::size_t g = 0; g < w.dim(); ++g) s += w[g] * (*space_)[g].size;
  return s;
}

std::optional<std::size_t> Carrier::basis_index(const Word& w) const {
  auto it = basis_index_.find(w);
  if (it == basis_index_.end()) return std::nullopt;
  return it->second;
}

Word Carrier::generator_word(std::size_t gen) const {
  std::vector<std::uint8_t> exps(dim(), 0);
  exps.at(gen) = 1;
  return Word(std::move(exps));
}

std::string Carrier::format(const Word& w) const {
  if (w.is_unit()) return "1";
  std::string out;
  for (std::size_t g = 0; g < w.dim(); ++g) {
    if (w[g] == 0) continue;
    if (!out.empty()) out += '*';
    out += (*space_)[g].name;
    if (w[g] > 1) out += "^" + std::to_string(w[g]);
  }
  return out;
}

bool Carrier::same_algebra(const Carrier& other) const {
  if (this == &other) return true;
  if (dim() != other.dim() || max_weight_ != other.max_weight_ || max_size_ != other.max_size_) return false;
  for (std::size_t g = 0; g < dim(); ++g) {
    const auto& a = (*space_)[g];
    const auto& b = other.space()[g];
    if (a.name != b.name || a.size != b.size || degree(g) != other.degree(g)) return false;
  }
  return true;
}

CarrierPtr make_carrier(SpacePtr space, int view_shift, int max_weight, int max_size, int hbar_cap, int lambda_cap) {
  if (max_size < 0) max_size = max_weight;
  return std::make_shared<const Carrier>(std::move(space), view_shift, max_weight, max_size, hbar_cap, lambda_cap);
}

CarrierPtr make_carrier(SpacePtr space, int view_shift, const Truncation& t) {
  return make_carrier(std::move(space), view_shift, t.weight, t.size, t.hbar, t.lambda);
}

CarrierPtr with_view(const CarrierPtr& c, int view_shift) {
  return make_carrier(c->space_ptr(), view_shift, c->max_weight(), c->max_size(), c->hbar_cap(), c->lambda_cap());
}

void require_same_algebra(const Carrier& a, const Carrier& b, const char* context) {
  if (!a.same_algebra(b))
    throw CarrierMismatch(std::string(context) + ": carriers '" + a.space().label() + "' and '" + b.space().label() +
                          "' differ");
}

// ---------------------------------------------------------------------------
// Poly

Poly Poly::one(CarrierPtr carrier) {
  Word u = carrier->unit();
  return monomial(std::move(carrier), std::move(u));
}

Poly Poly::generator(CarrierPtr carrier, std::size_t gen) {
  Word w = carrier->generator_word(gen);
  return monomial(std::move(carrier), std::move(w));
}

Poly Poly::monomial(CarrierPtr carrier, Word word, Scalar coeff, int hbar, int lambda) {
  Poly p(std::move(carrier));
  p.add_term(Monomial{std::move(word), hbar, lambda}, coeff);
  return p;
}

Scalar Poly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Scalar(0) : it->second;
}

void Poly::add_term(const Monomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  if (!carrier_->admits(m.word) || m.lambda > carrier_->lambda_cap()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Poly& Poly::operator+=(const Poly& other) {
  if (!carrier_) carrier_ = other.carrier_;
  if (other.carrier_ && carrier_ != other.carrier_) require_same_algebra(*carrier_, *other.carrier_, "Poly +");
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& other) {
  if (!carrier_) carrier_ = other.carrier_;
  if (other.carrier_ && carrier_ != other.carrier_) require_same_algebra(*carrier_, *other.carrier_, "Poly -");
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Poly& Poly::operator*=(const Scalar& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& [m, v] : out.terms_) v = -v;
  return out;
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.terms_ != b.terms_) return false;
  if (a.carrier_ && b.carrier_ && a.carrier_ != b.carrier_) return a.carrier_->same_algebra(*b.carrier_);
  return true;
}

Poly Poly::times_hbar(int k) const {
  Poly out(carrier_);
  for (const auto& [m, c] : terms_) out.terms_.emplace(Monomial{m.word, m.hbar + k, m.lambda}, c);
  return out;
}

Poly Poly::times_lambda(int k) const {
  Poly out(carrier_);
  for (const auto& [m, c] : terms_) out.add_term(Monomial{m.word, m.hbar, m.lambda + k}, c);
  return out;
}

Poly Poly::hbar_part(int k) const {
  Poly out(carrier_);
  for (const auto& [m, c] : terms_)
    if (m.hbar == k) out.terms_.emplace(Monomial{m.word, 0, m.lambda}, c);
  return out;
}

Poly Poly::lambda_part(int k) const {
  Poly out(carrier_);
  for (const auto& [m, c] : terms_)
    if (m.lambda == k) out.terms_.emplace(Monomial{m.word, m.hbar, 0}, c);
  return out;
}

Poly Poly::truncate_hbar(int max_power) const {
  Poly out(carrier_);
  for (const auto& [m, c] : terms_)
    if (m.hbar <= max_power) out.terms_.emplace(m, c);
  return out;
}

std::optional<int> Poly::min_hbar() const {
  std::optional<int> out;
  for (const auto& [m, c] : terms_)
    if (!out || m.hbar < *out) out = m.hbar;
  return out;
}

std::optional<int> Poly::max_hbar() const {
  std::optional<int> out;
  for (const auto& [m, c] : terms_)
    if (!out || m.hbar > *out) out = m.hbar;
  return out;
}

int Poly::max_lambda() const {
  int out = 0;
  for (const auto& [m, c] : terms_) out = std::max(out, m.lambda);
  return out;
}

bool Poly::has_lambda() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.lambda != 0; });
}

int Poly::max_weight() const {
  int out = 0;
  for (const auto& [m, c] : terms_) out = std::max(out, m.word.weight());
  return out;
}

int Poly::max_size() const {
  int out = 0;
  for (const auto& [m, c] : terms_) out = std::max(out, carrier_->size(m.word));
  return out;
}

std::optional<int> Poly::degree() const {
  std::optional<int> out;
  for (const auto& [m, c] : terms_) {
    int d = carrier_->degree(m.word) + 2 * m.hbar;
    if (out && *out != d) return std::nullopt;
    out = d;
  }
  return out;
}

std::optional<bool> Poly::parity() const {
  std::optional<bool> out;
  for (const auto& [m, c] : terms_) {
    bool p = carrier_->odd(m.word);
    if (out && *out != p) return std::nullopt;
    out = p;
  }
  return out ? out : std::optional<bool>(false);
}

Poly Poly::recarried(CarrierPtr carrier) const {
  if (carrier->dim() != carrier_->dim()) throw CarrierMismatch("recarried: dimension differs");
  Poly out(std::move(carrier));
  for (const auto& [m, c] : terms_) out.add_term(m, c);
  return out;
}

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Scalar mag = c.sign() < 0 ? -c : c;
    if (first) {
      if (c.sign() < 0) os << "-";
    } else {
      os << (c.sign() < 0 ? " - " : " + ");
    }
    first = false;
    std::vector<std::string> parts;
    if (!mag.is_one()) parts.push_back(mag.str());
    if (m.lambda != 0) parts.push_back(m.lambda == 1 ? "lambda" : "lambda^" + std::to_string(m.lambda));
    if (m.hbar != 0) parts.push_back(m.hbar == 1 ? "hbar" : "hbar^" + std::to_string(m.hbar));
    if (!m.word.is_unit()) parts.push_back(carrier_->format(m.word));
    if (parts.empty()) parts.push_back("1");
    for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "*" : "") << parts[i];
  }
  return os.str();
}

bool require_parity(const Poly& p, const char* context) {
  auto par = p.parity();
  if (!par) throw MalformedInput(std::string(context) + ": element " + p.str() + " is not homogeneous");
  return *par;
}

// ---------------------------------------------------------------------------
// normal forms and products

std::optional<std::pair<Word, int>> normalize(const Carrier& carrier, const std::vector<std::size_t>& factors) {
  for (std::size_t f : factors)
    if (f >= carrier.dim()) throw MalformedInput("normalize: generator index outside the space");
  // Sorting permutation: stable sort of positions by generator index.
  std::vector<std::size_t> perm(factors.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return factors[a] < factors[b]; });
  std::vector<std::uint8_t> exps(carrier.dim(), 0);
  for (std::size_t f : factors) {
    if (carrier.odd(f) && exps[f] == 1) return std::nullopt;
    ++exps[f];
  }
  auto parities = factor_parities(carrier, factors);
  return std::make_pair(Word(std::move(exps)), koszul_sign_parity(parities, perm));
}

std::optional<std::pair<Word, int>> normalize(const Carrier& carrier, const std::vector<std::string>& names) {
  std::vector<std::size_t> idx;
  idx.reserve(names.size());
  for (const auto& n : names) {
    auto i = carrier.space().find(n);
    if (!i) throw MalformedInput("generator '" + n + "' does not belong to space '" + carrier.space().label() + "'");
    idx.push_back(*i);
  }
  return normalize(carrier, idx);
}

std::optional<std::pair<Word, int>> merge_words(const Carrier& carrier, const Word& u, const Word& v) {
  const std::size_t n = carrier.dim();
  std::vector<std::uint8_t> exps(n);
  int inversions = 0;
  int odd_in_u_after = 0;  // odd factors of u with index > current
  for (std::size_t g = 0; g < n; ++g) odd_in_u_after += (carrier.odd(g) && u[g]) ? 1 : 0;
  for (std::size_t g = 0; g < n; ++g) {
    const bool odd = carrier.odd(g);
    if (odd && u[g] && v[g]) return std::nullopt;
    if (odd && u[g]) --odd_in_u_after;
    if (odd && v[g]) inversions += odd_in_u_after;
    exps[g] = static_cast<std::uint8_t>(u[g] + v[g]);
  }
  return std::make_pair(Word(std::move(exps)), (inversions % 2) ? -1 : 1);
}

Poly multiply(const Poly& p, const Poly& q) {
  if (p.carrier_ptr() != q.carrier_ptr()) require_same_algebra(p.carrier(), q.carrier(), "multiply");
  const Carrier& c = p.carrier();
  Poly out(p.carrier_ptr());
  for (const auto& [mp, cp] : p) {
    for (const auto& [mq, cq] : q) {
      if (mp.word.weight() + mq.word.weight() > c.max_weight()) continue;
      if (mp.lambda + mq.lambda > c.lambda_cap()) continue;
      auto merged = merge_words(c, mp.word, mq.word);
      if (!merged) continue;
      Scalar coeff = cp * cq;
      if (merged->second < 0) coeff = -coeff;
      out.add_term(Monomial{std::move(merged->first), mp.hbar + mq.hbar, mp.lambda + mq.lambda}, coeff);
    }
  }
  return out;
}

Poly left_derivative(const Poly& p, std::size_t gen) {
  const Carrier& c = p.carrier();
  Poly out(p.carrier_ptr());
  for (const auto& [m, coef] : p) {
    const int e = m.word[gen];
    if (e == 0) continue;
    bool prefix = false;
    for (std::size_t g = 0; g < gen; ++g)
      if (c.odd(g) && (m.word[g] % 2)) prefix = !prefix;
    std::vector<std::uint8_t> exps = m.word.exponents();
    exps[gen] -= 1;
    Scalar k(e);
    if (prefix && c.odd(gen)) k = -k;
    out.add_term(Monomial{Word(std::move(exps)), m.hbar, m.lambda}, coef * k);
  }
  return out;
}

Poly project_weight(const Poly& p, int k) {
  Poly out(p.carrier_ptr());
  for (const auto& [m, c] : p)
    if (m.word.weight() == k) out.add_term(m, c);
  return out;
}

// ---------------------------------------------------------------------------
// tensors and shuffles

void TensorPoly::add_term(const Word& left, const Word& right, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(Key{left, right}, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Scalar TensorPoly::coefficient(const Word& left, const Word& right) const {
  auto it = terms_.find(Key{left, right});
  return it == terms_.end() ? Scalar(0) : it->second;
}

std::string TensorPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.str() << "*(" << carrier_->format(k.first) << ")(x)(" << carrier_->format(k.second) << ")";
  }
  return os.str();
}

void for_each_shuffle(const std::vector<int>& block_sizes,
                      const std::function<void(const std::vector<std::size_t>&)>& fn) {
  int m = 0;
  for (int s : block_sizes) {
    if (s < 0) throw MalformedInput("negative shuffle block size");
    m += s;
  }
  std::vector<std::size_t> perm;
  perm.reserve(static_cast<std::size_t>(m));
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  // Fill block b by choosing an increasing subset of the unused positions.
  std::function<void(std::size_t, int, std::size_t)> rec = [&](std::size_t block, int filled, std::size_t start) {
    if (block == block_sizes.size()) {
      fn(perm);
      return;
    }
    if (filled == block_sizes[block]) {
      rec(block + 1, 0, 0);
      return;
    }
    for (std::size_t pos = start; pos < static_cast<std::size_t>(m); ++pos) {
      if (used[pos]) continue;
      used[pos] = true;
      perm.push_back(pos);
      rec(block, filled + 1, pos + 1);
      perm.pop_back();
      used[pos] = false;
    }
  };
  rec(0, 0, 0);
}

std::vector<std::vector<std::size_t>> shuffles(const std::vector<int>& block_sizes) {
  std::vector<std::vector<std::size_t>> out;
  for_each_shuffle(block_sizes, [&](const std::vector<std::size_t>& p) { out.push_back(p); });
  return out;
}

std::vector<std::vector<int>> compositions(int m) {
  std::vector<std::vector<int>> out;
  if (m <= 0) return out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int left) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (int i = 1; i <= left; ++i) {
      cur.push_back(i);
      rec(left - i);
      cur.pop_back();
    }
  };
  rec(m);
  return out;
}

TensorPoly shuffle_coproduct(const CarrierPtr& carrier, const Word& w) {
  TensorPoly out(carrier);
  const auto factors = w.factors();
  const auto parities = factor_parities(*carrier, factors);
  const int m = static_cast<int>(factors.size());
  const std::size_t dim = carrier->dim();
  for (int n = 0; n <= m; ++n) {
    for_each_shuffle({n, m - n}, [&](const std::vector<std::size_t>& perm) {
      std::vector<std::size_t> left, right;
      for (int i = 0; i < n; ++i) left.push_back(factors[perm[static_cast<std::size_t>(i)]]);
      for (int i = n; i < m; ++i) right.push_back(factors[perm[static_cast<std::size_t>(i)]]);
      out.add_term(word_from_factors(dim, left), word_from_factors(dim, right),
                   Scalar(koszul_sign_parity(parities, perm)));
    });
  }
  return out;
}

TensorPoly shuffle_coproduct(const Poly& p) {
  TensorPoly out(p.carrier_ptr());
  for (const auto& [m, c] : p) {
    if (m.hbar != 0 || m.lambda != 0) throw MalformedInput("shuffle_coproduct: hbar/lambda-dependent input");
    auto t = shuffle_coproduct(p.carrier_ptr(), m.word);
    for (const auto& [k, v] : t.terms()) out.add_term(k.first, k.second, c * v);
  }
  return out;
}

}  // namespace bvcalc
