#pragma once

// Brute-force oracles shared by the unit tests. None of these reuse the
// library's shuffle or coproduct machinery.

#include "bvcalc/fixtures.hpp"
#include "bvcalc/morphcalc.hpp"

#include <doctest.h>

#include <functional>
#include <random>
#include <vector>

namespace oracle {

using namespace bvcalc;

// Sign of sorting `odd` into the order given by `key` with adjacent swaps.
inline int bubble_sign(std::vector<std::size_t> key, std::vector<std::uint8_t> odd) {
  int sign = 1;
  for (std::size_t pass = 0; pass < key.size(); ++pass)
    for (std::size_t i = 0; i + 1 < key.size(); ++i)
      if (key[i] > key[i + 1]) {
        std::swap(key[i], key[i + 1]);
        if (odd[i] && odd[i + 1]) sign = -sign;
        std::swap(odd[i], odd[i + 1]);
      }
  return sign;
}

// The monomial x_{f_0} ... x_{f_{k-1}} in normal form, or zero.
inline Poly product_of(const CarrierPtr& c, const std::vector<std::size_t>& factors) {
  std::vector<std::uint8_t> odd;
  std::vector<std::uint8_t> exps(c->dim(), 0);
  for (std::size_t f : factors) {
    odd.push_back(c->odd(f));
    if (c->odd(f) && exps[f]) return Poly(c);
    ++exps[f];
  }
  Word w(exps);
  if (!c->admits(w)) return Poly(c);
  return Poly::monomial(c, w, Scalar(bubble_sign(factors, odd)));
}

// Every exponent vector with weight <= W, odd exponents <= 1, filtered by size.
inline std::size_t count_words(const Carrier& c) {
  std::size_t count = 0;
  std::vector<std::uint8_t> e(c.dim(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t g, int left) {
    if (g == c.dim()) {
      if (c.size(Word(e)) <= c.max_size()) ++count;
      return;
    }
    const int top = c.odd(g) ? std::min(left, 1) : left;
    for (int k = 0; k <= top; ++k) {
      e[g] = static_cast<std::uint8_t>(k);
      rec(g + 1, left - k);
    }
    e[g] = 0;
  };
  rec(0, c.max_weight());
  return count;
}

// Set partitions of {0..m-1}; blocks listed by increasing minimum.
inline void for_each_set_partition(int m, const std::function<void(const std::vector<std::vector<std::size_t>>&)>& fn) {
  std::vector<std::vector<std::size_t>> blocks;
  std::function<void(int)> rec = [&](int i) {
    if (i == m) {
      fn(blocks);
      return;
    }
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      blocks[k].push_back(static_cast<std::size_t>(i));
      rec(i + 1);
      blocks[k].pop_back();
    }
    blocks.push_back({static_cast<std::size_t>(i)});
    rec(i + 1);
    blocks.pop_back();
  };
  rec(0);
}

// exp(phi)(x_1...x_m) = sum over set partitions of +- phi(B_1) ... phi(B_k).
inline Poly exp_by_partitions(const Operator& phi, const Word& w) {
  const CarrierPtr& t = phi.target_ptr();
  if (w.is_unit()) return Poly::one(t);
  const auto factors = w.factors();
  const int m = static_cast<int>(factors.size());
  std::vector<std::uint8_t> odd;
  for (std::size_t f : factors) odd.push_back(phi.source().odd(f));
  Poly out(t);
  for_each_set_partition(m, [&](const std::vector<std::vector<std::size_t>>& blocks) {
    std::vector<std::size_t> order;
    for (const auto& b : blocks) order.insert(order.end(), b.begin(), b.end());
    // Sign of moving position order[i] to slot i: sort the inverse.
    std::vector<std::size_t> key(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) key[order[i]] = i;
    int sign = bubble_sign(key, odd);
    Poly term = Poly::one(t);
    for (const auto& b : blocks) {
      std::vector<std::uint8_t> e(w.dim(), 0);
      for (std::size_t pos : b) ++e[factors[pos]];
      term = multiply(term, phi.on_word(Word(e)));
      if (term.is_zero()) return;
    }
    out += Scalar(sign) * term;
  });
  return out;
}

// Convolution f * g = m (f (x) g) delta, with delta enumerated over subsets.
inline Operator convolve(const Operator& f, const Operator& g) {
  Operator out(f.source_ptr(), f.target_ptr(), false);
  const Carrier& s = f.source();
  for (const Word& w : s.basis()) {
    const auto factors = w.factors();
    const std::size_t m = factors.size();
    std::vector<std::uint8_t> odd;
    for (std::size_t x : factors) odd.push_back(s.odd(x));
    Poly value(f.target_ptr());
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
      std::vector<std::uint8_t> left(w.dim(), 0), right(w.dim(), 0);
      std::vector<std::size_t> order;
      for (std::size_t i = 0; i < m; ++i)
        if (mask >> i & 1) {
          ++left[factors[i]];
          order.push_back(i);
        }
      for (std::size_t i = 0; i < m; ++i)
        if (!(mask >> i & 1)) {
          ++right[factors[i]];
          order.push_back(i);
        }
      std::vector<std::size_t> key(m);
      for (std::size_t i = 0; i < m; ++i) key[order[i]] = i;
      // Equal factors are not distinguished by positions, so each subset is
      // one term of the coproduct with multiplicity built in.
      Poly term = multiply(f.on_word(Word(left)), g.on_word(Word(right)));
      value += Scalar(bubble_sign(key, odd)) * term;
    }
    out.set(w, value);
  }
  return out;
}

inline Operator unit_counit(const CarrierPtr& s, const CarrierPtr& t) {
  Operator e(s, t, false);
  e.set(s->unit(), Poly::one(t));
  return e;
}

// Random degree-0 map with Phi(1) = 1 and hbar powers 0..2.
inline Operator random_unital(const CarrierPtr& s, const CarrierPtr& t, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-2, 2);
  Operator out(s, t, false);
  for (const Word& w : s->basis()) {
    if (w.is_unit()) {
      out.set(w, Poly::one(t));
      continue;
    }
    Poly v(t);
    for (const Word& u : t->basis())
      for (int p = 0; p <= 2; ++p)
        if (t->degree(u) + 2 * p == s->degree(w))
          if (int c = coef(rng); c) v.add_term(Monomial{u, p, 0}, Scalar(c));
    out.set(w, v);
  }
  return out;
}

// Tensors as maps (left word, right word) -> coefficient, hbar-free.
using Tensor = std::map<std::pair<Word, Word>, Scalar>;

inline void add_to(Tensor& t, const Word& a, const Word& b, const Scalar& c) {
  Scalar& slot = t[{a, b}];
  slot += c;
  if (slot.is_zero()) t.erase({a, b});
}

inline Tensor tensor_of(const TensorPoly& p) {
  Tensor t;
  for (const auto& [k, c] : p.terms()) add_to(t, k.first, k.second, c);
  return t;
}

// (D (x) 1) or (1 (x) D), with (1 (x) D)(a (x) b) = (-1)^{|D||a|} a (x) D(b).
inline Tensor apply_tensor(const Operator& d, const Tensor& t, bool left) {
  const Carrier& c = d.source();
  Tensor out;
  for (const auto& [k, coef] : t) {
    const Word& a = k.first;
    const Word& b = k.second;
    for (const auto& [m, v] : d.on_word(left ? a : b)) {
      if (left) {
        add_to(out, m.word, b, coef * v);
      } else {
        const bool flip = d.odd() && c.odd(a);
        add_to(out, a, m.word, flip ? -(coef * v) : coef * v);
      }
    }
  }
  return out;
}

// (a (x) b)(c (x) d) = (-1)^{|b||c|} ac (x) bd, dropping words outside the truncation.
inline Tensor tensor_product(const Carrier& car, const Tensor& x, const Tensor& y) {
  Tensor out;
  for (const auto& [k1, c1] : x)
    for (const auto& [k2, c2] : y) {
      auto ac = merge_words(car, k1.first, k2.first);
      auto bd = merge_words(car, k1.second, k2.second);
      if (!ac || !bd || !car.admits(ac->first) || !car.admits(bd->first)) continue;
      int sign = ac->second * bd->second;
      if (car.odd(k1.second) && car.odd(k2.first)) sign = -sign;
      add_to(out, ac->first, bd->first, Scalar(sign) * c1 * c2);
    }
  return out;
}

}  // namespace oracle

namespace doctest {
template <>
struct StringMaker<bvcalc::Poly> {
  static String convert(const bvcalc::Poly& p) { return p.str().c_str(); }
};
}  // namespace doctest
