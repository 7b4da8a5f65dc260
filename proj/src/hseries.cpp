#include "bvcalc/hseries.hpp"

#include "bvcalc/errors.hpp"

#include <sstream>

namespace bvcalc {

Operator::Operator(CarrierPtr source, CarrierPtr target, bool odd)
    : source_(std::move(source)), target_(std::move(target)), odd_(odd) {
  if (!source_ || !target_) throw MalformedInput("operator without carriers");
}

Operator Operator::identity(CarrierPtr carrier) {
  Operator op(carrier, carrier, false);
  for (const Word& w : carrier->basis()) op.set(w, Poly::monomial(carrier, w));
  return op;
}

Operator Operator::tabulate(CarrierPtr source, CarrierPtr target, bool odd,
                            const std::function<Poly(const Word&)>& image) {
  Operator op(source, target, odd);
  for (const Word& w : source->basis()) op.set(w, image(w));
  return op;
}

void Operator::set(const Word& w, Poly image) {
  if (!source_->admits(w)) throw MalformedInput("operator entry outside the source truncation");
  if (image.is_zero()) {
    table_.erase(w);
    return;
  }
  if (image.carrier_ptr() != target_) {
    require_same_algebra(image.carrier(), *target_, "operator entry");
    image = image.recarried(target_);
  }
  table_.insert_or_assign(w, std::move(image));
}

void Operator::add(const Word& w, const Poly& image) {
  Poly sum = on_word(w);
  sum += image;
  set(w, std::move(sum));
}

Poly Operator::on_word(const Word& w) const {
  auto it = table_.find(w);
  if (it == table_.end()) return Poly(target_);
  return it->second;
}

Poly Operator::operator()(const Poly& p) const {
  if (!p.carrier_ptr()) return Poly(target_);
  if (p.carrier_ptr() != source_) require_same_algebra(p.carrier(), *source_, "operator application");
  Poly out(target_);
  for (const auto& [m, c] : p) {
    auto it = table_.find(m.word);
    if (it == table_.end()) continue;
    for (const auto& [mi, ci] : it->second)
      out.add_term(Monomial{mi.word, mi.hbar + m.hbar, mi.lambda + m.lambda}, ci * c);
  }
  return out;
}

Operator Operator::hbar_part(int k) const {
  Operator out(source_, target_, odd_);
  for (const auto& [w, img] : table_) out.set(w, img.hbar_part(k));
  return out;
}

std::optional<int> Operator::min_hbar() const {
  std::optional<int> out;
  for (const auto& [w, img] : table_) {
    auto h = img.min_hbar();
    if (h && (!out || *h < *out)) out = h;
  }
  return out;
}

std::optional<int> Operator::max_hbar() const {
  std::optional<int> out;
  for (const auto& [w, img] : table_) {
    auto h = img.max_hbar();
    if (h && (!out || *h > *out)) out = h;
  }
  return out;
}

Operator Operator::times_hbar(int k) const {
  Operator out(source_, target_, odd_);
  for (const auto& [w, img] : table_) out.table_.emplace(w, img.times_hbar(k));
  return out;
}

Operator& Operator::operator+=(const Operator& other) {
  require_same_algebra(*source_, *other.source_, "operator sum (source)");
  require_same_algebra(*target_, *other.target_, "operator sum (target)");
  for (const auto& [w, img] : other.table_) add(w, img);
  return *this;
}

Operator& Operator::operator-=(const Operator& other) {
  require_same_algebra(*source_, *other.source_, "operator difference (source)");
  require_same_algebra(*target_, *other.target_, "operator difference (target)");
  for (const auto& [w, img] : other.table_) add(w, -img);
  return *this;
}

Operator Operator::scaled(const Scalar& c) const {
  Operator out(source_, target_, odd_);
  for (const auto& [w, img] : table_) out.set(w, c * img);
  return out;
}

bool operator==(const Operator& a, const Operator& b) {
  if (!a.source_->same_algebra(*b.source_) || !a.target_->same_algebra(*b.target_)) return false;
  if (a.table_.size() != b.table_.size()) return false;
  for (const auto& [w, img] : a.table_) {
    auto it = b.table_.find(w);
    if (it == b.table_.end() || !(it->second.terms() == img.terms())) return false;
  }
  return true;
}

std::optional<Word> first_difference(const Operator& a, const Operator& b) {
  for (const Word& w : a.source_->basis())
    if (!(a.on_word(w).terms() == b.on_word(w).terms())) return w;
  return std::nullopt;
}

std::string Operator::str() const {
  std::ostringstream os;
  for (const auto& [w, img] : table_) os << source_->format(w) << " -> " << img.str() << "\n";
  return os.str();
}

Operator compose(const Operator& outer, const Operator& inner) {
  require_same_algebra(inner.target(), outer.source(), "compose");
  Operator out(inner.source_ptr(), outer.target_ptr(), outer.odd() != inner.odd());
  for (const auto& [w, img] : inner.table()) out.set(w, outer(img.recarried(outer.source_ptr())));
  return out;
}

std::optional<Word> degree_violation(const Operator& op, int d) {
  for (const auto& [w, img] : op.table()) {
    const int in = op.source().degree(w);
    for (const auto& [m, c] : img)
      if (op.target().degree(m.word) + 2 * m.hbar != in + d) return w;
  }
  return std::nullopt;
}

std::optional<int> uniform_degree(const Operator& op) {
  std::optional<int> out;
  for (const auto& [w, img] : op.table()) {
    const int in = op.source().degree(w);
    for (const auto& [m, c] : img) {
      int d = op.target().degree(m.word) + 2 * m.hbar - in;
      if (out && *out != d) return std::nullopt;
      out = d;
    }
  }
  return out;
}

Poly AlgebraMap::operator()(const Poly& a) const {
  if (kind == Kind::identity) return a.carrier_ptr() == target ? a : a.recarried(target);
  Poly out(target);
  const Word unit = a.carrier().unit();
  for (const auto& [m, c] : a)
    if (m.word == unit) out.add_term(Monomial{target->unit(), m.hbar, m.lambda}, c);
  return out;
}

Poly iterated_commutator(const LinearMap& d, bool d_odd, const std::vector<Poly>& args, const AlgebraMap& f,
                         const Poly& b) {
  std::vector<bool> arg_odd(args.size());
  for (std::size_t i = 0; i < args.size(); ++i) arg_odd[i] = require_parity(args[i], "iterated_commutator");
  std::function<Poly(std::size_t, const Poly&)> rec = [&](std::size_t k, const Poly& x) -> Poly {
    if (k == 0) return d(x);
    const Poly& a = args[k - 1];
    bool c_odd = d_odd;
    for (std::size_t i = 0; i + 1 < k; ++i) c_odd = c_odd != arg_odd[i];
    Poly out = rec(k - 1, multiply(a, x));
    Poly inner = rec(k - 1, x);
    if (inner.is_zero()) return out;
    Poly second = multiply(f(a), inner);
    if (c_odd && arg_odd[k - 1])
      out += second;
    else
      out -= second;
    return out;
  };
  return rec(args.size(), b);
}

Operator commutator_with_mult(const Operator& d, const Poly& a, const AlgebraMap& f) {
  const bool a_odd = require_parity(a, "commutator_with_mult");
  Operator out(d.source_ptr(), d.target_ptr(), d.odd() != a_odd);
  const Carrier& src = d.source();
  LinearMap dmap = [&](const Poly& p) { return d(p); };
  for (const Word& b : src.basis()) {
    if (b.weight() + a.max_weight() > src.max_weight() || src.size(b) + a.max_size() > src.max_size()) continue;
    out.set(b, iterated_commutator(dmap, d.odd(), {a}, f, Poly::monomial(d.source_ptr(), b)));
  }
  return out;
}

Operator mult_operator(const Poly& a) {
  const bool a_odd = require_parity(a, "mult_operator");
  Operator out(a.carrier_ptr(), a.carrier_ptr(), a_odd);
  for (const Word& b : a.carrier().basis()) out.set(b, multiply(a, Poly::monomial(a.carrier_ptr(), b)));
  return out;
}

OrderResult diff_order(const Operator& d, int order, const AlgebraMap& f, int probe_weight) {
  OrderResult res;
  res.order = order;
  res.probe_weight = probe_weight;
  const Carrier& src = d.source();
  const auto& basis = src.basis();
  LinearMap dmap = [&](const Poly& p) { return d(p); };
  std::vector<std::size_t> idx;
  std::function<bool(std::size_t, int, int)> rec = [&](std::size_t start, int weight, int size) -> bool {
    if (static_cast<int>(idx.size()) == order + 1) {
      std::vector<Poly> args;
      for (std::size_t i : idx) args.push_back(Poly::monomial(d.source_ptr(), basis[i]));
      for (const Word& b : basis) {
        if (weight + b.weight() > probe_weight || size + src.size(b) > src.max_size()) continue;
        ++res.probes;
        Poly v = iterated_commutator(dmap, d.odd(), args, f, Poly::monomial(d.source_ptr(), b));
        if (!v.is_zero()) {
          res.holds = false;
          for (std::size_t i : idx) res.witness_args.push_back(basis[i]);
          res.witness_input = b;
          res.witness_value = v;
          return false;
        }
      }
      return true;
    }
    for (std::size_t i = start; i < basis.size(); ++i) {
      const Word& w = basis[i];
      if (w.is_unit()) continue;
      if (weight + w.weight() > probe_weight || size + src.size(w) > src.max_size()) continue;
      idx.push_back(i);
      bool ok = rec(i, weight + w.weight(), size + src.size(w));
      idx.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  rec(0, 0, 0);
  return res;
}

Poly block_expansion(const Carrier& source, const Word& w, const CarrierPtr& target,
                     const std::function<Poly(const Word&)>& block, const std::function<Scalar(int)>& coeff) {
  Poly out(target);
  const auto factors = w.factors();
  const int m = static_cast<int>(factors.size());
  if (m == 0) return out;
  const auto parities = factor_parities(source, factors);
  std::map<Word, Poly> cache;
  auto value = [&](const Word& u) -> const Poly& {
    auto it = cache.find(u);
    if (it == cache.end()) {
      Poly v = block(u);
      if (v.carrier_ptr() != target) v = v.recarried(target);
      it = cache.emplace(u, std::move(v)).first;
    }
    return it->second;
  };
  for (const auto& comp : compositions(m)) {
    const int k = static_cast<int>(comp.size());
    const Scalar ck = coeff(k);
    if (ck.is_zero()) continue;
    for_each_shuffle(comp, [&](const std::vector<std::size_t>& perm) {
      Poly prod = Poly::one(target);
      std::size_t pos = 0;
      for (int part : comp) {
        std::vector<std::size_t> sub;
        for (int j = 0; j < part; ++j) sub.push_back(factors[perm[pos++]]);
        const Poly& v = value(word_from_factors(source.dim(), sub));
        if (v.is_zero()) return;
        prod = multiply(prod, v);
        if (prod.is_zero()) return;
      }
      Scalar c = ck;
      if (koszul_sign_parity(parities, perm) < 0) c = -c;
      prod *= c;
      out += prod;
    });
  }
  return out;
}

Poly exp_series(const Poly& x) {
  if (!x.lambda_part(0).is_zero()) throw MalformedInput("exp_series: argument has a lambda^0 part");
  const int cap = x.carrier().lambda_cap();
  Poly out = Poly::one(x.carrier_ptr());
  Poly power = Poly::one(x.carrier_ptr());
  for (int k = 1; k <= cap; ++k) {
    power = multiply(power, x);
    if (power.is_zero()) break;
    out += Scalar(1) / factorial(k) * power;
  }
  return out;
}

}  // namespace bvcalc
