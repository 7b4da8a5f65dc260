#include "bvcalc/linfty.hpp"

#include "bvcalc/errors.hpp"

#include <algorithm>

namespace bvcalc {

namespace {

bool sized_space(const GradedSpace& s) {
  return std::any_of(s.generators().begin(), s.generators().end(), [](const Generator& g) { return g.size != 1; });
}

void require_same_space(const GradedSpace& a, const GradedSpace& b, const char* context) {
  if (a.generators() != b.generators())
    throw CarrierMismatch(std::string(context) + ": spaces '" + a.label() + "' and '" + b.label() + "' differ");
}

// D_n on one word, following the shuffle formula.
Poly coderivation_on_word(const LInfStructure& l, int n, const CarrierPtr& carrier, const Word& w) {
  Poly out(carrier);
  const int m = w.weight();
  if (m < n) return out;
  const auto factors = w.factors();
  const auto parities = factor_parities(*carrier, factors);
  for_each_shuffle({n, m - n}, [&](const std::vector<std::size_t>& perm) {
    std::vector<std::size_t> head, tail;
    for (int i = 0; i < n; ++i) head.push_back(factors[perm[static_cast<std::size_t>(i)]]);
    for (int i = n; i < m; ++i) tail.push_back(factors[perm[static_cast<std::size_t>(i)]]);
    Poly value = l.bracket(word_from_factors(carrier->dim(), head));
    if (value.is_zero()) return;
    Poly term = multiply(value.recarried(carrier), Poly::monomial(carrier, word_from_factors(carrier->dim(), tail)));
    if (koszul_sign_parity(parities, perm) < 0) term = -term;
    out += term;
  });
  return out;
}

}  // namespace

LInfStructure::LInfStructure(std::string name, SpacePtr space, int max_arity, int max_size)
    : name_(std::move(name)), space_(std::move(space)), max_arity_(max_arity) {
  if (max_arity_ < 0) throw MalformedInput("negative maximal arity");
  const int w = std::max(max_arity_, 1);
  carrier_ = make_carrier(space_, 1, w, max_size < 0 ? w : std::max(max_size, 1));
}

bool LInfStructure::has_hbar() const {
  for (const auto& [w, v] : brackets_)
    for (const auto& [m, c] : v)
      if (m.hbar != 0) return true;
  return false;
}

void LInfStructure::set_bracket(const Word& w, Poly value) {
  if (w.is_unit() || w.weight() > max_arity_)
    throw ValidationError("structure '" + name_ + "': bracket arity " + std::to_string(w.weight()) +
                          " outside 1.." + std::to_string(max_arity_));
  if (!carrier_->admits(w)) throw ValidationError("structure '" + name_ + "': bracket key outside the truncation");
  if (value.carrier_ptr() != carrier_) value = value.recarried(carrier_);
  if (value.is_zero())
    brackets_.erase(w);
  else
    brackets_.insert_or_assign(w, std::move(value));
}

void LInfStructure::add_bracket(const Word& w, const Poly& value) {
  Poly sum = bracket(w);
  sum += value.carrier_ptr() == carrier_ ? value : value.recarried(carrier_);
  set_bracket(w, std::move(sum));
}

Poly LInfStructure::bracket(const Word& w) const {
  auto it = brackets_.find(w);
  if (it == brackets_.end()) return Poly(carrier_);
  return it->second;
}

Poly LInfStructure::evaluate(const std::vector<std::size_t>& gens) const {
  auto nf = normalize(*carrier_, gens);
  if (!nf) return Poly(carrier_);
  Poly v = bracket(nf->first);
  if (nf->second < 0) v = -v;
  return v;
}

Poly LInfStructure::evaluate(const std::vector<Poly>& args) const {
  Poly out(carrier_);
  struct Piece {
    std::size_t gen;
    Scalar c;
    int hbar;
    int lambda;
  };
  std::vector<std::vector<Piece>> expanded;
  for (const Poly& a : args) {
    std::vector<Piece> pieces;
    for (const auto& [m, c] : a) {
      if (m.word.weight() != 1) throw MalformedInput("bracket argument is not in the generating space");
      pieces.push_back({m.word.factors().front(), c, m.hbar, m.lambda});
    }
    if (pieces.empty()) return out;
    expanded.push_back(std::move(pieces));
  }
  std::vector<std::size_t> gens(args.size());
  std::function<void(std::size_t, Scalar, int, int)> rec = [&](std::size_t i, Scalar c, int h, int lam) {
    if (i == expanded.size()) {
      Poly v = evaluate(gens);
      for (const auto& [m, vc] : v) out.add_term(Monomial{m.word, m.hbar + h, m.lambda + lam}, vc * c);
      return;
    }
    for (const auto& p : expanded[i]) {
      gens[i] = p.gen;
      rec(i + 1, c * p.c, h + p.hbar, lam + p.lambda);
    }
  };
  rec(0, Scalar(1), 0, 0);
  return out;
}

void LInfStructure::check_shape() const {
  for (const auto& [w, v] : brackets_) {
    const int want = carrier_->degree(w) + 1;
    for (const auto& [m, c] : v) {
      std::string at = "structure '" + name_ + "', l(" + carrier_->format(w) + ")";
      if (m.word.weight() != 1) throw ValidationError(at + " has a value outside the generating space");
      if (m.hbar < 0 || m.lambda != 0) throw ValidationError(at + " has a negative hbar power or a lambda term");
      if (carrier_->degree(m.word) + 2 * m.hbar != want)
        throw ValidationError(at + " has degree " + std::to_string(carrier_->degree(m.word) + 2 * m.hbar) +
                              ", expected " + std::to_string(want));
    }
  }
}

CarrierPtr coalgebra_carrier(const LInfStructure& l, int max_weight, int view) {
  const int size = sized_space(l.space()) ? l.carrier()->max_size() : max_weight;
  return make_carrier(l.space_ptr(), view, max_weight, size, l.carrier()->hbar_cap(), l.carrier()->lambda_cap());
}

Operator extend_coderivation(const LInfStructure& l, int n, const CarrierPtr& carrier) {
  require_same_space(l.space(), carrier->space(), "extend_coderivation");
  if (n < 1) throw MalformedInput("coderivation component must have n >= 1");
  Operator op(carrier, carrier, true);
  for (const Word& w : carrier->basis()) op.set(w, coderivation_on_word(l, n, carrier, w));
  return op;
}

Operator total_coderivation(const LInfStructure& l, const CarrierPtr& carrier) {
  Operator d(carrier, carrier, true);
  for (int n = 1; n <= std::min(l.max_arity(), carrier->max_weight()); ++n) d += extend_coderivation(l, n, carrier);
  return d;
}

Check check_codifferential(const LInfStructure& l, int max_weight) {
  Check c;
  c.name = "codifferential " + l.name();
  try {
    l.check_shape();
  } catch (const ValidationError& e) {
    c.fail("shape", e.what());
    return c;
  }
  auto carrier = coalgebra_carrier(l, max_weight);
  const int top = std::min(l.max_arity(), max_weight);
  std::vector<Operator> d;
  for (int n = 1; n <= top; ++n) d.push_back(extend_coderivation(l, n, carrier));
  int components = 0;
  for (int total = 2; total <= 2 * top; ++total) {
    Operator sum(carrier, carrier, false);
    for (int i = 1; i < total; ++i) {
      const int j = total - i;
      if (i > top || j > top) continue;
      sum += compose(d[static_cast<std::size_t>(i - 1)], d[static_cast<std::size_t>(j - 1)]);
    }
    ++components;
    for (const auto& [w, v] : sum.table())
      c.fail("n=" + std::to_string(total - 1) + " word " + carrier->format(w), v.str());
  }
  c.detail = "W=" + std::to_string(max_weight) + ", components 1.." + std::to_string(components);
  return c;
}

Poly jacobi_bracket_form(const LInfStructure& l, const std::vector<std::size_t>& args) {
  const CarrierPtr& carrier = l.carrier();
  Poly out(carrier);
  const int m = static_cast<int>(args.size());
  const auto parities = factor_parities(*carrier, args);
  for (int n = 1; n <= m; ++n) {
    for_each_shuffle({n, m - n}, [&](const std::vector<std::size_t>& perm) {
      std::vector<std::size_t> head;
      for (int i = 0; i < n; ++i) head.push_back(args[perm[static_cast<std::size_t>(i)]]);
      Poly inner = l.evaluate(head);
      if (inner.is_zero()) return;
      std::vector<Poly> outer_args{inner};
      for (int i = n; i < m; ++i) outer_args.push_back(Poly::generator(carrier, args[perm[static_cast<std::size_t>(i)]]));
      Poly term = l.evaluate(outer_args);
      if (koszul_sign_parity(parities, perm) < 0) term = -term;
      out += term;
    });
  }
  return out;
}

Check check_jacobi_forms(const LInfStructure& l, int max_m) {
  Check c;
  c.name = "higher Jacobi " + l.name();
  std::vector<std::size_t> tuple;
  const std::size_t dim = l.space().dim();
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (!tuple.empty()) {
      Poly v = jacobi_bracket_form(l, tuple);
      if (!v.is_zero()) {
        std::string where = "(";
        for (std::size_t i = 0; i < tuple.size(); ++i) where += (i ? "," : "") + l.space()[tuple[i]].name;
        c.fail(where + ")", v.str());
      }
    }
    if (static_cast<int>(tuple.size()) == max_m) return;
    for (std::size_t g = start; g < dim; ++g) {
      tuple.push_back(g);
      rec(g);
      tuple.pop_back();
    }
  };
  rec(0);
  c.detail = "m<=" + std::to_string(max_m);
  return c;
}

// ---------------------------------------------------------------------------
// morphisms

CarrierPtr LInfMorphism::key_carrier() const {
  const int size = sized_space(source->space()) ? source->carrier()->max_size() : max_arity;
  return make_carrier(source->space_ptr(), 1, std::max(max_arity, 1), std::max(size, 1));
}

Poly LInfMorphism::component(const Word& w) const {
  auto it = corolla.find(w);
  if (it == corolla.end()) return Poly(target->carrier());
  return it->second;
}

void LInfMorphism::set(const Word& w, Poly value) {
  if (w.is_unit()) {
    if (!value.is_zero()) throw ValidationError("morphism '" + name + "': nonzero value on 1");
    return;
  }
  if (w.weight() > max_arity) throw ValidationError("morphism '" + name + "': component above the maximal arity");
  if (value.carrier_ptr() != target->carrier()) value = value.recarried(target->carrier());
  if (value.is_zero())
    corolla.erase(w);
  else
    corolla.insert_or_assign(w, std::move(value));
}

bool LInfMorphism::has_hbar() const {
  for (const auto& [w, v] : corolla)
    for (const auto& [m, c] : v)
      if (m.hbar != 0) return true;
  return false;
}

void LInfMorphism::check_shape() const {
  auto keys = key_carrier();
  const Carrier& tc = *target->carrier();
  for (const auto& [w, v] : corolla) {
    const int want = keys->degree(w);
    for (const auto& [m, c] : v) {
      std::string at = "morphism '" + name + "', phi(" + keys->format(w) + ")";
      if (m.word.weight() != 1) throw ValidationError(at + " has a value outside the generating space");
      if (m.hbar < 0 || m.lambda != 0) throw ValidationError(at + " has a negative hbar power or a lambda term");
      if (tc.degree(m.word) + 2 * m.hbar != want)
        throw ValidationError(at + " has degree " + std::to_string(tc.degree(m.word) + 2 * m.hbar) + ", expected " +
                              std::to_string(want));
    }
  }
}

LInfMorphism identity_linf(const LInfPtr& l) {
  LInfMorphism id{"id_" + l->name(), l, l, 1, {}};
  for (std::size_t g = 0; g < l->space().dim(); ++g)
    id.set(l->carrier()->generator_word(g), Poly::generator(l->carrier(), g));
  return id;
}

Operator extend_coalgebra_morphism(const LInfMorphism& f, const CarrierPtr& source, const CarrierPtr& target) {
  require_same_space(f.source->space(), source->space(), "extend_coalgebra_morphism (source)");
  require_same_space(f.target->space(), target->space(), "extend_coalgebra_morphism (target)");
  auto block = [&](const Word& u) { return f.component(u); };
  auto coeff = [](int k) { return Scalar(1) / factorial(k); };
  Operator op(source, target, false);
  for (const Word& w : source->basis()) {
    if (w.is_unit())
      op.set(w, Poly::one(target));
    else
      op.set(w, block_expansion(*source, w, target, block, coeff));
  }
  return op;
}

Operator extend_coalgebra_morphism(const LInfMorphism& f, int max_weight) {
  return extend_coalgebra_morphism(f, coalgebra_carrier(*f.source, max_weight),
                                   coalgebra_carrier(*f.target, max_weight));
}

Check check_linf_morphism(const LInfMorphism& f, int max_weight) {
  Check c;
  c.name = "L-infinity morphism " + f.name;
  try {
    f.check_shape();
  } catch (const ValidationError& e) {
    c.fail("shape", e.what());
    return c;
  }
  auto s = coalgebra_carrier(*f.source, max_weight);
  auto t = coalgebra_carrier(*f.target, max_weight);
  Operator phi = extend_coalgebra_morphism(f, s, t);
  Operator lhs = compose(phi, total_coderivation(*f.source, s));
  Operator rhs = compose(total_coderivation(*f.target, t), phi);
  for (const Word& w : s->basis()) {
    Poly diff = lhs.on_word(w) - rhs.on_word(w);
    if (!diff.is_zero()) c.fail("word " + s->format(w), diff.str());
  }
  c.detail = "W=" + std::to_string(max_weight);
  return c;
}

LInfMorphism compose_linf(const LInfMorphism& psi, const LInfMorphism& phi, int max_arity) {
  require_same_space(phi.target->space(), psi.source->space(), "compose_linf");
  LInfMorphism out{psi.name + "*" + phi.name, phi.source, psi.target, max_arity, {}};
  auto s = coalgebra_carrier(*phi.source, max_arity);
  auto mid = coalgebra_carrier(*phi.target, max_arity);
  auto t = coalgebra_carrier(*psi.target, max_arity);
  Operator big_phi = extend_coalgebra_morphism(phi, s, mid);
  Operator big_psi = extend_coalgebra_morphism(psi, mid, t);
  for (const Word& w : s->basis()) {
    if (w.is_unit()) continue;
    out.set(w, project_weight(big_psi(big_phi.on_word(w)), 1));
  }
  return out;
}

LInfStructure transport_structure(const LInfStructure& target, const std::map<Word, Poly>& corolla, int max_arity,
                                  std::string name) {
  auto carrier = coalgebra_carrier(target, max_arity);
  LInfStructure source(std::move(name), target.space_ptr(), max_arity, target.carrier()->max_size());
  auto self = std::make_shared<LInfStructure>(source);
  LInfMorphism f{"transport", self, std::make_shared<LInfStructure>(target), max_arity, {}};
  for (const auto& [w, v] : corolla) f.set(w, v);
  for (std::size_t g = 0; g < target.space().dim(); ++g) {
    const Word gw = carrier->generator_word(g);
    if (!(f.component(gw) == Poly::monomial(target.carrier(), gw)))
      throw ValidationError("transport_structure: linear component is not the identity");
  }
  Operator big_phi = extend_coalgebra_morphism(f, carrier, carrier);
  Operator d_target = total_coderivation(target, carrier);
  auto apply_corolla = [&](const Poly& p) {
    Poly out(target.carrier());
    for (const auto& [m, c] : p) {
      Poly v = f.component(m.word);
      for (const auto& [mv, cv] : v) out.add_term(Monomial{mv.word, mv.hbar + m.hbar, mv.lambda + m.lambda}, cv * c);
    }
    return out;
  };
  for (int m = 1; m <= max_arity; ++m) {
    for (const Word& w : carrier->basis()) {
      if (w.weight() != m) continue;
      Poly value = project_weight(d_target(big_phi.on_word(w)), 1).recarried(target.carrier());
      for (int n = 1; n < m; ++n) value -= apply_corolla(coderivation_on_word(*self, n, carrier, w));
      self->set_bracket(w, value);
    }
  }
  return *self;
}

}  // namespace bvcalc
