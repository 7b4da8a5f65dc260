#include "bvcalc/morphcalc.hpp"

#include "bvcalc/errors.hpp"

#include <set>

namespace bvcalc {

BVMorphism::BVMorphism(std::string name_, BVPtr source_, BVPtr target_, Operator phi_)
    : name(std::move(name_)), source(std::move(source_)), target(std::move(target_)), phi(std::move(phi_)) {
  require_same_algebra(phi.source(), *source->carrier, "BV morphism source");
  require_same_algebra(phi.target(), *target->carrier, "BV morphism target");
  if (phi.odd()) throw ValidationError("BV morphism '" + name + "' must be even");
}

Operator exp_map(const Operator& phi) {
  const Carrier& src = phi.source();
  if (!phi.on_word(src.unit()).is_zero()) throw ValidationError("exp: the map does not vanish on 1");
  auto block = [&](const Word& u) { return phi.on_word(u); };
  auto coeff = [](int k) { return Scalar(1) / factorial(k); };
  Operator out(phi.source_ptr(), phi.target_ptr(), false);
  for (const Word& w : src.basis())
    out.set(w, w.is_unit() ? Poly::one(phi.target_ptr()) : block_expansion(src, w, phi.target_ptr(), block, coeff));
  return out;
}

Operator log_map(const Operator& big_phi) {
  const Carrier& src = big_phi.source();
  if (!(big_phi.on_word(src.unit()) == Poly::one(big_phi.target_ptr())))
    throw ValidationError("log: the map does not send 1 to 1");
  auto block = [&](const Word& u) { return big_phi.on_word(u); };
  auto coeff = [](int k) { return Scalar(k % 2 == 1 ? 1 : -1, k); };
  Operator out(big_phi.source_ptr(), big_phi.target_ptr(), false);
  for (const Word& w : src.basis())
    if (!w.is_unit()) out.set(w, block_expansion(src, w, big_phi.target_ptr(), block, coeff));
  return out;
}

BVMorphism identity_bv(const BVPtr& b) {
  Operator phi(b->carrier, b->carrier, false);
  for (std::size_t g = 0; g < b->carrier->dim(); ++g) {
    Word w = b->carrier->generator_word(g);
    phi.set(w, Poly::monomial(b->carrier, w));
  }
  return BVMorphism("id_" + b->name, b, b, std::move(phi));
}

Report check_bv_morphism(const BVMorphism& f) {
  const Carrier& s = *f.source->carrier;
  Report r;
  r.subject = "BV morphism " + f.name;
  r.bounds = {{"W", s.max_weight()}, {"H", s.hbar_cap()}, {"Lambda", s.lambda_cap()}};

  Check unit{"phi(1) = 0", true, "", {}};
  if (Poly v = f.phi.on_word(s.unit()); !v.is_zero()) unit.fail("1", v.str());
  r.add(unit);

  Check deg{"degree 0", true, "", {}};
  if (auto w = degree_violation(f.phi, 0)) deg.fail(s.format(*w), f.phi.on_word(*w).str());
  r.add(deg);

  Check expansion{"phi_n vanishes above weight n", true, "", {}};
  for (const auto& [w, v] : f.phi.table())
    for (const auto& [m, c] : v)
      if (m.hbar < 0 || w.weight() > m.hbar + 1) {
        expansion.fail("hbar^" + std::to_string(m.hbar) + " on " + s.format(w), v.str());
        break;
      }
  r.add(expansion);

  Check intertwine{"exp(phi) Delta = Delta' exp(phi)", true, "", {}};
  if (unit.passed) {
    Operator e = exp_map(f.phi);
    Operator lhs = compose(e, f.source->delta);
    Operator rhs = compose(f.target->delta, e);
    for (const Word& w : s.basis()) {
      Poly diff = lhs.on_word(w) - rhs.on_word(w);
      if (diff.is_zero()) continue;
      const int p = *diff.min_hbar();
      intertwine.fail("hbar^" + std::to_string(p) + " word " + s.format(w), diff.hbar_part(p).str());
    }
  } else {
    intertwine.fail("1", "exp(phi) undefined");
  }
  r.add(intertwine);
  return r;
}

PurityCertificate check_pure(const BVMorphism& f) {
  PurityCertificate cert;
  const Carrier& s = *f.source->carrier;
  const int top = std::max(s.max_weight(), f.phi.max_hbar().value_or(0) + 1);
  for (int n = 1; n <= top; ++n) {
    bool ok = true;
    const Operator fn = f.component(n);
    for (const auto& [w, v] : fn.table()) {
      bool bad = w.weight() != n;
      for (const auto& [m, c] : v) bad = bad || m.word.weight() != 1;
      if (bad && ok) {
        ok = false;
        if (cert.witness.empty()) cert.witness = "phi_" + std::to_string(n) + "(" + s.format(w) + ") = " + v.str();
      }
    }
    cert.verdicts.emplace_back(n, ok);
    cert.pure = cert.pure && ok;
  }
  if (auto h = f.phi.min_hbar(); h && *h < 0) {
    cert.pure = false;
    if (cert.witness.empty()) cert.witness = "negative hbar power";
  }
  return cert;
}

BVMorphism compose_diamond(const BVMorphism& psi, const BVMorphism& phi) {
  require_same_algebra(*phi.target->carrier, *psi.source->carrier, "compose_diamond");
  Operator composite = compose(exp_map(psi.phi), exp_map(phi.phi));
  return BVMorphism(psi.name + "<>" + phi.name, phi.source, psi.target, log_map(composite));
}

BVMorphism compose_direct(const BVMorphism& psi, const BVMorphism& phi) {
  require_same_algebra(*phi.target->carrier, *psi.source->carrier, "compose_direct");
  if (PurityCertificate c = check_pure(phi); !c.pure)
    throw ValidationError("compose_direct: inner morphism '" + phi.name + "' is not pure: " + c.witness);
  return BVMorphism(psi.name + "<>" + phi.name, phi.source, psi.target, compose(psi.phi, exp_map(phi.phi)));
}

BVMorphism linf_to_bv(const LInfMorphism& f, const BVPtr& source, const BVPtr& target) {
  if (source->carrier->space().generators() != f.source->space().generators() ||
      target->carrier->space().generators() != f.target->space().generators())
    throw CarrierMismatch("linf_to_bv: endpoints do not match the morphism's structures");
  const CarrierPtr& s = source->carrier;
  const CarrierPtr& t = target->carrier;
  Operator phi(s, t, false);
  for (const Word& w : s->basis()) {
    if (w.is_unit()) continue;
    Poly value = f.component(w);
    if (value.is_zero()) continue;
    const int k = w.weight();
    Poly shifted = value.recarried(t);
    if (!f.has_hbar()) {
      auto d = shifted.degree();
      if (d && *d - s->degree(w) != 2 - 2 * k)
        throw InternalConsistencyError("linf_to_bv: shifted component on " + s->format(w) + " has degree " +
                                       std::to_string(*d - s->degree(w)) + ", expected " + std::to_string(2 - 2 * k));
    }
    phi.set(w, shifted.times_hbar(k - 1));
  }
  if (auto bad = degree_violation(phi, 0))
    throw InternalConsistencyError("linf_to_bv: component on " + s->format(*bad) + " is not of degree 0");
  return BVMorphism("bv(" + f.name + ")", source, target, std::move(phi));
}

BVMorphism linf_to_bv(const LInfMorphism& f, const Truncation& t) {
  auto s = std::make_shared<const BVOperator>(bv_from_linf(f.source, t));
  auto g = f.source == f.target ? s : std::make_shared<const BVOperator>(bv_from_linf(f.target, t));
  return linf_to_bv(f, s, g);
}

LInfMorphism bv_to_linf(const BVMorphism& f) {
  if (PurityCertificate c = check_pure(f); !c.pure)
    throw ValidationError("bv_to_linf: morphism '" + f.name + "' is not pure: " + c.witness);
  LInfPtr src = f.source->origin ? f.source->origin
                                 : std::make_shared<const LInfStructure>(linf_from_pure_bv(*f.source, f.source->name));
  LInfPtr tgt = f.target == f.source ? src
                : f.target->origin ? f.target->origin
                                   : std::make_shared<const LInfStructure>(linf_from_pure_bv(*f.target, f.target->name));
  std::string name = f.name;
  if (name.size() > 4 && name.rfind("bv(", 0) == 0 && name.back() == ')') name = name.substr(3, name.size() - 4);
  LInfMorphism out{name, src, tgt, f.source->carrier->max_weight(), {}};
  for (const auto& [w, v] : f.phi.table()) {
    Poly dropped = v.times_hbar(1 - w.weight());
    if (dropped.min_hbar() != 0 || dropped.max_hbar() != 0)
      throw ValidationError("bv_to_linf: component on " + f.source->carrier->format(w) + " is not homogeneous in hbar");
    out.set(w, dropped.recarried(tgt->carrier()));
  }
  return out;
}

std::string word_generator_name(const Carrier& v, const Word& w) { return "[" + v.format(w) + "]"; }

LInfStructure modified_structure(const BVOperator& v, int max_arity, const std::string& name) {
  const Carrier& c = *v.carrier;
  std::vector<Generator> gens;
  for (const Word& u : c.basis()) gens.push_back({word_generator_name(c, u), c.degree(u) - 1, u.weight()});
  auto space = make_space(c.space().label() + "[hbar][1]", std::move(gens));
  LInfStructure h(name, space, max_arity, c.max_weight());
  const CarrierPtr& hc = h.carrier();
  auto to_h = [&](const Poly& p) {
    Poly out(hc);
    for (const auto& [m, coef] : p)
      out.add_term(Monomial{hc->generator_word(*c.basis_index(m.word)), m.hbar, m.lambda}, coef);
    return out;
  };
  for (const Word& key : hc->basis()) {
    if (key.is_unit()) continue;
    std::vector<Poly> args;
    for (std::size_t g : key.factors()) args.push_back(Poly::monomial(v.carrier, c.basis()[g]));
    Poly value = modified_bracket(v, args);
    if (!value.is_zero()) h.set_bracket(key, to_h(value));
  }
  return h;
}

BVMorphism p1_morphism(const BVPtr& v, int weight) {
  const Carrier& c = *v->carrier;
  auto h = std::make_shared<const LInfStructure>(modified_structure(*v, weight, "L(" + v->name + ")"));
  Truncation t{weight, c.max_weight(), c.hbar_cap(), c.lambda_cap()};
  auto source = std::make_shared<const BVOperator>(bv_from_linf(h, t));
  const CarrierPtr& s = source->carrier;
  Operator phi(s, v->carrier, false);
  for (std::size_t g = 0; g < s->dim(); ++g) phi.set(s->generator_word(g), Poly::monomial(v->carrier, c.basis()[g]));
  return BVMorphism("p1(" + v->name + ")", source, v, std::move(phi));
}

BVMorphism step1_compose_with_p1(const BVMorphism& f, int weight) {
  return compose_diamond(f, p1_morphism(f.source, weight));
}

Poly qme_exponential(const Poly& s) { return exp_series(s.times_hbar(-1)); }

Report qme_check(const BVOperator& b, const Poly& s_in) {
  const Carrier& c = *b.carrier;
  Poly s = s_in.carrier_ptr() == b.carrier ? s_in : s_in.recarried(b.carrier);
  if (!s.lambda_part(0).is_zero()) throw ValidationError("QME element has a lambda^0 part");
  if (!s.is_zero() && s.degree() != 2) throw ValidationError("QME element is not homogeneous of degree 2");
  Report r;
  r.subject = "QME on " + b.name;
  r.bounds = {{"W", c.max_weight()}, {"H", c.hbar_cap()}, {"Lambda", c.lambda_cap()}};
  Poly residual = b.delta(qme_exponential(s));
  for (int k = 0; k <= c.lambda_cap(); ++k) {
    Check ck{"lambda^" + std::to_string(k) + " residual", true, "", {}};
    Poly part = residual.lambda_part(k);
    if (!part.is_zero()) ck.fail("lambda^" + std::to_string(k), part.str());
    r.add(ck);
  }
  return r;
}

Poly qme_propagate(const BVMorphism& f, const Poly& s_in) {
  const CarrierPtr& c = f.source->carrier;
  Poly s = s_in.carrier_ptr() == c ? s_in : s_in.recarried(c);
  if (!s.lambda_part(0).is_zero()) throw ValidationError("QME element has a lambda^0 part");
  if (!s.is_zero() && s.degree() != 2) throw ValidationError("QME element is not homogeneous of degree 2");
  return f.phi(qme_exponential(s)).times_hbar(1);
}

Comparison exp_on_exponential(const Operator& phi, const Poly& s_in) {
  Poly s = s_in.carrier_ptr() == phi.source_ptr() ? s_in : s_in.recarried(phi.source_ptr());
  if (!s.lambda_part(0).is_zero()) throw ValidationError("exp_on_exponential: element has a lambda^0 part");
  for (const auto& [m, c] : s)
    if (m.word.weight() != 1) throw ValidationError("exp_on_exponential: element is not linear in the generators");
  if (!s.is_zero() && s.degree() != 0) throw ValidationError("exp_on_exponential: element is not of degree 0");
  Poly es = exp_series(s);
  return Comparison{exp_map(phi)(es), exp_series(phi(es))};
}

LInfMorphism adjunction_forward(const BVMorphism& psi, const LInfPtr& target_h) {
  if (!psi.source->origin) throw MalformedInput("adjunction_forward: source is not built from an L-infinity structure");
  const Carrier& v = *psi.target->carrier;
  if (target_h->space().dim() != v.basis().size())
    throw CarrierMismatch("adjunction_forward: target structure does not match the target algebra");
  const Carrier& s = *psi.source->carrier;
  LInfMorphism f{"F(" + psi.name + ")", psi.source->origin, target_h, s.max_weight(), {}};
  const CarrierPtr& hc = target_h->carrier();
  for (const auto& [w, img] : psi.phi.table()) {
    const int k = w.weight();
    if (auto low = img.min_hbar(); low && *low < k - 1)
      throw InternalConsistencyError("adjunction_forward: psi on " + s.format(w) + " is not divisible by hbar^" +
                                     std::to_string(k - 1));
    Poly value(hc);
    for (const auto& [m, c] : img)
      value.add_term(Monomial{hc->generator_word(*v.basis_index(m.word)), m.hbar - k + 1, m.lambda}, c);
    f.set(w, value);
  }
  return f;
}

BVMorphism adjunction_backward(const LInfMorphism& f, const BVPtr& source, const BVPtr& target) {
  const CarrierPtr& s = source->carrier;
  const CarrierPtr& v = target->carrier;
  if (s->space().generators() != f.source->space().generators())
    throw CarrierMismatch("adjunction_backward: source does not match the morphism");
  if (f.target->space().dim() != v->basis().size())
    throw CarrierMismatch("adjunction_backward: target structure does not match the target algebra");
  Operator phi(s, v, false);
  for (const auto& [w, val] : f.corolla) {
    if (!s->admits(w)) continue;
    Poly out(v);
    for (const auto& [m, c] : val)
      out.add_term(Monomial{v->basis()[m.word.factors().front()], m.hbar + w.weight() - 1, m.lambda}, c);
    phi.set(w, out);
  }
  std::string name = f.name;
  if (name.size() > 3 && name.rfind("F(", 0) == 0 && name.back() == ')') name = name.substr(2, name.size() - 3);
  return BVMorphism(name, source, target, std::move(phi));
}

Check verify_top_terms(const BVMorphism& psi, int m) {
  Check c;
  c.name = "top terms m=" + std::to_string(m) + " for " + psi.name;
  const CarrierPtr& s = psi.source->carrier;
  const CarrierPtr& t = psi.target->carrier;
  for (const Word& w : s->basis()) {
    if (w.weight() != m) continue;
    Poly lhs = psi.phi(psi.source->delta(Poly::monomial(s, w)));
    Poly rhs(t);
    const auto factors = w.factors();
    const auto parities = factor_parities(*s, factors);
    for (const auto& comp : compositions(m)) {
      const Scalar ck = Scalar(1) / factorial(static_cast<int>(comp.size()));
      for_each_shuffle(comp, [&](const std::vector<std::size_t>& perm) {
        std::vector<Poly> args;
        std::size_t pos = 0;
        for (int part : comp) {
          std::vector<std::size_t> sub;
          for (int j = 0; j < part; ++j) sub.push_back(factors[perm[pos++]]);
          Poly v = psi.phi.on_word(word_from_factors(s->dim(), sub));
          if (v.is_zero()) return;
          args.push_back(std::move(v));
        }
        Poly term = derived_bracket_h(*psi.target, args);
        term *= koszul_sign_parity(parities, perm) < 0 ? -ck : ck;
        rhs += term;
      });
    }
    Poly diff = lhs - rhs;
    if (!diff.is_zero()) c.fail("word " + s->format(w), diff.str());
  }
  return c;
}

std::optional<Word> first_difference(const LInfMorphism& a, const LInfMorphism& b) {
  std::set<Word> keys;
  for (const auto& [w, v] : a.corolla) keys.insert(w);
  for (const auto& [w, v] : b.corolla) keys.insert(w);
  for (const Word& w : keys)
    if (!(a.component(w).terms() == b.component(w).terms())) return w;
  return std::nullopt;
}

}  // namespace bvcalc
