#include "bvcalc/bvinfty.hpp"

#include "bvcalc/errors.hpp"

#include <algorithm>
#include <functional>

namespace bvcalc {

BVOperator::BVOperator(std::string name_, CarrierPtr carrier_, Operator delta_, LInfPtr origin_)
    : name(std::move(name_)), carrier(std::move(carrier_)), delta(std::move(delta_)), origin(std::move(origin_)) {
  require_same_algebra(delta.source(), *carrier, "BV operator source");
  require_same_algebra(delta.target(), *carrier, "BV operator target");
  if (!delta.odd()) throw ValidationError("BV operator '" + name + "' must be odd");
}

int BVOperator::top_order() const {
  auto h = delta.max_hbar();
  return h ? *h + 1 : 0;
}

Operator differential_operator(const CarrierPtr& c, const std::vector<DopTerm>& terms) {
  std::optional<bool> odd;
  for (const DopTerm& t : terms) {
    if (t.coeff.is_zero()) continue;
    bool par = require_parity(t.coeff, "differential_operator");
    for (std::size_t g : t.derivatives) par = par != c->odd(g);
    if (odd && *odd != par) throw MalformedInput("differential_operator: terms of mixed parity");
    odd = par;
  }
  return Operator::tabulate(c, c, odd.value_or(true), [&](const Word& w) {
    Poly out(c);
    for (const DopTerm& t : terms) {
      Poly v = Poly::monomial(c, w);
      for (auto it = t.derivatives.rbegin(); it != t.derivatives.rend() && !v.is_zero(); ++it)
        v = left_derivative(v, *it);
      if (!v.is_zero()) out += multiply(t.coeff.recarried(c), v);
    }
    return out;
  });
}

BVOperator bv_from_linf(const LInfPtr& l, const Truncation& t) {
  Check c = check_codifferential(*l, t.weight);
  if (!c.passed) {
    std::string msg = "structure '" + l->name() + "' is not an L-infinity structure";
    if (!c.witnesses.empty()) msg += " (" + c.witnesses.front().where + ": " + c.witnesses.front().residual + ")";
    throw ValidationError(msg);
  }
  Truncation tt = t;
  if (tt.size < 0) tt.size = coalgebra_carrier(*l, t.weight)->max_size();
  auto carrier = make_carrier(l->space_ptr(), -1, tt);
  Operator delta(carrier, carrier, true);
  for (int n = 1; n <= std::min(l->max_arity(), t.weight); ++n)
    delta += extend_coderivation(*l, n, carrier).times_hbar(n - 1);
  return BVOperator("bv(" + l->name() + ")", carrier, std::move(delta), l);
}

Report check_bv(const BVOperator& b, int probe_weight) {
  const Carrier& c = *b.carrier;
  if (probe_weight < 0) probe_weight = c.max_weight();
  Report r;
  r.subject = "BV operator " + b.name;
  r.bounds = {{"W", c.max_weight()}, {"H", c.hbar_cap()}, {"Lambda", c.lambda_cap()}, {"probe", probe_weight}};

  Check unit{"Delta(1) = 0", true, "", {}};
  Poly d1 = b.delta.on_word(c.unit());
  if (!d1.is_zero()) unit.fail("1", d1.str());
  r.add(unit);

  Check powers{"no negative hbar powers", true, "", {}};
  if (auto h = b.delta.min_hbar(); h && *h < 0) powers.fail("hbar^" + std::to_string(*h), "present");
  r.add(powers);

  Check square{"Delta^2 = 0", true, "", {}};
  Operator sq = compose(b.delta, b.delta);
  for (const auto& [w, v] : sq.table())
    for (int p = *v.min_hbar(); p <= *v.max_hbar(); ++p) {
      Poly block = v.hbar_part(p);
      if (!block.is_zero()) square.fail("hbar^" + std::to_string(p) + " word " + c.format(w), block.str());
    }
  square.detail = "all hbar powers of Delta^2";
  r.add(square);

  for (int n = 1; n <= b.top_order(); ++n) {
    OrderResult o = diff_order(b.component(n), n, AlgebraMap::identity_on(b.carrier), probe_weight);
    Check oc{"order(Delta_" + std::to_string(n) + ") <= " + std::to_string(n), o.holds,
             "probe weight " + std::to_string(o.probe_weight) + ", " + std::to_string(o.probes) + " probes", {}};
    if (!o.holds) oc.fail(format_tuple(c, o.witness_args) + " on " + c.format(o.witness_input), o.witness_value.str());
    r.add(oc);
  }

  Check deg{"|Delta_n| = 3 - 2n", true, "", {}};
  if (auto msg = audit_component_degrees(b); !msg.empty()) deg.fail("degree", msg);
  r.add(deg);
  return r;
}

PurityCertificate check_pure(const BVOperator& b) {
  PurityCertificate cert;
  const Carrier& c = *b.carrier;
  const int top = std::max(b.top_order(), 1);
  for (int n = 1; n <= std::max(top, c.max_weight()); ++n) {
    Operator dn = b.component(n);
    bool ok = true;
    for (const auto& [w, v] : dn.table()) {
      bool bad = w.weight() < n;
      if (w.weight() == n)
        for (const auto& [m, coef] : v) bad = bad || m.word.weight() != 1;
      if (bad && ok) {
        ok = false;
        if (cert.witness.empty())
          cert.witness = "Delta_" + std::to_string(n) + "(" + c.format(w) + ") = " + v.str();
      }
    }
    cert.verdicts.emplace_back(n, ok);
    cert.pure = cert.pure && ok;
  }
  return cert;
}

namespace {

std::vector<Poly> recarry_all(const CarrierPtr& c, const std::vector<Poly>& args) {
  std::vector<Poly> out;
  for (const Poly& a : args) {
    if (a.carrier_ptr() == c)
      out.push_back(a);
    else {
      require_same_algebra(a.carrier(), *c, "bracket argument");
      out.push_back(a.recarried(c));
    }
  }
  return out;
}

std::vector<std::uint8_t> parities_of(const std::vector<Poly>& args) {
  std::vector<std::uint8_t> out;
  for (const Poly& a : args) out.push_back(require_parity(a, "Koszul sign") ? 1 : 0);
  return out;
}

Poly product(const CarrierPtr& c, const std::vector<Poly>& factors) {
  Poly p = Poly::one(c);
  for (const Poly& f : factors) p = multiply(p, f);
  return p;
}

}  // namespace

Poly derived_bracket_h(const BVOperator& b, const std::vector<Poly>& args) {
  auto a = recarry_all(b.carrier, args);
  LinearMap d = [&](const Poly& p) { return b.delta(p); };
  return iterated_commutator(d, true, a, AlgebraMap::identity_on(b.carrier), Poly::one(b.carrier));
}

Poly modified_bracket(const BVOperator& b, const std::vector<Poly>& args) {
  Poly lh = derived_bracket_h(b, args);
  const int n = static_cast<int>(args.size());
  auto low = lh.min_hbar();
  if (low && *low < n - 1)
    throw InternalConsistencyError("derived bracket of arity " + std::to_string(n) + " on " + b.name +
                                   " is not divisible by hbar^" + std::to_string(n - 1) + ": " + lh.str());
  return lh.times_hbar(1 - n);
}

Poly semiclassical_bracket(const BVOperator& b, const std::vector<Poly>& args) {
  for (const Poly& a : args)
    if (a.min_hbar().value_or(0) != 0 || a.max_hbar().value_or(0) != 0)
      throw MalformedInput("semiclassical bracket takes hbar-free arguments");
  return modified_bracket(b, args).hbar_part(0);
}

Poly semiclassical_bracket_direct(const BVOperator& b, const std::vector<Poly>& args) {
  auto a = recarry_all(b.carrier, args);
  Operator dn = b.component(static_cast<int>(args.size()));
  LinearMap d = [&](const Poly& p) { return dn(p); };
  return iterated_commutator(d, true, a, AlgebraMap::identity_on(b.carrier), Poly::one(b.carrier));
}

Comparison verify_magic(const BVOperator& b, const std::vector<Poly>& factors) {
  auto a = recarry_all(b.carrier, factors);
  Comparison cmp{b.delta(product(b.carrier, a)), Poly(b.carrier)};
  const int n = static_cast<int>(a.size());
  const auto par = parities_of(a);
  for (int j = 1; j <= n; ++j) {
    for_each_shuffle({j, n - j}, [&](const std::vector<std::size_t>& perm) {
      std::vector<Poly> head, tail;
      for (int i = 0; i < j; ++i) head.push_back(a[perm[static_cast<std::size_t>(i)]]);
      for (int i = j; i < n; ++i) tail.push_back(a[perm[static_cast<std::size_t>(i)]]);
      Poly term = multiply(derived_bracket_h(b, head), product(b.carrier, tail));
      if (koszul_sign_parity(par, perm) < 0) term = -term;
      cmp.rhs += term;
    });
  }
  return cmp;
}

Comparison verify_deviation(const BVOperator& b, std::size_t i, const std::vector<Poly>& args) {
  auto a = recarry_all(b.carrier, args);
  if (a.size() < 2 || i + 1 >= a.size()) throw MalformedInput("verify_deviation: slot out of range");
  const auto par = parities_of(a);
  bool prefix = false;
  for (std::size_t j = 0; j < i; ++j) prefix = prefix != static_cast<bool>(par[j]);
  const bool ai = par[i], aj = par[i + 1];

  std::vector<Poly> merged, drop_i, drop_j;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (j == i) merged.push_back(multiply(a[i], a[i + 1]));
    if (j != i && j != i + 1) merged.push_back(a[j]);
    if (j != i) drop_i.push_back(a[j]);
    if (j != i + 1) drop_j.push_back(a[j]);
  }
  Comparison cmp{derived_bracket_h(b, a), derived_bracket_h(b, merged)};
  Poly t1 = multiply(a[i], derived_bracket_h(b, drop_i));
  const bool s1 = (!prefix) && ai;                 // (1 + |a_1..a_{i-1}|) |a_i|
  const bool s2 = (!(prefix != ai)) && aj;         // (1 + |a_1..a_i|) |a_{i+1}|
  Poly t2 = multiply(a[i + 1], derived_bracket_h(b, drop_j));
  if (s1) cmp.rhs += t1; else cmp.rhs -= t1;
  if (s2) cmp.rhs += t2; else cmp.rhs -= t2;
  return cmp;
}

Poly multiderivation_defect(const BVOperator& b, std::size_t i, const std::vector<Poly>& args, const Poly& left,
                            const Poly& right) {
  auto a = recarry_all(b.carrier, args);
  if (i >= a.size()) throw MalformedInput("multiderivation_defect: slot out of range");
  const auto par = parities_of(a);
  bool prefix = false;
  for (std::size_t j = 0; j < i; ++j) prefix = prefix != static_cast<bool>(par[j]);
  const Poly l = left.carrier_ptr() == b.carrier ? left : left.recarried(b.carrier);
  const Poly r = right.carrier_ptr() == b.carrier ? right : right.recarried(b.carrier);
  const bool lo = require_parity(l, "multiderivation_defect");
  const bool ro = require_parity(r, "multiderivation_defect");
  auto with = [&](const Poly& x) {
    auto v = a;
    v[i] = x;
    return semiclassical_bracket(b, v);
  };
  Poly out = with(multiply(l, r));
  Poly t1 = multiply(l, with(r));
  Poly t2 = multiply(r, with(l));
  if ((!prefix) && lo) out += t1; else out -= t1;
  if ((!(prefix != lo)) && ro) out += t2; else out -= t2;
  return out;
}

Poly jacobi_form_h(const BVOperator& b, const std::vector<Poly>& args) {
  auto a = recarry_all(b.carrier, args);
  const int m = static_cast<int>(a.size());
  const auto par = parities_of(a);
  Poly out(b.carrier);
  for (int n = 1; n <= m; ++n) {
    for_each_shuffle({n, m - n}, [&](const std::vector<std::size_t>& perm) {
      std::vector<Poly> head;
      for (int i = 0; i < n; ++i) head.push_back(a[perm[static_cast<std::size_t>(i)]]);
      Poly inner = derived_bracket_h(b, head);
      if (inner.is_zero()) return;
      std::vector<Poly> outer{inner};
      for (int i = n; i < m; ++i) outer.push_back(a[perm[static_cast<std::size_t>(i)]]);
      Poly term = derived_bracket_h(b, outer);
      if (koszul_sign_parity(par, perm) < 0) term = -term;
      out += term;
    });
  }
  return out;
}

Poly square_commutator(const BVOperator& b, const std::vector<Poly>& args) {
  auto a = recarry_all(b.carrier, args);
  LinearMap d2 = [&](const Poly& p) { return b.delta(b.delta(p)); };
  return iterated_commutator(d2, false, a, AlgebraMap::identity_on(b.carrier), Poly::one(b.carrier));
}

LInfStructure linf_from_pure_bv(const BVOperator& b, std::string name) {
  PurityCertificate cert = check_pure(b);
  if (!cert.pure) throw ValidationError("operator '" + b.name + "' is not pure: " + cert.witness);
  const Carrier& c = *b.carrier;
  const int shift = c.view_shift() + 1;
  SpacePtr space = shift == 0 ? c.space_ptr() : make_space(c.space().label() + "[1]", c.space().shifted(shift, "").generators());
  const int arity = std::max(1, c.max_weight());
  LInfStructure l(std::move(name), space, arity, c.max_size());
  for (int n = 1; n <= arity; ++n) {
    Operator dn = b.component(n);
    for (const auto& [w, v] : dn.table())
      if (w.weight() == n) l.set_bracket(w, v.recarried(l.carrier()));
  }
  l.check_shape();
  return l;
}

std::string audit_component_degrees(const BVOperator& b) {
  for (int n = 1; n <= b.top_order(); ++n) {
    Operator dn = b.component(n);
    if (auto w = degree_violation(dn, 3 - 2 * n))
      return "Delta_" + std::to_string(n) + " on " + b.carrier->format(*w) + " is not of degree " +
             std::to_string(3 - 2 * n);
  }
  return {};
}

std::vector<std::vector<Word>> word_tuples(const Carrier& c, int n, int max_weight) {
  std::vector<std::vector<Word>> out;
  const auto& basis = c.basis();
  std::vector<Word> cur;
  std::function<void(std::size_t, int, int)> rec = [&](std::size_t start, int weight, int size) {
    if (static_cast<int>(cur.size()) == n) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < basis.size(); ++i) {
      const Word& w = basis[i];
      if (w.is_unit() || weight + w.weight() > max_weight || size + c.size(w) > c.max_size()) continue;
      cur.push_back(w);
      rec(i, weight + w.weight(), size + c.size(w));
      cur.pop_back();
    }
  };
  rec(0, 0, 0);
  return out;
}

std::vector<Poly> as_polys(const CarrierPtr& c, const std::vector<Word>& words) {
  std::vector<Poly> out;
  for (const Word& w : words) out.push_back(Poly::monomial(c, w));
  return out;
}

std::string format_tuple(const Carrier& c, const std::vector<Word>& words) {
  std::string s = "(";
  for (std::size_t i = 0; i < words.size(); ++i) s += (i ? "," : "") + c.format(words[i]);
  return s + ")";
}

std::string audit_semiclassical_degrees(const BVOperator& b, int max_n, int probe_weight) {
  const Carrier& c = *b.carrier;
  for (int n = 1; n <= max_n; ++n) {
    for (const auto& tuple : word_tuples(c, n, probe_weight)) {
      int in = 0;
      for (const Word& w : tuple) in += c.degree(w) - 2;
      Poly v = semiclassical_bracket(b, as_polys(b.carrier, tuple));
      for (const auto& [m, coef] : v)
        if (c.degree(m.word) - 2 != in + 1)
          return "l_" + std::to_string(n) + format_tuple(c, tuple) + " has degree " +
                 std::to_string(c.degree(m.word) - 2 - in) + " on V[2]";
    }
  }
  return {};
}

}  // namespace bvcalc
