// bvcalc: command-line front end over structure files.
//
//   bvcalc verify FILE [--name N]
//   bvcalc derive FILE --bv N --arg A [--arg B ...]
//   bvcalc compose FILE --outer PSI --inner PHI [--direct]
//   bvcalc translate FILE --morphism N [--round-trip]
//   bvcalc adjoint FILE --morphism N [--into BV]
//   bvcalc qme FILE --bv N --element S [--propagate M]
//
// Exit status: 0 pass, 2 parse or usage error, 3 validation failure,
// 4 internal consistency error.

#include "bvcalc/bvinfty.hpp"
#include "bvcalc/errors.hpp"
#include "bvcalc/linfty.hpp"
#include "bvcalc/morphcalc.hpp"
#include "bvcalc/report.hpp"
#include "bvcalc/structure_file.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

using namespace bvcalc;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitInternal = 4;

struct Options {
  std::string file;
  std::string format = "text";
  int probe_weight = -1;
  bool timing = false;
  std::string output;

  std::string name;
  std::string bv;
  std::vector<std::string> args;
  std::string outer;
  std::string inner;
  bool direct = false;
  std::string morphism;
  bool round_trip = false;
  std::string into;
  std::string element;
  std::string propagate;
};

std::vector<Report> g_reports;

Report& new_report(std::string subject, const Truncation& t) {
  Report r;
  r.subject = std::move(subject);
  r.bounds = {{"W", t.weight}, {"H", t.hbar}, {"Lambda", t.lambda}};
  g_reports.push_back(std::move(r));
  return g_reports.back();
}

void attach_file(Report& r, const StructureFile& f, const Options& o) {
  r.tables.emplace_back("result", o.format == "machine" ? serialize_json(f) : serialize(f));
  if (!o.output.empty()) {
    std::ofstream out(o.output, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + o.output + "'");
    out << serialize(f);
  }
}

int probe(const StructureFile& f, const Options& o) {
  const int w = f.truncation.weight;
  return o.probe_weight < 0 ? w : std::min(o.probe_weight, w);
}

BVPtr find_bv_or_linf(const StructureFile& f, const std::string& name) {
  if (BVPtr b = f.find_bv(name)) return b;
  if (LInfPtr l = f.find_linf(name)) return std::make_shared<const BVOperator>(bv_from_linf(l, f.truncation));
  throw ValidationError("no bv or linf block named '" + name + "'");
}

void run_verify(const StructureFile& f, const Options& o) {
  const int pw = probe(f, o);
  bool any = false;
  auto wanted = [&](const std::string& n) {
    bool w = o.name.empty() || o.name == n;
    any = any || w;
    return w;
  };
  for (const LInfPtr& l : f.linf) {
    if (!wanted(l->name())) continue;
    Report& r = new_report("L-infinity structure " + l->name(), f.truncation);
    r.bounds.emplace_back("A", l->max_arity());
    r.add(check_codifferential(*l, pw));
    r.add(check_jacobi_forms(*l, std::min(pw, l->max_arity() + 1)));
  }
  for (const BVPtr& b : f.bv) {
    if (!wanted(b->name)) continue;
    Report r = check_bv(*b, pw);
    PurityCertificate c = check_pure(*b);
    r.tables.emplace_back("pure", c.pure ? "yes" : "no (" + c.witness + ")");
    g_reports.push_back(std::move(r));
  }
  for (const LInfMorphism& m : f.linf_morphisms) {
    if (!wanted(m.name)) continue;
    Report& r = new_report("L-infinity morphism " + m.name, f.truncation);
    r.add(check_linf_morphism(m, pw));
  }
  for (const BVMorphism& m : f.bv_morphisms) {
    if (!wanted(m.name)) continue;
    Report r = check_bv_morphism(m);
    PurityCertificate c = check_pure(m);
    r.tables.emplace_back("pure", c.pure ? "yes" : "no (" + c.witness + ")");
    g_reports.push_back(std::move(r));
  }
  if (!any) throw ValidationError(o.name.empty() ? "file contains no blocks" : "no block named '" + o.name + "'");
}

void run_derive(const StructureFile& f, const Options& o) {
  BVPtr b = find_bv_or_linf(f, o.bv);
  std::vector<Poly> args;
  for (const std::string& a : o.args) args.push_back(parse_poly(b->carrier, a));
  if (args.empty()) throw ValidationError("derive needs at least one --arg");
  Report& r = new_report("derived brackets of " + b->name, f.truncation);
  std::string tuple;
  for (std::size_t i = 0; i < args.size(); ++i) tuple += (i ? ", " : "") + args[i].str();
  const std::string n = std::to_string(args.size());
  r.tables.emplace_back("l^hbar_" + n + "(" + tuple + ")", derived_bracket_h(*b, args).str());
  r.tables.emplace_back("L_" + n + "(" + tuple + ")", modified_bracket(*b, args).str());
  r.tables.emplace_back("l_" + n + "(" + tuple + ")", semiclassical_bracket(*b, args).str());
}

void run_compose(const StructureFile& f, const Options& o) {
  StructureFile out;
  out.truncation = f.truncation;
  out.arity = f.arity;
  const LInfMorphism* lo = f.find_linf_morphism(o.outer);
  const LInfMorphism* li = f.find_linf_morphism(o.inner);
  const BVMorphism* bo = f.find_bv_morphism(o.outer);
  const BVMorphism* bi = f.find_bv_morphism(o.inner);
  if (lo && li) {
    LInfMorphism c = compose_linf(*lo, *li, f.arity);
    Report& r = new_report("composite " + c.name, f.truncation);
    r.add(check_linf_morphism(c, probe(f, o)));
    collect(out, c);
    attach_file(r, out, o);
  } else if (bo && bi) {
    BVMorphism c = o.direct ? compose_direct(*bo, *bi) : compose_diamond(*bo, *bi);
    Report r = check_bv_morphism(c);
    collect(out, c);
    attach_file(r, out, o);
    g_reports.push_back(std::move(r));
  } else {
    throw ValidationError("compose needs two morphisms of the same kind");
  }
}

StructureFile single(const StructureFile& f) {
  StructureFile out;
  out.truncation = f.truncation;
  out.arity = f.arity;
  return out;
}

void run_translate(const StructureFile& f, const Options& o) {
  StructureFile out = single(f);
  StructureFile orig = single(f);
  StructureFile back = single(f);
  Report* r = nullptr;
  if (const LInfMorphism* m = f.find_linf_morphism(o.morphism)) {
    BVMorphism t = linf_to_bv(*m, f.truncation);
    r = &new_report("translation of " + m->name, f.truncation);
    collect(out, t);
    if (o.round_trip) {
      collect(orig, *m);
      collect(back, bv_to_linf(t));
    }
  } else if (const BVMorphism* m = f.find_bv_morphism(o.morphism)) {
    LInfMorphism t = bv_to_linf(*m);
    r = &new_report("translation of " + m->name, f.truncation);
    collect(out, t);
    if (o.round_trip) {
      BVMorphism b = linf_to_bv(t, m->source, m->target);
      b.name = m->name;
      collect(orig, *m);
      collect(back, b);
    }
  } else {
    throw ValidationError("no morphism named '" + o.morphism + "'");
  }
  if (o.round_trip) {
    Check c{"round trip is byte-identical", true, "", {}};
    std::string a = serialize(orig);
    std::string b = serialize(back);
    if (a != b) c.fail("serialized morphism", b);
    r->add(c);
  }
  attach_file(*r, out, o);
}

void run_adjoint(const StructureFile& f, const Options& o) {
  StructureFile out = single(f);
  if (const BVMorphism* m = f.find_bv_morphism(o.morphism)) {
    auto h = std::make_shared<const LInfStructure>(modified_structure(*m->target, f.arity, "L(" + m->target->name + ")"));
    LInfMorphism fw = adjunction_forward(*m, h);
    Report& r = new_report("adjoint of " + m->name, f.truncation);
    Check c{"backward(forward(psi)) = psi", true, "", {}};
    BVMorphism back = adjunction_backward(fw, m->source, m->target);
    if (auto w = first_difference(back.phi, m->phi))
      c.fail("word " + m->source->carrier->format(*w), (back.phi.on_word(*w) - m->phi.on_word(*w)).str());
    r.add(c);
    collect(out, fw);
    attach_file(r, out, o);
  } else if (const LInfMorphism* m = f.find_linf_morphism(o.morphism)) {
    if (o.into.empty()) throw ValidationError("adjoint of an L-infinity morphism needs --into BV");
    BVPtr v = f.find_bv(o.into);
    if (!v) throw ValidationError("no bv block named '" + o.into + "'");
    auto src = std::make_shared<const BVOperator>(bv_from_linf(m->source, f.truncation));
    BVMorphism bw = adjunction_backward(*m, src, v);
    Report r = check_bv_morphism(bw);
    r.subject = "adjoint of " + m->name;
    collect(out, bw);
    attach_file(r, out, o);
    g_reports.push_back(std::move(r));
  } else {
    throw ValidationError("no morphism named '" + o.morphism + "'");
  }
}

void run_qme(const StructureFile& f, const Options& o) {
  BVPtr b = find_bv_or_linf(f, o.bv);
  Poly s = parse_poly(b->carrier, o.element);
  g_reports.push_back(qme_check(*b, s));
  if (!o.propagate.empty()) {
    const BVMorphism* m = f.find_bv_morphism(o.propagate);
    if (!m) throw ValidationError("no BV morphism named '" + o.propagate + "'");
    if (!m->source->carrier->same_algebra(*b->carrier))
      throw ValidationError("morphism '" + m->name + "' does not start at '" + b->name + "'");
    Poly t = qme_propagate(*m, s.recarried(m->source->carrier));
    Report r = qme_check(*m->target, t);
    r.subject += " (propagated along " + m->name + ")";
    r.tables.emplace_back("S'", t.str());
    g_reports.push_back(std::move(r));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact checks for L-infinity and BV-infinity structures"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"text", "machine"}));
  app.add_option("--probe-weight", o.probe_weight, "Lower the probe weight (never raises the file's W)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--timing", o.timing, "Include wall-clock time in reports");
  app.add_option("--output", o.output, "Also write the resulting structure file here");

  auto file_arg = [&](CLI::App* sub) { sub->add_option("file", o.file, "Structure file")->required(); };

  auto* verify = app.add_subcommand("verify", "Run every applicable check");
  file_arg(verify);
  verify->add_option("--name", o.name, "Only this block");

  auto* derive = app.add_subcommand("derive", "Tabulate l^hbar_n, L_n and l_n on a tuple");
  file_arg(derive);
  derive->add_option("--bv", o.bv, "BV or L-infinity block")->required();
  derive->add_option("--arg", o.args, "Argument element (repeat)")->required();

  auto* compose = app.add_subcommand("compose", "Compose two morphisms");
  file_arg(compose);
  compose->add_option("--outer", o.outer)->required();
  compose->add_option("--inner", o.inner)->required();
  compose->add_flag("--direct", o.direct, "Use psi o exp(phi) (inner must be pure)");

  auto* translate = app.add_subcommand("translate", "Translate a morphism between the two worlds");
  file_arg(translate);
  translate->add_option("--morphism", o.morphism)->required();
  translate->add_flag("--round-trip", o.round_trip, "Translate back and compare serializations");

  auto* adjoint = app.add_subcommand("adjoint", "Adjunction between BV and L-infinity morphisms");
  file_arg(adjoint);
  adjoint->add_option("--morphism", o.morphism)->required();
  adjoint->add_option("--into", o.into, "Target BV block for the backward direction");

  auto* qme = app.add_subcommand("qme", "Quantum master equation");
  file_arg(qme);
  qme->add_option("--bv", o.bv)->required();
  qme->add_option("--element", o.element)->required();
  qme->add_option("--propagate", o.propagate, "BV morphism to push the solution along");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  const ReportFormat format = o.format == "machine" ? ReportFormat::machine : ReportFormat::text;
  const auto start = std::chrono::steady_clock::now();
  try {
    StructureFile f = read_structure_file(o.file);
    if (*verify) run_verify(f, o);
    else if (*derive) run_derive(f, o);
    else if (*compose) run_compose(f, o);
    else if (*translate) run_translate(f, o);
    else if (*adjoint) run_adjoint(f, o);
    else if (*qme) run_qme(f, o);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const InternalConsistencyError& e) {
    std::cerr << "internal consistency error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const Error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }
  if (o.timing) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (Report& r : g_reports) r.seconds = secs;
  }
  std::cout << emit_reports(g_reports, format);
  for (const Report& r : g_reports)
    if (!r.passed()) return kExitValidation;
  return kExitPass;
}
