#include "bvcalc/structure_file.hpp"

#include "bvcalc/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace bvcalc {

namespace {

using json = nlohmann::ordered_json;

struct RawEntry {
  std::string key;
  std::string text;
  int line = 0;
  int column = 0;  // column of `text`
};

struct RawBlock {
  std::string kind;
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;
  std::vector<RawEntry> entries;
  int line = 0;
};

struct RawFile {
  std::vector<std::pair<std::string, int>> truncation;
  int truncation_line = 0;
  std::vector<RawBlock> blocks;
};

// Offset-tagged failure inside a single field; converted to ParseError by the caller.
struct FieldError {
  std::string what;
  std::size_t offset;
};

bool name_char(char ch) {
  return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '\'' || ch == '.';
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  if (s.front() == '[') {
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '[') ++depth;
      if (s[i] == ']' && --depth == 0) return i + 1 == s.size();
      if (std::isspace(static_cast<unsigned char>(s[i]))) return false;
    }
    return false;
  }
  if (std::isdigit(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin(), s.end(), name_char);
}

std::vector<std::pair<std::string, int>> split_ws(std::string_view s) {
  std::vector<std::pair<std::string, int>> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size()) break;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    out.emplace_back(std::string(s.substr(i, j - i)), static_cast<int>(i));
    i = j;
  }
  return out;
}

int parse_int(std::string_view s, const char* what, int line, int col) {
  int v = 0;
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
  if (i == s.size()) throw ParseError(std::string("expected an integer for ") + what, line, col);
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw ParseError(std::string("expected an integer for ") + what + ", got '" + std::string(s) + "'", line, col);
    v = v * 10 + (s[i] - '0');
    if (v > 1000000) throw ParseError(std::string("integer out of range for ") + what, line, col);
  }
  return neg ? -v : v;
}

// ---------------------------------------------------------------------------
// block text

RawFile read_text(std::string_view text) {
  RawFile f;
  RawBlock* open = nullptr;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    const std::string& head = toks[0].first;
    const int col0 = toks[0].second + 1;
    if (open) {
      if (head == "end") {
        if (toks.size() > 1) throw ParseError("unexpected text after 'end'", line_no, toks[1].second + 1);
        open = nullptr;
        continue;
      }
      std::size_t start = toks[0].second + head.size();
      while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start]))) ++start;
      std::string_view rest = line.substr(start);
      while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back()))) rest.remove_suffix(1);
      open->entries.push_back({head, std::string(rest), line_no, static_cast<int>(start) + 1});
      continue;
    }
    if (head == "truncation") {
      if (f.truncation_line) throw ParseError("second truncation line", line_no, col0);
      if (!f.blocks.empty()) throw ParseError("truncation must precede all blocks", line_no, col0);
      f.truncation_line = line_no;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        auto eq = toks[i].first.find('=');
        if (eq == std::string::npos) throw ParseError("expected KEY=VALUE", line_no, toks[i].second + 1);
        f.truncation.emplace_back(toks[i].first.substr(0, eq),
                                  parse_int(std::string_view(toks[i].first).substr(eq + 1), "truncation bound",
                                            line_no, toks[i].second + static_cast<int>(eq) + 2));
      }
      continue;
    }
    if (head == "space" || head == "linf" || head == "bv" || head == "morphism") {
      if (toks.size() < 2) throw ParseError("block '" + head + "' needs a name", line_no, col0 + 1);
      RawBlock b;
      b.kind = head;
      b.name = toks[1].first;
      b.line = line_no;
      for (std::size_t i = 2; i < toks.size(); ++i) {
        auto eq = toks[i].first.find('=');
        if (eq == std::string::npos || eq == 0) throw ParseError("expected KEY=VALUE", line_no, toks[i].second + 1);
        b.attrs.emplace_back(toks[i].first.substr(0, eq), toks[i].first.substr(eq + 1));
      }
      f.blocks.push_back(std::move(b));
      open = &f.blocks.back();
      continue;
    }
    throw ParseError("unknown keyword '" + head + "'", line_no, col0);
  }
  if (open) throw ParseError("block '" + open->name + "' is not closed with 'end'", line_no, 1);
  return f;
}

std::string write_text(const RawFile& f) {
  std::ostringstream os;
  os << "truncation";
  for (const auto& [k, v] : f.truncation) os << ' ' << k << '=' << v;
  os << '\n';
  for (const RawBlock& b : f.blocks) {
    os << '\n' << b.kind << ' ' << b.name;
    for (const auto& [k, v] : b.attrs) os << ' ' << k << '=' << v;
    os << '\n';
    for (const RawEntry& e : b.entries) os << "  " << e.key << ' ' << e.text << '\n';
    os << "end\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// JSON mirror

RawFile read_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports a byte offset; recover line and column from it.
    std::size_t off = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + off, '\n'));
    std::size_t ls = text.rfind('\n', off == 0 ? 0 : off - 1);
    int col = static_cast<int>(off - (ls == std::string_view::npos ? 0 : ls + 1)) + 1;
    throw ParseError("malformed JSON", line, col);
  }
  RawFile f;
  auto fail = [](const std::string& what) { throw ParseError(what, 1, 1); };
  if (!j.is_object()) fail("JSON root must be an object");
  for (const auto& [k, v] : j.items())
    if (k != "truncation" && k != "blocks") fail("unknown key '" + k + "'");
  if (j.contains("truncation")) {
    if (!j["truncation"].is_object()) fail("'truncation' must be an object");
    f.truncation_line = 1;
    for (const auto& [k, v] : j["truncation"].items()) {
      if (!v.is_number_integer()) fail("truncation bound '" + k + "' must be an integer");
      f.truncation.emplace_back(k, v.get<int>());
    }
  }
  if (j.contains("blocks")) {
    if (!j["blocks"].is_array()) fail("'blocks' must be an array");
    int idx = 0;
    for (const auto& jb : j["blocks"]) {
      ++idx;
      if (!jb.is_object()) fail("block " + std::to_string(idx) + " must be an object");
      RawBlock b;
      b.line = idx;
      for (const auto& [k, v] : jb.items()) {
        if (k == "kind" && v.is_string()) b.kind = v.get<std::string>();
        else if (k == "name" && v.is_string()) b.name = v.get<std::string>();
        else if (k == "attrs" && v.is_object()) {
          for (const auto& [ak, av] : v.items()) {
            if (!av.is_string()) fail("attribute '" + ak + "' must be a string");
            b.attrs.emplace_back(ak, av.get<std::string>());
          }
        } else if (k == "entries" && v.is_array()) {
          int eidx = 0;
          for (const auto& je : v) {
            ++eidx;
            if (!je.is_array() || je.size() != 2 || !je[0].is_string() || !je[1].is_string())
              fail("entry " + std::to_string(eidx) + " of block " + std::to_string(idx) + " must be [key, text]");
            b.entries.push_back({je[0].get<std::string>(), je[1].get<std::string>(), idx, 1});
          }
        } else {
          fail("unknown or mistyped key '" + k + "' in block " + std::to_string(idx));
        }
      }
      if (b.kind.empty() || b.name.empty()) fail("block " + std::to_string(idx) + " needs a kind and a name");
      f.blocks.push_back(std::move(b));
    }
  }
  return f;
}

std::string write_json(const RawFile& f) {
  json j;
  j["truncation"] = json::object();
  for (const auto& [k, v] : f.truncation) j["truncation"][k] = v;
  j["blocks"] = json::array();
  for (const RawBlock& b : f.blocks) {
    json jb;
    jb["kind"] = b.kind;
    jb["name"] = b.name;
    jb["attrs"] = json::object();
    for (const auto& [k, v] : b.attrs) jb["attrs"][k] = v;
    jb["entries"] = json::array();
    for (const RawEntry& e : b.entries) jb["entries"].push_back(json::array({e.key, e.text}));
    j["blocks"].push_back(std::move(jb));
  }
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// elements

class PolyReader {
 public:
  PolyReader(const CarrierPtr& c, std::string_view s) : c_(c), s_(s) {}

  Poly poly() {
    Poly out(c_);
    skip();
    if (at_end()) throw FieldError{"expected an element", pos_};
    bool first = true;
    while (!at_end()) {
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = get() == '-' ? -1 : 1;
        skip();
      } else if (!first) {
        throw FieldError{"expected '+' or '-'", pos_};
      }
      first = false;
      term(out, sign);
      skip();
    }
    return out;
  }

  // Product of generators with exponents; returns the normal form and sign.
  std::pair<Word, int> word() {
    skip();
    std::vector<std::size_t> factors;
    if (!at_end() && peek() == '1') {
      get();
      skip();
      if (!at_end()) throw FieldError{"unexpected text after 1", pos_};
      return {c_->unit(), 1};
    }
    while (true) {
      skip();
      std::size_t at = pos_;
      std::string name = read_name();
      if (name == "hbar" || name == "lambda") throw FieldError{"'" + name + "' cannot appear in a word", at};
      auto g = c_->space().find(name);
      if (!g) throw FieldError{"unknown generator '" + name + "'", at};
      int e = exponent();
      if (e < 1) throw FieldError{"generator exponents must be positive", at};
      for (int i = 0; i < e; ++i) factors.push_back(*g);
      skip();
      if (at_end()) break;
      if (peek() != '*') throw FieldError{"expected '*'", pos_};
      get();
    }
    auto nf = normalize(*c_, factors);
    if (!nf) throw FieldError{"odd generator squared", 0};
    if (!c_->admits(nf->first)) throw FieldError{"word outside the truncation", 0};
    return *nf;
  }

 private:
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  char get() { return s_[pos_++]; }
  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  std::string read_name() {
    std::size_t start = pos_;
    if (!at_end() && peek() == '[') {
      int depth = 0;
      while (!at_end()) {
        char ch = get();
        if (ch == '[') ++depth;
        if (ch == ']' && --depth == 0) return std::string(s_.substr(start, pos_ - start));
      }
      throw FieldError{"unterminated '['", start};
    }
    while (!at_end() && name_char(peek())) ++pos_;
    if (pos_ == start) throw FieldError{"expected a generator name", start};
    return std::string(s_.substr(start, pos_ - start));
  }

  long read_digits() {
    std::size_t start = pos_;
    long v = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (get() - '0');
      if (v > 1000000000L) throw FieldError{"number too large", start};
    }
    if (pos_ == start) throw FieldError{"expected digits", start};
    return v;
  }

  int exponent() {
    skip();
    if (at_end() || peek() != '^') return 1;
    get();
    skip();
    bool neg = false;
    if (!at_end() && peek() == '-') {
      neg = true;
      get();
    }
    long v = read_digits();
    return static_cast<int>(neg ? -v : v);
  }

  void term(Poly& out, int sign) {
    Scalar coef(sign);
    int hbar = 0;
    int lambda = 0;
    std::vector<std::size_t> factors;
    const std::size_t start = pos_;
    while (true) {
      skip();
      if (at_end()) throw FieldError{"expected a factor", pos_};
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        std::size_t at = pos_;
        long num = read_digits();
        long den = 1;
        if (!at_end() && peek() == '/') {
          get();
          den = read_digits();
          if (den == 0) throw FieldError{"zero denominator", at};
        }
        coef *= Scalar(num, den);
      } else {
        std::size_t at = pos_;
        std::string name = read_name();
        int e = exponent();
        if (name == "hbar") {
          hbar += e;
        } else if (name == "lambda") {
          if (e < 0) throw FieldError{"negative lambda power", at};
          lambda += e;
        } else {
          auto g = c_->space().find(name);
          if (!g) throw FieldError{"unknown generator '" + name + "'", at};
          if (e < 0) throw FieldError{"negative generator exponent", at};
          for (int i = 0; i < e; ++i) factors.push_back(*g);
        }
      }
      skip();
      if (at_end() || peek() == '+' || peek() == '-') break;
      if (peek() != '*') throw FieldError{"expected '*'", pos_};
      get();
    }
    auto nf = normalize(*c_, factors);
    if (!nf) throw FieldError{"odd generator squared", start};
    if (!c_->admits(nf->first)) throw FieldError{"word outside the truncation", start};
    if (lambda > c_->lambda_cap()) throw FieldError{"lambda power above the cap", start};
    if (nf->second < 0) coef = -coef;
    out.add_term(Monomial{nf->first, hbar, lambda}, coef);
  }

  const CarrierPtr& c_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

// Splits "LHS = RHS" and returns both sides with the column of the RHS.
struct Equation {
  std::string_view lhs;
  std::string_view rhs;
  int rhs_column;
};

Equation split_equation(const RawEntry& e) {
  auto eq = e.text.find('=');
  if (eq == std::string::npos) throw ParseError("expected 'WORD = VALUE'", e.line, e.column);
  std::string_view t(e.text);
  return {t.substr(0, eq), t.substr(eq + 1), e.column + static_cast<int>(eq) + 1};
}

Poly read_poly(const CarrierPtr& c, std::string_view s, int line, int col) {
  try {
    return PolyReader(c, s).poly();
  } catch (const FieldError& err) {
    throw ParseError(err.what, line, col + static_cast<int>(err.offset));
  }
}

std::pair<Word, int> read_word(const CarrierPtr& c, std::string_view s, int line, int col) {
  try {
    return PolyReader(c, s).word();
  } catch (const FieldError& err) {
    throw ParseError(err.what, line, col + static_cast<int>(err.offset));
  }
}

// ---------------------------------------------------------------------------
// raw -> objects

class Builder {
 public:
  StructureFile build(const RawFile& raw) {
    std::set<std::string> seen;
    for (const auto& [k, v] : raw.truncation) {
      if (!seen.insert(k).second) throw ParseError("duplicate truncation key '" + k + "'", raw.truncation_line, 1);
      if (k == "W") f_.truncation.weight = v;
      else if (k == "H") f_.truncation.hbar = v;
      else if (k == "Lambda") f_.truncation.lambda = v;
      else if (k == "A") f_.arity = v;
      else throw ParseError("unknown truncation key '" + k + "'", raw.truncation_line, 1);
    }
    if (f_.truncation.weight < 1 || f_.truncation.hbar < 0 || f_.truncation.lambda < 0 || f_.arity < 1)
      throw ParseError("truncation bounds out of range", raw.truncation_line, 1);
    for (const RawBlock& b : raw.blocks) {
      if (b.kind == "space") space(b);
      else if (b.kind == "linf") linf(b);
      else if (b.kind == "bv") bv(b);
      else if (b.kind == "morphism") morphism(b);
      else throw ParseError("unknown block kind '" + b.kind + "'", b.line, 1);
    }
    return std::move(f_);
  }

 private:
  [[noreturn]] static void semantic(const RawBlock& b, const std::string& what, int line = 0) {
    throw ParseError(b.kind + " '" + b.name + "': " + what, line ? line : b.line, 1);
  }

  std::map<std::string, std::string> attrs(const RawBlock& b, const std::set<std::string>& allowed) {
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : b.attrs) {
      if (!allowed.count(k)) semantic(b, "unknown attribute '" + k + "'");
      if (!out.emplace(k, v).second) semantic(b, "duplicate attribute '" + k + "'");
    }
    return out;
  }

  static int int_attr(const RawBlock& b, const std::map<std::string, std::string>& a, const std::string& key,
                      int fallback) {
    auto it = a.find(key);
    return it == a.end() ? fallback : parse_int(it->second, key.c_str(), b.line, 1);
  }

  static void only_keys(const RawBlock& b, const RawEntry& e, std::initializer_list<const char*> keys) {
    for (const char* k : keys)
      if (e.key == k) return;
    throw ParseError(b.kind + " '" + b.name + "': unknown entry '" + e.key + "'", e.line, 1);
  }

  void unique(const RawBlock& b, std::set<std::string>& names) {
    if (!names.insert(b.name).second) semantic(b, "duplicate name");
  }

  void space(const RawBlock& b) {
    unique(b, space_names_);
    attrs(b, {});
    std::vector<Generator> gens;
    std::set<std::string> names;
    for (const RawEntry& e : b.entries) {
      only_keys(b, e, {"gen"});
      auto toks = split_ws(e.text);
      if (toks.size() < 2 || toks.size() > 3) throw ParseError("expected 'gen NAME DEGREE [size=N]'", e.line, e.column);
      const std::string& name = toks[0].first;
      if (!valid_name(name) || name == "hbar" || name == "lambda")
        throw ParseError("invalid generator name '" + name + "'", e.line, e.column);
      if (!names.insert(name).second) semantic(b, "duplicate generator '" + name + "'", e.line);
      Generator g{name, parse_int(toks[1].first, "degree", e.line, e.column + toks[1].second), 1};
      if (toks.size() == 3) {
        const std::string& s = toks[2].first;
        if (s.rfind("size=", 0) != 0) throw ParseError("expected size=N", e.line, e.column + toks[2].second);
        g.size = parse_int(std::string_view(s).substr(5), "size", e.line, e.column + toks[2].second);
        if (g.size < 0) throw ParseError("negative size", e.line, e.column + toks[2].second);
      }
      gens.push_back(std::move(g));
    }
    f_.spaces.push_back(make_space(b.name, std::move(gens)));
  }

  SpacePtr need_space(const RawBlock& b, const std::map<std::string, std::string>& a) {
    auto it = a.find("space");
    if (it == a.end()) semantic(b, "missing attribute 'space'");
    SpacePtr s = f_.find_space(it->second);
    if (!s) semantic(b, "unknown space '" + it->second + "'");
    return s;
  }

  void linf(const RawBlock& b) {
    unique(b, linf_names_);
    auto a = attrs(b, {"space", "arity", "size"});
    SpacePtr s = need_space(b, a);
    const int arity = int_attr(b, a, "arity", f_.arity);
    const int size = int_attr(b, a, "size", -1);
    if (arity < 1) semantic(b, "arity must be positive");
    auto l = std::make_shared<LInfStructure>(b.name, s, arity, size);
    const CarrierPtr& c = l->carrier();
    for (const RawEntry& e : b.entries) {
      only_keys(b, e, {"l", "bracket", "d"});
      Equation eq = split_equation(e);
      Poly value = read_poly(c, eq.rhs, e.line, eq.rhs_column);
      if (e.key == "bracket") {
        auto toks = split_ws(eq.lhs);
        if (toks.size() != 2) throw ParseError("expected 'bracket X Y = VALUE'", e.line, e.column);
        auto x = s->find(toks[0].first);
        auto y = s->find(toks[1].first);
        if (!x || !y) throw ParseError("unknown generator in bracket", e.line, e.column);
        auto nf = normalize(*c, std::vector<std::size_t>{*x, *y});
        if (!nf) semantic(b, "odd generator squared in bracket entry", e.line);
        // [x,y] = (-1)^{|x|} l_2(x,y) with |x| the degree in g.
        int sign = nf->second * (is_odd((*s)[*x].degree) ? -1 : 1);
        value *= Scalar(sign);
        add(b, *l, nf->first, value, e.line);
      } else {
        auto [w, sign] = read_word(c, eq.lhs, e.line, e.column);
        if (e.key == "d" && w.weight() != 1) throw ParseError("'d' takes a single generator", e.line, e.column);
        if (w.is_unit()) throw ParseError("brackets are defined on nonempty words", e.line, e.column);
        value *= Scalar(sign);
        add(b, *l, w, value, e.line);
      }
    }
    try {
      l->check_shape();
    } catch (const ValidationError& err) {
      semantic(b, err.what());
    }
    f_.linf.push_back(std::move(l));
  }

  static void add(const RawBlock& b, LInfStructure& l, const Word& w, const Poly& v, int line) {
    try {
      l.add_bracket(w, v);
    } catch (const Error& err) {
      semantic(b, err.what(), line);
    }
  }

  void bv(const RawBlock& b) {
    unique(b, bv_names_);
    auto a = attrs(b, {"space", "view", "from", "weight", "size"});
    Truncation t = f_.truncation;
    t.weight = int_attr(b, a, "weight", t.weight);
    t.size = int_attr(b, a, "size", -1);
    if (auto it = a.find("from"); it != a.end()) {
      if (a.count("space") || a.count("view")) semantic(b, "'from' excludes 'space' and 'view'");
      if (!b.entries.empty()) semantic(b, "a block with 'from' has no entries", b.entries.front().line);
      LInfPtr l = f_.find_linf(it->second);
      if (!l) semantic(b, "unknown L-infinity structure '" + it->second + "'");
      BVOperator op = bv_from_linf(l, t);
      op.name = b.name;
      f_.bv.push_back(std::make_shared<const BVOperator>(std::move(op)));
      return;
    }
    SpacePtr s = need_space(b, a);
    const int view = int_attr(b, a, "view", 0);
    CarrierPtr c = make_carrier(s, view, t);
    std::vector<DopTerm> terms;
    Operator delta(c, c, true);
    for (const RawEntry& e : b.entries) {
      only_keys(b, e, {"dop", "delta"});
      if (e.key == "dop") {
        auto colon = e.text.find(':');
        if (colon == std::string::npos) throw ParseError("expected 'dop COEFF : GEN...'", e.line, e.column);
        DopTerm term{read_poly(c, std::string_view(e.text).substr(0, colon), e.line, e.column), {}};
        for (const auto& [tok, off] : split_ws(std::string_view(e.text).substr(colon + 1))) {
          auto g = s->find(tok);
          if (!g) throw ParseError("unknown generator '" + tok + "'", e.line, e.column + static_cast<int>(colon) + 1 + off);
          term.derivatives.push_back(*g);
        }
        terms.push_back(std::move(term));
      } else {
        Equation eq = split_equation(e);
        auto [w, sign] = read_word(c, eq.lhs, e.line, e.column);
        Poly v = read_poly(c, eq.rhs, e.line, eq.rhs_column);
        v *= Scalar(sign);
        delta.add(w, v);
      }
    }
    if (!terms.empty()) {
      Operator d = differential_operator(c, terms);
      if (!d.is_zero()) {
        if (!d.odd()) semantic(b, "differential operator is even");
        delta += d;
      }
    }
    f_.bv.push_back(std::make_shared<const BVOperator>(b.name, c, std::move(delta)));
  }

  void morphism(const RawBlock& b) {
    unique(b, morphism_names_);
    auto a = attrs(b, {"kind", "from", "to", "arity"});
    for (const char* k : {"kind", "from", "to"})
      if (!a.count(k)) semantic(b, std::string("missing attribute '") + k + "'");
    const std::string& kind = a["kind"];
    if (kind == "linf") {
      LInfPtr src = f_.find_linf(a["from"]);
      LInfPtr tgt = f_.find_linf(a["to"]);
      if (!src || !tgt) semantic(b, "unknown endpoint");
      LInfMorphism m{b.name, src, tgt, int_attr(b, a, "arity", f_.arity), {}};
      if (m.max_arity < 1) semantic(b, "arity must be positive");
      CarrierPtr keys = m.key_carrier();
      for (const RawEntry& e : b.entries) {
        only_keys(b, e, {"phi"});
        Equation eq = split_equation(e);
        auto [w, sign] = read_word(keys, eq.lhs, e.line, e.column);
        if (w.is_unit()) throw ParseError("components are defined on nonempty words", e.line, e.column);
        Poly v = read_poly(tgt->carrier(), eq.rhs, e.line, eq.rhs_column);
        v *= Scalar(sign);
        m.set(w, m.component(w) + v);
      }
      try {
        m.check_shape();
      } catch (const ValidationError& err) {
        semantic(b, err.what());
      }
      f_.linf_morphisms.push_back(std::move(m));
    } else if (kind == "bv") {
      if (a.count("arity")) semantic(b, "'arity' applies to kind=linf only");
      BVPtr src = f_.find_bv(a["from"]);
      BVPtr tgt = f_.find_bv(a["to"]);
      if (!src || !tgt) semantic(b, "unknown endpoint");
      Operator phi(src->carrier, tgt->carrier, false);
      for (const RawEntry& e : b.entries) {
        only_keys(b, e, {"phi"});
        Equation eq = split_equation(e);
        auto [w, sign] = read_word(src->carrier, eq.lhs, e.line, e.column);
        Poly v = read_poly(tgt->carrier, eq.rhs, e.line, eq.rhs_column);
        v *= Scalar(sign);
        phi.add(w, v);
      }
      f_.bv_morphisms.emplace_back(b.name, src, tgt, std::move(phi));
    } else {
      semantic(b, "kind must be 'linf' or 'bv'");
    }
  }

  StructureFile f_;
  std::set<std::string> space_names_, linf_names_, bv_names_, morphism_names_;
};

// ---------------------------------------------------------------------------
// objects -> raw

bool sized(const GradedSpace& s) {
  return std::any_of(s.generators().begin(), s.generators().end(), [](const Generator& g) { return g.size != 1; });
}

RawFile to_raw(const StructureFile& f) {
  RawFile raw;
  raw.truncation = {{"W", f.truncation.weight}, {"H", f.truncation.hbar}, {"Lambda", f.truncation.lambda}, {"A", f.arity}};
  for (const SpacePtr& s : f.spaces) {
    RawBlock b{"space", s->label(), {}, {}, 0};
    for (const Generator& g : s->generators())
      b.entries.push_back({"gen", g.name + " " + std::to_string(g.degree) + (g.size != 1 ? " size=" + std::to_string(g.size) : ""), 0, 0});
    raw.blocks.push_back(std::move(b));
  }
  for (const LInfPtr& l : f.linf) {
    RawBlock b{"linf", l->name(), {{"space", l->space().label()}}, {}, 0};
    if (l->max_arity() != f.arity) b.attrs.emplace_back("arity", std::to_string(l->max_arity()));
    if (l->carrier()->max_size() != l->max_arity()) b.attrs.emplace_back("size", std::to_string(l->carrier()->max_size()));
    for (const auto& [w, v] : l->brackets()) b.entries.push_back({"l", l->carrier()->format(w) + " = " + v.str(), 0, 0});
    raw.blocks.push_back(std::move(b));
  }
  for (const BVPtr& bv : f.bv) {
    const Carrier& c = *bv->carrier;
    RawBlock b{"bv", bv->name, {}, {}, 0};
    bool from = false;
    if (bv->origin && f.find_linf(bv->origin->name()) == bv->origin) {
      b.attrs.emplace_back("from", bv->origin->name());
      from = true;
    } else {
      b.attrs.emplace_back("space", c.space().label());
      b.attrs.emplace_back("view", std::to_string(c.view_shift()));
    }
    if (c.max_weight() != f.truncation.weight) b.attrs.emplace_back("weight", std::to_string(c.max_weight()));
    const int default_size = from && sized(c.space()) ? coalgebra_carrier(*bv->origin, c.max_weight())->max_size()
                                                      : c.max_weight();
    if (c.max_size() != default_size) b.attrs.emplace_back("size", std::to_string(c.max_size()));
    if (!from)
      for (const auto& [w, v] : bv->delta.table()) b.entries.push_back({"delta", c.format(w) + " = " + v.str(), 0, 0});
    raw.blocks.push_back(std::move(b));
  }
  for (const LInfMorphism& m : f.linf_morphisms) {
    RawBlock b{"morphism", m.name, {{"kind", "linf"}, {"from", m.source->name()}, {"to", m.target->name()}}, {}, 0};
    if (m.max_arity != f.arity) b.attrs.emplace_back("arity", std::to_string(m.max_arity));
    CarrierPtr keys = m.key_carrier();
    for (const auto& [w, v] : m.corolla) b.entries.push_back({"phi", keys->format(w) + " = " + v.str(), 0, 0});
    raw.blocks.push_back(std::move(b));
  }
  for (const BVMorphism& m : f.bv_morphisms) {
    RawBlock b{"morphism", m.name, {{"kind", "bv"}, {"from", m.source->name}, {"to", m.target->name}}, {}, 0};
    for (const auto& [w, v] : m.phi.table()) b.entries.push_back({"phi", m.source->carrier->format(w) + " = " + v.str(), 0, 0});
    raw.blocks.push_back(std::move(b));
  }
  return raw;
}

}  // namespace

SpacePtr StructureFile::find_space(const std::string& name) const {
  for (const auto& s : spaces)
    if (s->label() == name) return s;
  return nullptr;
}

LInfPtr StructureFile::find_linf(const std::string& name) const {
  for (const auto& l : linf)
    if (l->name() == name) return l;
  return nullptr;
}

BVPtr StructureFile::find_bv(const std::string& name) const {
  for (const auto& b : bv)
    if (b->name == name) return b;
  return nullptr;
}

const LInfMorphism* StructureFile::find_linf_morphism(const std::string& name) const {
  for (const auto& m : linf_morphisms)
    if (m.name == name) return &m;
  return nullptr;
}

const BVMorphism* StructureFile::find_bv_morphism(const std::string& name) const {
  for (const auto& m : bv_morphisms)
    if (m.name == name) return &m;
  return nullptr;
}

StructureFile parse_structure(std::string_view text) {
  auto first = text.find_first_not_of(" \t\r\n");
  RawFile raw = first != std::string_view::npos && text[first] == '{' ? read_json(text) : read_text(text);
  return Builder().build(raw);
}

StructureFile read_structure_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_structure(os.str());
}

std::string serialize(const StructureFile& f) { return write_text(to_raw(f)); }
std::string serialize_json(const StructureFile& f) { return write_json(to_raw(f)); }

Poly parse_poly(const CarrierPtr& c, std::string_view text) { return read_poly(c, text, 1, 1); }
std::pair<Word, int> parse_word(const CarrierPtr& c, std::string_view text) { return read_word(c, text, 1, 1); }

namespace {

void add_space(StructureFile& f, const SpacePtr& s) {
  if (SpacePtr have = f.find_space(s->label())) {
    if (have->generators() != s->generators())
      throw MalformedInput("two different spaces are named '" + s->label() + "'");
    return;
  }
  f.spaces.push_back(s);
}

}  // namespace

void collect(StructureFile& f, const LInfPtr& l) {
  add_space(f, l->space_ptr());
  if (LInfPtr have = f.find_linf(l->name())) {
    if (have != l && have->brackets() != l->brackets())
      throw MalformedInput("two different L-infinity structures are named '" + l->name() + "'");
    return;
  }
  f.linf.push_back(l);
}

void collect(StructureFile& f, const BVPtr& b) {
  if (b->origin) collect(f, b->origin);
  add_space(f, b->carrier->space_ptr());
  if (BVPtr have = f.find_bv(b->name)) {
    if (have != b && !(have->delta == b->delta))
      throw MalformedInput("two different BV operators are named '" + b->name + "'");
    return;
  }
  f.bv.push_back(b);
}

void collect(StructureFile& f, const LInfMorphism& m) {
  collect(f, m.source);
  collect(f, m.target);
  if (!f.find_linf_morphism(m.name)) f.linf_morphisms.push_back(m);
}

void collect(StructureFile& f, const BVMorphism& m) {
  collect(f, m.source);
  collect(f, m.target);
  if (!f.find_bv_morphism(m.name)) f.bv_morphisms.push_back(m);
}

}  // namespace bvcalc
