#include "mw/moduli.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <regex>
#include <sstream>

#include "mw/blocks.hpp"
#include "mw/records.hpp"
#include "mw/symbols.hpp"

namespace mw::mod {

namespace {

constexpr long kMargin = 4;  // twist margin between requested and internal truncation
constexpr long kNref = 9;    // reference truncation for the construction-time audits

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

long parse_long(const std::string& raw, const std::string& ctx) {
  static const std::regex num(R"(^[+-]?\d+$)");
  std::string s = trim(raw);
  if (!std::regex_match(s, num))
    throw ModuliError(ctx + ": expected an integer, got '" + raw + "'");
  return std::stol(s);
}

// "2i+1" -> (2, 1); "i" -> (1, 0); "4i-2" -> (4, -2); "3" -> (0, 3)
std::pair<long, long> parse_linear(const std::string& raw, const std::string& ctx) {
  std::string s;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  static const std::regex with_i(R"(^([+-]?\d*)i([+-]\d+)?$)");
  static const std::regex constant(R"(^[+-]?\d+$)");
  std::smatch m;
  if (std::regex_match(s, m, with_i)) {
    long a = 1;
    std::string c = m[1].str();
    if (c == "-")
      a = -1;
    else if (!c.empty() && c != "+")
      a = std::stol(c);
    long b = m[2].matched ? std::stol(m[2].str()) : 0;
    return {a, b};
  }
  if (std::regex_match(s, constant)) return {0, std::stol(s)};
  throw ModuliError(ctx + ": cannot parse linear form '" + raw + "'");
}

std::string fmt_linear(long a, long b) {
  if (a == 0) return std::to_string(b);
  std::string s = (a == 1) ? "i" : (a == -1) ? "-i" : std::to_string(a) + "i";
  if (b > 0) s += "+" + std::to_string(b);
  if (b < 0) s += std::to_string(b);
  return s;
}

blk::AtomKind parse_kind(const std::string& s, const std::string& ctx) {
  if (s == "T") return blk::AtomKind::T;
  if (s == "H") return blk::AtomKind::H;
  if (s == "Cpartial") return blk::AtomKind::Cpartial;
  if (s == "CId") return blk::AtomKind::CId;
  throw ModuliError(ctx + ": unknown atom kind '" + s + "'");
}

// "H(2i-1)[4i-2] from 1" (family) or "T(2)[4]" / "T" (single atom)
AtomPattern parse_pattern(const std::string& raw, const std::string& ctx) {
  std::string s = trim(raw), text = s;
  long i0 = 0;
  bool has_from = false;
  size_t pos = s.find(" from ");
  if (pos != std::string::npos) {
    text = trim(s.substr(0, pos));
    i0 = parse_long(s.substr(pos + 6), ctx);
    has_from = true;
  }
  AtomPattern p;
  static const std::regex shaped(R"(^([A-Za-z]+)\(([^()\[\]]*)\)\[([^()\[\]]*)\]$)");
  static const std::regex bare(R"(^[A-Za-z]+$)");
  std::smatch m;
  if (std::regex_match(text, m, shaped)) {
    p.kind = parse_kind(m[1].str(), ctx);
    std::tie(p.qa, p.qb) = parse_linear(m[2].str(), ctx);
    std::tie(p.pa, p.pb) = parse_linear(m[3].str(), ctx);
  } else if (std::regex_match(text, bare)) {
    p.kind = parse_kind(text, ctx);
  } else {
    throw ModuliError(ctx + ": cannot parse atom pattern '" + raw + "'");
  }
  p.family = (p.qa != 0 || p.pa != 0);
  p.i0 = i0;
  if (p.family && !has_from)
    throw ModuliError(ctx + ": family pattern '" + raw + "' needs a 'from <k>' start index");
  if (!p.family && has_from)
    throw ModuliError(ctx + ": single atom '" + raw + "' cannot carry a 'from' clause");
  return p;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModuliError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Cartesian condition of the Chow model in weight n: (a, b) in
// CH^n + CH^(n+1) lies on the E1 page iff n*a + b is even.
ab::FGAbHom chow_condition(long n) {
  ab::Mat m = {{ab::Int(((n % 2) + 2) % 2), ab::Int(1)}};
  return ab::FGAbHom{ab::make_free(2), ab::make_cyclic(2), m};
}

ab::Int pow2(long e) {
  ab::Int r = 1;
  for (long i = 0; i < e; i++) r *= 2;
  return r;
}

// Swap every boundary-leg scale for the override (used to probe how the
// verification reacts to a wrong connecting scalar; the shipped data is
// never modified).
blk::BlockMor override_boundary_scale(blk::BlockMor m, const std::optional<ab::Int>& s) {
  if (s)
    for (auto& c : m.components)
      if (c.word == blk::ArrowWord::Boundary) c.scale = *s;
  return m;
}

}  // namespace

// --- atom patterns --------------------------------------------------------------

blk::BlockAtom AtomPattern::at(long i) const {
  if (!family) return blk::BlockAtom{kind, qb, pb};
  return blk::BlockAtom{kind, qa * i + qb, pa * i + pb};
}

long AtomPattern::last_index(long twist_bound) const {
  if (!family) return (qb <= twist_bound) ? i0 : i0 - 1;
  if (qa < 1) throw ModuliError("family " + str() + " must have strictly increasing twists");
  if (qa * i0 + qb > twist_bound) return i0 - 1;
  return (twist_bound - qb) / qa;
}

std::string AtomPattern::str() const {
  if (!family) return at(i0).str();
  return blk::kind_str(kind) + "(" + fmt_linear(qa, qb) + ")[" + fmt_linear(pa, pb) +
         "] from " + std::to_string(i0);
}

// --- builder sets ---------------------------------------------------------------

const Builder& BuilderSet::builder(const std::string& name) const {
  for (const Builder& b : builders)
    if (b.name == name) return b;
  throw ModuliError("unknown motive '" + name + "'");
}

std::vector<const GoldenValue*> BuilderSet::golden_for(const std::string& source,
                                                       const std::string& target) const {
  std::vector<const GoldenValue*> out;
  for (const GoldenValue& g : golden)
    if (g.source == source && g.target == target) out.push_back(&g);
  return out;
}

BuilderSet parse_builders(const std::string& text, const std::string& filename) {
  BuilderSet set;
  // legs may appear anywhere in the file, so attach them after the pass
  std::vector<std::pair<std::string, GysinLeg>> pending_legs;
  bool have_e1 = false;
  for (const io::Record& r : io::parse_records(text, filename)) {
    std::string ctx = filename + ":" + std::to_string(r.line);
    if (r.type == "builder") {
      Builder b;
      b.name = r.get("name");
      for (const std::string& v : r.get_all("atom")) {
        AtomPattern p = parse_pattern(v, ctx);
        if (p.family) throw ModuliError(ctx + ": 'atom' lines must be single atoms");
        b.parts.push_back(p);
      }
      for (const std::string& v : r.get_all("family")) {
        AtomPattern p = parse_pattern(v, ctx);
        if (!p.family) throw ModuliError(ctx + ": 'family' lines must depend on the index");
        b.parts.push_back(p);
      }
      if (auto s = r.get_opt("sum")) {
        std::istringstream ss(*s);
        std::string w;
        while (ss >> w) b.sum.push_back(w);
        if (b.sum.empty()) throw ModuliError(ctx + ": empty sum");
      }
      b.gysin = r.get_opt("gysin");
      b.cone = r.get_opt("cone");
      b.provenance = r.get_all("provenance");
      b.note = r.get_opt("note").value_or("");
      if (b.cone && (!b.parts.empty() || !b.sum.empty() || b.gysin))
        throw ModuliError(ctx + ": a cone-only motive cannot also list parts");
      if (!b.sum.empty() && (!b.parts.empty() || b.gysin))
        throw ModuliError(ctx + ": a sum motive cannot also list parts or a connecting datum");
      if (b.parts.empty() && b.sum.empty() && !b.cone)
        throw ModuliError(ctx + ": builder '" + b.name + "' presents nothing");
      for (const Builder& prev : set.builders)
        if (prev.name == b.name) throw ModuliError(ctx + ": duplicate builder '" + b.name + "'");
      set.builders.push_back(std::move(b));
    } else if (r.type == "gysin") {
      GysinDatum d;
      d.name = r.get("name");
      d.source_builder = r.get("source_builder");
      for (const std::string& v : r.get_all("target_atom")) {
        AtomPattern p = parse_pattern(v, ctx);
        if (p.family) throw ModuliError(ctx + ": 'target_atom' lines must be single atoms");
        d.targets.push_back(p);
      }
      for (const std::string& v : r.get_all("target_family")) {
        AtomPattern p = parse_pattern(v, ctx);
        if (!p.family) throw ModuliError(ctx + ": 'target_family' lines must depend on the index");
        d.targets.push_back(p);
      }
      d.provenance = r.get_all("provenance");
      if (!set.gysin.emplace(d.name, d).second)
        throw ModuliError(ctx + ": duplicate connecting datum '" + d.name + "'");
    } else if (r.type == "gysinleg") {
      GysinLeg l;
      std::string owner = r.get("gysin");
      l.src = parse_pattern(r.get("src"), ctx);
      l.tgt = parse_pattern(r.get("tgt"), ctx);
      std::string w = r.get("word");
      if (w == "boundary")
        l.word = blk::ArrowWord::Boundary;
      else if (w == "identity")
        l.word = blk::ArrowWord::Identity;
      else
        throw ModuliError(ctx + ": unknown arrow word '" + w + "'");
      l.scale = ab::Int(r.get_int("scale"));
      l.provenance = r.get_opt("provenance").value_or("");
      if (l.src.family != l.tgt.family || (l.src.family && l.src.i0 != l.tgt.i0))
        throw ModuliError(ctx + ": a leg must pair atoms with atoms or families index-by-index");
      pending_legs.emplace_back(owner, std::move(l));
    } else if (r.type == "conemarker") {
      ConeMarker mk;
      mk.name = r.get("name");
      mk.source_builder = r.get("source_builder");
      auto leg = blk::parse_atom(r.get("leg"));
      auto tgt = blk::parse_atom(r.get("target"));
      if (!leg || !tgt) throw ModuliError(ctx + ": marker leg/target must be atoms");
      mk.leg = *leg;
      mk.target = *tgt;
      mk.witt = ab::Int(r.get_int("witt"));
      mk.twoz = ab::Int(r.get_int("twoz"));
      mk.provenance = r.get_all("provenance");
      if (!set.markers.emplace(mk.name, mk).second)
        throw ModuliError(ctx + ": duplicate marker '" + mk.name + "'");
    } else if (r.type == "e1model") {
      if (have_e1) throw ModuliError(ctx + ": only one projective-space E1 model is supported");
      have_e1 = true;
      if (trim(r.get("sq2")) != "n")
        throw ModuliError(ctx + ": unsupported Sq^2 model '" + r.get("sq2") +
                          "'; only multiplication by the Chow degree is modeled");
      auto read_vec = [&](const std::string& key) {
        std::vector<ab::Int> v;
        std::istringstream ss(r.get(key));
        std::string w;
        while (ss >> w) v.push_back(ab::Int(parse_long(w, ctx)));
        if (v.size() != 2)
          throw ModuliError(ctx + ": '" + key + "' must hold two coordinates");
        return v;
      };
      set.gen_id = read_vec("gen_id");
      set.gen_two = read_vec("gen_two");
      set.e1_provenance = r.get_all("provenance");
    } else if (r.type == "golden") {
      GoldenValue g;
      g.name = r.get("name");
      g.source = trim(r.get("source"));
      g.target = trim(r.get("target"));
      g.expect = trim(r.get("expect"));
      g.case_label = r.get_opt("case").value_or("");
      g.provenance = r.get_opt("provenance").value_or("");
      if (auto a = blk::parse_atom(g.source)) g.source = a->str();
      if (auto a = blk::parse_atom(g.target)) g.target = a->str();
      set.golden.push_back(std::move(g));
    } else {
      throw ModuliError(ctx + ": unknown record type '" + r.type + "'");
    }
  }
  for (auto& [owner, leg] : pending_legs) {
    auto it = set.gysin.find(owner);
    if (it == set.gysin.end())
      throw ModuliError(filename + ": leg references unknown connecting datum '" + owner + "'");
    it->second.legs.push_back(std::move(leg));
  }
  return set;
}

BuilderSet load_builders(const std::string& path) {
  return parse_builders(slurp(path), path);
}

// --- report ----------------------------------------------------------------------

bool Report::pass() const {
  return std::all_of(cases.begin(), cases.end(), [](const CaseReport& c) { return c.pass; });
}

std::string Report::str() const {
  std::string s = what + "\n  truncation bound " + std::to_string(truncation) + ", base field " +
                  field + "\n";
  for (const CaseReport& c : cases) {
    s += std::string(c.pass ? "  PASS" : "  FAIL") + "  case (" + std::to_string(c.index) +
         ") " + c.title + "\n";
    for (const std::string& l : c.lines) s += "          " + l + "\n";
  }
  s += pass() ? "  all cases pass\n" : "  VERIFICATION FAILED\n";
  return s;
}

// --- construction-time audits ------------------------------------------------------

Moduli::Moduli(const blk::HomTable& table, BuilderSet data)
    : table_(table), calc_(table), data_(std::move(data)) {
  // local finiteness: families must walk upward in the twist
  for (const Builder& b : data_.builders)
    for (const AtomPattern& p : b.parts)
      if (p.family && p.qa < 1)
        throw ModuliError("motive '" + b.name + "': family " + p.str() +
                          " does not have strictly increasing twists");
  for (const auto& [name, d] : data_.gysin) {
    (void)data_.builder(d.source_builder);
    for (const AtomPattern& p : d.targets)
      if (p.family && p.qa < 1)
        throw ModuliError("connecting datum '" + name + "': family " + p.str() +
                          " does not have strictly increasing twists");
    for (const GysinLeg& l : d.legs)
      if (l.src.family && l.src.qa < 1)
        throw ModuliError("connecting datum '" + name + "': leg family " + l.src.str() +
                          " does not have strictly increasing twists");
  }
  // sum motives expand into decomposable, acyclic parts
  for (const Builder& b : data_.builders) {
    if (b.sum.empty()) continue;
    std::vector<std::string> stack = {b.name};
    std::function<void(const Builder&)> walk = [&](const Builder& cur) {
      for (const std::string& part : cur.sum) {
        if (std::find(stack.begin(), stack.end(), part) != stack.end())
          throw ModuliError("sum motive '" + b.name + "' is cyclic through '" + part + "'");
        const Builder& pb = data_.builder(part);
        if (pb.cone)
          throw ModuliError("sum motive '" + b.name + "' includes cone-only motive '" + part +
                            "'");
        stack.push_back(part);
        walk(pb);
        stack.pop_back();
      }
    };
    walk(b);
  }
  // every gysin-presented motive assembles, at the reference truncation, to
  // exactly its listed decomposition
  for (const Builder& b : data_.builders) {
    if (!b.gysin) continue;
    auto it = data_.gysin.find(*b.gysin);
    if (it == data_.gysin.end())
      throw ModuliError("motive '" + b.name + "' references unknown connecting datum '" +
                        *b.gysin + "'");
    blk::BlockExpr assembled = cone_shift_assemble(materialize(it->second, kNref));
    blk::BlockExpr listed = materialize_parts(b, kNref);
    if (!(assembled == listed))
      throw ModuliError("motive '" + b.name + "': the cone of '" + *b.gysin +
                        "' assembles to " + assembled.str() + " but the listed decomposition is " +
                        listed.str());
  }
  // cone-only motives reference a marker whose group has the recorded shape
  for (const Builder& b : data_.builders) {
    if (!b.cone) continue;
    if (!data_.markers.count(*b.cone))
      throw ModuliError("motive '" + b.name + "' references unknown marker '" + *b.cone + "'");
  }
  for (const auto& [name, mk] : data_.markers) {
    const Builder& src = data_.builder(mk.source_builder);
    blk::BlockExpr se = materialize_parts(src, kNref);
    if (std::find(se.atoms.begin(), se.atoms.end(), mk.leg) == se.atoms.end())
      throw ModuliError("marker '" + name + "': leg " + mk.leg.str() +
                        " is not an atom of '" + mk.source_builder + "'");
    blk::HomValue hv = calc_.atom_hom(mk.leg, mk.target);
    if (hv.str() != "2Z + W")
      throw ModuliError("marker '" + name + "': Hom(" + mk.leg.str() + ", " + mk.target.str() +
                        ") = " + hv.str() + ", expected 2Z + W");
    if (mk.twoz % 2 != 0)
      throw ModuliError("marker '" + name + "': the 2Z coordinate must be even, got " +
                        mk.twoz.get_str());
  }
  // reference values are canonically spelled and addressable
  for (const GoldenValue& g : data_.golden) {
    if (!blk::parse_atom(g.target))
      throw ModuliError("reference value '" + g.name + "': target '" + g.target +
                        "' is not an atom");
    if (!blk::parse_atom(g.source)) (void)data_.builder(g.source);
    auto e = sym::parse_expr(g.expect);
    if (!e || e->str() != g.expect)
      throw ModuliError("reference value '" + g.name + "': '" + g.expect +
                        "' is not a canonical group spelling");
  }
  // the E1 generator dictionary spans the weight-1 Cartesian lattice
  if (data_.gen_id.size() != 2 || data_.gen_two.size() != 2)
    throw ModuliError("projective-space E1 model: generator dictionary missing or malformed");
  ab::Mat dict = {{data_.gen_id[0], data_.gen_two[0]}, {data_.gen_id[1], data_.gen_two[1]}};
  ab::Mat cart = ab::kernel(chow_condition(1)).map.matrix;
  if (!ab::lattice_eq(dict, cart))
    throw ModuliError(
        "projective-space E1 model: the generator dictionary does not span the parity "
        "sublattice of the Chow pair");
}

// --- materialization ---------------------------------------------------------------

blk::BlockExpr Moduli::materialize_parts(const Builder& b, long truncation) const {
  if (truncation < 0) throw ModuliError("truncation bound must be >= 0");
  if (b.cone)
    throw ModuliError("motive '" + b.name +
                      "' is known only as a cone; it has no atom decomposition");
  std::vector<blk::BlockAtom> atoms;
  if (!b.sum.empty()) {
    for (const std::string& part : b.sum) {
      blk::BlockExpr e = materialize_parts(data_.builder(part), truncation);
      atoms.insert(atoms.end(), e.atoms.begin(), e.atoms.end());
    }
    return blk::expr_of(std::move(atoms), truncation);
  }
  for (const AtomPattern& p : b.parts)
    for (long i = p.i0; i <= p.last_index(truncation); i++) atoms.push_back(p.at(i));
  return blk::expr_of(std::move(atoms), truncation);
}

NamedMotive Moduli::build(const std::string& name, long truncation) const {
  const Builder& b = data_.builder(name);
  NamedMotive m;
  m.name = name;
  m.truncation = truncation;
  if (b.cone) {
    m.cone = *b.cone;
    return m;
  }
  m.expr = materialize_parts(b, truncation);
  return m;
}

blk::BlockMor Moduli::materialize(const GysinDatum& d, long truncation) const {
  const Builder& src_b = data_.builder(d.source_builder);
  blk::BlockMor m;
  m.source = materialize_parts(src_b, truncation);
  std::vector<blk::BlockAtom> tgt_atoms;
  for (const AtomPattern& p : d.targets)
    for (long i = p.i0; i <= p.last_index(truncation); i++) tgt_atoms.push_back(p.at(i));
  // legs are cut off by the twist of their source atom; a consumed target
  // atom is kept even when its own twist exceeds the bound, so that the cone
  // assembly stays exact at the truncation edge
  struct Inst {
    blk::BlockAtom s, t;
    blk::ArrowWord w;
    ab::Int scale;
  };
  std::vector<Inst> inst;
  for (const GysinLeg& l : d.legs)
    for (long i = l.src.i0; i <= l.src.last_index(truncation); i++)
      inst.push_back({l.src.at(i), l.tgt.at(i), l.word, l.scale});
  for (const Inst& in : inst)
    if (std::find(tgt_atoms.begin(), tgt_atoms.end(), in.t) == tgt_atoms.end())
      tgt_atoms.push_back(in.t);
  m.target = blk::expr_of(std::move(tgt_atoms), truncation);
  for (const Inst& in : inst) {
    auto si = std::find(m.source.atoms.begin(), m.source.atoms.end(), in.s);
    if (si == m.source.atoms.end())
      throw ModuliError("connecting datum '" + d.name + "': leg source " + in.s.str() +
                        " is not an atom of '" + d.source_builder + "' at truncation " +
                        std::to_string(truncation));
    auto ti = std::find(m.target.atoms.begin(), m.target.atoms.end(), in.t);
    blk::MorComponent c;
    c.src_index = static_cast<size_t>(si - m.source.atoms.begin());
    c.tgt_index = static_cast<size_t>(ti - m.target.atoms.begin());
    c.word = in.w;
    c.scale = in.scale;
    m.components.push_back(c);
  }
  return m;
}

blk::BlockExpr Moduli::cone_shift_assemble(const blk::BlockMor& m) const {
  std::vector<bool> src_used(m.source.atoms.size(), false);
  std::vector<bool> tgt_used(m.target.atoms.size(), false);
  std::vector<blk::BlockAtom> out;
  for (const blk::MorComponent& c : m.components) {
    if (c.src_index >= m.source.atoms.size() || c.tgt_index >= m.target.atoms.size())
      throw ModuliError("cone assembly: component index out of range");
    if (src_used[c.src_index] || tgt_used[c.tgt_index])
      throw ModuliError("cone assembly: an atom is consumed by two legs");
    src_used[c.src_index] = true;
    tgt_used[c.tgt_index] = true;
    const blk::BlockAtom& s = m.source.atoms[c.src_index];
    const blk::BlockAtom& t = m.target.atoms[c.tgt_index];
    if (c.scale != 24)
      throw ModuliError("cone assembly: leg " + s.str() + " -> " + t.str() + " has scale " +
                        c.scale.get_str() +
                        "; only the 24-scaled cones are in the atom vocabulary");
    if (c.word == blk::ArrowWord::Boundary) {
      if (!(s.kind == blk::AtomKind::H && t == blk::atom_t(s.q + 1, s.p + 2)))
        throw ModuliError("cone assembly: a boundary leg needs H(q)[p] -> T(q+1)[p+2], got " +
                          s.str() + " -> " + t.str());
      out.push_back(blk::atom_cpartial(s.q, s.p - 1));
    } else {
      if (!(s == t) || s.kind != blk::AtomKind::H)
        throw ModuliError("cone assembly: an identity leg needs equal H atoms, got " + s.str() +
                          " -> " + t.str());
      out.push_back(blk::atom_cid(s.q, s.p - 1));
    }
  }
  for (size_t i = 0; i < m.source.atoms.size(); i++)
    if (!src_used[i]) out.push_back(m.source.atoms[i]);
  for (size_t i = 0; i < m.target.atoms.size(); i++)
    if (!tgt_used[i]) out.push_back(blk::twist_shift(m.target.atoms[i], 0, -1));
  return blk::expr_of(std::move(out), m.source.truncation);
}

Connecting Moduli::gysin_connecting(const std::string& name, long truncation) const {
  const Builder& b = data_.builder(name);
  Connecting c;
  if (b.gysin) {
    c.mor = materialize(data_.gysin.at(*b.gysin), truncation);
    return c;
  }
  if (b.cone) {
    c.element = data_.markers.at(*b.cone);
    return c;
  }
  if (!b.sum.empty())
    throw ModuliError("motive '" + name +
                      "' is presented as a direct sum; it has no single connecting morphism");
  throw ModuliError("motive '" + name + "' has no connecting morphism recorded");
}

void Moduli::guard_margin(const blk::BlockExpr& full, long n_user,
                          const blk::BlockAtom& probe) const {
  for (const blk::BlockAtom& a : full.atoms) {
    if (a.q <= n_user) continue;
    blk::HomValue v = calc_.atom_hom(a, probe);
    if (v.ambiguous || !v.expr.is_known() || !v.expr.is_zero())
      throw ModuliError("truncation margin: Hom(" + a.str() + ", " + probe.str() + ") = " +
                        v.str() + " is not a known zero; enlarge the margin");
  }
}

// --- the five-case generator test -----------------------------------------------

CaseReport Moduli::case_unit(long nint, const qf::Field& field) const {
  CaseReport cr;
  cr.index = 1;
  cr.title = "unit block";
  blk::BlockAtom probe = blk::atom_t(0, 0);
  blk::BlockExpr m11 = materialize_parts(data_.builder("M11"), nint);
  blk::BlockExpr w2 = materialize_parts(data_.builder("W2"), nint);
  guard_margin(m11, nint - kMargin, probe);
  guard_margin(w2, nint - kMargin, probe);
  blk::HomValue a = calc_.hom(m11, probe), b = calc_.hom(w2, probe);
  cr.lines.push_back("Hom(M11, T) = " + a.str() + " and Hom(W2, T) = " + b.str() +
                     "; the unit atom passes through both cone assemblies untouched");
  bool sym_ok = !a.ambiguous && !b.ambiguous && a.str() == b.str();
  blk::EvalValue ea = calc_.hom_over(m11, probe, field);
  blk::EvalValue eb = calc_.hom_over(w2, probe, field);
  bool ev_ok = blk::eval_is_group(ea) && blk::eval_is_group(eb) &&
               blk::eval_group(ea) == blk::eval_group(eb);
  cr.lines.push_back("over " + field.str() + " both sides realize to " + blk::eval_str(ea));
  for (const GoldenValue* g : data_.golden_for("M11", probe.str())) {
    bool ok = a.str() == g->expect;
    cr.lines.push_back(std::string(ok ? "matches" : "DISAGREES WITH") + " the reference value " +
                       g->expect + "  [" + g->provenance + "]");
    sym_ok = sym_ok && ok;
  }
  cr.pass = sym_ok && ev_ok;
  return cr;
}

CaseReport Moduli::case_ch2(long nint, const qf::Field& field,
                            const std::optional<ab::Int>& s_override) const {
  CaseReport cr;
  cr.index = 2;
  cr.title = "degree-2 block (2)[4]";
  blk::BlockAtom Y = blk::atom_t(2, 4);
  const Builder& m11b = data_.builder("M11");
  const Builder& w2b = data_.builder("W2");
  blk::BlockMor mor_e = materialize(data_.gysin.at(*m11b.gysin), nint);
  blk::BlockMor mor_s =
      override_boundary_scale(materialize(data_.gysin.at(*w2b.gysin), nint), s_override);
  guard_margin(mor_e.source, nint - kMargin, Y);
  guard_margin(mor_e.target, nint - kMargin, Y);
  guard_margin(mor_s.source, nint - kMargin, Y);
  ab::FGAbHom Ltop = calc_.induced_hom_over(mor_e, Y, field);
  ab::FGAbHom Lbot = calc_.induced_hom_over(mor_s, Y, field);
  ab::FGAbGroup ctop = ab::cokernel(Ltop).group;
  ab::FGAbGroup cbot = ab::cokernel(Lbot).group;
  ab::FGAbGroup expect = ab::make_cyclic(24);
  cr.lines.push_back(
      "both connecting maps act on the degree-2 block through the rank homomorphism GW -> Z");
  cr.lines.push_back("pulled back along the rank-2 quotient: cokernel " + ctop.str() +
                     "; pulled back along the weighted cell: cokernel " + cbot.str());
  bool ok_top = ctop == expect;
  bool ok_bot = cbot == expect;
  if (!ok_bot)
    cr.lines.push_back("MISMATCH: computed " + cbot.str() + ", expected " + expect.str());
  bool ok_same = Ltop.source == Lbot.source && Ltop.target == Lbot.target &&
                 ab::hom_eq(Ltop, Lbot);
  cr.lines.push_back(ok_same ? "the two induced maps agree generator by generator"
                             : "MISMATCH: the two induced maps differ on a generator");
  blk::BlockExpr m11 = materialize_parts(m11b, nint);
  blk::EvalValue row = calc_.hom_over(m11, Y, field);
  bool ok_row = blk::eval_is_group(row) && blk::eval_group(row) == expect;
  cr.lines.push_back("the assembled motive gives Hom(M11, T(2)[4]) = " + blk::eval_str(row) +
                     " over " + field.str());
  blk::HomValue sym_row = calc_.hom(m11, Y);
  for (const GoldenValue* g : data_.golden_for("M11", Y.str())) {
    bool ok = sym_row.str() == g->expect;
    cr.lines.push_back(std::string(ok ? "matches" : "DISAGREES WITH") + " the reference value " +
                       g->expect + "  [" + g->provenance + "]");
    ok_row = ok_row && ok;
  }
  cr.pass = ok_top && ok_bot && ok_same && ok_row;
  return cr;
}

CaseReport Moduli::case_ch2_off(long nint, const qf::Field& field,
                                const std::optional<ab::Int>& s_override) const {
  CaseReport cr;
  cr.index = 3;
  cr.title = "bidegree (3, 2) window";
  blk::BlockAtom Y = blk::atom_t(2, 3);
  const Builder& m11b = data_.builder("M11");
  const Builder& w2b = data_.builder("W2");
  blk::BlockMor mor_e = materialize(data_.gysin.at(*m11b.gysin), nint);
  blk::BlockMor mor_s =
      override_boundary_scale(materialize(data_.gysin.at(*w2b.gysin), nint), s_override);
  for (const blk::BlockAtom& probe : {Y, blk::atom_t(2, 4)}) {
    guard_margin(mor_e.source, nint - kMargin, probe);
    guard_margin(mor_e.target, nint - kMargin, probe);
    guard_margin(mor_s.source, nint - kMargin, probe);
  }
  blk::WindowSolved wt = calc_.complement_middle_over(mor_e, Y, field);
  blk::WindowSolved wb = calc_.complement_middle_over(mor_s, Y, field);
  bool ok_flank = wt.b1 == wb.b1 && wt.a1 == wb.a1 && wt.b0 == wb.b0 && wt.a0 == wb.a0;
  cr.lines.push_back(std::string("the four flanking groups of the five-term windows ") +
                     (ok_flank ? "agree" : "DIFFER"));
  blk::EvalValue sq = calc_.atom_hom_over(blk::atom_h(1, 2), Y, field);
  bool ok_coker = blk::eval_is_group(sq) && wt.coker.group == blk::eval_group(sq) &&
                  wb.coker.group == blk::eval_group(sq);
  cr.lines.push_back("cokernel flank = " + wt.coker.group.str() +
                     " (the square-class block of the boundary-cone leg)");
  bool ok_ker = wt.ker.group == wb.ker.group;
  cr.lines.push_back("kernel flank = " + wt.ker.group.str() +
                     " (the kernel of the rank map in the next shift)");
  bool ok_mid;
  if (std::holds_alternative<ab::FGAbGroup>(wt.middle) &&
      std::holds_alternative<ab::FGAbGroup>(wb.middle)) {
    ok_mid = std::get<ab::FGAbGroup>(wt.middle) == std::get<ab::FGAbGroup>(wb.middle);
    cr.lines.push_back("middle group = " + ab::middle_str(wt.middle));
  } else if (std::holds_alternative<ab::AmbiguousExtension>(wt.middle) &&
             std::holds_alternative<ab::AmbiguousExtension>(wb.middle)) {
    const auto& at = std::get<ab::AmbiguousExtension>(wt.middle);
    const auto& bt = std::get<ab::AmbiguousExtension>(wb.middle);
    ok_mid = at.sub == bt.sub && at.quot == bt.quot;
    cr.lines.push_back("middle = " + ab::middle_str(wt.middle) +
                       "; both routes leave the same extension problem open");
  } else {
    ok_mid = false;
    cr.lines.push_back("MISMATCH: one route resolves the middle and the other does not");
  }
  cr.lines.push_back(
      "equal flanks and componentwise-equal arms force equal middles (five lemma)");
  bool ok_gold = true;
  for (const auto& [src, label] :
       std::initializer_list<std::pair<blk::BlockAtom, const char*>>{
           {blk::atom_h(3, 6), "off-diagonal eta-cone block"},
           {blk::atom_h(1, 2), "diagonal eta-cone block"}}) {
    blk::HomValue hv = calc_.atom_hom(src, Y);
    for (const GoldenValue* g : data_.golden_for(src.str(), Y.str())) {
      bool ok = hv.str() == g->expect;
      ok_gold = ok_gold && ok;
      cr.lines.push_back(std::string(label) + ": Hom(" + src.str() + ", " + Y.str() + ") = " +
                         hv.str() + (ok ? ", matching " : ", DISAGREEING WITH ") +
                         "the reference value " + g->expect + "  [" + g->provenance + "]");
    }
  }
  cr.pass = ok_flank && ok_coker && ok_ker && ok_mid && ok_gold;
  return cr;
}

ab::Mat Moduli::image_lattice_at(const GysinDatum& d, long nint, long n) const {
  blk::BlockMor m = materialize(d, nint);
  blk::BlockAtom Y = blk::atom_h(n, 2 * n);
  std::vector<std::vector<ab::Int>> cols;
  for (const blk::MorComponent& c : m.components) {
    const blk::BlockAtom& s = m.source.atoms[c.src_index];
    const blk::BlockAtom& t = m.target.atoms[c.tgt_index];
    blk::TableEntry de = table_.lookup(t, Y);
    if (!de.expr.is_known())
      throw ModuliError("image model: Hom(" + t.str() + ", " + Y.str() + ") is unknown");
    if (de.expr.is_zero()) continue;  // this leg's block contributes nothing
    blk::TableEntry se = table_.lookup(s, Y);
    if (!se.expr.is_known())
      throw ModuliError("image model: Hom(" + s.str() + ", " + Y.str() + ") is unknown");
    if (c.word == blk::ArrowWord::Identity) {
      // the rank-2 block: its two generators land in the Chow pair through
      // the recorded dictionary, scaled by the leg
      if (de.expr.str() != "Z + 2Z" || se.expr.str() != "Z + 2Z" || !(s == Y))
        throw ModuliError("image model: unsupported identity leg " + s.str() + " -> " +
                          t.str() + " against " + Y.str());
      cols.push_back({c.scale * data_.gen_id[0], c.scale * data_.gen_id[1]});
      cols.push_back({c.scale * data_.gen_two[0], c.scale * data_.gen_two[1]});
    } else {
      auto rule = table_.action(blk::ArrowClass::PreBoundary, de.expr, se.expr);
      if (!rule || rule->map != blk::MapKind::Zero)
        throw ModuliError("image model: unsupported boundary leg " + s.str() + " -> " +
                          t.str() + " against " + Y.str());
      // the boundary leg acts by zero on this block: nothing lands
    }
  }
  ab::Mat out(2);
  for (const auto& col : cols) {
    out[0].push_back(col[0]);
    out[1].push_back(col[1]);
  }
  return out;
}

CaseReport Moduli::case_even_row(long n_user, long nint, const qf::Field& field) const {
  CaseReport cr;
  cr.index = 4;
  cr.title = "even-row block (2n, n), n = " + std::to_string(n_user);
  const long n = n_user;
  blk::BlockAtom Y = blk::atom_h(n, 2 * n);
  const GysinDatum& d_top = data_.gysin.at(*data_.builder("M11").gysin);
  const GysinDatum& d_bot = data_.gysin.at(*data_.builder("W1").gysin);
  ab::Mat im_top = image_lattice_at(d_top, nint, n);
  ab::Mat im_bot = image_lattice_at(d_bot, nint, n);
  bool ok_im = ab::lattice_eq(im_top, im_bot);
  cr.lines.push_back(std::string("the images of the two Euler-class data in (CH^n, CH^(n+1)) ") +
                     (ok_im ? "coincide" : "DIFFER"));
  ab::FGAbHom cond = chow_condition(n);
  ab::Mat L = ab::kernel(cond).map.matrix;
  bool ok_cond;
  if (n >= 3) {
    ab::Int s24 = 24;
    for (const GysinLeg& l : d_top.legs)
      if (l.word == blk::ArrowWord::Identity) s24 = l.scale;
    ok_cond = ab::lattice_eq(im_top, ab::mat_scale(s24, L));
    cr.lines.push_back("image = " + s24.get_str() +
                       " * {(a, b) : a = b mod 2}, the scaled parity sublattice");
  } else {
    ok_cond = ab::col_count(im_top) == 0 && ab::col_count(im_bot) == 0;
    cr.lines.push_back("the image vanishes below the Chow edge, so the map on this row is an "
                       "isomorphism");
  }
  // cokernel of the image inside the Cartesian lattice, vs the assembled motives
  size_t k = ab::col_count(im_top);
  ab::Mat coords(2);
  for (size_t j = 0; j < k; j++) {
    std::vector<ab::Int> col = {im_top[0][j], im_top[1][j]};
    auto sol = ab::lattice_solve(L, col);
    if (!sol)
      throw DataCorruption("even-row block n = " + std::to_string(n) +
                           ": an image column escapes the Cartesian lattice");
    coords[0].push_back((*sol)[0]);
    coords[1].push_back((*sol)[1]);
  }
  ab::FGAbHom into{ab::make_free(static_cast<long>(k)), ab::make_free(2), coords};
  ab::FGAbGroup model = ab::cokernel(into).group;
  blk::BlockExpr m11 = materialize_parts(data_.builder("M11"), nint);
  blk::BlockExpr w2 = materialize_parts(data_.builder("W2"), nint);
  guard_margin(m11, nint - kMargin, Y);
  guard_margin(w2, nint - kMargin, Y);
  blk::EvalValue em = calc_.hom_over(m11, Y, field);
  blk::EvalValue ew = calc_.hom_over(w2, Y, field);
  bool ok_coker = blk::eval_is_group(em) && blk::eval_is_group(ew) &&
                  blk::eval_group(em) == model && blk::eval_group(ew) == model;
  cr.lines.push_back("row value from the lattice model: " + model.str() +
                     "; from the assembled motives: " + blk::eval_str(em) + " and " +
                     blk::eval_str(ew));
  bool ok_unit;
  if (n >= 3) {
    blk::TableEntry e = table_.lookup(blk::atom_t(0, 0), blk::atom_h(n - 2, 2 * n - 4));
    ok_unit = e.expr.is_known() && e.expr.is_zero();
    cr.lines.push_back(
        "the unit-block flank two columns down is zero, so coverage needs only the identity "
        "legs");
  } else {
    ok_unit = true;
    cr.lines.push_back("the unit block contributes 2Z, carried by its own identity projection");
  }
  cr.pass = ok_im && ok_cond && ok_coker && ok_unit;
  return cr;
}

CaseReport Moduli::case_odd_row(long n_user, long nint, const qf::Field& field) const {
  CaseReport cr;
  cr.index = 5;
  cr.title = "odd-row block (2n-1, n), n = " + std::to_string(n_user);
  const long n = n_user;
  blk::BlockAtom Y = blk::atom_h(n, 2 * n - 1);
  blk::BlockExpr m11 = materialize_parts(data_.builder("M11"), nint);
  blk::BlockExpr w2 = materialize_parts(data_.builder("W2"), nint);
  guard_margin(m11, nint - kMargin, Y);
  guard_margin(w2, nint - kMargin, Y);
  bool ok_direct;
  if (n == 1) {
    blk::HomValue hm = calc_.hom(m11, Y), hw = calc_.hom(w2, Y);
    blk::EvalValue em = calc_.hom_over(m11, Y, field), ew = calc_.hom_over(w2, Y, field);
    ok_direct = !hm.ambiguous && hm.str() == hw.str() && blk::eval_is_group(em) &&
                blk::eval_is_group(ew) && blk::eval_group(em) == blk::eval_group(ew);
    cr.lines.push_back("row value on both sides: " + hm.str() + ", over " + field.str() + ": " +
                       blk::eval_str(em));
  } else {
    blk::EvalValue em = calc_.hom_over(m11, Y, field), ew = calc_.hom_over(w2, Y, field);
    if (blk::eval_is_group(em) && blk::eval_is_group(ew)) {
      ok_direct = blk::eval_group(em) == blk::eval_group(ew);
      cr.lines.push_back(
          "the row value has no symbolic name in the table vocabulary (a torsion quotient); "
          "compared exactly over " +
          field.str() + ": " + blk::eval_str(em) + " on both sides");
    } else {
      // at n = 3 the boundary-cone window hits a boundary action between two
      // Milnor-theory blocks that no rule resolves; the verdict then rests
      // entirely on the exact-row chase below, which is how the splitting is
      // established in the first place
      ok_direct = true;
      cr.lines.push_back(
          "the direct row value is unresolved at this bidegree (" + blk::eval_str(em) +
          "); the verdict rests on the exact-row chase");
    }
  }
  // the exact-row chase: blockwise values, torsion-freeness of the edge
  // companions, and the multiplication-by-24 kernels, realized over the field
  ab::Int s24 = 24;
  for (const GysinLeg& l : data_.gysin.at(*data_.builder("M11").gysin).legs)
    if (l.word == blk::ArrowWord::Identity) s24 = l.scale;
  bool ok_chase = true;
  for (long j = 1; 2 * j + 1 <= nint; j++) {
    blk::TableEntry X = table_.lookup(blk::atom_h(2 * j + 1, 4 * j + 2), Y);
    blk::TableEntry A =
        table_.lookup(blk::atom_h(2 * j - 1, 4 * j - 2), blk::atom_h(n - 2, 2 * n - 5));
    if (!(A.expr == X.expr)) {
      ok_chase = false;
      cr.lines.push_back("MISMATCH at j = " + std::to_string(j) +
                         ": the row is not invariant under the (2)[4] twist");
    }
    std::string expected = (j == (n - 1) / 2 && n >= 3)   ? "SQ"
                           : (j == (n - 3) / 2 && n >= 5) ? "KM1"
                                                          : "0";
    if (X.expr.str() != expected) {
      ok_chase = false;
      cr.lines.push_back("MISMATCH at j = " + std::to_string(j) + ": block value " +
                         X.expr.str() + ", expected " + expected);
    }
    blk::TableEntry comp = table_.lookup(blk::atom_h(2 * j + 1, 4 * j + 1), Y);
    auto cev = sym::evaluate(comp.expr, field);
    if (!sym::evaluates_to_group(cev) || !sym::evaluated_group(cev).torsion.empty()) {
      ok_chase = false;
      cr.lines.push_back("MISMATCH at j = " + std::to_string(j) +
                         ": the companion block is not torsion free");
    }
    if (!X.expr.is_zero() && X.expr.is_known()) {
      blk::EvalValue xe = calc_.atom_hom_over(blk::atom_h(2 * j + 1, 4 * j + 2), Y, field);
      if (!blk::eval_is_group(xe)) {
        ok_chase = false;
        cr.lines.push_back("MISMATCH at j = " + std::to_string(j) +
                           ": the critical block does not evaluate over " + field.str());
      } else {
        const ab::FGAbGroup& G = blk::eval_group(xe);
        ab::FGAbHom m24 = ab::hom_scale(s24, ab::identity_hom(G));
        ab::FGAbHom proj = ab::cokernel(m24).map;
        bool ok = ab::exact_at(m24, proj) && ab::is_surjective(proj);
        ok_chase = ok_chase && ok;
        cr.lines.push_back("j = " + std::to_string(j) + ": block " + X.expr.str() + " = " +
                           G.str() + " over " + field.str() + "; the edge kernel is exactly " +
                           s24.get_str() + " times the block and the edge map is onto" +
                           (ok ? "" : " -- MISMATCH"));
      }
    }
  }
  // the unit-block flank of the chase
  blk::TableEntry t_entry = table_.lookup(blk::atom_t(0, 0), blk::atom_h(n - 2, 2 * n - 5));
  if (t_entry.expr.is_known() && t_entry.expr.is_zero()) {
    cr.lines.push_back("the unit-block flank two columns down is zero, so its injectivity into "
                       "the row is trivial");
  } else {
    cr.lines.push_back("the unit-block flank two columns down is " + t_entry.expr.str() +
                       "; its injectivity into the row is source-asserted (it embeds through "
                       "the weighted cell), and the chase needs only row exactness and the two "
                       "coverage checks verified above");
  }
  cr.pass = ok_direct && ok_chase;
  return cr;
}

Report Moduli::verify_theorem_12(long truncation, const qf::Field& field,
                                 std::optional<ab::Int> s_override) const {
  if (truncation < 3)
    throw ModuliError(
        "the five-case generator test needs truncation >= 3 to see one full period of every "
        "block family");
  long nint = truncation + kMargin;
  Report rep;
  rep.what = "five-case generator test: the weighted-cell motive matches the rank-2 quotient "
             "motive on every generator block";
  rep.truncation = truncation;
  rep.field = field.str();
  rep.cases.push_back(case_unit(nint, field));
  rep.cases.push_back(case_ch2(nint, field, s_override));
  rep.cases.push_back(case_ch2_off(nint, field, s_override));
  for (long n = 1; n <= truncation; n += 2) rep.cases.push_back(case_even_row(n, nint, field));
  for (long n = 1; n <= truncation; n += 2) rep.cases.push_back(case_odd_row(n, nint, field));
  return rep;
}

// --- the Witt-realization separation ----------------------------------------------

Report Moduli::verify_prop_56(long truncation) const {
  if (truncation < 3)
    throw ModuliError(
        "the Witt-realization test needs truncation >= 3 to include the boundary-cone block");
  long nint = truncation + kMargin;
  Report rep;
  rep.what = "Witt realization separates the two twisted Thom motives";
  rep.truncation = truncation;
  rep.field = "any";

  NamedMotive base = build("Th_M11_Ominus1", nint);
  blk::EtaInverted e0 = calc_.eta_invert(base.expr);
  CaseReport c1;
  c1.index = 1;
  c1.title = "Witt realization of the twisted Thom motive of the base";
  c1.pass = e0.is_zero();
  c1.lines.push_back("eta-inverted value: " + e0.str() +
                     " (every summand is an eta-cone block, which the localization kills)");
  rep.cases.push_back(c1);

  const Builder& b = data_.builder("Th_W2_O1");
  if (!b.cone)
    throw ModuliError("motive 'Th_W2_O1' is expected to be presented as a marker cone");
  const ConeMarker& mk = data_.markers.at(*b.cone);
  if (mk.witt != 0)
    throw ModuliError("marker '" + mk.name +
                      "' has a nonzero Witt coordinate; the eta-inverted cone of such an "
                      "element is outside this engine's vocabulary");
  NamedMotive flank = build(mk.source_builder, nint);
  blk::EtaInverted total = calc_.eta_invert(flank.expr);
  CaseReport c2;
  c2.index = 2;
  c2.title = "Witt realization of the marker cone";
  c2.lines.push_back("the connecting element has Witt coordinate 0, so after inverting eta the "
                     "defining triangle splits");
  c2.lines.push_back("flank contribution " + total.str() + " from " + mk.source_builder);
  if (mk.target.kind == blk::AtomKind::T) {
    long deg = (mk.target.p - mk.target.q) - 1;
    total.w_mult[deg] += 1;
    c2.lines.push_back("plus the shifted unit block " + mk.target.str() + " in degree " +
                       std::to_string(deg));
  }
  c2.lines.push_back("eta-inverted value: " + total.str());
  c2.pass = !total.is_zero();
  rep.cases.push_back(c2);

  CaseReport c3;
  c3.index = 3;
  c3.title = "the two twisted Thom motives differ";
  c3.pass = c1.pass && c2.pass;
  c3.lines.push_back("one Witt realization is zero and the other is not (the Witt group of "
                     "every base field is nonzero), so the motives cannot be isomorphic");
  rep.cases.push_back(c3);
  return rep;
}

// --- projective-space cross-check ---------------------------------------------------

E1Compare Moduli::e1_crosscheck(long truncation, long n) const {
  if (truncation < 1)
    throw ModuliError("the projective-space cross-check needs truncation >= 1");
  if (n < 0)
    throw ModuliError("the Chow model of the E1 page speaks from weight 0 up");
  NamedMotive pinf = build("P_inf", truncation);
  E1Compare r;
  r.truncation = truncation;
  r.dim = 2 * ((truncation + 1) / 2);
  r.n = n;
  blk::HomCalc::E1Result les = calc_.e1_les(pinf.expr, n, 2 * n, qf::Field::complex());
  r.les_fallback = les.fallback;
  r.les_route = les.sym.str();

  ab::FGAbGroup model;
  if (n > r.dim) {
    r.model_route = "0 (no cells in this weight)";
  } else if (n == r.dim) {
    model = ab::make_free(1);
    r.model_route = "Z (top cell: the highest Chow group alone)";
  } else {
    ab::SubQuot k = ab::kernel(chow_condition(n));
    model = k.group;
    r.model_route = model.str() + " (fiber product of CH^n and CH^(n+1) over CH^(n+1)/2)";
    if (les.sym.expr.is_known() && !les.sym.ambiguous) {
      long twoz = static_cast<long>(
          std::count_if(les.sym.expr.atoms.begin(), les.sym.expr.atoms.end(),
                        [](const sym::GroupAtom& a) { return a.kind == sym::AtomKind::TwoZ; }));
      ab::Int idx = ab::determinant(k.map.matrix);
      if (idx < 0) idx = -idx;
      if (idx != pow2(twoz))
        throw DataCorruption("projective-space cross-check at weight " + std::to_string(n) +
                             ": the lattice index " + idx.get_str() +
                             " does not match the marked-inclusion count of '" +
                             les.sym.expr.str() + "'");
    }
  }
  r.match = blk::eval_is_group(les.eval) && blk::eval_group(les.eval) == model;
  if (!r.match)
    throw DataCorruption("projective-space cross-check at weight " + std::to_string(n) +
                         ": the long-exact-sequence route gives " + blk::eval_str(les.eval) +
                         " but the Chow model gives " + model.str());
  return r;
}

Moduli load_default_moduli(const blk::HomTable& table) {
  return Moduli(table, load_builders(io::data_file("builders.mwt")));
}

}  // namespace mw::mod
