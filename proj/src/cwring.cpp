#include "mw/cwring.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "mw/moduli.hpp"
#include "mw/records.hpp"

namespace mw::cw {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

// Additive order of a single-atom generator.  Only the atoms that occur
// in the table are orderable; KM1/SQ and unknowns have no place here.
ab::Int order_of_atom(const sym::GroupAtom& a, const std::string& ctx) {
  switch (a.kind) {
    case sym::AtomKind::GW:
    case sym::AtomKind::Z:
    case sym::AtomKind::TwoZ:
    case sym::AtomKind::W:
      return 0;
    case sym::AtomKind::Zmod:
    case sym::AtomKind::TwoZmodTwoN:
      return a.n;  // 2Z/2n is Z/n as an abstract group
    default:
      throw RingError(ctx + ": atom " + a.str() +
                      " cannot serve as a ring component");
  }
}

std::string pair_name(const GradedRingData& d, std::size_t a, std::size_t b) {
  return d.gens.at(a).name + " * " + d.gens.at(b).name;
}

// mpz rejects a leading '+', which the term grammar allows.
ab::Int parse_coeff(const std::string& s) {
  return ab::Int(s[0] == '+' ? s.substr(1) : s);
}

}  // namespace

std::string const_provenance_str(ConstProvenance p) {
  switch (p) {
    case ConstProvenance::PaperFixed: return "paper-fixed";
    case ConstProvenance::ExternalLM: return "external-lm";
    case ConstProvenance::Unknown: return "unknown";
  }
  return "unknown";
}

std::optional<std::size_t> GradedRingData::gen_index(
    const std::string& name) const {
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (gens[i].name == name) return i;
  return std::nullopt;
}

const Product* GradedRingData::find_product(std::size_t a,
                                            std::size_t b) const {
  if (a > b) std::swap(a, b);
  for (const auto& p : products)
    if (p.a == a && p.b == b) return &p;
  return nullptr;
}

GradedRingData parse_ring(const std::string& text,
                          const std::string& filename) {
  GradedRingData out;
  bool have_ring = false;
  std::string unit_name, euler_name;
  struct PendingProduct {
    std::string a, b, tag, value, prov, ctx;
  };
  std::vector<PendingProduct> pending;

  for (const auto& r : io::parse_records(text, filename)) {
    std::string ctx = filename + ":" + std::to_string(r.line);
    if (r.type == "ring") {
      if (have_ring) throw RingError(ctx + ": duplicate ring record");
      have_ring = true;
      out.name = r.get("name");
      unit_name = r.get("unit");
      euler_name = r.get("euler");
      out.provenance = r.get_all("provenance");
    } else if (r.type == "component") {
      long twist = r.get_int("twist");
      long degree = r.get_int("degree");
      if (twist != 0 && twist != 1)
        throw RingError(ctx + ": twist must be 0 or 1");
      if (degree < 0) throw RingError(ctx + ": degree must be nonnegative");
      auto expr = sym::parse_expr(r.get("value"));
      if (!expr || !expr->is_known())
        throw RingError(ctx + ": unreadable component value '" +
                        r.get("value") + "'");
      if (expr->str() != trim(r.get("value")))
        throw RingError(ctx + ": component value must be spelled canonically as '" +
                        expr->str() + "'");
      auto names = split_ws(r.get("gens"));
      if (names.size() != expr->atoms.size())
        throw RingError(ctx + ": component lists " +
                        std::to_string(names.size()) + " generators for " +
                        std::to_string(expr->atoms.size()) + " atoms");
      std::pair<long, int> key{degree, static_cast<int>(twist)};
      if (out.components.count(key))
        throw RingError(ctx + ": duplicate component (degree " +
                        std::to_string(degree) + ", twist " +
                        std::to_string(twist) + ")");
      Component comp;
      comp.expr = *expr;
      comp.display = r.get("display");
      comp.provenance = r.get("provenance");
      for (std::size_t k = 0; k < names.size(); ++k) {
        if (out.gen_index(names[k]))
          throw RingError(ctx + ": duplicate generator name '" + names[k] +
                          "'");
        comp.gens.push_back(out.gens.size());
        out.gens.push_back(Generator{names[k], degree,
                                     static_cast<int>(twist),
                                     order_of_atom(expr->atoms[k], ctx),
                                     expr->atoms[k]});
      }
      out.components.emplace(key, std::move(comp));
    } else if (r.type == "product") {
      pending.push_back(PendingProduct{r.get("a"), r.get("b"), r.get("tag"),
                                       r.get_opt("value").value_or(""),
                                       r.get("provenance"), ctx});
    } else {
      throw RingError(ctx + ": unknown record type '" + r.type + "'");
    }
  }
  if (!have_ring) throw RingError(filename + ": missing ring record");

  auto ui = out.gen_index(unit_name);
  if (!ui)
    throw RingError(filename + ": unit generator '" + unit_name +
                    "' is not declared by any component");
  auto ei = out.gen_index(euler_name);
  if (!ei)
    throw RingError(filename + ": euler generator '" + euler_name +
                    "' is not declared by any component");
  out.unit = *ui;
  out.euler = *ei;

  static const std::regex term_re(
      R"(^(?:([+-]?\d+)\s*\*\s*)?([A-Za-z][A-Za-z0-9_]*)$)");
  for (const auto& p : pending) {
    Product prod;
    auto ia = out.gen_index(p.a);
    auto ib = out.gen_index(p.b);
    if (!ia) throw RingError(p.ctx + ": unknown generator '" + p.a + "'");
    if (!ib) throw RingError(p.ctx + ": unknown generator '" + p.b + "'");
    prod.a = std::min(*ia, *ib);
    prod.b = std::max(*ia, *ib);
    if (p.tag == "paper-fixed") prod.tag = ConstProvenance::PaperFixed;
    else if (p.tag == "external-lm") prod.tag = ConstProvenance::ExternalLM;
    else if (p.tag == "unknown") prod.tag = ConstProvenance::Unknown;
    else
      throw RingError(p.ctx + ": provenance tag must be paper-fixed, "
                      "external-lm or unknown, not '" + p.tag + "'");
    prod.provenance = p.prov;
    if (prod.tag == ConstProvenance::Unknown) {
      if (!trim(p.value).empty())
        throw RingError(p.ctx +
                        ": an unknown-tagged product must not declare a value");
    } else {
      std::string v = trim(p.value);
      if (v.empty())
        throw RingError(p.ctx + ": a declared product needs a value "
                        "('0' for the zero product)");
      if (v != "0") {
        std::istringstream is(v);
        std::string term;
        while (std::getline(is, term, '+')) {
          term = trim(term);
          std::smatch m;
          if (!std::regex_match(term, m, term_re))
            throw RingError(p.ctx + ": unreadable product term '" + term +
                            "'");
          ab::Int c = m[1].matched ? parse_coeff(m[1].str()) : ab::Int(1);
          auto gi = out.gen_index(m[2].str());
          if (!gi)
            throw RingError(p.ctx + ": unknown generator '" + m[2].str() +
                            "'");
          prod.value.emplace_back(c, *gi);
        }
      }
    }
    out.products.push_back(std::move(prod));
  }
  return out;
}

GradedRingData load_ring(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw RingError("cannot open ring data file " + path);
  std::ostringstream text;
  text << f.rdbuf();
  GradedRingData data = parse_ring(text.str(), path);
  data.path = path;
  data.fingerprint = io::file_fingerprint(path);
  return data;
}

ChowWittRing::ChowWittRing(GradedRingData data) : data_(std::move(data)) {
  const auto& unit = data_.gens.at(data_.unit);
  if (unit.degree != 0 || unit.twist != 0)
    throw RingError("ring data: the unit generator must live in degree 0, "
                    "untwisted");
  const auto& euler = data_.gens.at(data_.euler);
  if (euler.degree != 1 || euler.twist != 1)
    throw RingError("ring data: the euler generator must live in degree 1, "
                    "twisted");

  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto& p : data_.products) {
    if (!seen.insert({p.a, p.b}).second)
      throw RingError("ring data: duplicate structure constant for " +
                      pair_name(data_, p.a, p.b));
    const auto& ga = data_.gens.at(p.a);
    const auto& gb = data_.gens.at(p.b);
    for (auto& [c, k] : p.value) {
      const auto& gk = data_.gens.at(k);
      if (gk.degree != ga.degree + gb.degree ||
          gk.twist != (ga.twist + gb.twist) % 2)
        throw RingError("ring data: product " + pair_name(data_, p.a, p.b) +
                        " hits generator " + gk.name +
                        " outside its graded slot");
      if (gk.order != 0) {
        c %= gk.order;
        if (c < 0) c += gk.order;
      }
    }
    // A unit product spelled out in the file must agree with the unit law.
    if (p.a == data_.unit || p.b == data_.unit) {
      std::size_t other = (p.a == data_.unit) ? p.b : p.a;
      bool identity = p.tag != ConstProvenance::Unknown &&
                      p.value.size() == 1 && p.value[0].second == other &&
                      p.value[0].first == 1;
      if (!identity)
        throw RingError("ring data: declared unit product " +
                        pair_name(data_, p.a, p.b) +
                        " does not equal its partner");
    }
  }
  // The unit law fills in every missing unit product.
  for (std::size_t g = 0; g < data_.gens.size(); ++g) {
    std::size_t a = std::min(data_.unit, g), b = std::max(data_.unit, g);
    if (!data_.find_product(a, b))
      data_.products.push_back(Product{
          a, b, {{ab::Int(1), g}}, ConstProvenance::PaperFixed, "unit law"});
  }
}

RingElement ChowWittRing::reduce(RingElement x) const {
  for (auto it = x.coeff.begin(); it != x.coeff.end();) {
    const auto& g = data_.gens.at(it->first);
    if (g.order != 0) {
      it->second %= g.order;
      if (it->second < 0) it->second += g.order;
    }
    if (it->second == 0) it = x.coeff.erase(it);
    else ++it;
  }
  return x;
}

RingElement ChowWittRing::parse_element(const std::string& text) const {
  std::string t = trim(text);
  if (t.empty()) throw RingError("empty ring element");
  if (t == "0") return {};
  static const std::regex term_re(
      R"(^(?:([+-]?\d+)\s*\*\s*)?([A-Za-z][A-Za-z0-9_]*)$)");
  RingElement out;
  std::istringstream is(t);
  std::string term;
  while (std::getline(is, term, '+')) {
    term = trim(term);
    std::smatch m;
    if (!std::regex_match(term, m, term_re))
      throw RingError("unreadable element term '" + term +
                      "' (grammar: '3*g2 + alpha', or '0')");
    ab::Int c = m[1].matched ? parse_coeff(m[1].str()) : ab::Int(1);
    auto gi = data_.gen_index(m[2].str());
    if (!gi) throw RingError("unknown generator '" + m[2].str() + "'");
    out.coeff[*gi] += c;
  }
  return reduce(std::move(out));
}

M12Element ChowWittRing::parse_m12(const std::string& text) const {
  std::string t = trim(text);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')')
    throw RingError("a rank-2 element is written '(A, B)', got '" + text +
                    "'");
  std::string inner = t.substr(1, t.size() - 2);
  auto comma = inner.find(',');
  if (comma == std::string::npos)
    throw RingError("a rank-2 element needs two slots '(A, B)', got '" +
                    text + "'");
  M12Element out;
  out.a = parse_element(inner.substr(0, comma));
  out.b = parse_element(inner.substr(comma + 1));
  for (const auto& [i, c] : out.a.coeff)
    if (data_.gens.at(i).twist != 0)
      throw RingError("slot A of '" + text + "' holds twisted generator '" +
                      data_.gens.at(i).name + "'");
  for (const auto& [i, c] : out.b.coeff)
    if (data_.gens.at(i).twist != 1)
      throw RingError("slot B of '" + text + "' holds untwisted generator '" +
                      data_.gens.at(i).name + "'");
  return out;
}

std::string ChowWittRing::element_str(const RingElement& x) const {
  if (x.coeff.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [i, c] : x.coeff) {
    if (!first) os << " + ";
    first = false;
    if (c != 1) os << c.get_str() << "*";
    os << data_.gens.at(i).name;
  }
  return os.str();
}

std::string ChowWittRing::m12_str(const M12Element& x) const {
  return "(" + element_str(x.a) + ", " + element_str(x.b) + ")";
}

RingElement ChowWittRing::add(const RingElement& x,
                              const RingElement& y) const {
  RingElement out = x;
  for (const auto& [i, c] : y.coeff) out.coeff[i] += c;
  return reduce(std::move(out));
}

RingElement ChowWittRing::scale(const ab::Int& k, const RingElement& x) const {
  RingElement out;
  for (const auto& [i, c] : x.coeff) out.coeff[i] = k * c;
  return reduce(std::move(out));
}

RingElement ChowWittRing::mul_gens(std::size_t i, std::size_t j) const {
  std::size_t a = std::min(i, j), b = std::max(i, j);
  std::string pr = pair_name(data_, a, b);
  const Product* p = data_.find_product(a, b);
  if (!p)
    throw UnknownStructureConstant(
        "structure constant " + pr + " is not declared; refusing to guess",
        pr);
  if (p->tag == ConstProvenance::Unknown)
    throw UnknownStructureConstant(
        "structure constant " + pr + " is marked unknown [" + p->provenance +
            "]",
        pr);
  RingElement out;
  for (const auto& [c, k] : p->value) out.coeff[k] += c;
  return out;
}

RingElement ChowWittRing::mul(const RingElement& x,
                              const RingElement& y) const {
  RingElement acc;
  for (const auto& [i, ci] : x.coeff)
    for (const auto& [j, cj] : y.coeff) {
      RingElement t = mul_gens(i, j);
      for (const auto& [k, c] : t.coeff) acc.coeff[k] += ci * cj * c;
    }
  return reduce(std::move(acc));
}

M12Element ChowWittRing::multiply(const M12Element& x,
                                  const M12Element& y) const {
  RingElement e;
  e.coeff[data_.euler] = 1;
  M12Element out;
  out.a = mul(x.a, y.a);
  out.b = add(add(mul(x.a, y.b), mul(x.b, y.a)), mul(mul(x.b, y.b), e));
  return out;
}

sym::GroupExpr ChowWittRing::m12_component(long degree) const {
  sym::GroupExpr out = sym::GroupExpr::zero();
  auto u = data_.components.find({degree, 0});
  if (u != data_.components.end()) out = sym::expr_sum(out, u->second.expr);
  if (degree >= 1) {
    auto t = data_.components.find({degree - 1, 1});
    if (t != data_.components.end()) out = sym::expr_sum(out, t->second.expr);
  }
  return out;
}

AxiomReport ChowWittRing::check_ring_axioms(long max_total) const {
  AxiomReport rep;
  const std::size_t n = data_.gens.size();
  auto single = [](std::size_t i) {
    RingElement e;
    e.coeff[i] = 1;
    return e;
  };

  // Pair layer: unit law, commutativity, torsion bookkeeping.
  for (std::size_t i = 0; i < n; ++i) {
    const auto& gi = data_.gens[i];
    RingElement ug = mul(single(data_.unit), single(i));
    if (!(ug == single(i)))
      rep.violations.push_back("unit law fails at " + gi.name + ": one * " +
                               gi.name + " = " + element_str(ug));
    for (std::size_t j = i; j < n; ++j) {
      const auto& gj = data_.gens[j];
      if (gi.degree + gj.degree > max_total) continue;
      const Product* p = data_.find_product(i, j);
      if (!p || p->tag == ConstProvenance::Unknown) continue;
      rep.pairs_checked++;
      RingElement xy = mul(single(i), single(j));
      RingElement yx = mul(single(j), single(i));
      if (!(xy == yx))
        rep.violations.push_back("commutativity fails at (" + gi.name + ", " +
                                 gj.name + ")");
      for (const ab::Int& ord : {gi.order, gj.order})
        if (ord != 0 && !scale(ord, xy).is_zero())
          rep.violations.push_back(
              "torsion bookkeeping fails: " + ord.get_str() + " * (" +
              gi.name + " * " + gj.name + ") = " +
              element_str(scale(ord, xy)) + ", expected 0");
    }
  }

  // Triple layer: associativity and distributivity on declared triples.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        const auto& gi = data_.gens[i];
        const auto& gj = data_.gens[j];
        const auto& gk = data_.gens[k];
        if (gi.degree + gj.degree + gk.degree > max_total) continue;
        std::string triple =
            "(" + gi.name + ", " + gj.name + ", " + gk.name + ")";
        try {
          RingElement lhs = mul(mul(single(i), single(j)), single(k));
          RingElement rhs = mul(single(i), mul(single(j), single(k)));
          if (!(lhs == rhs))
            rep.violations.push_back("associativity fails at " + triple +
                                     ": (xy)z = " + element_str(lhs) +
                                     " but x(yz) = " + element_str(rhs));
          RingElement dl = mul(add(single(i), single(j)), single(k));
          RingElement dr =
              add(mul(single(i), single(k)), mul(single(j), single(k)));
          if (!(dl == dr))
            rep.violations.push_back("distributivity fails at " + triple);
          rep.triples_checked++;
        } catch (const UnknownStructureConstant& u) {
          rep.skipped.push_back(triple + ": missing " + u.missing);
        }
      }
  return rep;
}

std::string AxiomReport::str() const {
  std::ostringstream os;
  os << "ring axiom check\n";
  os << "  declared pairs checked: " << pairs_checked << "\n";
  os << "  triples checked: " << triples_checked << "\n";
  os << "  triples skipped for missing constants: " << skipped.size() << "\n";
  std::size_t shown = 0;
  for (const auto& s : skipped) {
    if (shown++ == 10) {
      os << "    ... and " << (skipped.size() - 10) << " more\n";
      break;
    }
    os << "    " << s << "\n";
  }
  if (violations.empty()) {
    os << "  all declared products associative, commutative, distributive "
          "and unital\n";
  } else {
    for (const auto& v : violations) os << "  VIOLATION: " << v << "\n";
  }
  return os.str();
}

std::string ChowWittRing::table(int twist, long max_degree) const {
  std::ostringstream os;
  os << (twist ? "twisted column" : "untwisted column") << "\n";
  for (long d = 0; d <= max_degree; ++d) {
    auto it = data_.components.find({d, twist});
    os << "  degree " << d << ":  ";
    if (it == data_.components.end()) {
      os << "0\n";
      continue;
    }
    os << it->second.display << "  |  " << it->second.expr.str()
       << "  |  gens:";
    for (std::size_t g : it->second.gens)
      os << " " << data_.gens.at(g).name;
    os << "\n";
  }
  return os.str();
}

void audit_against_motives(const GradedRingData& data, const mod::Moduli& m) {
  constexpr long kTrunc = 12;
  mod::NamedMotive u = m.build("M11", kTrunc);
  mod::NamedMotive t = m.build("Th_M11_Ominus1", kTrunc);
  for (const auto& [key, comp] : data.components) {
    auto [degree, twist] = key;
    blk::BlockAtom probe = twist == 0
                               ? blk::atom_t(degree, 2 * degree)
                               : blk::atom_t(degree + 1, 2 * degree + 2);
    const blk::BlockExpr& src = twist == 0 ? u.expr : t.expr;
    sym::GroupExpr got = m.calc().hom(src, probe).expr;
    if (!(got == comp.expr))
      throw RingError("ring data: " +
                      std::string(twist ? "twisted" : "untwisted") +
                      " degree " + std::to_string(degree) + " is " +
                      comp.expr.str() + " in the file but the motive " +
                      "computation gives " + got.str());
  }
  for (int twist = 0; twist <= 1; ++twist)
    for (long d = 0; d <= 8; ++d)
      if (!data.components.count({d, twist}))
        throw RingError("ring data: missing component (degree " +
                        std::to_string(d) + ", twist " +
                        std::to_string(twist) + ")");
}

ChowWittRing load_default_ring(const mod::Moduli& m) {
  GradedRingData data = load_ring(io::data_file("m11_ring.mwt"));
  audit_against_motives(data, m);
  return ChowWittRing(std::move(data));
}

}  // namespace mw::cw
