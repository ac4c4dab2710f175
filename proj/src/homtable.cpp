#include "mw/homtable.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "mw/qform.hpp"
#include "mw/records.hpp"

namespace mw::blk {

std::string arrow_str(ArrowClass a) {
  switch (a) {
    case ArrowClass::PreBoundary: return "pre_boundary";
    case ArrowClass::PostEta: return "post_eta";
    case ArrowClass::PostBoundary: return "post_boundary";
    case ArrowClass::PostUnit: return "post_unit";
  }
  throw std::logic_error("arrow_str: bad arrow");
}

namespace {

std::string fam_name(AtomKind s, AtomKind t, int offset) {
  std::ostringstream os;
  os << "(" << kind_str(s) << "," << kind_str(t) << ",offset " << offset << ")";
  return os.str();
}

AtomKind parse_th(const std::string& v, const std::string& ctx) {
  if (v == "T") return AtomKind::T;
  if (v == "H") return AtomKind::H;
  throw TableError("hom table: " + ctx + ": block kind must be T or H, got '" + v + "'");
}

sym::GroupExpr parse_group(const std::string& v, const std::string& ctx) {
  auto e = sym::parse_expr(v);
  if (!e) throw TableError("hom table: " + ctx + ": cannot parse group '" + v + "'");
  return *e;
}

ArrowClass parse_arrow(const std::string& v, const std::string& ctx) {
  if (v == "pre_boundary") return ArrowClass::PreBoundary;
  if (v == "post_eta") return ArrowClass::PostEta;
  if (v == "post_boundary") return ArrowClass::PostBoundary;
  if (v == "post_unit") return ArrowClass::PostUnit;
  throw TableError("hom table: " + ctx + ": unknown arrow '" + v + "'");
}

sym::GroupExpr unknown_expr() {
  sym::GroupExpr e;
  e.unknown = true;
  return e;
}

// Family-level value: nullopt when the position is unknown.
std::optional<sym::GroupExpr> family_value(const Family& f, long dq) {
  if (f.unknown_odd && (dq % 2 != 0)) return std::nullopt;
  if (std::find(f.unknown_dq.begin(), f.unknown_dq.end(), dq) != f.unknown_dq.end())
    return std::nullopt;
  for (const auto& c : f.cases)
    if (c.dq == dq) return c.expr;
  return sym::GroupExpr::zero();
}

}  // namespace

const Family* HomTable::family(AtomKind src, AtomKind tgt, int offset) const {
  for (const auto& f : families)
    if (f.src == src && f.tgt == tgt && f.offset == offset) return &f;
  return nullptr;
}

TableEntry HomTable::lookup(const BlockAtom& src, const BlockAtom& tgt) const {
  if (src.kind != AtomKind::T && src.kind != AtomKind::H)
    throw TableError("hom table lookup: source must be a plain T/H block, got " + src.str());
  if (tgt.kind != AtomKind::T && tgt.kind != AtomKind::H)
    throw TableError("hom table lookup: target must be a plain T/H block, got " + tgt.str());
  long dq = tgt.q - src.q;
  long dp = tgt.p - src.p;
  long offset = dp - 2 * dq;
  const Family* f = (offset >= -1 && offset <= 1)
                        ? family(src.kind, tgt.kind, static_cast<int>(offset))
                        : nullptr;
  if (!f) {
    return {unknown_expr(),
            "no family covers offset " + std::to_string(offset) + " for Hom(" + src.str() +
                ", " + tgt.str() + ")",
            ""};
  }
  auto v = family_value(*f, dq);
  if (!v) {
    return {unknown_expr(),
            "family " + fam_name(f->src, f->tgt, f->offset) + " has no value at dq=" +
                std::to_string(dq),
            ""};
  }
  for (const auto& c : f->cases)
    if (c.dq == dq) return {c.expr, c.provenance, c.generators};
  return {sym::GroupExpr::zero(), f->provenance, ""};
}

std::optional<ActionRule> HomTable::action(ArrowClass arrow, const sym::GroupExpr& dom,
                                           const sym::GroupExpr& cod) const {
  const std::string ds = dom.str(), cs = cod.str();
  for (const auto& a : actions)
    if (a.arrow == arrow && a.source_expr == ds && a.target_expr == cs) return a;
  return std::nullopt;
}

// Realizes one canonical map between evaluated entries over a field.
ab::FGAbHom realize_map(MapKind kind, const ab::Int& scale, const ab::FGAbGroup& dom,
                        const ab::FGAbGroup& cod, const qf::Field& field) {
  switch (kind) {
    case MapKind::Zero:
      return ab::zero_hom(dom, cod);
    case MapKind::Mult: {
      if (!(dom == cod))
        throw TableError("realize_map: Mult needs equal domain/codomain, got " + dom.str() +
                         " vs " + cod.str());
      return ab::hom_scale(scale, ab::identity_hom(dom));
    }
    case MapKind::Rank: {
      auto r = qf::gw_realization(field);
      if (!(dom == r.gw && cod == r.rank_hom.target))
        throw TableError("realize_map: Rank shape mismatch over " + field.str());
      return ab::hom_scale(scale, r.rank_hom);
    }
    case MapKind::Hyperbolic: {
      auto r = qf::gw_realization(field);
      if (!(dom == r.h_hom.source && cod == r.gw))
        throw TableError("realize_map: Hyperbolic shape mismatch over " + field.str());
      return ab::hom_scale(scale, r.h_hom);
    }
    case MapKind::WittProj: {
      auto r = qf::gw_realization(field);
      if (!(dom == r.gw && cod == r.witt))
        throw TableError("realize_map: WittProj shape mismatch over " + field.str());
      return ab::hom_scale(scale, r.proj_hom);
    }
  }
  throw std::logic_error("realize_map: bad kind");
}

namespace {

void audit_duality(const HomTable& t) {
  // Hom(H, T(dq)[dp]) == Hom(T, H(dq-1)[dp-2]): same offset, dq shifted by 1.
  for (int off = -1; off <= 1; off++) {
    const Family* ht = t.family(AtomKind::H, AtomKind::T, off);
    const Family* th = t.family(AtomKind::T, AtomKind::H, off);
    for (long dq = -15; dq <= 16; dq++) {
      auto a = family_value(*ht, dq);
      auto b = family_value(*th, dq - 1);
      if (a.has_value() != b.has_value() || (a && !(*a == *b))) {
        throw TableError("hom table audit: duality mismatch at " +
                         fam_name(AtomKind::H, AtomKind::T, off) + " dq=" + std::to_string(dq) +
                         ": '" + (a ? a->str() : "unknown") + "' vs dual '" +
                         (b ? b->str() : "unknown") + "'");
      }
    }
  }
}

void audit_tensor(const HomTable& t) {
  // Hom(H, H(dq)[dp]) splits as Hom(T, H(dq-1)[dp-2]) + Hom(T, H(dq)[dp]).
  for (int off : {0, -1}) {
    const Family* hh = t.family(AtomKind::H, AtomKind::H, off);
    const Family* th = t.family(AtomKind::T, AtomKind::H, off);
    for (long dq = -15; dq <= 16; dq++) {
      auto lhs = family_value(*hh, dq);
      if (!lhs) continue;  // recorded unknown (odd positions at offset -1)
      auto p1 = family_value(*th, dq - 1);
      auto p2 = family_value(*th, dq);
      if (!p1 || !p2)
        throw TableError("hom table audit: tensor split of " +
                         fam_name(AtomKind::H, AtomKind::H, off) + " dq=" + std::to_string(dq) +
                         " needs unknown parts");
      auto rhs = sym::expr_sum(*p1, *p2);
      if (!(*lhs == rhs))
        throw TableError("hom table audit: tensor mismatch at " +
                         fam_name(AtomKind::H, AtomKind::H, off) + " dq=" + std::to_string(dq) +
                         ": '" + lhs->str() + "' vs split '" + rhs.str() + "'");
    }
  }
}

void audit_evaluations(const HomTable& t) {
  const qf::Field fields[] = {qf::Field::complex(), qf::Field::real(), qf::Field::finite(3),
                              qf::Field::finite(5)};
  for (const auto& fam : t.families) {
    for (const auto& c : fam.cases) {
      for (const auto& f : fields) {
        auto ev = sym::evaluate(c.expr, f);
        if (!sym::evaluates_to_group(ev))
          throw TableError("hom table audit: entry " + fam_name(fam.src, fam.tgt, fam.offset) +
                           " dq=" + std::to_string(c.dq) + " ('" + c.expr.str() +
                           "') does not evaluate over " + f.str());
      }
    }
  }
}

sym::GroupExpr need_value(const HomTable& t, AtomKind s, AtomKind g, int off, long dq,
                          const std::string& why) {
  auto v = family_value(*t.family(s, g, off), dq);
  if (!v)
    throw TableError("hom table audit: " + why + ": entry " + fam_name(s, g, off) +
                     " dq=" + std::to_string(dq) + " is unknown");
  return *v;
}

ActionRule need_action(const HomTable& t, ArrowClass arrow, const sym::GroupExpr& dom,
                       const sym::GroupExpr& cod, const std::string& why) {
  auto a = t.action(arrow, dom, cod);
  if (!a)
    throw TableError("hom table audit: " + why + ": no registered action " + arrow_str(arrow) +
                     " : '" + dom.str() + "' -> '" + cod.str() + "'");
  return *a;
}

// The two canonical exactness rows through the point entries, evaluated
// over several fields:
//   row 1:  0 -> Hom(T,H(-1)[-2]) --boundary--> Hom(T,T) --eta--> Hom(T,T(-1)[-1]) -> 0
//   row 2:  Hom(T,T) --unit--> Hom(T,H) -> 0
void audit_rows(const HomTable& t) {
  auto e_2z = need_value(t, AtomKind::T, AtomKind::H, 0, -1, "row 1");
  auto e_gw = need_value(t, AtomKind::T, AtomKind::T, 0, 0, "row 1");
  auto e_w = need_value(t, AtomKind::T, AtomKind::T, 1, -1, "row 1");
  auto e_z = need_value(t, AtomKind::T, AtomKind::H, 0, 0, "row 2");
  ActionRule hyp = need_action(t, ArrowClass::PostBoundary, e_2z, e_gw, "row 1");
  ActionRule proj = need_action(t, ArrowClass::PostEta, e_gw, e_w, "row 1");
  ActionRule rank = need_action(t, ArrowClass::PostUnit, e_gw, e_z, "row 2");

  const qf::Field fields[] = {qf::Field::complex(), qf::Field::real(), qf::Field::finite(5)};
  for (const auto& f : fields) {
    auto g_2z = sym::evaluated_group(sym::evaluate(e_2z, f));
    auto g_gw = sym::evaluated_group(sym::evaluate(e_gw, f));
    auto g_w = sym::evaluated_group(sym::evaluate(e_w, f));
    auto g_z = sym::evaluated_group(sym::evaluate(e_z, f));
    auto h = realize_map(hyp.map, hyp.scale, g_2z, g_gw, f);
    auto p = realize_map(proj.map, proj.scale, g_gw, g_w, f);
    auto r = realize_map(rank.map, rank.scale, g_gw, g_z, f);
    if (!ab::is_injective(h))
      throw TableError("hom table audit: row 1 over " + f.str() +
                       ": boundary action '2Z -> GW' is not injective");
    if (!ab::exact_at(h, p))
      throw TableError("hom table audit: row 1 over " + f.str() +
                       ": image of the hyperbolic action differs from the kernel of the Witt "
                       "projection");
    if (!ab::is_surjective(p))
      throw TableError("hom table audit: row 1 over " + f.str() +
                       ": Witt projection action is not surjective");
    if (!ab::is_surjective(r))
      throw TableError("hom table audit: row 2 over " + f.str() +
                       ": rank action 'GW -> Z' is not surjective");
  }
}

void audit_witness(const HomTable& t) {
  if (!t.witness) throw TableError("hom table audit: missing extension witness record");
  const auto& w = *t.witness;
  if (w.unit_label != "rank_of_hyperbolic")
    throw TableError("hom table audit: witness unit '" + w.unit_label + "' is not understood");
  if (w.v_mult <= 0 || w.correction <= 0)
    throw TableError("hom table audit: witness multipliers must be positive");
  for (const auto& f :
       {qf::Field::complex(), qf::Field::real(), qf::Field::finite(5)}) {
    auto r = qf::gw_realization(f);
    ab::Int rkh = ab::compose(r.rank_hom, r.h_hom).matrix[0][0];
    if (w.correction * rkh != w.v_mult)
      throw TableError("hom table audit: witness certificate fails over " + f.str() +
                       ": correction * rank(hyperbolic) = " + w.correction.get_str() + " * " +
                       rkh.get_str() + " != " + w.v_mult.get_str());
  }
}

void audit(const HomTable& t) {
  // all twelve families, exactly once
  for (AtomKind s : {AtomKind::T, AtomKind::H})
    for (AtomKind g : {AtomKind::T, AtomKind::H})
      for (int off = -1; off <= 1; off++) {
        int n = 0;
        for (const auto& f : t.families)
          if (f.src == s && f.tgt == g && f.offset == off) n++;
        if (n != 1)
          throw TableError("hom table audit: family " + fam_name(s, g, off) + " appears " +
                           std::to_string(n) + " times (want 1)");
      }
  for (const auto& f : t.families) {
    if (f.offset < -1 || f.offset > 1)
      throw TableError("hom table audit: family " + fam_name(f.src, f.tgt, f.offset) +
                       " has offset outside {-1,0,1}");
    std::set<long> seen;
    for (const auto& c : f.cases) {
      if (!seen.insert(c.dq).second)
        throw TableError("hom table audit: family " + fam_name(f.src, f.tgt, f.offset) +
                         " lists dq=" + std::to_string(c.dq) + " twice");
      if (!c.expr.is_known())
        throw TableError("hom table audit: family " + fam_name(f.src, f.tgt, f.offset) +
                         " case dq=" + std::to_string(c.dq) +
                         " is unknown; use the family unknown markers instead");
    }
  }
  audit_duality(t);
  audit_tensor(t);
  audit_evaluations(t);
  audit_rows(t);
  audit_witness(t);
}

}  // namespace

HomTable load_hom_table(const std::string& path) {
  HomTable t;
  t.path = path;
  t.fingerprint = io::file_fingerprint(path);
  auto records = io::load_records(path);

  // first pass: families
  for (const auto& r : records) {
    if (r.type != "family") continue;
    std::string ctx = "family at line " + std::to_string(r.line);
    Family f;
    f.src = parse_th(r.get("src"), ctx);
    f.tgt = parse_th(r.get("tgt"), ctx);
    f.offset = static_cast<int>(r.get_int("offset"));
    for (const auto& u : r.get_all("unknown")) f.unknown_dq.push_back(std::stol(u));
    if (auto par = r.get_opt("unknown_parity")) {
      if (*par != "odd")
        throw TableError("hom table: " + ctx + ": unknown_parity must be 'odd'");
      f.unknown_odd = true;
    }
    f.provenance = r.get("provenance");
    t.families.push_back(std::move(f));
  }

  // second pass: cases, actions, witness
  for (const auto& r : records) {
    std::string ctx = r.type + " at line " + std::to_string(r.line);
    if (r.type == "case") {
      AtomKind s = parse_th(r.get("src"), ctx);
      AtomKind g = parse_th(r.get("tgt"), ctx);
      int off = static_cast<int>(r.get_int("offset"));
      Family* fam = nullptr;
      for (auto& f : t.families)
        if (f.src == s && f.tgt == g && f.offset == off) fam = &f;
      if (!fam)
        throw TableError("hom table: " + ctx + ": no family " + fam_name(s, g, off));
      FamilyCase c;
      c.dq = r.get_int("dq");
      c.expr = parse_group(r.get("group"), ctx);
      c.generators = r.get_opt("generators").value_or("");
      c.provenance = r.get("provenance");
      fam->cases.push_back(std::move(c));
    } else if (r.type == "action") {
      ActionRule a;
      a.arrow = parse_arrow(r.get("arrow"), ctx);
      a.source_expr = parse_group(r.get("source"), ctx).str();
      a.target_expr = parse_group(r.get("target"), ctx).str();
      std::string m = r.get("map");
      if (m == "zero") a.map = MapKind::Zero;
      else if (m == "rank") a.map = MapKind::Rank;
      else if (m == "hyperbolic") a.map = MapKind::Hyperbolic;
      else if (m == "witt_proj") a.map = MapKind::WittProj;
      else if (m.rfind("mult:", 0) == 0) {
        a.map = MapKind::Mult;
        a.scale = ab::Int(m.substr(5));
      } else {
        throw TableError("hom table: " + ctx + ": unknown map '" + m + "'");
      }
      a.provenance = r.get("provenance");
      t.actions.push_back(std::move(a));
    } else if (r.type == "witness") {
      if (t.witness) throw TableError("hom table: " + ctx + ": duplicate witness record");
      WitnessRule w;
      w.sub_expr = parse_group(r.get("sub"), ctx).str();
      w.quot_expr = parse_group(r.get("quot"), ctx).str();
      w.v_mult = ab::Int(r.get("v_mult"));
      w.correction = ab::Int(r.get("correction"));
      w.unit_label = r.get("unit");
      w.provenance = r.get("provenance");
      t.witness = std::move(w);
    } else if (r.type != "family") {
      throw TableError("hom table: unknown record type '" + r.type + "' at line " +
                       std::to_string(r.line));
    }
  }

  audit(t);
  return t;
}

HomTable load_default_hom_table() { return load_hom_table(io::data_file("homtable.mwt")); }

}  // namespace mw::blk
