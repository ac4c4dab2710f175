#include "mw/homcalc.hpp"

#include <algorithm>

namespace mw::blk {

namespace {

sym::GroupExpr unknown_expr() {
  sym::GroupExpr e;
  e.unknown = true;
  return e;
}

bool all_free(const sym::GroupExpr& e) {
  if (!e.is_known()) return false;
  return std::all_of(e.atoms.begin(), e.atoms.end(), [](const sym::GroupAtom& a) {
    return a.kind == sym::AtomKind::Z || a.kind == sym::AtomKind::TwoZ;
  });
}

// coker of `arm` : dom -> cod, as a named expression; unknown-tagged when
// the table vocabulary cannot express it.
sym::GroupExpr symbolic_coker(const HomCalc::Arm& arm, const sym::GroupExpr& dom,
                              const sym::GroupExpr& cod) {
  using sym::AtomKind;
  switch (arm.map) {
    case MapKind::Zero:
      return cod;
    case MapKind::Mult: {
      if (arm.scale == 0) return cod;
      sym::GroupExpr r;
      for (const auto& a : cod.atoms) {
        if (a.kind == AtomKind::Z)
          r = sym::expr_sum(r, sym::GroupExpr::single(sym::atom_zmod(abs(arm.scale))));
        else if (a.kind == AtomKind::TwoZ)
          r = sym::expr_sum(r, sym::GroupExpr::single(sym::atom_twozmod(abs(arm.scale))));
        else
          r.unknown = true;  // torsion-valued summand: field-dependent cokernel
      }
      return r;
    }
    case MapKind::Rank: {
      if (arm.scale == 0) return cod;
      if (cod == sym::GroupExpr::single(sym::atom_z()))
        return sym::GroupExpr::single(sym::atom_zmod(abs(arm.scale)));
      return unknown_expr();
    }
    case MapKind::Hyperbolic:
      // GW / Z<hyperbolic> is the Witt group
      if (arm.scale == 1 && dom == sym::GroupExpr::single(sym::atom_z()) &&
          cod == sym::GroupExpr::single(sym::atom_gw()))
        return sym::GroupExpr::single(sym::atom_w());
      return unknown_expr();
    case MapKind::WittProj:
      if (arm.scale == 1) return sym::GroupExpr::zero();  // the projection is onto
      return unknown_expr();
  }
  return unknown_expr();
}

// ker of `arm` : dom -> cod, as a named expression.
sym::GroupExpr symbolic_ker(const HomCalc::Arm& arm, const sym::GroupExpr& dom) {
  using sym::AtomKind;
  switch (arm.map) {
    case MapKind::Zero:
      return dom;
    case MapKind::Mult: {
      if (arm.scale == 0) return dom;
      sym::GroupExpr r;
      for (const auto& a : dom.atoms) {
        if (a.kind == AtomKind::Z || a.kind == AtomKind::TwoZ) continue;  // torsion-free
        r.unknown = true;  // torsion summand: field-dependent kernel
      }
      return r;
    }
    case MapKind::Rank:
      return unknown_expr();  // the rank kernel has no table name
    case MapKind::Hyperbolic:
      if (arm.scale != 0) return sym::GroupExpr::zero();  // hyperbolic forms have infinite order
      return dom;
    case MapKind::WittProj:
      if (arm.scale == 1)
        return sym::GroupExpr::single(sym::atom_z());  // the hyperbolic line
      return unknown_expr();
  }
  return unknown_expr();
}

}  // namespace

std::string HomValue::str() const {
  if (ambiguous)
    return expr.str() + " (unresolved extension of " + amb_quot.str() + " by " + amb_sub.str() +
           ")";
  return expr.str();
}

std::string eval_str(const EvalValue& v) {
  if (std::holds_alternative<ab::FGAbGroup>(v)) return std::get<ab::FGAbGroup>(v).str();
  if (std::holds_alternative<ab::AmbiguousExtension>(v))
    return std::get<ab::AmbiguousExtension>(v).str();
  if (std::holds_alternative<sym::NotFinitelyGenerated>(v)) {
    const auto& n = std::get<sym::NotFinitelyGenerated>(v);
    return "not finitely generated over " + n.field.str() + " (" + n.what + ")";
  }
  return "unknown (" + std::get<sym::UnknownValue>(v).reason + ")";
}

bool eval_is_group(const EvalValue& v) { return std::holds_alternative<ab::FGAbGroup>(v); }

const ab::FGAbGroup& eval_group(const EvalValue& v) {
  if (!eval_is_group(v)) throw CalcError("expected an exact group, got: " + eval_str(v));
  return std::get<ab::FGAbGroup>(v);
}

SumDecomp sum_decomp(const std::vector<ab::FGAbGroup>& parts) {
  SumDecomp d;
  if (parts.empty()) {
    d.total = ab::FGAbGroup{};
    return d;
  }
  d.total = parts[0];
  d.inject = {ab::identity_hom(parts[0])};
  d.project = {ab::identity_hom(parts[0])};
  for (size_t i = 1; i < parts.size(); i++) {
    ab::FGAbGroup next = ab::direct_sum(d.total, parts[i]);
    ab::FGAbHom in_old = ab::sum_injection(d.total, parts[i], 0);
    ab::FGAbHom pr_old = ab::sum_projection(d.total, parts[i], 0);
    for (size_t j = 0; j < i; j++) {
      d.inject[j] = ab::compose(in_old, d.inject[j]);
      d.project[j] = ab::compose(d.project[j], pr_old);
    }
    d.inject.push_back(ab::sum_injection(d.total, parts[i], 1));
    d.project.push_back(ab::sum_projection(d.total, parts[i], 1));
    d.total = next;
  }
  return d;
}

std::string EtaInverted::str() const {
  if (w_mult.empty()) return "0";
  std::string s;
  for (const auto& [deg, mult] : w_mult) {
    if (!s.empty()) s += " + ";
    s += (mult == 1 ? "W" : "W^" + std::to_string(mult));
    s += "@[" + std::to_string(deg) + "]";
  }
  return s;
}

// --- arm resolution ---------------------------------------------------------

std::optional<HomCalc::Arm> HomCalc::resolve_arm(const TableEntry& dom, const TableEntry& cod,
                                                 ArrowWord word, const ab::Int& multiplier,
                                                 std::string* why) const {
  if (dom.expr.is_known() && dom.expr.is_zero()) return Arm{MapKind::Zero, 1};
  if (cod.expr.is_known() && cod.expr.is_zero()) return Arm{MapKind::Zero, 1};
  if (!dom.expr.is_known()) {
    if (why) *why = "domain entry is unknown (" + dom.provenance + ")";
    return std::nullopt;
  }
  if (!cod.expr.is_known()) {
    if (why) *why = "codomain entry is unknown (" + cod.provenance + ")";
    return std::nullopt;
  }
  if (word == ArrowWord::Identity) {
    if (!(dom.expr == cod.expr)) {
      if (why)
        *why = "identity arrow between different entries '" + dom.expr.str() + "' and '" +
               cod.expr.str() + "'";
      return std::nullopt;
    }
    return Arm{MapKind::Mult, multiplier};
  }
  // Boundary word: look up the registered precomposition action.
  auto rule = table_.action(ArrowClass::PreBoundary, dom.expr, cod.expr);
  if (!rule) {
    if (why)
      *why = "no registered action " + arrow_str(ArrowClass::PreBoundary) + " : '" +
             dom.expr.str() + "' -> '" + cod.expr.str() + "'";
    return std::nullopt;
  }
  return Arm{rule->map, multiplier * rule->scale};
}

// --- window entries of a cone atom -------------------------------------------

HomCalc::ConeEntries HomCalc::cone_entries(const BlockAtom& cone, const BlockAtom& tgt) const {
  auto shape = cone_shape(cone);
  if (!shape) throw CalcError("not a cone atom: " + cone.str());
  ConeEntries ce;
  ce.cone = cone;
  ce.tgt = tgt;
  ce.shape = *shape;
  ce.b1 = table_.lookup(twist_shift(shape->b, 0, 1), tgt);
  ce.a1 = table_.lookup(twist_shift(shape->a, 0, 1), tgt);
  ce.b0 = table_.lookup(shape->b, tgt);
  ce.a0 = table_.lookup(shape->a, tgt);
  ce.left = resolve_arm(ce.b1, ce.a1, shape->word, shape->multiplier, &ce.left_why);
  ce.right = resolve_arm(ce.b0, ce.a0, shape->word, shape->multiplier, &ce.right_why);
  return ce;
}

// --- symbolic middle ----------------------------------------------------------

HomValue HomCalc::solve_symbolic(const ConeEntries& ce) const {
  HomValue v;
  if (!ce.left || !ce.right) {
    v.expr = unknown_expr();
    return v;
  }
  sym::GroupExpr sub = symbolic_coker(*ce.left, ce.b1.expr, ce.a1.expr);
  sym::GroupExpr quot = symbolic_ker(*ce.right, ce.b0.expr);
  v.expr = sym::expr_sum(sub, quot);
  if (!sub.is_known() || !quot.is_known()) return v;
  if (quot.is_zero() || sub.is_zero()) return v;
  if (all_free(quot)) return v;  // free quotients split
  if (table_.witness && sub.str() == table_.witness->sub_expr &&
      quot.str() == table_.witness->quot_expr)
    return v;  // the recorded witness splits this extension
  v.ambiguous = true;
  v.amb_sub = sub;
  v.amb_quot = quot;
  return v;
}

// --- concrete middle -----------------------------------------------------------

EvalValue HomCalc::build_cone_window(const ConeEntries& ce, const qf::Field& field,
                                     WindowSolved* out) const {
  if (!ce.left) return sym::UnknownValue{"left arm unresolved: " + ce.left_why};
  if (!ce.right) return sym::UnknownValue{"right arm unresolved: " + ce.right_why};
  std::vector<std::pair<const TableEntry*, ab::FGAbGroup*>> slots;
  ab::FGAbGroup gb1, ga1, gb0, ga0;
  slots = {{&ce.b1, &gb1}, {&ce.a1, &ga1}, {&ce.b0, &gb0}, {&ce.a0, &ga0}};
  for (auto& [entry, slot] : slots) {
    auto ev = sym::evaluate(entry->expr, field);
    if (std::holds_alternative<sym::NotFinitelyGenerated>(ev))
      return std::get<sym::NotFinitelyGenerated>(ev);
    if (!sym::evaluates_to_group(ev)) return sym::UnknownValue{sym::evaluation_str(ev)};
    *slot = sym::evaluated_group(ev);
  }
  ab::FGAbHom L = realize_map(ce.left->map, ce.left->scale, gb1, ga1, field);
  ab::FGAbHom R = realize_map(ce.right->map, ce.right->scale, gb0, ga0, field);
  ab::SubQuot coker = ab::cokernel(L);
  ab::SubQuot ker = ab::kernel(R);

  // Match the extension witness at the symbolic level, then instantiate it
  // with the live rank of the hyperbolic form over this field.
  std::optional<ab::ExtensionWitness> witness;
  if (table_.witness) {
    sym::GroupExpr sub_sym = symbolic_coker(*ce.left, ce.b1.expr, ce.a1.expr);
    sym::GroupExpr quot_sym = symbolic_ker(*ce.right, ce.b0.expr);
    if (sub_sym.is_known() && quot_sym.is_known() &&
        sub_sym.str() == table_.witness->sub_expr &&
        quot_sym.str() == table_.witness->quot_expr) {
      auto r = qf::gw_realization(field);
      ab::Int rkh = ab::compose(r.rank_hom, r.h_hom).matrix[0][0];
      ab::ExtensionWitness w;
      w.sub = coker.group;
      w.quot = ker.group;
      w.certificate = {{table_.witness->v_mult, table_.witness->correction, rkh}};
      witness = std::move(w);
    }
  }
  ab::Middle middle = ab::solve_middle(L, R, witness);

  WindowSolved w;
  w.b1 = gb1;
  w.a1 = ga1;
  w.b0 = gb0;
  w.a0 = ga0;
  w.left = L;
  w.right = R;
  w.coker = coker;
  w.ker = ker;
  w.middle = middle;
  if (std::holds_alternative<ab::FGAbGroup>(middle)) {
    const ab::FGAbGroup& X = std::get<ab::FGAbGroup>(middle);
    ab::FGAbGroup sum = ab::direct_sum(coker.group, ker.group);
    if (!(X == sum))
      throw CalcError("middle group differs from coker+ker canonical form: " + X.str() +
                      " vs " + sum.str());
    w.edge_in = ab::compose(ab::sum_injection(coker.group, ker.group, 0), coker.map);
    w.edge_out = ab::compose(ker.map, ab::sum_projection(coker.group, ker.group, 1));
  }
  if (out) *out = std::move(w);
  if (std::holds_alternative<ab::FGAbGroup>(middle)) return std::get<ab::FGAbGroup>(middle);
  return std::get<ab::AmbiguousExtension>(middle);
}

EvalValue HomCalc::solve_concrete(const ConeEntries& ce, const qf::Field& field,
                                  WindowSolved* out) const {
  WindowSolved w;
  EvalValue v = build_cone_window(ce, field, &w);
  bool solved = eval_is_group(v) || std::holds_alternative<ab::AmbiguousExtension>(v);
  if (!solved) return v;
  if (out) *out = w;
  std::string ctx = "window of Hom(" + ce.cone.str() + ", " + ce.tgt.str() + ")";
  if (field.kind == qf::FieldKind::Complex) {
    audit_window(w, ctx);
  } else {
    // back every resolution with one exactness check over the complex numbers
    WindowSolved wc;
    EvalValue vc = build_cone_window(ce, qf::Field::complex(), &wc);
    if (eval_is_group(vc) || std::holds_alternative<ab::AmbiguousExtension>(vc))
      audit_window(wc, ctx + " (complex check)");
  }
  return v;
}

void HomCalc::audit_window(const WindowSolved& w, const std::string& ctx) const {
  if (!w.edge_in || !w.edge_out) return;  // unresolved extension: no chain to audit
  if (!ab::exact_at(w.left, *w.edge_in))
    throw CalcError(ctx + ": five-term sequence is not exact after the left arm");
  if (!ab::exact_at(*w.edge_in, *w.edge_out))
    throw CalcError(ctx + ": five-term sequence is not exact at the middle");
  if (!ab::exact_at(*w.edge_out, w.right))
    throw CalcError(ctx + ": five-term sequence is not exact before the right arm");
}

// --- public atom/expression values --------------------------------------------

HomValue HomCalc::atom_hom(const BlockAtom& src, const BlockAtom& tgt) const {
  if (tgt.kind != AtomKind::T && tgt.kind != AtomKind::H)
    throw CalcError("hom targets must be plain T/H blocks, got " + tgt.str());
  if (src.kind == AtomKind::T || src.kind == AtomKind::H) {
    HomValue v;
    v.expr = table_.lookup(src, tgt).expr;
    return v;
  }
  return solve_symbolic(cone_entries(src, tgt));
}

EvalValue HomCalc::atom_hom_over(const BlockAtom& src, const BlockAtom& tgt,
                                 const qf::Field& field) const {
  if (tgt.kind != AtomKind::T && tgt.kind != AtomKind::H)
    throw CalcError("hom targets must be plain T/H blocks, got " + tgt.str());
  if (src.kind == AtomKind::T || src.kind == AtomKind::H) {
    TableEntry e = table_.lookup(src, tgt);
    if (!e.expr.is_known()) return sym::UnknownValue{e.provenance};
    auto ev = sym::evaluate(e.expr, field);
    if (std::holds_alternative<sym::NotFinitelyGenerated>(ev))
      return std::get<sym::NotFinitelyGenerated>(ev);
    if (!sym::evaluates_to_group(ev)) return sym::UnknownValue{sym::evaluation_str(ev)};
    return sym::evaluated_group(ev);
  }
  return solve_concrete(cone_entries(src, tgt), field, nullptr);
}

HomValue HomCalc::hom(const BlockExpr& src, const BlockAtom& tgt) const {
  sym::GroupExpr resolved = sym::GroupExpr::zero();
  std::optional<HomValue> amb;
  bool two_ambiguous = false;
  for (const auto& a : src.atoms) {
    HomValue v = atom_hom(a, tgt);
    if (v.ambiguous) {
      if (amb) two_ambiguous = true;
      else amb = v;
      continue;
    }
    resolved = sym::expr_sum(resolved, v.expr);
  }
  HomValue total;
  if (two_ambiguous) {
    total.expr = unknown_expr();  // two unresolved extensions: refuse to combine
    return total;
  }
  if (!amb) {
    total.expr = resolved;
    return total;
  }
  total.expr = sym::expr_sum(resolved, amb->expr);
  if (!total.expr.is_known()) return total;
  // the resolved summands split off, so they join the subgroup slot
  total.ambiguous = true;
  total.amb_sub = sym::expr_sum(amb->amb_sub, resolved);
  total.amb_quot = amb->amb_quot;
  return total;
}

EvalValue HomCalc::hom_over(const BlockExpr& src, const BlockAtom& tgt,
                            const qf::Field& field) const {
  ab::FGAbGroup acc;  // resolved direct sum so far
  std::optional<ab::AmbiguousExtension> amb;
  for (const auto& a : src.atoms) {
    EvalValue v = atom_hom_over(a, tgt, field);
    if (std::holds_alternative<sym::NotFinitelyGenerated>(v)) return v;
    if (std::holds_alternative<sym::UnknownValue>(v)) return v;
    if (std::holds_alternative<ab::AmbiguousExtension>(v)) {
      if (amb)
        return sym::UnknownValue{"two unresolved extensions in the direct sum Hom(" + src.str() +
                                 ", " + tgt.str() + ")"};
      amb = std::get<ab::AmbiguousExtension>(v);
      continue;
    }
    acc = ab::direct_sum(acc, std::get<ab::FGAbGroup>(v));
  }
  if (amb)  // the resolved summands split off into the subgroup slot
    return ab::AmbiguousExtension{ab::direct_sum(amb->sub, acc), amb->quot};
  return acc;
}

WindowSolved HomCalc::cone_solve_over(const BlockAtom& cone, const BlockAtom& tgt,
                                      const qf::Field& field) const {
  ConeEntries ce = cone_entries(cone, tgt);
  WindowSolved w;
  EvalValue v = solve_concrete(ce, field, &w);
  if (std::holds_alternative<sym::UnknownValue>(v))
    throw CalcError("window of Hom(" + cone.str() + ", " + tgt.str() +
                    ") is unresolved: " + std::get<sym::UnknownValue>(v).reason);
  if (std::holds_alternative<sym::NotFinitelyGenerated>(v))
    throw CalcError("window of Hom(" + cone.str() + ", " + tgt.str() +
                    ") is not finitely generated over " + field.str());
  return w;
}

// --- induced maps on hom groups ------------------------------------------------

ab::FGAbHom HomCalc::induced_hom_over(const BlockMor& mor, const BlockAtom& tgt,
                                      const qf::Field& field) const {
  std::vector<ab::FGAbGroup> dom_parts, cod_parts;
  dom_parts.reserve(mor.target.atoms.size());
  for (const auto& t : mor.target.atoms) {
    EvalValue v = atom_hom_over(t, tgt, field);
    if (!eval_is_group(v))
      throw CalcError("induced map: Hom(" + t.str() + ", " + tgt.str() +
                      ") does not resolve to a group: " + eval_str(v));
    dom_parts.push_back(std::get<ab::FGAbGroup>(v));
  }
  cod_parts.reserve(mor.source.atoms.size());
  for (const auto& s : mor.source.atoms) {
    EvalValue v = atom_hom_over(s, tgt, field);
    if (!eval_is_group(v))
      throw CalcError("induced map: Hom(" + s.str() + ", " + tgt.str() +
                      ") does not resolve to a group: " + eval_str(v));
    cod_parts.push_back(std::get<ab::FGAbGroup>(v));
  }
  SumDecomp dom = sum_decomp(dom_parts), cod = sum_decomp(cod_parts);
  ab::FGAbHom F = ab::zero_hom(dom.total, cod.total);
  for (const auto& c : mor.components) {
    if (c.src_index >= mor.source.atoms.size() || c.tgt_index >= mor.target.atoms.size())
      throw CalcError("induced map: component indices out of range");
    const BlockAtom& s = mor.source.atoms[c.src_index];
    const BlockAtom& t = mor.target.atoms[c.tgt_index];
    if (c.word == ArrowWord::Identity && !(s == t))
      throw CalcError("induced map: identity component between different atoms " + s.str() +
                      " and " + t.str());
    if (c.word == ArrowWord::Boundary &&
        !(s.kind == AtomKind::H && t == atom_t(s.q + 1, s.p + 2)))
      throw CalcError("induced map: boundary component needs H(q)[p] -> T(q+1)[p+2], got " +
                      s.str() + " -> " + t.str());
    TableEntry de = table_.lookup(t, tgt);
    TableEntry se = table_.lookup(s, tgt);
    std::string why;
    auto arm = resolve_arm(de, se, c.word, c.scale, &why);
    if (!arm)
      throw CalcError("induced map: component " + s.str() + " -> " + t.str() + " against " +
                      tgt.str() + ": " + why);
    ab::FGAbHom f =
        realize_map(arm->map, arm->scale, dom_parts[c.tgt_index], cod_parts[c.src_index], field);
    F = ab::hom_add(
        F, ab::compose(cod.inject[c.src_index], ab::compose(f, dom.project[c.tgt_index])));
  }
  return F;
}

WindowSolved HomCalc::complement_middle_over(const BlockMor& mor, const BlockAtom& tgt,
                                             const qf::Field& field) const {
  auto build = [&](const qf::Field& f) {
    WindowSolved w;
    w.left = induced_hom_over(mor, tgt, f);
    w.right = induced_hom_over(mor, twist_shift(tgt, 0, 1), f);
    w.b1 = w.left.source;
    w.a1 = w.left.target;
    w.b0 = w.right.source;
    w.a0 = w.right.target;
    w.coker = ab::cokernel(w.left);
    w.ker = ab::kernel(w.right);
    w.middle = ab::solve_middle(w.left, w.right);
    if (std::holds_alternative<ab::FGAbGroup>(w.middle)) {
      w.edge_in = ab::compose(ab::sum_injection(w.coker.group, w.ker.group, 0), w.coker.map);
      w.edge_out = ab::compose(w.ker.map, ab::sum_projection(w.coker.group, w.ker.group, 1));
    }
    return w;
  };
  WindowSolved w = build(field);
  std::string ctx = "complement window of [" + mor.source.str() + " -> " + mor.target.str() +
                    "] against " + tgt.str();
  if (field.kind == qf::FieldKind::Complex) {
    audit_window(w, ctx);
  } else {
    audit_window(build(qf::Field::complex()), ctx + " (complex check)");
  }
  return w;
}

// --- eta long exact sequence ----------------------------------------------------

HomCalc::E1Result HomCalc::e1_les(const BlockExpr& X, long q, long p,
                                  const qf::Field& field) const {
  for (const auto& a : X.atoms)
    if (a.kind != AtomKind::T && a.kind != AtomKind::H)
      throw CalcError("e1_les needs plain T/H atoms, got " + a.str());

  struct AtomArm {
    TableEntry d, c;
    Arm arm;
  };
  enum class Side { Coker, Ker };
  // The eta action between Hom(a, dom_t) and Hom(a, cod_t).  A pair that
  // cannot contribute to its side of the window (zero codomain on the
  // cokernel side, zero domain on the kernel side) is dropped, so the
  // irrelevant entry may be unknown; any entry that does contribute must be
  // known, else the whole window is unresolved (nullopt).
  auto resolve = [&](const BlockAtom& a, const BlockAtom& dom_t, const BlockAtom& cod_t,
                     Side side, std::vector<AtomArm>& keep) -> bool {
    AtomArm r;
    r.d = table_.lookup(a, dom_t);
    r.c = table_.lookup(a, cod_t);
    const TableEntry& decides = (side == Side::Coker) ? r.c : r.d;
    const TableEntry& other = (side == Side::Coker) ? r.d : r.c;
    if (!decides.expr.is_known()) return false;
    if (decides.expr.is_zero()) return true;  // pair contributes nothing: drop
    if (!other.expr.is_known()) return false;
    if (other.expr.is_zero()) {
      r.arm = Arm{MapKind::Zero, 1};
      keep.push_back(std::move(r));
      return true;
    }
    auto rule = table_.action(ArrowClass::PostEta, r.d.expr, r.c.expr);
    if (!rule) return false;
    r.arm = Arm{rule->map, rule->scale};
    keep.push_back(std::move(r));
    return true;
  };

  std::vector<AtomArm> coker_arms, ker_arms;
  bool resolvable = true;
  for (const auto& a : X.atoms) {
    if (!resolve(a, atom_t(q + 1, p + 1), atom_t(q, p), Side::Coker, coker_arms) ||
        !resolve(a, atom_t(q + 1, p + 2), atom_t(q, p + 1), Side::Ker, ker_arms)) {
      resolvable = false;
      break;
    }
  }

  E1Result res;
  if (!resolvable) {
    // The eta window runs through entries the table leaves unknown; fall
    // back to the direct table value of Hom(X, H(q)[p]).
    res.fallback = true;
    res.sym = hom(X, atom_h(q, p));
    res.eval = hom_over(X, atom_h(q, p), field);
    return res;
  }

  // symbolic: per-pair cokernels and kernels (dropped pairs contribute 0)
  sym::GroupExpr sub_sym = sym::GroupExpr::zero(), quot_sym = sym::GroupExpr::zero();
  for (const auto& aa : coker_arms)
    sub_sym = sym::expr_sum(sub_sym, symbolic_coker(aa.arm, aa.d.expr, aa.c.expr));
  for (const auto& aa : ker_arms)
    quot_sym = sym::expr_sum(quot_sym, symbolic_ker(aa.arm, aa.d.expr));
  res.sym.expr = sym::expr_sum(sub_sym, quot_sym);
  if (sub_sym.is_known() && quot_sym.is_known() && !quot_sym.is_zero() && !sub_sym.is_zero() &&
      !all_free(quot_sym)) {
    res.sym.ambiguous = true;
    res.sym.amb_sub = sub_sym;
    res.sym.amb_quot = quot_sym;
  }

  // concrete: block-diagonal arms over the evaluated entries
  auto assemble = [&](const std::vector<AtomArm>& arms,
                      const qf::Field& f) -> std::variant<ab::FGAbHom, EvalValue> {
    std::vector<ab::FGAbGroup> doms, cods;
    for (const auto& aa : arms) {
      for (const sym::GroupExpr* e : {&aa.d.expr, &aa.c.expr}) {
        auto ev = sym::evaluate(*e, f);
        if (std::holds_alternative<sym::NotFinitelyGenerated>(ev))
          return EvalValue{std::get<sym::NotFinitelyGenerated>(ev)};
        if (!sym::evaluates_to_group(ev))
          return EvalValue{sym::UnknownValue{sym::evaluation_str(ev)}};
      }
      doms.push_back(sym::evaluated_group(sym::evaluate(aa.d.expr, f)));
      cods.push_back(sym::evaluated_group(sym::evaluate(aa.c.expr, f)));
    }
    SumDecomp dd = sum_decomp(doms), cc = sum_decomp(cods);
    ab::FGAbHom F = ab::zero_hom(dd.total, cc.total);
    for (size_t i = 0; i < arms.size(); i++) {
      ab::FGAbHom f_i = realize_map(arms[i].arm.map, arms[i].arm.scale, doms[i], cods[i], f);
      F = ab::hom_add(F, ab::compose(cc.inject[i], ab::compose(f_i, dd.project[i])));
    }
    return F;
  };
  auto solve_at = [&](const qf::Field& f,
                      WindowSolved* w_out) -> std::variant<ab::Middle, EvalValue> {
    auto lv = assemble(coker_arms, f);
    auto rv = assemble(ker_arms, f);
    if (std::holds_alternative<EvalValue>(lv)) return std::get<EvalValue>(lv);
    if (std::holds_alternative<EvalValue>(rv)) return std::get<EvalValue>(rv);
    WindowSolved w;
    w.left = std::get<ab::FGAbHom>(lv);
    w.right = std::get<ab::FGAbHom>(rv);
    w.b1 = w.left.source;
    w.a1 = w.left.target;
    w.b0 = w.right.source;
    w.a0 = w.right.target;
    w.coker = ab::cokernel(w.left);
    w.ker = ab::kernel(w.right);
    w.middle = ab::solve_middle(w.left, w.right);
    if (std::holds_alternative<ab::FGAbGroup>(w.middle)) {
      w.edge_in = ab::compose(ab::sum_injection(w.coker.group, w.ker.group, 0), w.coker.map);
      w.edge_out = ab::compose(w.ker.map, ab::sum_projection(w.coker.group, w.ker.group, 1));
    }
    ab::Middle m = w.middle;
    if (w_out) *w_out = std::move(w);
    return m;
  };

  WindowSolved w;
  auto m = solve_at(field, &w);
  if (std::holds_alternative<EvalValue>(m)) {
    res.eval = std::get<EvalValue>(m);
    return res;
  }
  std::string ctx = "eta window of " + X.str() + " at twist " + std::to_string(q) + ", shift " +
                    std::to_string(p);
  if (field.kind == qf::FieldKind::Complex) {
    audit_window(w, ctx);
  } else {
    WindowSolved wc;
    auto mc = solve_at(qf::Field::complex(), &wc);
    if (std::holds_alternative<ab::Middle>(mc)) audit_window(wc, ctx + " (complex check)");
  }
  const ab::Middle& mid = std::get<ab::Middle>(m);
  if (std::holds_alternative<ab::FGAbGroup>(mid))
    res.eval = std::get<ab::FGAbGroup>(mid);
  else
    res.eval = std::get<ab::AmbiguousExtension>(mid);
  return res;
}

// --- eta inversion ----------------------------------------------------------------

EtaInverted HomCalc::eta_invert(const BlockExpr& X) const {
  EtaInverted r;
  for (const auto& a : X.atoms) {
    if (a.kind == AtomKind::T) {
      r.w_mult[a.p - a.q]++;
    } else if (a.kind == AtomKind::Cpartial) {
      // the H leg dies, the T(q+1)[p+2] leg survives
      r.w_mult[a.p - a.q + 1]++;
    }
    // H and CId atoms are eta-torsion: no contribution
  }
  return r;
}

// --- isomorphism verdicts -----------------------------------------------------------

std::vector<IsoVerdict> HomCalc::verify_iso_on_generators(const BlockMor& mor,
                                                          const std::vector<BlockAtom>& tests,
                                                          const qf::Field& field) const {
  std::vector<IsoVerdict> out;
  for (const auto& t : tests) {
    IsoVerdict v;
    v.test = t;
    try {
      ab::FGAbHom f = induced_hom_over(mor, t, field);
      if (ab::is_isomorphism(f)) {
        v.kind = IsoVerdict::Iso;
        v.detail = f.source.str() + " -> " + f.target.str();
      } else {
        v.kind = IsoVerdict::NotIso;
        v.detail = f.source.str() + " -> " + f.target.str() + " is not an isomorphism";
      }
    } catch (const std::exception& e) {
      v.kind = IsoVerdict::Skipped;
      v.detail = e.what();
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace mw::blk
