#include "mw/symbols.hpp"

#include <algorithm>
#include <sstream>

namespace mw::sym {

using ab::AlgebraError;
using ab::FGAbGroup;
using ab::FGAbHom;
using ab::Int;

GroupAtom atom_gw() { return {AtomKind::GW, 0}; }
GroupAtom atom_w() { return {AtomKind::W, 0}; }
GroupAtom atom_z() { return {AtomKind::Z, 0}; }
GroupAtom atom_twoz() { return {AtomKind::TwoZ, 0}; }
GroupAtom atom_km1() { return {AtomKind::KM1, 0}; }
GroupAtom atom_sq() { return {AtomKind::SQ, 0}; }

GroupAtom atom_zmod(const Int& n) {
  if (n < 2) throw AlgebraError("Z/n atom needs n >= 2");
  return {AtomKind::Zmod, n};
}

GroupAtom atom_twozmod(const Int& n) {
  if (n < 2) throw AlgebraError("2Z/2n atom needs n >= 2");
  return {AtomKind::TwoZmodTwoN, n};
}

GroupAtom atom_unknown() { return {AtomKind::Unknown, 0}; }

std::string GroupAtom::str() const {
  switch (kind) {
    case AtomKind::GW: return "GW";
    case AtomKind::W: return "W";
    case AtomKind::Z: return "Z";
    case AtomKind::TwoZ: return "2Z";
    case AtomKind::KM1: return "KM1";
    case AtomKind::SQ: return "SQ";
    case AtomKind::Zmod: return "Z/" + n.get_str();
    case AtomKind::TwoZmodTwoN: return "2Z/" + Int(2 * n).get_str();
    case AtomKind::Unknown: return "unknown";
  }
  return "?";
}

GroupExpr GroupExpr::single(const GroupAtom& a) {
  if (a.kind == AtomKind::Unknown) return GroupExpr{{}, true};
  return GroupExpr{{a}, false};
}

std::string GroupExpr::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) os << " + ";
    os << atoms[i].str();
  }
  if (unknown) {
    if (!atoms.empty()) os << " + ";
    os << "unknown";
  }
  return os.str();
}

GroupExpr expr_sum(const GroupExpr& a, const GroupExpr& b) {
  GroupExpr out;
  out.atoms = a.atoms;
  out.atoms.insert(out.atoms.end(), b.atoms.begin(), b.atoms.end());
  std::sort(out.atoms.begin(), out.atoms.end());
  out.unknown = a.unknown || b.unknown;
  return out;
}

std::optional<GroupExpr> parse_expr(const std::string& text) {
  auto trim = [](std::string s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return std::string();
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
  };
  std::string t = trim(text);
  if (t == "0") return GroupExpr::zero();
  GroupExpr out;
  std::size_t pos = 0;
  while (pos <= t.size()) {
    std::size_t next = t.find('+', pos);
    std::string tok = trim(next == std::string::npos ? t.substr(pos) : t.substr(pos, next - pos));
    if (tok.empty()) return std::nullopt;
    if (tok == "GW") out.atoms.push_back(atom_gw());
    else if (tok == "W") out.atoms.push_back(atom_w());
    else if (tok == "Z") out.atoms.push_back(atom_z());
    else if (tok == "2Z") out.atoms.push_back(atom_twoz());
    else if (tok == "KM1") out.atoms.push_back(atom_km1());
    else if (tok == "SQ") out.atoms.push_back(atom_sq());
    else if (tok == "unknown") out.unknown = true;
    else if (tok.rfind("Z/", 0) == 0) {
      std::string digits = tok.substr(2);
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        return std::nullopt;
      Int n(digits);
      if (n < 2) return std::nullopt;
      out.atoms.push_back(atom_zmod(n));
    } else if (tok.rfind("2Z/", 0) == 0) {
      std::string digits = tok.substr(3);
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        return std::nullopt;
      Int m(digits);
      if (m < 4 || m % 2 != 0) return std::nullopt;  // written as 2Z/2n
      out.atoms.push_back(atom_twozmod(m / 2));
    } else {
      return std::nullopt;
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  std::sort(out.atoms.begin(), out.atoms.end());
  return out;
}

std::string evaluation_str(const Evaluation& e) {
  if (std::holds_alternative<FGAbGroup>(e)) return std::get<FGAbGroup>(e).str();
  if (std::holds_alternative<NotFinitelyGenerated>(e)) {
    const auto& n = std::get<NotFinitelyGenerated>(e);
    return "not finitely generated (" + n.what + " over " + n.field.str() + ")";
  }
  return "unknown (" + std::get<UnknownValue>(e).reason + ")";
}

bool evaluates_to_group(const Evaluation& e) { return std::holds_alternative<FGAbGroup>(e); }

const FGAbGroup& evaluated_group(const Evaluation& e) {
  if (!evaluates_to_group(e)) throw AlgebraError("evaluation is not a concrete group");
  return std::get<FGAbGroup>(e);
}

Evaluation atom_evaluation(const GroupAtom& a, const qf::Field& f) {
  using qf::FieldKind;
  switch (a.kind) {
    case AtomKind::Z:
    case AtomKind::TwoZ:
      return ab::make_free(1);
    case AtomKind::Zmod:
    case AtomKind::TwoZmodTwoN:
      return ab::make_cyclic(a.n);  // 2Z/2n and Z/n agree as abstract groups
    case AtomKind::Unknown:
      return UnknownValue{"unnamed summand"};
    case AtomKind::GW:
      if (f.kind == FieldKind::Rational) return NotFinitelyGenerated{f, "GW"};
      return qf::gw_realization(f).gw;
    case AtomKind::W:
      if (f.kind == FieldKind::Rational) return NotFinitelyGenerated{f, "W"};
      return qf::gw_realization(f).witt;
    case AtomKind::KM1:
      switch (f.kind) {
        case FieldKind::Complex: return FGAbGroup{};
        case FieldKind::Real: return ab::make_cyclic(2);
        case FieldKind::FinitePrime: return ab::make_cyclic(f.p - 1);
        case FieldKind::Rational: return NotFinitelyGenerated{f, "KM1"};
      }
      break;
    case AtomKind::SQ:
      switch (f.kind) {
        case FieldKind::Complex:
        case FieldKind::Real: return FGAbGroup{};
        case FieldKind::FinitePrime: return ab::make_cyclic((f.p - 1) / 2);
        case FieldKind::Rational: return NotFinitelyGenerated{f, "SQ"};
      }
      break;
  }
  throw AlgebraError("atom_evaluation: bad atom");
}

Evaluation evaluate(const GroupExpr& e, const qf::Field& f) {
  if (e.unknown) return UnknownValue{"expression has an unnamed summand"};
  FGAbGroup acc;
  for (const auto& a : e.atoms) {
    Evaluation v = atom_evaluation(a, f);
    if (!evaluates_to_group(v)) return v;
    acc = ab::direct_sum(acc, std::get<FGAbGroup>(v));
  }
  return acc;
}

std::optional<FGAbHom> atom_inclusion(const GroupAtom& a, const qf::Field& f) {
  if (a.kind == AtomKind::TwoZ) {
    FGAbGroup z = ab::make_free(1);
    return FGAbHom{z, z, {{2}}};
  }
  if (a.kind == AtomKind::SQ) {
    Evaluation sq = atom_evaluation(atom_sq(), f), km1 = atom_evaluation(atom_km1(), f);
    if (!evaluates_to_group(sq) || !evaluates_to_group(km1)) return std::nullopt;
    const FGAbGroup& s = std::get<FGAbGroup>(sq);
    const FGAbGroup& k = std::get<FGAbGroup>(km1);
    ab::Mat m = ab::zero_mat(k.gen_count(), s.gen_count());
    for (std::size_t i = 0; i < std::min(k.gen_count(), s.gen_count()); ++i) m[i][i] = 2;
    FGAbHom inc{s, k, m};
    if (!is_well_defined(inc)) throw AlgebraError("squares inclusion is not well defined");
    return inc;
  }
  return std::nullopt;
}

}  // namespace mw::sym
