#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mw/fgab.hpp"
#include "mw/qform.hpp"

namespace mw::sym {

// Vocabulary of coefficient groups appearing in the hom tables. Zmod and
// TwoZmodTwoN carry a modulus n: Z/n and 2Z/2n respectively. TwoZ denotes
// the subgroup 2Z inside Z (same abstract group, marked inclusion).
enum class AtomKind { GW, Z, TwoZ, Zmod, TwoZmodTwoN, W, KM1, SQ, Unknown };

struct GroupAtom {
  AtomKind kind = AtomKind::Z;
  ab::Int n = 0;  // modulus for Zmod / TwoZmodTwoN, else 0

  bool operator==(const GroupAtom&) const = default;
  bool operator<(const GroupAtom& o) const {
    if (kind != o.kind) return kind < o.kind;
    return n < o.n;
  }
  std::string str() const;
};

GroupAtom atom_gw();
GroupAtom atom_w();
GroupAtom atom_z();
GroupAtom atom_twoz();
GroupAtom atom_km1();
GroupAtom atom_sq();
GroupAtom atom_zmod(const ab::Int& n);
GroupAtom atom_twozmod(const ab::Int& n);  // the group 2Z/2n
GroupAtom atom_unknown();

// Formal finite direct sum of atoms, kept sorted (multiset semantics).
// `unknown` marks a summand nobody can name; known atoms are still listed
// so reports can show the partial sum.
struct GroupExpr {
  std::vector<GroupAtom> atoms;
  bool unknown = false;

  static GroupExpr zero() { return {}; }
  static GroupExpr single(const GroupAtom& a);
  bool operator==(const GroupExpr&) const = default;
  bool is_zero() const { return atoms.empty() && !unknown; }
  bool is_known() const { return !unknown; }
  std::string str() const;
};

GroupExpr expr_sum(const GroupExpr& a, const GroupExpr& b);
// "GW", "2Z + W", "Z/24", "2Z/48", "0", "unknown", sums with '+'
std::optional<GroupExpr> parse_expr(const std::string& text);

// first-class evaluation outcomes
struct NotFinitelyGenerated {
  qf::Field field;
  std::string what;  // which atom forced it
  bool operator==(const NotFinitelyGenerated&) const = default;
};
struct UnknownValue {
  std::string reason;
};
using Evaluation = std::variant<ab::FGAbGroup, NotFinitelyGenerated, UnknownValue>;

std::string evaluation_str(const Evaluation& e);
bool evaluates_to_group(const Evaluation& e);
const ab::FGAbGroup& evaluated_group(const Evaluation& e);  // throws if not a group

// concrete group of one atom over one field; GW/W/KM1/SQ over Q have no
// finitely generated model
Evaluation atom_evaluation(const GroupAtom& a, const qf::Field& f);
Evaluation evaluate(const GroupExpr& e, const qf::Field& f);

// marked inclusions: TwoZ -> Z is multiplication by 2; SQ -> KM1 is the
// index-2 inclusion of squares into units (degenerate over C)
std::optional<ab::FGAbHom> atom_inclusion(const GroupAtom& a, const qf::Field& f);

}  // namespace mw::sym
