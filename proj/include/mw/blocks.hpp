#pragma once
// Block vocabulary for cellular motives: the unit motive T, the cone H of
// the Hopf map eta, and the two standard cones built on H (the boundary
// cone and the multiplication-by-24 cone).  A motive expression is a finite
// formal direct sum of twisted/shifted copies of these four atoms.
#include <optional>
#include <string>
#include <vector>

namespace mw::blk {

enum class AtomKind {
  T,         // unit motive
  H,         // cone of eta : T(1)[1] -> T
  Cpartial,  // cone of 24*boundary : H -> T(1)[2]
  CId,       // cone of 24*Id : H -> H
};

std::string kind_str(AtomKind k);

// One twisted/shifted atom: kind(q)[p].
struct BlockAtom {
  AtomKind kind = AtomKind::T;
  long q = 0;  // twist
  long p = 0;  // shift
  bool operator==(const BlockAtom&) const = default;
  bool operator<(const BlockAtom& o) const;
  std::string str() const;  // e.g. "T(2)[4]", "Cpartial(1)[1]"
};

BlockAtom atom_t(long q, long p);
BlockAtom atom_h(long q, long p);
BlockAtom atom_cpartial(long q, long p);
BlockAtom atom_cid(long q, long p);
BlockAtom twist_shift(const BlockAtom& a, long dq, long dp);

// Parses "T", "T(2)[4]", "H(1)[2]", "Cpartial(1)[1]", "CId(3)[5]".
// Twist/shift default to 0 when omitted.
std::optional<BlockAtom> parse_atom(const std::string& text);

// Finite formal direct sum, kept sorted for canonical printing/comparison.
// `truncation` records the largest twist that was materialized when the
// expression arose from truncating a locally finite infinite sum; 0 for
// expressions built directly from atoms.
struct BlockExpr {
  std::vector<BlockAtom> atoms;
  long truncation = 0;
  bool operator==(const BlockExpr& o) const { return atoms == o.atoms; }
  std::string str() const;  // "T + Cpartial(1)[1] + CId(3)[5]" or "0"
};

BlockExpr expr_of(std::vector<BlockAtom> atoms, long truncation = 0);
BlockExpr expr_sum(const BlockExpr& a, const BlockExpr& b);
BlockExpr twist_shift(const BlockExpr& e, long dq, long dp);

// Parses a '+'-separated sum of atoms; empty string or "0" is the zero
// expression.
std::optional<BlockExpr> parse_expr(const std::string& text);

// The cone of 24*boundary (resp. 24*Id) sits in a distinguished triangle
//   A --w--> B --> cone --> A[1]
// with A, B plain T/H blocks and w an integer multiple of a canonical
// arrow.  `ConeShape` names that data for one cone atom.
enum class ArrowWord {
  Boundary,  // boundary : H -> T(1)[2]
  Identity,  // Id : H -> H
};

struct ConeShape {
  BlockAtom a;      // source of the defining arrow (a T/H block)
  BlockAtom b;      // target of the defining arrow (a T/H block)
  ArrowWord word;   // which canonical arrow
  long multiplier;  // integer multiple (24 for both shipped cones)
};

// Triangle data for a cone atom; nullopt for plain T/H atoms.
std::optional<ConeShape> cone_shape(const BlockAtom& atom);

}  // namespace mw::blk
