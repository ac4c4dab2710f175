#pragma once
// Hom groups out of block expressions, both symbolically (named summands
// from the frozen table) and exactly over a chosen field.
//
// Plain T/H atoms are table lookups.  Cone atoms are resolved through the
// five-term window of the long exact sequence of their defining triangle
// A --f--> B --> C --> A[1]:
//
//   Hom(B[1],Y) --L--> Hom(A[1],Y) --> Hom(C,Y) --> Hom(B,Y) --R--> Hom(A,Y)
//
// so Hom(C,Y) is an extension of ker(R) by coker(L).  The arm maps L and R
// are induced by the cone's arrow word (a scalar, or a scalar multiple of
// the boundary H -> T(1)[2]) and realized through the registered action
// rules.  Every concrete resolution is cross-checked by rebuilding the
// five-term sequence over the complex numbers and verifying exactness at
// the three inner spots.
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mw/blocks.hpp"
#include "mw/fgab.hpp"
#include "mw/homtable.hpp"
#include "mw/qform.hpp"
#include "mw/symbols.hpp"

namespace mw::blk {

struct CalcError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Symbolic value of a hom group.  When `ambiguous` is set the group is an
// unresolved extension of `amb_quot` by `amb_sub` and `expr` holds their
// blind sum (correct up to extension, shown with a marker by str()).
struct HomValue {
  sym::GroupExpr expr;
  bool ambiguous = false;
  sym::GroupExpr amb_sub, amb_quot;
  std::string str() const;
};

// Exact value of a hom group over a field.
using EvalValue = std::variant<ab::FGAbGroup, ab::AmbiguousExtension, sym::NotFinitelyGenerated,
                               sym::UnknownValue>;
std::string eval_str(const EvalValue& v);
bool eval_is_group(const EvalValue& v);
const ab::FGAbGroup& eval_group(const EvalValue& v);  // throws CalcError otherwise

// A morphism between block expressions, given componentwise: each
// component sends source atom #src_index to target atom #tgt_index by
// `scale` times the canonical arrow of `word` (Identity needs equal atoms,
// Boundary needs H(q)[p] -> T(q+1)[p+2]).  Components must connect plain
// T/H atoms; omitted pairs are zero.
struct MorComponent {
  size_t src_index = 0;
  size_t tgt_index = 0;
  ArrowWord word = ArrowWord::Identity;
  ab::Int scale = 1;
};

struct BlockMor {
  BlockExpr source, target;
  std::vector<MorComponent> components;
};

// Direct sum of a list of groups with its injections and projections.
struct SumDecomp {
  ab::FGAbGroup total;
  std::vector<ab::FGAbHom> inject;   // part i -> total
  std::vector<ab::FGAbHom> project;  // total -> part i
};
SumDecomp sum_decomp(const std::vector<ab::FGAbGroup>& parts);

// One resolved five-term window over a field.
struct WindowSolved {
  ab::FGAbGroup b1, a1, b0, a0;  // Hom(B[1],Y), Hom(A[1],Y), Hom(B,Y), Hom(A,Y)
  ab::FGAbHom left, right;       // L : b1 -> a1,  R : b0 -> a0
  ab::SubQuot coker;             // coker(L), quotient of a1
  ab::SubQuot ker;               // ker(R), subgroup of b0
  std::variant<ab::FGAbGroup, ab::AmbiguousExtension> middle;
  // Structural maps when the middle resolved: Hom(A[1],Y) -> X and
  // X -> Hom(B,Y).  X is canonically coker ⊕ ker.
  std::optional<ab::FGAbHom> edge_in, edge_out;
};

// Multiplicities of the Witt sheaf after inverting the Hopf map, keyed by
// cohomological degree.  Only T legs survive: T(q)[p] contributes in
// degree p - q, the cone of a boundary arrow contributes its T leg in
// degree p - q + 1, and H legs die.
struct EtaInverted {
  std::map<long, long> w_mult;
  bool is_zero() const { return w_mult.empty(); }
  std::string str() const;
};

// Verdict of an isomorphism check on one test block.
struct IsoVerdict {
  BlockAtom test;
  enum Kind { Iso, NotIso, Skipped } kind = Skipped;
  std::string detail;  // reason when skipped, witness description otherwise
};

class HomCalc {
 public:
  explicit HomCalc(const HomTable& table) : table_(table) {}
  const HomTable& table() const { return table_; }

  // --- single atoms -----------------------------------------------------
  HomValue atom_hom(const BlockAtom& src, const BlockAtom& tgt) const;
  EvalValue atom_hom_over(const BlockAtom& src, const BlockAtom& tgt,
                          const qf::Field& field) const;

  // --- whole expressions (direct sums of the atom values) ---------------
  HomValue hom(const BlockExpr& src, const BlockAtom& tgt) const;
  EvalValue hom_over(const BlockExpr& src, const BlockAtom& tgt, const qf::Field& field) const;

  // Concrete five-term resolution of a cone atom against tgt, with the arm
  // maps and edges exposed.  Throws CalcError when an arm is unresolved.
  WindowSolved cone_solve_over(const BlockAtom& cone, const BlockAtom& tgt,
                               const qf::Field& field) const;

  // Hom(X, Y) where X = cone(mor)[-1], i.e. X -> source --mor--> target is
  // distinguished; the left arm is mor* against Y and the right arm is
  // mor* against Y[1].  No extension witness is applied here: an
  // unresolved extension is returned as AmbiguousExtension.
  WindowSolved complement_middle_over(const BlockMor& mor, const BlockAtom& tgt,
                                      const qf::Field& field) const;

  // The map Hom(target, Y) -> Hom(source, Y) induced by mor (both sides
  // direct sums over atoms, in atom order).  Throws CalcError when an
  // entry does not evaluate to a group or a component has no action.
  ab::FGAbHom induced_hom_over(const BlockMor& mor, const BlockAtom& tgt,
                               const qf::Field& field) const;

  // --- eta long exact sequence entry ------------------------------------
  // Hom(X, H(q)[p]) computed from the T-block entries through the eta
  // action: coker(eta* at (q,p)) extended by ker(eta* at (q,p+1)).  X must
  // consist of plain T/H atoms.  When a needed T-entry or action is
  // unknown the direct table route is used instead and `fallback` is set.
  struct E1Result {
    HomValue sym;
    EvalValue eval;
    bool fallback = false;
  };
  E1Result e1_les(const BlockExpr& X, long q, long p, const qf::Field& field) const;

  // --- eta inversion -----------------------------------------------------
  EtaInverted eta_invert(const BlockExpr& X) const;

  // --- generator-level isomorphism verdicts ------------------------------
  // For each test block A: is mor* : Hom(target, A) -> Hom(source, A) an
  // isomorphism over the field?  Tests whose entries are unknown are
  // skipped with a reason rather than guessed.
  std::vector<IsoVerdict> verify_iso_on_generators(const BlockMor& mor,
                                                   const std::vector<BlockAtom>& tests,
                                                   const qf::Field& field) const;

  // A resolved arm map between two table entries.
  struct Arm {
    MapKind map = MapKind::Zero;
    ab::Int scale = 1;
  };

 private:
  const HomTable& table_;

  // nullopt: arm unresolved (unknown entry or unregistered action)
  std::optional<Arm> resolve_arm(const TableEntry& dom, const TableEntry& cod, ArrowWord word,
                                 const ab::Int& multiplier, std::string* why) const;

  // Window entries of a cone atom against tgt, in the order b1, a1, b0, a0.
  struct ConeEntries {
    BlockAtom cone, tgt;
    ConeShape shape;
    TableEntry b1, a1, b0, a0;
    std::optional<Arm> left, right;
    std::string left_why, right_why;
  };
  ConeEntries cone_entries(const BlockAtom& cone, const BlockAtom& tgt) const;

  HomValue solve_symbolic(const ConeEntries& ce) const;
  // One window over one field, no audit; group/ambiguous on success.
  EvalValue build_cone_window(const ConeEntries& ce, const qf::Field& field,
                              WindowSolved* out) const;
  // build_cone_window plus the complex-numbers exactness audit.
  EvalValue solve_concrete(const ConeEntries& ce, const qf::Field& field,
                           WindowSolved* out) const;
  // Exactness audit of a solved window; called (over the complex numbers)
  // on every concrete resolution.  Throws CalcError on failure.
  void audit_window(const WindowSolved& w, const std::string& ctx) const;
};

}  // namespace mw::blk
