#pragma once
// Frozen table of hom groups between twisted/shifted T and H blocks,
// together with the canonical arrow actions between table entries and the
// extension witness used to split one specific two-step extension.
//
// Hom(src(0)[0], tgt(dq)[dp]) depends only on (src kind, tgt kind, dq, dp).
// Entries are organized into families keyed by the offset f = dp - 2*dq,
// which is constant along the diagonals walked by cone long exact
// sequences; within a family the value depends on dq alone.  A family is a
// total function of dq: listed cases, explicit unknown markers, and 0
// everywhere else.  Offsets with no family at all evaluate to an
// unknown-tagged expression rather than 0.
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mw/blocks.hpp"
#include "mw/fgab.hpp"
#include "mw/qform.hpp"
#include "mw/symbols.hpp"

namespace mw::blk {

struct TableEntry {
  sym::GroupExpr expr;      // unknown-tagged when the table has no value
  std::string provenance;   // citation for this value ("" for the default 0)
  std::string generators;   // generator labels, may be empty
};

struct FamilyCase {
  long dq = 0;
  sym::GroupExpr expr;
  std::string generators;
  std::string provenance;
};

struct Family {
  AtomKind src = AtomKind::T;  // T or H only
  AtomKind tgt = AtomKind::T;  // T or H only
  int offset = 0;              // f = dp - 2*dq, in {-1, 0, +1}
  std::vector<FamilyCase> cases;
  std::vector<long> unknown_dq;  // explicitly unknown positions
  bool unknown_odd = false;      // all odd dq are unknown
  std::string provenance;        // citation for the default-0 positions
};

// Canonical arrows whose induced maps between table entries the engine
// understands.  "Pre" arrows act by precomposition on the source block,
// "Post" arrows by postcomposition on the target block.
enum class ArrowClass {
  PreBoundary,   // precompose boundary : H -> T(1)[2]
  PostEta,       // postcompose eta : T(1)[1] -> T
  PostBoundary,  // postcompose boundary
  PostUnit,      // postcompose unit map : T -> H
};

std::string arrow_str(ArrowClass a);

enum class MapKind {
  Zero,
  Mult,        // scalar multiple of the identity on the same entry
  Rank,        // GW -> Z rank homomorphism
  Hyperbolic,  // Z -> GW hyperbolic element
  WittProj,    // GW -> W projection
};

struct ActionRule {
  ArrowClass arrow;
  std::string source_expr;  // GroupExpr::str() of the domain entry
  std::string target_expr;  // GroupExpr::str() of the codomain entry
  MapKind map = MapKind::Zero;
  ab::Int scale = 1;  // for MapKind::Mult
  std::string provenance;
};

// Splitting witness for the extension 0 -> 2Z -> X -> W -> 0: a section of
// the projection exists because the stated correction satisfies
// correction * (rank of the hyperbolic element) == v_mult.
struct WitnessRule {
  std::string sub_expr;     // "2Z"
  std::string quot_expr;    // "W"
  ab::Int v_mult = 0;       // 24
  ab::Int correction = 0;   // 12
  std::string unit_label;   // "rank_of_hyperbolic"
  std::string provenance;
};

struct TableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HomTable {
  std::vector<Family> families;
  std::vector<ActionRule> actions;
  std::optional<WitnessRule> witness;
  std::string path;
  std::string fingerprint;

  const Family* family(AtomKind src, AtomKind tgt, int offset) const;

  // Hom(src-block, tgt-block) for plain T/H blocks.
  TableEntry lookup(const BlockAtom& src, const BlockAtom& tgt) const;

  // Registered action rule for `arrow` between entries printed as dom/cod,
  // nullopt if none registered.
  std::optional<ActionRule> action(ArrowClass arrow, const sym::GroupExpr& dom,
                                   const sym::GroupExpr& cod) const;
};

// Realizes one canonical map between evaluated entries over a field; used
// by the load-time audits and by the cone long-exact-sequence engine.
// Throws TableError when the groups do not have the shape the map expects.
ab::FGAbHom realize_map(MapKind kind, const ab::Int& scale, const ab::FGAbGroup& dom,
                        const ab::FGAbGroup& cod, const qf::Field& field);

// Loads the table and runs the load-time audits:
//   - all twelve (src, tgt, offset) families present, offsets in {-1,0,+1};
//   - duality: entry(H,T,f,dq) == entry(T,H,f,dq-1) for every f and dq;
//   - tensor splitting: entry(H,H,0,dq) == entry(T,H,0,dq-1) + entry(T,H,0,dq)
//     for all dq, and the same at offset -1 for even dq;
//   - every stored expression evaluates over Complex, Real, F3 and F5;
//   - the canonical exactness rows through the hyperbolic / Witt-projection
//     and rank actions are exact over Complex, Real and F5.
// Throws TableError naming the offending family/entry on any failure.
HomTable load_hom_table(const std::string& path);
HomTable load_default_hom_table();  // data_file("homtable.mwt")

}  // namespace mw::blk
