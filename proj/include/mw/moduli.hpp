#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <mw/fgab.hpp>
#include <mw/homcalc.hpp>
#include <mw/homtable.hpp>
#include <mw/qform.hpp>

namespace mw::mod {

struct ModuliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two independent routes to the same group disagreed: only bad data (or a
// tampered file) can cause this, so it is kept apart from ordinary errors.
struct DataCorruption : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// kind(qa*i+qb)[pa*i+pb] for i >= i0; a single atom has family = false and
// the constants hold its coordinates.
struct AtomPattern {
  blk::AtomKind kind = blk::AtomKind::T;
  long qa = 0, qb = 0, pa = 0, pb = 0;
  long i0 = 0;
  bool family = false;

  blk::BlockAtom at(long i) const;
  // twists are monotone in i (qa >= 1 for families); largest i with
  // twist <= bound, or i0 - 1 when even i0 exceeds it
  long last_index(long twist_bound) const;
  std::string str() const;
};

struct GysinLeg {
  AtomPattern src, tgt;
  blk::ArrowWord word = blk::ArrowWord::Identity;
  ab::Int scale = 1;
  std::string provenance;
};

// A connecting morphism in the atom alphabet: source builder's atoms to the
// listed target atoms, componentwise by legs; everything unlisted is zero.
struct GysinDatum {
  std::string name;
  std::string source_builder;
  std::vector<AtomPattern> targets;
  std::vector<GysinLeg> legs;
  std::vector<std::string> provenance;
};

// A connecting morphism recorded only as an element of
// Hom(leg, target) = 2Z + W, by its two coordinates.
struct ConeMarker {
  std::string name;
  std::string source_builder;
  blk::BlockAtom leg, target;
  ab::Int witt = 0, twoz = 0;
  std::vector<std::string> provenance;
};

struct Builder {
  std::string name;
  std::vector<AtomPattern> parts;
  std::vector<std::string> sum;       // concatenation of named builders
  std::optional<std::string> gysin;   // datum whose shifted cone this is
  std::optional<std::string> cone;    // marker-only motive: no atom list
  std::vector<std::string> provenance;
  std::string note;
};

// Frozen reference value for Hom(source, target), with the citation shown
// by the query tools.
struct GoldenValue {
  std::string name;
  std::string source;  // builder name or canonical atom spelling
  std::string target;  // canonical atom spelling
  std::string expect;  // canonical GroupExpr spelling
  std::string case_label;
  std::string provenance;
};

struct BuilderSet {
  std::vector<Builder> builders;  // file order
  std::map<std::string, GysinDatum> gysin;
  std::map<std::string, ConeMarker> markers;
  std::vector<GoldenValue> golden;

  // E1 model of projective space: Sq^2(c^n) = n * c^(n+1), and the
  // embedding of the (H, H, 0) dq=0 generators into CH^n + CH^(n+1).
  std::vector<ab::Int> gen_id, gen_two;  // column vectors, size 2
  std::vector<std::string> e1_provenance;

  const Builder& builder(const std::string& name) const;  // ModuliError if absent
  std::vector<const GoldenValue*> golden_for(const std::string& source,
                                             const std::string& target) const;
};

BuilderSet parse_builders(const std::string& text, const std::string& filename = "<string>");
BuilderSet load_builders(const std::string& path);

// A named motive materialized at a truncation bound N; N is the largest
// twist kept, so the atom list is finite while every verification window
// stays below it.
struct NamedMotive {
  std::string name;
  long truncation = 0;
  blk::BlockExpr expr;              // empty and unused when cone is set
  std::optional<std::string> cone;  // marker name for cone-only motives
};

// The connecting morphism attached to a name: an alphabet morphism when the
// datum has one, otherwise the recorded marker element.
struct Connecting {
  std::optional<blk::BlockMor> mor;
  std::optional<ConeMarker> element;
};

struct CaseReport {
  int index = 0;
  std::string title;
  bool pass = false;
  std::vector<std::string> lines;
};

struct Report {
  std::string what;
  long truncation = 0;
  std::string field;
  std::vector<CaseReport> cases;
  bool pass() const;
  std::string str() const;  // human-readable block
};

// One bidegree of the E1 cross-check: long-exact-sequence route vs the
// Cartesian-square route over the Chow model of truncated projective space.
struct E1Compare {
  long truncation = 0;  // of the projective-space expression
  long dim = 0;         // cell dimension of the Chow model
  long n = 0;           // bidegree (2n, n)
  std::string les_route;
  bool les_fallback = false;
  std::string model_route;
  bool match = false;
};

class Moduli {
 public:
  // Audits, at a reference truncation: every gysin-assembled builder equals
  // cone(datum)[-1], family twists grow with i (local finiteness), and the
  // marker's hom group has the recorded shape.  ModuliError on any failure.
  Moduli(const blk::HomTable& table, BuilderSet data);

  const BuilderSet& data() const { return data_; }
  const blk::HomCalc& calc() const { return calc_; }

  NamedMotive build(const std::string& name, long truncation) const;
  Connecting gysin_connecting(const std::string& name, long truncation) const;

  blk::BlockMor materialize(const GysinDatum& d, long truncation) const;
  // cone(m)[-1] as an atom list: unmapped source atoms pass through, a
  // boundary pair H(q)[p] -> T(q+1)[p+2] folds to Cpartial(q)[p-1], an
  // identity pair folds to CId(q)[p-1], unmapped target atoms shift by [-1].
  blk::BlockExpr cone_shift_assemble(const blk::BlockMor& m) const;

  // The five-case generator test of the splitting theorem.  s_override
  // replaces the boundary scale of the W2 connecting map at the point of
  // consumption (the shipped datum always says 24).
  Report verify_theorem_12(long truncation, const qf::Field& field,
                           std::optional<ab::Int> s_override = std::nullopt) const;

  // Witt realization: zero for the Thom motive of the base, nonzero for the
  // cone-marker motive, hence the two Thom spaces differ.
  Report verify_prop_56(long truncation) const;

  // DataCorruption when the two routes disagree.
  E1Compare e1_crosscheck(long truncation, long n) const;

 private:
  const blk::HomTable& table_;
  blk::HomCalc calc_;
  BuilderSet data_;

  blk::BlockExpr materialize_parts(const Builder& b, long truncation) const;
  // Margin discipline: materialize at N + margin and require every atom with
  // twist above N to contribute a known zero against the probe.
  void guard_margin(const blk::BlockExpr& full, long n_user,
                    const blk::BlockAtom& probe) const;

  CaseReport case_unit(long nint, const qf::Field& field) const;
  CaseReport case_ch2(long nint, const qf::Field& field,
                      const std::optional<ab::Int>& s_override) const;
  CaseReport case_ch2_off(long nint, const qf::Field& field,
                          const std::optional<ab::Int>& s_override) const;
  CaseReport case_even_row(long n_user, long nint, const qf::Field& field) const;
  CaseReport case_odd_row(long n_user, long nint, const qf::Field& field) const;

  // Image of the connecting morphism on the rank-2 E1 block against
  // H(n)[2n], as a column lattice in the Chow model coordinates
  // CH^n + CH^(n+1).  Zero columns when no leg reaches the block.
  ab::Mat image_lattice_at(const GysinDatum& d, long nint, long n) const;
};

Moduli load_default_moduli(const blk::HomTable& table);

}  // namespace mw::mod
