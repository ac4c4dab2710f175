#pragma once

// Graded-ring layer on top of the additive Chow-Witt computation.
//
// The additive structure (one finitely generated group per degree and
// twist parity) is loaded from a data file and cross-checked against the
// motive-level computation.  Multiplicative structure constants are a
// *partial* map: each declared product carries a provenance tag, and any
// product the data does not declare raises UnknownStructureConstant
// instead of being guessed.
//
// On top of the rank-1 ring sits the rank-2 total ring, whose elements
// are pairs (A, B) with A untwisted and B twisted (shifted down by one
// degree); their product is
//     (A, B) * (C, D) = (A*C, A*D + B*C + B*D*e)
// with e the Euler-class generator in (degree 1, twisted).

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mw/fgab.hpp"
#include "mw/symbols.hpp"

namespace mw::mod {
class Moduli;
}

namespace mw::cw {

struct RingError : std::runtime_error {
  explicit RingError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a multiplication needs a structure constant the data file
// does not fix.  `missing` names the offending generator pair.
struct UnknownStructureConstant : std::runtime_error {
  std::string missing;
  UnknownStructureConstant(const std::string& what, std::string missing_pair)
      : std::runtime_error(what), missing(std::move(missing_pair)) {}
};

// One additive generator of a graded component.  `order` is the additive
// order (0 = infinite); coefficients are kept reduced modulo it.
struct Generator {
  std::string name;
  long degree = 0;
  int twist = 0;  // 0 = untwisted, 1 = twisted by the dual tautological bundle
  ab::Int order = 0;
  sym::GroupAtom atom{};
};

// The group sitting in one (degree, twist) slot, with its generators in
// the canonical atom order of `expr` and the display spelling used by
// the source table.
struct Component {
  sym::GroupExpr expr;
  std::vector<std::size_t> gens;
  std::string display;
  std::string provenance;
};

enum class ConstProvenance { PaperFixed, ExternalLM, Unknown };

std::string const_provenance_str(ConstProvenance p);

// A declared structure constant g_a * g_b (stored with a <= b; the ring
// is commutative by assumption -- every component sits in even total
// bidegree).  `value` is empty when `tag` is Unknown.
struct Product {
  std::size_t a = 0;
  std::size_t b = 0;
  std::vector<std::pair<ab::Int, std::size_t>> value;
  ConstProvenance tag = ConstProvenance::Unknown;
  std::string provenance;
};

struct GradedRingData {
  std::string name;
  std::vector<Generator> gens;
  std::map<std::pair<long, int>, Component> components;
  std::vector<Product> products;
  std::size_t unit = 0;   // generator index, must live in (0, untwisted)
  std::size_t euler = 0;  // generator index, must live in (1, twisted)
  std::vector<std::string> provenance;
  std::string path;
  std::string fingerprint;

  std::optional<std::size_t> gen_index(const std::string& name) const;
  const Product* find_product(std::size_t a, std::size_t b) const;
};

// An element of the rank-1 graded ring: generator index -> coefficient.
// Kept reduced (coefficients mod order, zeros dropped).
struct RingElement {
  std::map<std::size_t, ab::Int> coeff;

  bool is_zero() const { return coeff.empty(); }
  bool operator==(const RingElement&) const = default;
};

// An element of the rank-2 total ring: `a` untwisted, `b` twisted.
struct M12Element {
  RingElement a;
  RingElement b;

  bool operator==(const M12Element&) const = default;
};

struct AxiomReport {
  long pairs_checked = 0;
  long triples_checked = 0;
  std::vector<std::string> skipped;     // triples short of a structure constant
  std::vector<std::string> violations;  // counterexample descriptions

  bool pass() const { return violations.empty(); }
  std::string str() const;
};

// Parses `record ring` / `record component` / `record product` data.
GradedRingData parse_ring(const std::string& text, const std::string& filename);
GradedRingData load_ring(const std::string& path);

class ChowWittRing {
 public:
  // Validates the data: generator/component consistency, degree and
  // twist-parity additivity of every declared product, coefficient
  // reduction, and the unit laws.  Unit products are filled in
  // automatically; a declared unit product must equal its own partner.
  explicit ChowWittRing(GradedRingData data);

  const GradedRingData& data() const { return data_; }
  const Generator& gen(std::size_t i) const { return data_.gens.at(i); }

  // Element grammar: "0" or '+'-separated terms "[k*]name", k an integer.
  RingElement parse_element(const std::string& text) const;
  // Pair grammar: "(A, B)" with A, B in the element grammar above.
  M12Element parse_m12(const std::string& text) const;

  std::string element_str(const RingElement& x) const;
  std::string m12_str(const M12Element& x) const;

  RingElement add(const RingElement& x, const RingElement& y) const;
  RingElement scale(const ab::Int& k, const RingElement& x) const;
  // Rank-1 product; raises UnknownStructureConstant on any undeclared or
  // unknown-tagged constant it needs.
  RingElement mul(const RingElement& x, const RingElement& y) const;

  // Rank-2 product (A,B)*(C,D) = (AC, AD + BC + BD*e).
  M12Element multiply(const M12Element& x, const M12Element& y) const;

  // Degree-d component of the rank-2 ring: untwisted(d) + twisted(d-1).
  sym::GroupExpr m12_component(long degree) const;

  // Associativity, commutativity, distributivity, unit laws and torsion
  // bookkeeping over all generator triples of total degree <= max_total
  // whose structure constants are declared; triples short of a constant
  // are listed as skipped, never guessed.
  AxiomReport check_ring_axioms(long max_total = 6) const;

  // Human-readable additive table (display spellings) for one twist,
  // alongside the canonical machine spelling of each component.
  std::string table(int twist, long max_degree = 8) const;

 private:
  RingElement reduce(RingElement x) const;
  RingElement mul_gens(std::size_t i, std::size_t j) const;

  GradedRingData data_;
};

// Cross-checks every additive component against the motive computation:
// untwisted degree i must match Hom(M11, T(i)[2i]), twisted degree i must
// match Hom(Th_M11_Ominus1, T(i+1)[2i+2]).  Throws RingError on mismatch.
void audit_against_motives(const GradedRingData& data, const mod::Moduli& m);

// Loads data/m11_ring.mwt and audits it against `m`.
ChowWittRing load_default_ring(const mod::Moduli& m);

}  // namespace mw::cw
