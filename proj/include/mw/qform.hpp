#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "mw/fgab.hpp"

namespace mw::qf {

using Int = mpz_class;
using Rat = mpq_class;

enum class FieldKind { Complex, Real, FinitePrime, Rational };

struct Field {
  FieldKind kind = FieldKind::Rational;
  Int p = 0;  // odd prime when kind == FinitePrime

  static Field complex() { return {FieldKind::Complex, 0}; }
  static Field real() { return {FieldKind::Real, 0}; }
  static Field finite(const Int& p);
  static Field rational() { return {FieldKind::Rational, 0}; }
  bool operator==(const Field&) const = default;
  std::string str() const;
};
// "C", "R", "Q", or "F<p>"
std::optional<Field> parse_field(const std::string& name);

// Diagonal quadratic form <a_1, ..., a_n>; entries are nonzero field
// elements (residues 1..p-1 for finite fields).
struct QForm {
  Field field;
  std::vector<Rat> diag;
  std::size_t rank() const { return diag.size(); }
  std::string str() const;
};

QForm make_form(const Field& f, const std::vector<Rat>& entries);
QForm orthogonal_sum(const QForm& a, const QForm& b);
QForm negate(const QForm& a);
QForm hyperbolic_form(const Field& f, std::size_t copies);
QForm scale_form(const Rat& c, const QForm& a);  // <c a_1, ..., c a_n>
QForm tensor(const QForm& a, const QForm& b);

// Canonical square-class representative:
//   C: 1    R: +-1    F_p: 1 or the least quadratic nonresidue
//   Q: squarefree integer
struct SquareClass {
  Field field;
  Rat rep;
  bool operator==(const SquareClass&) const = default;
  std::string str() const;
};
SquareClass square_class(const Field& f, const Rat& a);
SquareClass negate_class(const SquareClass& c);
SquareClass mul_class(const SquareClass& a, const SquareClass& b);
bool is_trivial_class(const SquareClass& c);

Int least_nonresidue(const Int& p);
int legendre(const Int& a, const Int& p);

// plain determinant square class, and the signed discriminant
// (-1)^(n(n-1)/2) * det
SquareClass det_class(const QForm& q);
SquareClass signed_disc(const QForm& q);
long signature(const QForm& q);  // Real and Rational forms

// Hilbert symbol (a, b)_p over Q; p = 0 means the real place.
int hilbert_symbol(const Rat& a, const Rat& b, const Int& p);
// product of (a_i, a_j)_p over i < j
int hasse_symbol(const QForm& q, const Int& p);
// finite places where any entry or 2 is involved (sorted, always contains 2)
std::vector<Int> bad_primes(const QForm& q);

bool isometric(const QForm& a, const QForm& b);
bool is_isotropic(const QForm& q);
// q represents c (nontrivially)
bool represents(const QForm& q, const Rat& c);

// Complete Witt-class invariant. For C, R, F_p the anisotropic kernel is
// small and explicit (kernel_diag). Over Q the class is the invariant
// record (rank, signed disc, Hasse symbols at its places, signature).
struct WittClass {
  Field field;
  std::vector<Rat> kernel_diag;            // explicit kernel (C, R, F_p)
  long rank = 0;                           // kernel rank
  SquareClass disc;                        // signed disc of the kernel
  std::vector<std::pair<Int, int>> hasse;  // (p, eps_p), only entries != +1
  long sig = 0;                            // real-place signature
  bool operator==(const WittClass&) const = default;
  bool is_trivial() const { return rank == 0; }
  std::string str() const;
};

struct WittDecomposition {
  WittClass kernel;
  std::size_t hyperbolic_multiplicity = 0;
};
WittDecomposition witt_decompose(const QForm& q);
WittClass witt_class(const QForm& q);
WittClass witt_add(const WittClass& a, const WittClass& b);

// Grothendieck-Witt element: a formal difference [plus] - [minus].
struct GWElement {
  Field field;
  QForm plus, minus;
};
GWElement gw_of_form(const QForm& q);
GWElement gw_zero(const Field& f);
GWElement gw_add(const GWElement& a, const GWElement& b);
GWElement gw_neg(const GWElement& a);
GWElement gw_sub(const GWElement& a, const GWElement& b);
GWElement gw_mul(const GWElement& a, const GWElement& b);
GWElement hyperbolic_element(const Field& f, long copies);  // copies may be < 0
long gw_rank(const GWElement& x);
WittClass gw_to_witt(const GWElement& x);
// (rank, Witt class) is a complete invariant of a GW class
bool gw_eq(const GWElement& a, const GWElement& b);

// number of solutions of q(x) = c over F_p, counting x = 0 when c = 0;
// exhaustive, guarded by p^rank <= 10^7
Int representation_count(const QForm& q, const Rat& c);

// The Witt group of a finite field as a canonical abelian group, computed
// from the class arithmetic itself (no case table): generators are the
// classes of <1> and <rho>.
struct WittGroupModel {
  ab::FGAbGroup group;
  // canonical coordinates of a Witt class expressed as a <1>, b <rho>
  ab::Mat project;  // gen_count x 2
};
WittGroupModel witt_group_model(const Int& p);

// GW and W as groups with the rank / hyperbolic / projection arrows.
// Not available over Q (GW(Q) is not finitely generated): throws.
struct GWRealization {
  Field field;
  ab::FGAbGroup gw, witt;
  ab::FGAbHom rank_hom;  // GW -> Z
  ab::FGAbHom h_hom;     // Z -> GW
  ab::FGAbHom proj_hom;  // GW -> W
  std::vector<Int> coords(const GWElement& x) const;
};
GWRealization gw_realization(const Field& f);
bool gw_finitely_generated(const Field& f);

namespace detail {
// exact number-theory helpers shared across the module
Int squarefree_part(Int n);
std::vector<Int> prime_factors(Int n);
std::pair<long, Rat> val_unit(const Rat& a, const Int& p);
Int unit_mod(const Rat& u, const Int& m);
bool is_local_square(const Rat& a, const Int& p);
}  // namespace detail

}  // namespace mw::qf
