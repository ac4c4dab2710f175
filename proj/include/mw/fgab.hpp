#pragma once

#include <gmpxx.h>

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mw::ab {

using Int = mpz_class;
using Mat = std::vector<std::vector<Int>>;  // row-major, rectangular

struct AlgebraError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t row_count(const Mat& m);
std::size_t col_count(const Mat& m);
Mat identity_mat(std::size_t n);
Mat zero_mat(std::size_t r, std::size_t c);
Mat mat_mul(const Mat& a, const Mat& b);
Mat mat_add(const Mat& a, const Mat& b);
Mat mat_scale(const Int& c, const Mat& a);
Mat transpose(const Mat& a);
// concatenate columns: [a | b] (row counts must agree; either may have 0 cols)
Mat hconcat(const Mat& a, const Mat& b);
Int determinant(Mat a);  // fraction-free elimination
bool is_unimodular(const Mat& a);

// D = left * A * right with left/right unimodular, D diagonal,
// diagonal entries nonnegative and each dividing the next.
struct Snf {
  Mat d, left, right, left_inv, right_inv;
};
Snf smith_normal_form(const Mat& a);

// Basis of the column lattice of A: the nonzero columns of A*right,
// which are Z-independent. (n x k, k = rank)
Mat lattice_basis(const Mat& a);
// Solve U*c = v exactly over Z; U's columns must be Z-independent.
std::optional<std::vector<Int>> lattice_solve(const Mat& u, const std::vector<Int>& v);
// Basis of { x : A*x = 0 } (columns; may have 0 columns)
Mat integer_kernel(const Mat& a);
// Same column lattice? (mutual containment)
bool lattice_eq(const Mat& a, const Mat& b);

// Finitely generated abelian group in invariant-factor form.
// Generator order: torsion generators first (orders ascending under
// divisibility, each >= 2), then free generators.
struct FGAbGroup {
  std::vector<Int> torsion;
  long free_rank = 0;

  bool operator==(const FGAbGroup&) const = default;
  bool is_zero() const { return torsion.empty() && free_rank == 0; }
  bool is_finite() const { return free_rank == 0; }
  Int order() const;  // requires is_finite()
  std::size_t gen_count() const { return torsion.size() + static_cast<std::size_t>(free_rank); }
  // order of the i-th generator: torsion[i] for i < #torsion, else 0 (infinite)
  Int gen_order(std::size_t i) const;
  std::string str() const;  // "0", "Z/2 + Z/24 + Z^2", ...
};

FGAbGroup make_free(long rank);
FGAbGroup make_cyclic(const Int& n);  // n >= 0; 0 means Z, 1 means trivial
FGAbGroup direct_sum(const FGAbGroup& a, const FGAbGroup& b);

// Homomorphism. matrix is (target gens) x (source gens); the image of
// source generator j is sum_i matrix[i][j] * (target generator i).
struct FGAbHom {
  FGAbGroup source, target;
  Mat matrix;
};

FGAbHom zero_hom(const FGAbGroup& src, const FGAbGroup& tgt);
FGAbHom identity_hom(const FGAbGroup& g);
// d_j * column_j must vanish in the target for every torsion generator j
bool is_well_defined(const FGAbHom& f);
// entrywise congruence modulo target generator orders
bool hom_eq(const FGAbHom& f, const FGAbHom& g);
FGAbHom compose(const FGAbHom& g, const FGAbHom& f);  // g after f
FGAbHom hom_add(const FGAbHom& f, const FGAbHom& g);
FGAbHom hom_scale(const Int& c, const FGAbHom& f);
// source -> A+B from source -> A and source -> B (stack), and the
// canonical injections/projections of a direct sum
FGAbHom pair_into_sum(const FGAbHom& f, const FGAbHom& g);
FGAbHom sum_injection(const FGAbGroup& a, const FGAbGroup& b, int which);
FGAbHom sum_projection(const FGAbGroup& a, const FGAbGroup& b, int which);

// Quotient of Z^gens by the column lattice of `relations`, in canonical
// form, with the change of coordinates both ways.
//   project: canonical gens x gens   (old coords -> canonical coords)
//   lift:    gens x canonical gens   (canonical gen -> an old-coord preimage)
// project * lift = identity (exactly, before reduction).
struct Presented {
  FGAbGroup group;
  Mat project, lift;
};
Presented group_from_presentation(std::size_t gens, const Mat& relations);

// A subgroup or quotient together with the arrow tying it to the ambient
// group: kernel/image carry an injection, cokernel a surjection.
struct SubQuot {
  FGAbGroup group;
  FGAbHom map;
};
SubQuot kernel(const FGAbHom& f);
SubQuot image(const FGAbHom& f);
SubQuot cokernel(const FGAbHom& f);

bool is_injective(const FGAbHom& f);
bool is_surjective(const FGAbHom& f);
bool is_isomorphism(const FGAbHom& f);
// image(f) == kernel(g) as subgroups of f.target (requires g.source == f.target)
bool exact_at(const FGAbHom& f, const FGAbHom& g);

// Does Ext^1(k, q) vanish? (k in the quotient slot, q in the sub slot)
bool ext_vanishes(const FGAbGroup& k, const FGAbGroup& q);

// Certificate that a short exact sequence 0 -> sub -> X -> quot -> 0
// splits. Either an explicit section of the projection X = sub+quot ->> quot,
// or a divisibility certificate (v_mult, correction, unit_rank) asserting a
// retraction exists because correction * unit_rank == v_mult.
struct ExtensionWitness {
  FGAbGroup sub, quot;
  std::optional<FGAbHom> section;  // quot -> direct_sum(sub, quot)
  std::optional<std::array<Int, 3>> certificate;
};

struct AmbiguousExtension {
  FGAbGroup sub, quot;
  bool operator==(const AmbiguousExtension&) const = default;
  std::string str() const;
};

using Middle = std::variant<FGAbGroup, AmbiguousExtension>;

// The middle X of an exact sequence  A --left--> B -> X -> C --right--> D:
// X sits in 0 -> coker(left) -> X -> ker(right) -> 0. Returns the direct
// sum when the extension problem is trivial (Ext vanishes) or a valid
// witness certifies splitting; otherwise AmbiguousExtension. An invalid
// witness is an error, never a silent fallback.
Middle solve_middle(const FGAbHom& left, const FGAbHom& right,
                    const std::optional<ExtensionWitness>& witness = std::nullopt);

std::string middle_str(const Middle& m);

}  // namespace mw::ab
