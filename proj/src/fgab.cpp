#include "mw/fgab.hpp"

#include <sstream>

namespace mw::ab {

namespace {

// reduce x into [0, d) for d >= 2; leave untouched for d == 0 (free)
Int reduce_coord(const Int& x, const Int& d) {
  if (d == 0) return x;
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t());
  return r;
}

void reduce_in_target(Mat& m, const FGAbGroup& tgt) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    Int d = tgt.gen_order(i);
    for (auto& x : m[i]) x = reduce_coord(x, d);
  }
}

Mat shaped(const FGAbGroup& tgt, const FGAbGroup& src, Mat m) {
  std::size_t r = tgt.gen_count(), c = src.gen_count();
  if (m.empty() && r > 0) m = zero_mat(r, c);
  if (m.size() != r) throw AlgebraError("hom matrix: wrong row count");
  for (auto& row : m)
    if (row.size() != c) throw AlgebraError("hom matrix: wrong column count");
  return m;
}

FGAbHom make_hom(const FGAbGroup& src, const FGAbGroup& tgt, Mat m) {
  FGAbHom f{src, tgt, shaped(tgt, src, std::move(m))};
  reduce_in_target(f.matrix, tgt);
  if (!is_well_defined(f)) throw AlgebraError("hom is not well defined");
  return f;
}

// columns d_i * e_i spanning the relation lattice of the generator coords
Mat relation_cols(const FGAbGroup& g) {
  std::size_t n = g.gen_count(), t = g.torsion.size();
  Mat m = zero_mat(n, t);
  for (std::size_t i = 0; i < t; ++i) m[i][i] = g.torsion[i];
  return m;
}

// spanning columns of { x in Z^(gens of B) : f(x) = 0 in C }
Mat preimage_of_zero(const FGAbHom& f) {
  std::size_t nb = f.source.gen_count();
  if (f.target.gen_count() == 0) return identity_mat(nb);
  Mat s = hconcat(f.matrix, relation_cols(f.target));
  Mat k = integer_kernel(s);
  Mat out(nb);
  for (std::size_t j = 0; j < col_count(k); ++j)
    for (std::size_t i = 0; i < nb; ++i) out[i].push_back(k[i][j]);
  return out;
}

// subgroup of `ambient` spanned by the columns of `span` (which must
// contain ambient's relation lattice), as a canonical group + inclusion
SubQuot subgroup_from_lattice(const FGAbGroup& ambient, const Mat& span_cols) {
  FGAbGroup trivial{};
  Mat u = lattice_basis(span_cols);
  std::size_t k = col_count(u);
  if (k == 0) return {trivial, zero_hom(trivial, ambient)};
  std::size_t t = ambient.torsion.size();
  Mat rel = zero_mat(k, t);
  for (std::size_t i = 0; i < t; ++i) {
    std::vector<Int> v(ambient.gen_count(), 0);
    v[i] = ambient.torsion[i];
    auto c = lattice_solve(u, v);
    if (!c) throw AlgebraError("subgroup lattice does not contain ambient relations");
    for (std::size_t j = 0; j < k; ++j) rel[j][i] = (*c)[j];
  }
  Presented pres = group_from_presentation(k, rel);
  Mat incl = mat_mul(u, pres.lift);
  return {pres.group, make_hom(pres.group, ambient, std::move(incl))};
}

}  // namespace

Int FGAbGroup::order() const {
  if (!is_finite()) throw AlgebraError("order of an infinite group");
  Int n = 1;
  for (const auto& d : torsion) n *= d;
  return n;
}

Int FGAbGroup::gen_order(std::size_t i) const {
  if (i < torsion.size()) return torsion[i];
  if (i < gen_count()) return 0;
  throw AlgebraError("generator index out of range");
}

std::string FGAbGroup::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& d : torsion) {
    if (!first) os << " + ";
    os << "Z/" << d;
    first = false;
  }
  if (free_rank > 0) {
    if (!first) os << " + ";
    os << (free_rank == 1 ? "Z" : "Z^" + std::to_string(free_rank));
  }
  return os.str();
}

FGAbGroup make_free(long rank) {
  if (rank < 0) throw AlgebraError("negative rank");
  return FGAbGroup{{}, rank};
}

FGAbGroup make_cyclic(const Int& n) {
  Int m = abs(n);
  if (m == 0) return make_free(1);
  if (m == 1) return FGAbGroup{};
  return FGAbGroup{{m}, 0};
}

FGAbGroup direct_sum(const FGAbGroup& a, const FGAbGroup& b) {
  std::vector<Int> orders = a.torsion;
  orders.insert(orders.end(), b.torsion.begin(), b.torsion.end());
  std::size_t n = orders.size();
  Mat diag = zero_mat(n, n);
  for (std::size_t i = 0; i < n; ++i) diag[i][i] = orders[i];
  Presented pres = group_from_presentation(n, diag);
  FGAbGroup out = pres.group;
  out.free_rank += a.free_rank + b.free_rank;
  return out;
}

FGAbHom zero_hom(const FGAbGroup& src, const FGAbGroup& tgt) {
  return FGAbHom{src, tgt, zero_mat(tgt.gen_count(), src.gen_count())};
}

FGAbHom identity_hom(const FGAbGroup& g) {
  return FGAbHom{g, g, identity_mat(g.gen_count())};
}

bool is_well_defined(const FGAbHom& f) {
  std::size_t r = f.target.gen_count(), c = f.source.gen_count();
  if (f.matrix.size() != r) return false;
  for (const auto& row : f.matrix)
    if (row.size() != c) return false;
  for (std::size_t j = 0; j < f.source.torsion.size(); ++j) {
    const Int& dj = f.source.torsion[j];
    for (std::size_t i = 0; i < r; ++i) {
      Int di = f.target.gen_order(i);
      Int v = dj * f.matrix[i][j];
      if (di == 0 ? v != 0 : v % di != 0) return false;
    }
  }
  return true;
}

bool hom_eq(const FGAbHom& f, const FGAbHom& g) {
  if (!(f.source == g.source) || !(f.target == g.target)) return false;
  for (std::size_t i = 0; i < f.target.gen_count(); ++i) {
    Int d = f.target.gen_order(i);
    for (std::size_t j = 0; j < f.source.gen_count(); ++j) {
      Int diff = f.matrix[i][j] - g.matrix[i][j];
      if (d == 0 ? diff != 0 : diff % d != 0) return false;
    }
  }
  return true;
}

FGAbHom compose(const FGAbHom& g, const FGAbHom& f) {
  if (!(g.source == f.target)) throw AlgebraError("compose: middle group mismatch");
  std::size_t r = g.target.gen_count(), mid = f.target.gen_count(), c = f.source.gen_count();
  Mat m = zero_mat(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t t = 0; t < mid; ++t) {
      if (g.matrix[i][t] == 0) continue;
      for (std::size_t j = 0; j < c; ++j) m[i][j] += g.matrix[i][t] * f.matrix[t][j];
    }
  return make_hom(f.source, g.target, std::move(m));
}

FGAbHom hom_add(const FGAbHom& f, const FGAbHom& g) {
  if (!(f.source == g.source) || !(f.target == g.target))
    throw AlgebraError("hom_add: shape mismatch");
  return make_hom(f.source, f.target, mat_add(f.matrix, g.matrix));
}

FGAbHom hom_scale(const Int& c, const FGAbHom& f) {
  return make_hom(f.source, f.target, mat_scale(c, f.matrix));
}

// Shared coordinates for a direct sum: present Z^(gens a + gens b) by the
// block-diagonal relations, so injections/projections all live in one
// consistent canonical basis.
namespace {
struct SumCoords {
  FGAbGroup sum;
  Mat project, lift;  // old (a then b) coords <-> canonical coords
  std::size_t na, nb;
};

SumCoords sum_coords(const FGAbGroup& a, const FGAbGroup& b) {
  std::size_t na = a.gen_count(), nb = b.gen_count();
  Mat rel = zero_mat(na + nb, a.torsion.size() + b.torsion.size());
  for (std::size_t i = 0; i < a.torsion.size(); ++i) rel[i][i] = a.torsion[i];
  for (std::size_t i = 0; i < b.torsion.size(); ++i)
    rel[na + i][a.torsion.size() + i] = b.torsion[i];
  Presented pres = group_from_presentation(na + nb, rel);
  return SumCoords{pres.group, pres.project, pres.lift, na, nb};
}
}  // namespace

FGAbHom pair_into_sum(const FGAbHom& f, const FGAbHom& g) {
  if (!(f.source == g.source)) throw AlgebraError("pair_into_sum: source mismatch");
  FGAbHom ia = sum_injection(f.target, g.target, 0);
  FGAbHom ib = sum_injection(f.target, g.target, 1);
  return hom_add(compose(ia, f), compose(ib, g));
}

FGAbHom sum_injection(const FGAbGroup& a, const FGAbGroup& b, int which) {
  SumCoords sc = sum_coords(a, b);
  const FGAbGroup& part = which == 0 ? a : b;
  std::size_t off = which == 0 ? 0 : sc.na;
  Mat m = zero_mat(sc.sum.gen_count(), part.gen_count());
  for (std::size_t i = 0; i < sc.sum.gen_count(); ++i)
    for (std::size_t j = 0; j < part.gen_count(); ++j) m[i][j] = sc.project[i][off + j];
  return make_hom(part, sc.sum, std::move(m));
}

FGAbHom sum_projection(const FGAbGroup& a, const FGAbGroup& b, int which) {
  SumCoords sc = sum_coords(a, b);
  const FGAbGroup& part = which == 0 ? a : b;
  std::size_t off = which == 0 ? 0 : sc.na;
  Mat m = zero_mat(part.gen_count(), sc.sum.gen_count());
  for (std::size_t i = 0; i < part.gen_count(); ++i)
    for (std::size_t j = 0; j < sc.sum.gen_count(); ++j) m[i][j] = sc.lift[off + i][j];
  return make_hom(sc.sum, part, std::move(m));
}

Presented group_from_presentation(std::size_t gens, const Mat& relations) {
  if (gens == 0) return Presented{FGAbGroup{}, Mat{}, Mat{}};
  Mat rel = relations;
  if (rel.empty()) rel = Mat(gens);
  if (row_count(rel) != gens) throw AlgebraError("presentation: relation rows != gens");
  Snf s = smith_normal_form(rel);
  std::size_t diag = std::min(gens, col_count(rel));
  std::vector<std::size_t> torsion_rows, free_rows;
  std::vector<Int> torsion;
  for (std::size_t i = 0; i < gens; ++i) {
    Int d = i < diag ? s.d[i][i] : Int(0);
    if (d == 1) continue;
    if (d == 0) {
      free_rows.push_back(i);
    } else {
      torsion_rows.push_back(i);
      torsion.push_back(d);
    }
  }
  FGAbGroup g{torsion, static_cast<long>(free_rows.size())};
  std::vector<std::size_t> kept = torsion_rows;
  kept.insert(kept.end(), free_rows.begin(), free_rows.end());
  Mat project(kept.size(), std::vector<Int>(gens));
  Mat lift(gens, std::vector<Int>(kept.size()));
  for (std::size_t t = 0; t < kept.size(); ++t) {
    for (std::size_t j = 0; j < gens; ++j) project[t][j] = s.left[kept[t]][j];
    for (std::size_t i = 0; i < gens; ++i) lift[i][t] = s.left_inv[i][kept[t]];
  }
  reduce_in_target(project, g);
  return Presented{g, project, lift};
}

SubQuot kernel(const FGAbHom& f) {
  FGAbGroup trivial{};
  std::size_t na = f.source.gen_count();
  if (na == 0) return {trivial, zero_hom(trivial, f.source)};
  if (f.target.gen_count() == 0) return {f.source, identity_hom(f.source)};
  return subgroup_from_lattice(f.source, preimage_of_zero(f));
}

SubQuot image(const FGAbHom& f) {
  FGAbGroup trivial{};
  std::size_t nb = f.target.gen_count();
  if (nb == 0) return {trivial, zero_hom(trivial, f.target)};
  Mat span = hconcat(shaped(f.target, f.source, f.matrix), relation_cols(f.target));
  return subgroup_from_lattice(f.target, span);
}

SubQuot cokernel(const FGAbHom& f) {
  FGAbGroup trivial{};
  std::size_t nb = f.target.gen_count();
  if (nb == 0) return {trivial, zero_hom(f.target, trivial)};
  Mat rel = hconcat(shaped(f.target, f.source, f.matrix), relation_cols(f.target));
  Presented pres = group_from_presentation(nb, rel);
  return {pres.group, make_hom(f.target, pres.group, pres.project)};
}

bool is_injective(const FGAbHom& f) { return kernel(f).group.is_zero(); }
bool is_surjective(const FGAbHom& f) { return cokernel(f).group.is_zero(); }
bool is_isomorphism(const FGAbHom& f) { return is_injective(f) && is_surjective(f); }

bool exact_at(const FGAbHom& f, const FGAbHom& g) {
  if (!(g.source == f.target)) throw AlgebraError("exact_at: groups do not chain");
  if (!hom_eq(compose(g, f), zero_hom(f.source, g.target))) return false;
  std::size_t nb = f.target.gen_count();
  if (nb == 0) return true;
  Mat im = hconcat(shaped(f.target, f.source, f.matrix), relation_cols(f.target));
  Mat ker = preimage_of_zero(g);
  return lattice_eq(im, ker);
}

bool ext_vanishes(const FGAbGroup& k, const FGAbGroup& q) {
  if (k.torsion.empty()) return true;
  if (q.free_rank != 0) return false;
  for (const auto& a : k.torsion)
    for (const auto& b : q.torsion) {
      Int g;
      mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      if (g != 1) return false;
    }
  return true;
}

std::string AmbiguousExtension::str() const {
  return "ambiguous extension 0 -> " + sub.str() + " -> ? -> " + quot.str() + " -> 0";
}

Middle solve_middle(const FGAbHom& left, const FGAbHom& right,
                    const std::optional<ExtensionWitness>& witness) {
  FGAbGroup sub = cokernel(left).group;
  FGAbGroup quot = kernel(right).group;
  if (witness) {
    if (!(witness->sub == sub) || !(witness->quot == quot))
      throw AlgebraError("extension witness names the wrong subgroup or quotient");
    if (!witness->section && !witness->certificate)
      throw AlgebraError("extension witness carries no evidence");
    if (witness->section) {
      const FGAbHom& sec = *witness->section;
      FGAbGroup total = direct_sum(sub, quot);
      if (!(sec.source == quot) || !(sec.target == total))
        throw AlgebraError("extension witness section has the wrong shape");
      if (!is_well_defined(sec)) throw AlgebraError("extension witness section is not a hom");
      FGAbHom proj = sum_projection(sub, quot, 1);
      if (!hom_eq(compose(proj, sec), identity_hom(quot)))
        throw AlgebraError("extension witness fails the section check");
    }
    if (witness->certificate) {
      const auto& c = *witness->certificate;
      if (c[1] * c[2] != c[0])
        throw AlgebraError("extension witness certificate arithmetic fails");
    }
    return direct_sum(sub, quot);
  }
  if (ext_vanishes(quot, sub)) return direct_sum(sub, quot);
  return AmbiguousExtension{sub, quot};
}

std::string middle_str(const Middle& m) {
  if (std::holds_alternative<FGAbGroup>(m)) return std::get<FGAbGroup>(m).str();
  return std::get<AmbiguousExtension>(m).str();
}

}  // namespace mw::ab
