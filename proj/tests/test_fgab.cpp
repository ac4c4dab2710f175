#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "mw/fgab.hpp"

using namespace mw::ab;

namespace {

std::mt19937 rng(0xC0FFEE);

Mat random_mat(std::size_t r, std::size_t c, int lo = -9, int hi = 9) {
  std::uniform_int_distribution<int> d(lo, hi);
  Mat m = zero_mat(r, c);
  for (auto& row : m)
    for (auto& x : row) x = d(rng);
  return m;
}

// Independent oracle for invariant factors: d_k = D_k / D_{k-1} where D_k is
// the gcd of all k x k minors (D_0 = 1, zero once the minors all vanish).
Int minor_det(const Mat& a, const std::vector<std::size_t>& rows,
              const std::vector<std::size_t>& cols) {
  Mat sub(rows.size(), std::vector<Int>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) sub[i][j] = a[rows[i]][cols[j]];
  return determinant(sub);
}

void subsets(std::size_t n, std::size_t k, std::vector<std::size_t>& cur,
             std::size_t start, std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i + (k - cur.size()) <= n; ++i) {
    cur.push_back(i);
    subsets(n, k, cur, i + 1, out);
    cur.pop_back();
  }
}

std::vector<Int> invariant_factors_oracle(const Mat& a) {
  std::size_t r = row_count(a), c = col_count(a);
  std::vector<Int> out;
  Int prev = 1;
  for (std::size_t k = 1; k <= std::min(r, c); ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    subsets(r, k, cur, 0, rs);
    subsets(c, k, cur, 0, cs);
    Int g = 0;
    for (const auto& ri : rs)
      for (const auto& ci : cs) {
        Int m = abs(minor_det(a, ri, ci));
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), m.get_mpz_t());
      }
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

// ---- element enumeration for small finite groups (oracle machinery) ----

using Tuple = std::vector<long>;

std::vector<Tuple> enumerate_elements(const FGAbGroup& g) {
  REQUIRE(g.is_finite());
  REQUIRE(g.order() <= 5000);
  std::vector<Tuple> out{Tuple(g.torsion.size(), 0)};
  for (std::size_t i = 0; i < g.torsion.size(); ++i) {
    long d = static_cast<long>(g.torsion[i].get_si());
    std::vector<Tuple> next;
    for (const auto& t : out)
      for (long v = 0; v < d; ++v) {
        Tuple u = t;
        u[i] = v;
        next.push_back(u);
      }
    out = std::move(next);
  }
  return out;
}

Tuple apply_hom(const FGAbHom& f, const Tuple& x) {
  Tuple y(f.target.gen_count(), 0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    Int acc = 0;
    for (std::size_t j = 0; j < x.size(); ++j) acc += f.matrix[i][j] * x[j];
    Int d = f.target.gen_order(i);
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), acc.get_mpz_t(), d.get_mpz_t());
    y[i] = static_cast<long>(r.get_si());
  }
  return y;
}

long element_order(const FGAbGroup& g, const Tuple& x) {
  Int ord = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Int d = g.gen_order(i), v = x[i], gcd;
    mpz_gcd(gcd.get_mpz_t(), d.get_mpz_t(), v.get_mpz_t());
    Int o = d / gcd;
    mpz_lcm(ord.get_mpz_t(), ord.get_mpz_t(), o.get_mpz_t());
  }
  return static_cast<long>(ord.get_si());
}

std::map<long, long> order_histogram(const FGAbGroup& g, const std::vector<Tuple>& elems) {
  std::map<long, long> h;
  for (const auto& x : elems) ++h[element_order(g, x)];
  return h;
}

std::map<long, long> group_histogram(const FGAbGroup& g) {
  return order_histogram(g, enumerate_elements(g));
}

// random finite group with torsion orders from a small palette
FGAbGroup random_finite_group() {
  static const long palette[] = {2, 3, 4, 5, 6, 8, 9, 12};
  std::uniform_int_distribution<int> count(1, 3), pick(0, 7);
  std::vector<Int> orders;
  for (int i = 0, n = count(rng); i < n; ++i) orders.push_back(palette[pick(rng)]);
  FGAbGroup g;
  for (const auto& o : orders) g = direct_sum(g, make_cyclic(o));
  return g;
}

// random well-defined hom between finite groups: entry (i,j) must be a
// multiple of d_i / gcd(d_i, d_j)
FGAbHom random_finite_hom(const FGAbGroup& a, const FGAbGroup& b) {
  std::uniform_int_distribution<int> k(-3, 3);
  Mat m = zero_mat(b.gen_count(), a.gen_count());
  for (std::size_t i = 0; i < b.gen_count(); ++i)
    for (std::size_t j = 0; j < a.gen_count(); ++j) {
      Int di = b.gen_order(i), dj = a.gen_order(j), g;
      mpz_gcd(g.get_mpz_t(), di.get_mpz_t(), dj.get_mpz_t());
      m[i][j] = k(rng) * (di / g);
    }
  FGAbHom f{a, b, m};
  REQUIRE(is_well_defined(f));
  return f;
}

}  // namespace

TEST_CASE("smith normal form agrees with the determinantal-divisor oracle") {
  std::uniform_int_distribution<std::size_t> dim(1, 4);
  for (int trial = 0; trial < 200; ++trial) {
    Mat a = random_mat(dim(rng), dim(rng));
    Snf s = smith_normal_form(a);
    CHECK(is_unimodular(s.left));
    CHECK(is_unimodular(s.right));
    CHECK(mat_mul(s.left, s.left_inv) == identity_mat(row_count(a)));
    CHECK(mat_mul(s.right, s.right_inv) == identity_mat(col_count(a)));
    CHECK(mat_mul(mat_mul(s.left, a), s.right) == s.d);
    std::vector<Int> diag;
    for (std::size_t i = 0; i < std::min(row_count(a), col_count(a)); ++i)
      if (s.d[i][i] != 0) diag.push_back(s.d[i][i]);
    // off-diagonal zero, chain divisibility, nonnegative
    for (std::size_t i = 0; i < row_count(a); ++i)
      for (std::size_t j = 0; j < col_count(a); ++j)
        if (i != j) CHECK(s.d[i][j] == 0);
    for (std::size_t i = 0; i + 1 < diag.size(); ++i) CHECK(diag[i + 1] % diag[i] == 0);
    for (const auto& d : diag) CHECK(d > 0);
    CHECK(diag == invariant_factors_oracle(a));
  }
}

TEST_CASE("smith normal form of a fixed upper-triangular matrix") {
  Mat a = {{2, 4}, {0, 6}};
  Snf s = smith_normal_form(a);
  CHECK(s.d == Mat{{2, 0}, {0, 6}});
}

TEST_CASE("presentations reduce to canonical invariant factors") {
  // Z^2 / <3e1, 8e2> is cyclic of order 24
  Mat rel = {{3, 0}, {0, 8}};
  Presented p = group_from_presentation(2, rel);
  CHECK(p.group == FGAbGroup{{24}, 0});

  // scrambling the presentation by unimodular transforms keeps the group
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(1, 4);
    std::size_t gens = dim(rng), rels = dim(rng);
    Mat r = random_mat(gens, rels, -6, 6);
    FGAbGroup g0 = group_from_presentation(gens, r).group;
    // random unimodular scramble: products of elementary matrices
    Mat u = identity_mat(gens), v = identity_mat(rels);
    std::uniform_int_distribution<int> coef(-2, 2);
    for (int step = 0; step < 6; ++step) {
      std::uniform_int_distribution<std::size_t> gi(0, gens - 1), ri(0, rels - 1);
      std::size_t x = gi(rng), y = gi(rng);
      int c = coef(rng);
      if (x != y)
        for (std::size_t t = 0; t < gens; ++t) u[x][t] += c * u[y][t];
      x = ri(rng), y = ri(rng);
      c = coef(rng);
      if (x != y)
        for (std::size_t t = 0; t < rels; ++t) v[x][t] += c * v[y][t];
    }
    CHECK(is_unimodular(u));
    CHECK(is_unimodular(v));
    FGAbGroup g1 = group_from_presentation(gens, mat_mul(mat_mul(u, r), v)).group;
    CHECK(g0 == g1);
  }
}

TEST_CASE("presentation change-of-coordinates is a two-sided dictionary") {
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(1, 4);
    std::size_t gens = dim(rng), rels = dim(rng);
    Mat r = random_mat(gens, rels, -6, 6);
    Presented p = group_from_presentation(gens, r);
    std::size_t k = p.group.gen_count();
    if (k == 0) continue;  // trivial group: nothing to check
    // project . lift = identity on the canonical group (mod orders)
    Mat pl = mat_mul(p.project, p.lift);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        Int want = i == j ? 1 : 0;
        Int d = p.group.gen_order(i);
        Int diff = pl[i][j] - want;
        CHECK((d == 0 ? diff == 0 : diff % d == 0));
      }
    // every relation column dies under project (mod orders)
    Mat pr = mat_mul(p.project, r);
    for (std::size_t i = 0; i < k; ++i) {
      Int d = p.group.gen_order(i);
      for (std::size_t j = 0; j < rels; ++j)
        CHECK((d == 0 ? pr[i][j] == 0 : pr[i][j] % d == 0));
    }
  }
}

TEST_CASE("direct sums merge into invariant-factor form") {
  CHECK(direct_sum(make_cyclic(3), make_cyclic(8)) == FGAbGroup{{24}, 0});
  CHECK(direct_sum(make_cyclic(2), make_cyclic(4)) == FGAbGroup{{2, 4}, 0});
  CHECK(direct_sum(make_cyclic(6), make_cyclic(4)) == FGAbGroup{{2, 12}, 0});
  CHECK(direct_sum(make_free(2), make_cyclic(5)) == FGAbGroup{{5}, 2});
  CHECK(direct_sum(FGAbGroup{}, FGAbGroup{}) == FGAbGroup{});
}

TEST_CASE("direct-sum injections and projections satisfy the biproduct laws") {
  for (int trial = 0; trial < 30; ++trial) {
    FGAbGroup a = random_finite_group();
    FGAbGroup b = trial % 3 == 0 ? make_free(1) : random_finite_group();
    FGAbHom ia = sum_injection(a, b, 0), ib = sum_injection(a, b, 1);
    FGAbHom pa = sum_projection(a, b, 0), pb = sum_projection(a, b, 1);
    CHECK(hom_eq(compose(pa, ia), identity_hom(a)));
    CHECK(hom_eq(compose(pb, ib), identity_hom(b)));
    CHECK(hom_eq(compose(pb, ia), zero_hom(a, b)));
    CHECK(hom_eq(compose(pa, ib), zero_hom(b, a)));
    FGAbHom total = hom_add(compose(ia, pa), compose(ib, pb));
    CHECK(hom_eq(total, identity_hom(direct_sum(a, b))));
  }
}

TEST_CASE("kernel and image structure matches brute-force enumeration") {
  // frozen: multiplication by 2 on Z/4
  FGAbGroup z4 = make_cyclic(4);
  FGAbHom times2 = hom_scale(2, identity_hom(z4));
  CHECK(kernel(times2).group == make_cyclic(2));
  CHECK(image(times2).group == make_cyclic(2));
  CHECK(cokernel(times2).group == make_cyclic(2));

  for (int trial = 0; trial < 40; ++trial) {
    FGAbGroup a = random_finite_group(), b = random_finite_group();
    if (a.order() > 600 || b.order() > 600) continue;
    FGAbHom f = random_finite_hom(a, b);

    std::vector<Tuple> ker_elems, im_elems;
    std::map<Tuple, bool> seen;
    for (const auto& x : enumerate_elements(a)) {
      Tuple y = apply_hom(f, x);
      bool zero = true;
      for (long v : y) zero = zero && v == 0;
      if (zero) ker_elems.push_back(x);
      if (!seen.count(y)) {
        seen[y] = true;
        im_elems.push_back(y);
      }
    }
    SubQuot k = kernel(f), im = image(f), ck = cokernel(f);
    // order bookkeeping: |A| = |ker| |im|, |coker| = |B| / |im|
    CHECK(k.group.order() == Int(ker_elems.size()));
    CHECK(im.group.order() == Int(im_elems.size()));
    CHECK(ck.group.order() * Int(im_elems.size()) == b.order());
    // structure, not just size: element-order histograms must agree
    CHECK(group_histogram(k.group) == order_histogram(a, ker_elems));
    CHECK(group_histogram(im.group) == order_histogram(b, im_elems));
    // the inclusion maps really land where they claim
    CHECK(is_well_defined(k.map));
    CHECK(is_injective(k.map));
    CHECK(hom_eq(compose(f, k.map), zero_hom(k.group, b)));
    CHECK(is_injective(im.map));
    CHECK(is_surjective(ck.map));
    CHECK(hom_eq(compose(ck.map, f), zero_hom(a, ck.group)));
    // exactness of  ker -> A -> B -> coker  at A and B
    CHECK(exact_at(k.map, f));
    CHECK(exact_at(f, ck.map));
  }
}

TEST_CASE("kernel of a map out of a free group") {
  // Z^2 -> Z, (x, y) |-> 2x + 4y: kernel is free of rank 1
  FGAbHom f{make_free(2), make_free(1), {{2, 4}}};
  SubQuot k = kernel(f);
  CHECK(k.group == make_free(1));
  CHECK(cokernel(f).group == make_cyclic(2));
  // mixed: Z -> Z/4 by 1: kernel 4Z, cokernel 0
  FGAbHom g{make_free(1), make_cyclic(4), {{1}}};
  CHECK(kernel(g).group == make_free(1));
  CHECK(is_surjective(g));
  CHECK(hom_eq(compose(g, kernel(g).map), zero_hom(kernel(g).group, g.target)));
}

TEST_CASE("exactness probe rejects a non-exact pair") {
  FGAbGroup z = make_free(1), z2 = make_cyclic(2);
  FGAbHom zero_zz = zero_hom(z, z);
  CHECK(!exact_at(zero_zz, zero_zz));                   // im 0 != ker 0 = Z
  CHECK(exact_at(identity_hom(z), zero_hom(z, z)));     // im id = Z = ker 0
  CHECK(exact_at(zero_hom(z, z2), identity_hom(z2)));   // both sides trivial
  CHECK(!exact_at(zero_hom(z, z2), zero_hom(z2, z2)));  // im 0 != ker 0 = Z/2
}

TEST_CASE("Ext vanishing criterion") {
  CHECK(ext_vanishes(make_free(2), make_cyclic(4)));          // free quotient side
  CHECK(!ext_vanishes(make_cyclic(2), make_free(1)));         // Ext(Z/2, Z) = Z/2
  CHECK(ext_vanishes(make_cyclic(3), make_cyclic(8)));        // coprime torsion
  CHECK(!ext_vanishes(make_cyclic(6), make_cyclic(10)));      // shared factor 2
  CHECK(ext_vanishes(FGAbGroup{}, make_cyclic(7)));
}

TEST_CASE("solve_middle returns the split middle exactly when extension data allows") {
  // coker(3: Z -> Z) = Z/3 and ker(0: Z/8 -> Z/8) = Z/8: gcd 1, middle Z/24
  FGAbGroup z = make_free(1), z8 = make_cyclic(8);
  FGAbHom left = hom_scale(3, identity_hom(z));
  FGAbHom right = zero_hom(z8, z8);
  Middle m = solve_middle(left, right);
  REQUIRE(std::holds_alternative<FGAbGroup>(m));
  CHECK(std::get<FGAbGroup>(m) == make_cyclic(24));

  // coker(2: Z -> Z) = Z/2, ker(0 on Z/2) = Z/2: genuinely ambiguous
  FGAbGroup z2 = make_cyclic(2);
  Middle amb = solve_middle(hom_scale(2, identity_hom(z)), zero_hom(z2, z2));
  REQUIRE(std::holds_alternative<AmbiguousExtension>(amb));
  CHECK(std::get<AmbiguousExtension>(amb) == AmbiguousExtension{z2, z2});
  CHECK(middle_str(amb) == "ambiguous extension 0 -> Z/2 -> ? -> Z/2 -> 0");

  // a section witness resolves the same ambiguity to the direct sum
  ExtensionWitness w{z2, z2, sum_injection(z2, z2, 1), std::nullopt};
  Middle resolved = solve_middle(hom_scale(2, identity_hom(z)), zero_hom(z2, z2), w);
  REQUIRE(std::holds_alternative<FGAbGroup>(resolved));
  CHECK(std::get<FGAbGroup>(resolved) == FGAbGroup{{2, 2}, 0});

  // a witness that fails the section check is an error, not a fallback
  ExtensionWitness bad{z2, z2, zero_hom(z2, direct_sum(z2, z2)), std::nullopt};
  CHECK_THROWS_AS(solve_middle(hom_scale(2, identity_hom(z)), zero_hom(z2, z2), bad),
                  AlgebraError);

  // a witness naming the wrong groups is an error
  ExtensionWitness wrong{make_cyclic(4), z2, sum_injection(make_cyclic(4), z2, 1),
                         std::nullopt};
  CHECK_THROWS_AS(solve_middle(hom_scale(2, identity_hom(z)), zero_hom(z2, z2), wrong),
                  AlgebraError);

  // divisibility certificates: valid passes, broken arithmetic throws
  ExtensionWitness cert{z2, z2, std::nullopt, std::array<Int, 3>{24, 12, 2}};
  CHECK(std::holds_alternative<FGAbGroup>(
      solve_middle(hom_scale(2, identity_hom(z)), zero_hom(z2, z2), cert)));
  ExtensionWitness badcert{z2, z2, std::nullopt, std::array<Int, 3>{24, 11, 2}};
  CHECK_THROWS_AS(solve_middle(hom_scale(2, identity_hom(z)), zero_hom(z2, z2), badcert),
                  AlgebraError);
}

TEST_CASE("group formatting") {
  CHECK(FGAbGroup{}.str() == "0");
  CHECK(make_free(1).str() == "Z");
  CHECK(make_free(3).str() == "Z^3");
  CHECK(make_cyclic(24).str() == "Z/24");
  CHECK(FGAbGroup{{2, 24}, 1}.str() == "Z/2 + Z/24 + Z");
}

TEST_CASE("lattice solve and equality") {
  Mat u = {{2, 0}, {1, 3}};
  auto c = lattice_solve(u, {4, 8});
  REQUIRE(c);
  CHECK((*c)[0] == 2);
  CHECK((*c)[1] == 2);
  CHECK(!lattice_solve(u, {1, 0}));
  // column lattices: {(2,0),(0,3)} vs {(2,0),(2,3)} coincide
  CHECK(lattice_eq(Mat{{2, 0}, {0, 3}}, Mat{{2, 2}, {0, 3}}));
  CHECK(!lattice_eq(Mat{{2}}, Mat{{4}}));
  CHECK(!lattice_eq(Mat{{2, 0}, {0, 3}}, Mat{{2, 3}, {0, 3}}));
}
