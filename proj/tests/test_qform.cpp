#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mw/qform.hpp"

using namespace mw::qf;
using mw::ab::AlgebraError;

namespace {

std::mt19937 rng(0xBADA55);

Rat random_rational() {
  static const int nums[] = {1, -1, 2, -2, 3, 5, -5, 6, 7, -7, 10, 15, -30};
  std::uniform_int_distribution<int> pick(0, 12), den(1, 4);
  Rat r(nums[pick(rng)], den(rng));
  r.canonicalize();
  return r;
}

QForm random_rational_form(std::size_t max_rank = 4) {
  std::uniform_int_distribution<std::size_t> r(1, max_rank);
  std::vector<Rat> d;
  for (std::size_t i = 0, n = r(rng); i < n; ++i) d.push_back(random_rational());
  return make_form(Field::rational(), d);
}

QForm random_finite_form(const Field& f, std::size_t rank) {
  std::uniform_int_distribution<long> e(1, f.p.get_si() - 1);
  std::vector<Rat> d;
  for (std::size_t i = 0; i < rank; ++i) d.push_back(e(rng));
  return make_form(f, d);
}

// all places that can carry a nontrivial symbol for a or b
std::vector<Int> relevant_places(const Rat& a, const Rat& b) {
  std::vector<Int> ps{0, 2};
  for (const auto& x : {a, b})
    for (const auto& p : detail::prime_factors(x.get_num() * x.get_den())) ps.push_back(p);
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return ps;
}

}  // namespace

TEST_CASE("Hilbert symbols: bimultiplicativity, symmetry, Steinberg, reciprocity") {
  std::vector<Int> places{0, 2, 3, 5, 7};
  for (int trial = 0; trial < 200; ++trial) {
    Rat a = random_rational(), b = random_rational(), c = random_rational();
    for (const auto& p : places) {
      CHECK(hilbert_symbol(a, b, p) == hilbert_symbol(b, a, p));
      CHECK(hilbert_symbol(a, b * c, p) == hilbert_symbol(a, b, p) * hilbert_symbol(a, c, p));
      CHECK(hilbert_symbol(a, -a, p) == 1);
      if (a != 1) CHECK(hilbert_symbol(a, 1 - a, p) == 1);
      CHECK(hilbert_symbol(a, b, p) * hilbert_symbol(a, b, p) == 1);
    }
    // product over all places is +1 (quadratic reciprocity in disguise)
    int prod = 1;
    for (const auto& p : relevant_places(a, b)) prod *= hilbert_symbol(a, b, p);
    CHECK(prod == 1);
  }
  // frozen values
  CHECK(hilbert_symbol(-1, -1, 0) == -1);
  CHECK(hilbert_symbol(-1, -1, 2) == -1);
  CHECK(hilbert_symbol(-1, -1, 3) == 1);
  CHECK(hilbert_symbol(2, 3, 2) == -1);
  CHECK(hilbert_symbol(2, 7, 7) == 1);   // 2 is a square mod 7
  CHECK(hilbert_symbol(3, 5, 5) == -1);  // 3 is not a square mod 5
}

TEST_CASE("square classes canonicalize") {
  Field q = Field::rational();
  CHECK(square_class(q, Rat(8, 18)).rep == 1);  // 8/18 = (2/3)^2
  CHECK(square_class(q, Rat(-12)).rep == -3);
  CHECK(square_class(q, Rat(50)).rep == 2);
  Field f7 = Field::finite(7);
  CHECK(least_nonresidue(7) == 3);
  CHECK(square_class(f7, 2).rep == 1);   // 2 = 3^2 mod 7
  CHECK(square_class(f7, 5).rep == 3);   // 5 is a nonresidue mod 7
  CHECK(square_class(Field::real(), Rat(-7, 2)).rep == -1);
  CHECK(square_class(Field::complex(), -5).rep == 1);
  CHECK_THROWS_AS(square_class(q, 0), AlgebraError);
}

TEST_CASE("field parsing") {
  CHECK(parse_field("C") == Field::complex());
  CHECK(parse_field("R") == Field::real());
  CHECK(parse_field("Q") == Field::rational());
  CHECK(parse_field("F7") == Field::finite(7));
  CHECK(parse_field("F2") == std::nullopt);   // even
  CHECK(parse_field("F9") == std::nullopt);   // composite
  CHECK(parse_field("F") == std::nullopt);
  CHECK(parse_field("banana") == std::nullopt);
  CHECK(Field::finite(13).str() == "F13");
}

TEST_CASE("representation counts are the ground truth for finite-field isometry") {
  for (const auto& pval : {5, 7}) {
    Field f = Field::finite(pval);
    for (int trial = 0; trial < 60; ++trial) {
      std::uniform_int_distribution<std::size_t> r(1, 3);
      std::size_t rank = r(rng);
      QForm a = random_finite_form(f, rank), b = random_finite_form(f, rank);
      bool same_counts = true;
      for (long c = 0; c < pval; ++c)
        same_counts = same_counts && representation_count(a, c) == representation_count(b, c);
      CHECK(isometric(a, b) == same_counts);
    }
  }
}

TEST_CASE("real and complex isometry") {
  Field r = Field::real(), c = Field::complex();
  CHECK(isometric(make_form(r, {1, 1, -1}), make_form(r, {2, 5, -3})));
  CHECK(!isometric(make_form(r, {1, 1, -1}), make_form(r, {1, -1, -1})));
  CHECK(isometric(make_form(c, {1, 1}), make_form(c, {-3, 7})));
  CHECK(!isometric(make_form(c, {1}), make_form(c, {1, 1})));
  CHECK(!isometric(make_form(r, {1}), make_form(c, {1})));
}

TEST_CASE("rational isometry distinguishes forms with equal rank, det, signature") {
  Field q = Field::rational();
  // <2,3> and <1,6>: same rank, determinant class, signature -- but the
  // 2-adic Hasse symbols differ, so they are not isometric
  QForm f1 = make_form(q, {2, 3}), f2 = make_form(q, {1, 6});
  CHECK(det_class(f1) == det_class(f2));
  CHECK(signature(f1) == signature(f2));
  CHECK(hasse_symbol(f1, 2) == -1);
  CHECK(hasse_symbol(f2, 2) == 1);
  CHECK(!isometric(f1, f2));
  // scaling entries by squares never changes the class
  CHECK(isometric(make_form(q, {1, 1, 1, 1, 1}),
                  orthogonal_sum(make_form(q, {1, 1, 1, 1}), make_form(q, {4}))));
  CHECK(isometric(make_form(q, {Rat(1, 2), 3}), make_form(q, {2, 27})));
}

TEST_CASE("isotropy over every supported field") {
  CHECK(is_isotropic(make_form(Field::complex(), {1, 1})));
  CHECK(!is_isotropic(make_form(Field::complex(), {1})));
  CHECK(is_isotropic(make_form(Field::real(), {1, -2})));
  CHECK(!is_isotropic(make_form(Field::real(), {1, 2, 3})));
  Field f5 = Field::finite(5);
  CHECK(is_isotropic(make_form(f5, {1, 1, 1})));    // rank 3 always
  CHECK(is_isotropic(make_form(f5, {1, 4})));       // -4 = 1 is a square
  CHECK(!is_isotropic(make_form(f5, {1, 2})));      // -2 = 3 is not
  Field q = Field::rational();
  CHECK(is_isotropic(make_form(q, {1, 2, -3})));    // 1 + 2 - 3 = 0
  CHECK(!is_isotropic(make_form(q, {1, 1})));       // definite
  CHECK(!is_isotropic(make_form(q, {1, 1, -7})));   // x^2+y^2 = 7z^2 impossible
  CHECK(is_isotropic(make_form(q, {1, 1, -2})));
  CHECK(is_isotropic(make_form(q, {1, 1, 1, -6})));     // 6 = 4 + 1 + 1
  CHECK(!is_isotropic(make_form(q, {1, 1, 1, -7})));    // 7 is not a 3-square sum
  CHECK(!is_isotropic(make_form(q, {1, 1, 1, 1})));     // definite rank 4
  CHECK(is_isotropic(make_form(q, {1, 1, 1, 1, -30})));  // rank 5 indefinite
  CHECK(represents(make_form(q, {1, 1, 1}), 6));
  CHECK(!represents(make_form(q, {1, 1}), 7));
}

TEST_CASE("Witt decomposition reassembles the original form") {
  std::vector<Field> fields{Field::complex(), Field::real(), Field::finite(5),
                            Field::finite(7)};
  for (const auto& f : fields) {
    for (int trial = 0; trial < 40; ++trial) {
      std::uniform_int_distribution<std::size_t> r(0, 4);
      std::size_t rank = r(rng);
      std::vector<Rat> d;
      for (std::size_t i = 0; i < rank; ++i) {
        if (f.kind == FieldKind::FinitePrime) {
          std::uniform_int_distribution<long> e(1, f.p.get_si() - 1);
          d.push_back(e(rng));
        } else {
          std::uniform_int_distribution<int> e(0, 1);
          d.push_back(e(rng) ? Rat(1 + (trial % 3)) : Rat(-(1 + (trial % 3))));
        }
      }
      QForm q = make_form(f, d);
      WittDecomposition wd = witt_decompose(q);
      QForm kernel = make_form(f, wd.kernel.kernel_diag);
      CHECK(!is_isotropic(kernel));
      QForm rebuilt = orthogonal_sum(kernel, hyperbolic_form(f, wd.hyperbolic_multiplicity));
      CHECK(isometric(q, rebuilt));
      CHECK(witt_class(q) == wd.kernel);
    }
  }
}

TEST_CASE("rational Witt classes via invariant stripping") {
  Field q = Field::rational();
  CHECK(witt_class(make_form(q, {1, -1})).is_trivial());
  CHECK(witt_decompose(make_form(q, {1, -1})).hyperbolic_multiplicity == 1);
  CHECK(witt_class(make_form(q, {1, 2, -3})) == witt_class(make_form(q, {6})));
  // definite forms are already anisotropic at any rank
  CHECK(witt_class(make_form(q, {1, 1, 1, 1})).rank == 4);
  // q + (-q) is totally hyperbolic; q + H keeps the class of q
  for (int trial = 0; trial < 60; ++trial) {
    QForm a = random_rational_form();
    CHECK(witt_class(orthogonal_sum(a, negate(a))).is_trivial());
    CHECK(witt_class(orthogonal_sum(a, hyperbolic_form(q, 1))) == witt_class(a));
    // the class record is isometry-invariant
    QForm shuffled = a;
    std::shuffle(shuffled.diag.begin(), shuffled.diag.end(), rng);
    shuffled = scale_form(4, shuffled);
    CHECK(witt_class(shuffled) == witt_class(a));
  }
}

TEST_CASE("anisotropic rational kernels keep their invariants") {
  Field q = Field::rational();
  WittClass w = witt_class(make_form(q, {1, 1, -7}));
  // x^2 + y^2 - 7 z^2 is anisotropic: 2-adically eps = 1 but (-1,-7)_2 = -1
  CHECK(w.rank == 3);
  CHECK(w.sig == 1);
  WittClass v = witt_class(make_form(q, {2, 3}));
  CHECK(v.rank == 2);
  CHECK(v.disc == square_class(q, -6));  // signed disc of <2,3>
  // eps is -1 at both 2 and 3 (their product over all places must be +1,
  // and the real place contributes +1 here)
  CHECK(v.hasse == std::vector<std::pair<Int, int>>{{2, -1}, {3, -1}});
}

TEST_CASE("GW elements: (rank, Witt class) separates classes") {
  for (const auto& f : {Field::real(), Field::finite(5), Field::finite(7)}) {
    for (int trial = 0; trial < 40; ++trial) {
      std::size_t r1 = 1 + trial % 3, r2 = 1 + (trial / 3) % 3;
      QForm a = f.kind == FieldKind::FinitePrime ? random_finite_form(f, r1)
                                                 : make_form(f, {1, trial % 2 ? 1 : -1});
      QForm b = f.kind == FieldKind::FinitePrime ? random_finite_form(f, r2)
                                                 : make_form(f, {trial % 3 ? 1 : -1});
      GWElement x = gw_sub(gw_of_form(a), gw_of_form(b));
      // x equals itself plus a hyperbolic difference that cancels
      GWElement y = gw_add(x, gw_sub(hyperbolic_element(f, 2), hyperbolic_element(f, 2)));
      CHECK(gw_eq(x, y));
      CHECK(gw_eq(gw_add(x, gw_neg(x)), gw_zero(f)));
      // adding <1> never fixes a class
      CHECK(!gw_eq(gw_add(x, gw_of_form(make_form(f, {1}))), x));
    }
  }
  // frozen: over R, <1,1> and H differ although ranks agree
  Field r = Field::real();
  CHECK(!gw_eq(gw_of_form(make_form(r, {1, 1})), hyperbolic_element(r, 1)));
  CHECK(gw_eq(gw_of_form(make_form(r, {1, -1})), hyperbolic_element(r, 1)));
  // over C rank is complete
  CHECK(gw_eq(gw_of_form(make_form(Field::complex(), {1, 1})),
              hyperbolic_element(Field::complex(), 1)));
}

TEST_CASE("Witt group of a finite field emerges from class arithmetic") {
  using mw::ab::FGAbGroup;
  CHECK(witt_group_model(7).group == FGAbGroup{{4}, 0});      // 7 = 3 mod 4
  CHECK(witt_group_model(11).group == FGAbGroup{{4}, 0});     // 11 = 3 mod 4
  CHECK(witt_group_model(5).group == FGAbGroup{{2, 2}, 0});   // 5 = 1 mod 4
  CHECK(witt_group_model(13).group == FGAbGroup{{2, 2}, 0});  // 13 = 1 mod 4
}

TEST_CASE("GW realizations: rank/hyperbolic/projection arrows are exact") {
  using namespace mw::ab;
  for (const auto& f : {Field::complex(), Field::real(), Field::finite(5),
                        Field::finite(7), Field::finite(13)}) {
    GWRealization re = gw_realization(f);
    CHECK(is_well_defined(re.rank_hom));
    CHECK(is_well_defined(re.h_hom));
    CHECK(is_well_defined(re.proj_hom));
    // Z --h--> GW --proj--> W --> 0 is exact
    CHECK(is_surjective(re.proj_hom));
    CHECK(exact_at(re.h_hom, re.proj_hom));
    // rank of the hyperbolic generator is 2
    FGAbHom rk_h = compose(re.rank_hom, re.h_hom);
    CHECK(rk_h.matrix[0][0] == 2);

    // coordinates are a homomorphism consistent with rank and Witt class
    auto sample = [&](int t) {
      if (f.kind == FieldKind::FinitePrime) {
        QForm a = random_finite_form(f, 1 + t % 3), b = random_finite_form(f, 1 + (t / 2) % 2);
        return gw_sub(gw_of_form(a), gw_of_form(b));
      }
      QForm a = make_form(f, {1, t % 2 ? 1 : -1});
      QForm b = make_form(f, {t % 3 ? 1 : -1});
      return gw_sub(gw_of_form(a), gw_of_form(b));
    };
    for (int t = 0; t < 30; ++t) {
      GWElement x = sample(t), y = sample(t + 11);
      auto cx = re.coords(x), cy = re.coords(y), cs = re.coords(gw_add(x, y));
      for (std::size_t i = 0; i < cx.size(); ++i) {
        Int d = re.gw.gen_order(i);
        Int diff = cx[i] + cy[i] - cs[i];
        CHECK((d == 0 ? diff == 0 : diff % d == 0));
      }
      // rank_hom reads off gw_rank
      Int rk = 0;
      for (std::size_t i = 0; i < cx.size(); ++i) rk += re.rank_hom.matrix[0][i] * cx[i];
      CHECK(rk == gw_rank(x));
      // proj kills exactly the classes with trivial Witt kernel
      std::vector<Int> w(re.witt.gen_count(), 0);
      for (std::size_t i = 0; i < re.witt.gen_count(); ++i) {
        for (std::size_t j = 0; j < cx.size(); ++j) w[i] += re.proj_hom.matrix[i][j] * cx[j];
        Int d = re.witt.gen_order(i);
        if (d != 0) {
          mpz_fdiv_r(w[i].get_mpz_t(), w[i].get_mpz_t(), d.get_mpz_t());
        }
      }
      bool proj_zero = true;
      for (const auto& v : w) proj_zero = proj_zero && v == 0;
      CHECK(proj_zero == gw_to_witt(x).is_trivial());
    }
    // h generates the kernel of proj: proj(h(1)) = 0
    FGAbHom ph = compose(re.proj_hom, re.h_hom);
    CHECK(hom_eq(ph, zero_hom(re.h_hom.source, re.proj_hom.target)));
  }
  CHECK_THROWS_AS(gw_realization(Field::rational()), AlgebraError);
  CHECK(!gw_finitely_generated(Field::rational()));
  CHECK(gw_finitely_generated(Field::finite(5)));
}

TEST_CASE("tensor products respect rank and interact with hyperbolics") {
  Field f5 = Field::finite(5);
  QForm a = make_form(f5, {1, 2}), h = hyperbolic_form(f5, 1);
  CHECK(tensor(a, h).rank() == 4);
  // q (x) H is always hyperbolic
  CHECK(witt_class(tensor(a, h)).is_trivial());
  GWElement prod = gw_mul(gw_of_form(a), gw_of_form(h));
  CHECK(gw_rank(prod) == 4);
  CHECK(gw_to_witt(prod).is_trivial());
}
