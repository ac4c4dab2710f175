#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mw/symbols.hpp"

using namespace mw::sym;
using namespace mw::ab;
using mw::qf::Field;

TEST_CASE("atom evaluation over each base field") {
  Field c = Field::complex(), r = Field::real(), f5 = Field::finite(5),
        f7 = Field::finite(7), q = Field::rational();

  CHECK(evaluated_group(atom_evaluation(atom_gw(), c)) == make_free(1));
  CHECK(evaluated_group(atom_evaluation(atom_w(), c)) == make_cyclic(2));
  CHECK(evaluated_group(atom_evaluation(atom_km1(), c)) == FGAbGroup{});
  CHECK(evaluated_group(atom_evaluation(atom_sq(), c)) == FGAbGroup{});

  CHECK(evaluated_group(atom_evaluation(atom_gw(), r)) == make_free(2));
  CHECK(evaluated_group(atom_evaluation(atom_w(), r)) == make_free(1));
  CHECK(evaluated_group(atom_evaluation(atom_km1(), r)) == make_cyclic(2));
  CHECK(evaluated_group(atom_evaluation(atom_sq(), r)) == FGAbGroup{});

  CHECK(evaluated_group(atom_evaluation(atom_gw(), f5)) == FGAbGroup{{2}, 1});
  CHECK(evaluated_group(atom_evaluation(atom_w(), f5)) == FGAbGroup{{2, 2}, 0});
  CHECK(evaluated_group(atom_evaluation(atom_w(), f7)) == make_cyclic(4));
  CHECK(evaluated_group(atom_evaluation(atom_km1(), f7)) == make_cyclic(6));
  CHECK(evaluated_group(atom_evaluation(atom_sq(), f7)) == make_cyclic(3));
  CHECK(evaluated_group(atom_evaluation(atom_sq(), f5)) == make_cyclic(2));

  // field-independent atoms
  for (const auto& f : {c, r, f5, q}) {
    CHECK(evaluated_group(atom_evaluation(atom_z(), f)) == make_free(1));
    CHECK(evaluated_group(atom_evaluation(atom_twoz(), f)) == make_free(1));
    CHECK(evaluated_group(atom_evaluation(atom_zmod(24), f)) == make_cyclic(24));
    CHECK(evaluated_group(atom_evaluation(atom_twozmod(24), f)) == make_cyclic(24));
  }

  // over Q the form-theoretic atoms have no finitely generated model
  for (const auto& a : {atom_gw(), atom_w(), atom_km1(), atom_sq()}) {
    Evaluation e = atom_evaluation(a, q);
    REQUIRE(std::holds_alternative<NotFinitelyGenerated>(e));
    CHECK(std::get<NotFinitelyGenerated>(e).field == q);
  }
  CHECK(evaluation_str(atom_evaluation(atom_gw(), q)) ==
        "not finitely generated (GW over Q)");
}

TEST_CASE("expression sums evaluate to direct sums") {
  Field f13 = Field::finite(13);
  GroupExpr e = expr_sum(GroupExpr::single(atom_w()), GroupExpr::single(atom_km1()));
  // W(F13) = Z/2 + Z/2, KM1(F13) = Z/12 -> merged invariant factors
  CHECK(evaluated_group(evaluate(e, f13)) == FGAbGroup{{2, 2, 12}, 0});
  GroupExpr z2z = expr_sum(GroupExpr::single(atom_twoz()), GroupExpr::single(atom_z()));
  CHECK(evaluated_group(evaluate(z2z, f13)) == make_free(2));
  // one bad summand poisons the whole expression
  GroupExpr with_gw = expr_sum(z2z, GroupExpr::single(atom_gw()));
  CHECK(std::holds_alternative<NotFinitelyGenerated>(evaluate(with_gw, Field::rational())));
  GroupExpr with_unknown = expr_sum(z2z, GroupExpr::single(atom_unknown()));
  CHECK(std::holds_alternative<UnknownValue>(evaluate(with_unknown, f13)));
  CHECK(!with_unknown.is_known());
  CHECK(with_unknown.str() == "Z + 2Z + unknown");
}

TEST_CASE("expression text round-trips") {
  for (const std::string s :
       {"0", "GW", "W", "Z", "2Z", "KM1", "SQ", "Z/24", "2Z/48", "2Z + W", "Z + 2Z",
        "2Z + KM1 + SQ", "Z/2 + Z/24", "unknown", "2Z + unknown"}) {
    auto e = parse_expr(s);
    REQUIRE(e);
    CHECK(e->str() == s);
    CHECK(parse_expr(e->str()) == e);
  }
  // whitespace and ordering normalize
  CHECK(parse_expr(" W +  2Z ")->str() == "2Z + W");
  CHECK(parse_expr("Z/24")->atoms[0] == atom_zmod(24));
  CHECK(parse_expr("2Z/48")->atoms[0] == atom_twozmod(24));
  // rejects
  CHECK(!parse_expr(""));
  CHECK(!parse_expr("Z/"));
  CHECK(!parse_expr("Z/1"));
  CHECK(!parse_expr("2Z/47"));  // odd: not of the form 2Z/2n
  CHECK(!parse_expr("GW + "));
  CHECK(!parse_expr("Q"));
  CHECK(!parse_expr("Z//2"));
}

TEST_CASE("marked inclusions have index two") {
  Field r = Field::real(), f13 = Field::finite(13), f5 = Field::finite(5);
  // 2Z inside Z
  auto tz = atom_inclusion(atom_twoz(), r);
  REQUIRE(tz);
  CHECK(is_injective(*tz));
  CHECK(cokernel(*tz).group == make_cyclic(2));
  // squares inside units: F13: Z/6 -> Z/12 by doubling
  auto sq13 = atom_inclusion(atom_sq(), f13);
  REQUIRE(sq13);
  CHECK(is_injective(*sq13));
  CHECK(cokernel(*sq13).group == make_cyclic(2));
  auto sq5 = atom_inclusion(atom_sq(), f5);
  REQUIRE(sq5);
  CHECK(cokernel(*sq5).group == make_cyclic(2));
  // real squares: 0 -> Z/2, still index two
  auto sqr = atom_inclusion(atom_sq(), r);
  REQUIRE(sqr);
  CHECK(cokernel(*sqr).group == make_cyclic(2));
  // complex: degenerate
  auto sqc = atom_inclusion(atom_sq(), Field::complex());
  REQUIRE(sqc);
  CHECK(cokernel(*sqc).group == FGAbGroup{});
  // no inclusion attached to plain atoms
  CHECK(!atom_inclusion(atom_z(), r));
  CHECK(!atom_inclusion(atom_gw(), r));
}

TEST_CASE("atom printing") {
  CHECK(atom_gw().str() == "GW");
  CHECK(atom_twozmod(24).str() == "2Z/48");
  CHECK(atom_zmod(24).str() == "Z/24");
  CHECK(GroupExpr::zero().str() == "0");
  CHECK(GroupExpr::single(atom_unknown()).str() == "unknown");
}
