#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mw/records.hpp"

using namespace mw::io;

TEST_CASE("record files parse into typed blocks with ordered fields") {
  std::string text =
      "# header comment\n"
      "record alpha\n"
      "  kind = T\n"
      "  note = has = signs = inside\n"
      "  case = 1 -> GW\n"
      "  case = 0 -> 0\n"
      "end\n"
      "\n"
      "record beta\n"
      "  n = -3\n"
      "end\n";
  auto recs = parse_records(text);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].type == "alpha");
  CHECK(recs[0].get("kind") == "T");
  CHECK(recs[0].get("note") == "has = signs = inside");
  CHECK(recs[0].get_all("case") == std::vector<std::string>{"1 -> GW", "0 -> 0"});
  CHECK(!recs[0].has("n"));
  CHECK(recs[1].get_int("n") == -3);
  CHECK(recs[1].get_opt("missing") == std::nullopt);
}

TEST_CASE("malformed input is rejected with a location") {
  CHECK_THROWS_AS(parse_records("record a\nrecord b\nend\n"), ParseError);
  CHECK_THROWS_AS(parse_records("end\n"), ParseError);
  CHECK_THROWS_AS(parse_records("record a\n  key value\nend\n"), ParseError);
  CHECK_THROWS_AS(parse_records("record a\n  k = v\n"), ParseError);
  CHECK_THROWS_AS(parse_records("record\n"), ParseError);
  try {
    parse_records("record a\n  = v\nend\n", "f.mwt");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("f.mwt:2") != std::string::npos);
  }
}

TEST_CASE("duplicate key is an error only through the single-value accessor") {
  auto recs = parse_records("record a\n  k = 1\n  k = 2\nend\n");
  CHECK_THROWS_AS(recs[0].get("k"), ParseError);
  CHECK(recs[0].get_all("k").size() == 2);
}
