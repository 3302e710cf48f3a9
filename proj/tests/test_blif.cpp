#include <catch2/catch_amalgamated.hpp>

#include <celltune/blif.hpp>

#include "test_support.hpp"

using namespace celltune;

TEST_CASE("tiny fixture is a single and gate") {
  const aig g = parse_blif(ct_test::read_file(ct_test::fixture_path("tiny.blif")));
  REQUIRE(g.num_inputs() == 2);
  REQUIRE(g.num_outputs() == 1);
  REQUIRE(g.num_ands() == 1);
  REQUIRE(g.input_names()[0] == "a");
  REQUIRE(g.output_names()[0] == "f");
  for (unsigned p = 0; p < 4; ++p) {
    const bool a = p & 1, b = (p >> 1) & 1;
    REQUIRE(g.simulate({a, b})[0] == (a && b));
  }
}

TEST_CASE("mux fixture implements select semantics") {
  const aig g = parse_blif(ct_test::read_file(ct_test::fixture_path("mux.blif")));
  REQUIRE(g.num_inputs() == 3);
  REQUIRE(g.num_outputs() == 1);
  for (unsigned p = 0; p < 8; ++p) {
    const bool s = p & 1, a = (p >> 1) & 1, b = (p >> 2) & 1;
    REQUIRE(g.simulate({s, a, b})[0] == (s ? b : a));
  }
}

TEST_CASE("empty and constant covers") {
  const aig g = parse_blif(".inputs a\n"
                           ".outputs zero one none\n"
                           ".names one\n"
                           "1\n"
                           ".names zero\n"
                           "0\n"
                           ".names none\n"
                           ".end\n");
  const auto out = g.simulate({false});
  REQUIRE(out[0] == false);
  REQUIRE(out[1] == true);
  REQUIRE(out[2] == false);
}

TEST_CASE("a zero cover complements the sum of products") {
  const aig g = parse_blif(".inputs a b\n"
                           ".outputs f\n"
                           ".names a b f\n"
                           "1- 0\n"
                           "-1 0\n"
                           ".end\n");
  for (unsigned p = 0; p < 4; ++p) {
    const bool a = p & 1, b = (p >> 1) & 1;
    REQUIRE(g.simulate({a, b})[0] == (!a && !b));
  }
}

TEST_CASE("blocks may appear out of dependency order") {
  const aig g = parse_blif(".inputs a b c\n"
                           ".outputs f\n"
                           ".names t c f\n"
                           "11 1\n"
                           ".names a b t\n"
                           "11 1\n"
                           ".end\n");
  for (unsigned p = 0; p < 8; ++p) {
    const bool a = p & 1, b = (p >> 1) & 1, c = (p >> 2) & 1;
    REQUIRE(g.simulate({a, b, c})[0] == (a && b && c));
  }
}

TEST_CASE("latches cut into the combinational frame") {
  const aig g = parse_blif(".model counterish\n"
                           ".inputs en\n"
                           ".outputs out\n"
                           ".latch d q 0\n"
                           ".names en q d\n"
                           "11 1\n"
                           ".names q out\n"
                           "0 1\n"
                           ".end\n");
  // q joins the inputs, d joins the outputs after the declared ones
  REQUIRE(g.num_inputs() == 2);
  REQUIRE(g.input_names()[1] == "q");
  REQUIRE(g.num_outputs() == 2);
  REQUIRE(g.output_names()[0] == "out");
  REQUIRE(g.output_names()[1] == "d");
  for (unsigned p = 0; p < 4; ++p) {
    const bool en = p & 1, q = (p >> 1) & 1;
    const auto out = g.simulate({en, q});
    REQUIRE(out[0] == !q);
    REQUIRE(out[1] == (en && q));
  }
}

TEST_CASE("comments and continuations") {
  const aig g = parse_blif("# a comment\n"
                           ".inputs a \\\n"
                           "b\n"
                           ".outputs f # trailing comment\n"
                           ".names a b f\n"
                           "11 1\n"
                           ".end\n");
  REQUIRE(g.num_inputs() == 2);
  REQUIRE(g.simulate({true, true})[0] == true);
}

TEST_CASE("don't-care rows expand correctly") {
  const aig g = parse_blif(".inputs a b c\n"
                           ".outputs f\n"
                           ".names a b c f\n"
                           "1-0 1\n"
                           "01- 1\n"
                           ".end\n");
  for (unsigned p = 0; p < 8; ++p) {
    const bool a = p & 1, b = (p >> 1) & 1, c = (p >> 2) & 1;
    REQUIRE(g.simulate({a, b, c})[0] == ((a && !c) || (!a && b)));
  }
}

TEST_CASE("parse errors carry their line") {
  REQUIRE_THROWS_AS(parse_blif(".inputs a\n.gate foo\n"), unsupported_directive);
  try {
    parse_blif(".inputs a\n.subckt foo\n");
    FAIL("expected unsupported_directive");
  } catch (const unsupported_directive& e) {
    REQUIRE(e.line() == 2);
  }
  REQUIRE_THROWS_AS(parse_blif(".inputs a\n.outputs f\n.names a f\n2 1\n.end\n"),
                    syntax_error);
  REQUIRE_THROWS_AS(parse_blif(".inputs a\n.outputs f\n.names a f\n1 1\n0 0\n.end\n"),
                    syntax_error);
  REQUIRE_THROWS_AS(parse_blif(".inputs a\n.outputs f\n.end\n"), undefined_signal);
  REQUIRE_THROWS_AS(parse_blif(".inputs a\n.outputs f\n.names a missing f\n11 1\n.end\n"),
                    undefined_signal);
  REQUIRE_THROWS_AS(parse_blif("11 1\n"), syntax_error);
}

TEST_CASE("cycles and redefinitions are rejected") {
  REQUIRE_THROWS_AS(parse_blif(".inputs a\n"
                               ".outputs f\n"
                               ".names g a f\n11 1\n"
                               ".names f a g\n11 1\n"
                               ".end\n"),
                    syntax_error);
  REQUIRE_THROWS_AS(parse_blif(".inputs a b\n"
                               ".outputs f\n"
                               ".names a f\n1 1\n"
                               ".names b f\n1 1\n"
                               ".end\n"),
                    syntax_error);
  REQUIRE_THROWS_AS(parse_blif(".inputs a\n"
                               ".outputs a\n"
                               ".names a\n1\n"
                               ".end\n"),
                    syntax_error);
}

TEST_CASE("outputs may alias inputs directly") {
  const aig g = parse_blif(".inputs a\n.outputs a\n.end\n");
  REQUIRE(g.num_outputs() == 1);
  REQUIRE(g.simulate({true})[0] == true);
  REQUIRE(g.simulate({false})[0] == false);
}
