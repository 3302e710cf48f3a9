#include <catch2/catch_amalgamated.hpp>

#include <celltune/liberty.hpp>

#include "test_support.hpp"

using namespace celltune;

static liberty_import_result import_toy7() {
  return import_liberty(ct_test::read_file(ct_test::fixture_path("toy7.lib")));
}

TEST_CASE("toy7 imports six cells and skips the five-input pair") {
  const auto result = import_toy7();
  REQUIRE(result.library.name() == "toy7");
  REQUIRE(result.library.size() == 6);
  REQUIRE(result.report.kept ==
          std::vector<std::string>{"INVX1", "INVX2", "NAND2X1", "NOR2X1", "AND2X1", "XOR2X1"});
  REQUIRE(result.report.skipped.size() == 2);
  REQUIRE(result.report.skipped[0].cell == "AND5X1");
  REQUIRE(result.report.skipped[0].reason == "more than 4 inputs");
  REQUIRE(result.report.skipped[1].cell == "NAND5X1");
}

TEST_CASE("toy7 hand-audited values") {
  const auto lib = import_toy7().library;
  const auto tol = Catch::Matchers::WithinAbs(0.0, 1e-9);

  const cell& invx1 = lib.at(0);
  REQUIRE(invx1.name == "INVX1");
  REQUIRE(invx1.is_inverter());
  REQUIRE(invx1.area == 1.0);
  REQUIRE(invx1.input_caps[0] == 1.0);
  // two-point fit of values (1.0, 2.0) at loads (1.0, 2.0)
  REQUIRE_THAT(invx1.intrinsic[0] - 1.0, tol);
  REQUIRE_THAT(invx1.slope[0] - 1.0, tol);

  const cell& invx2 = lib.at(1);
  REQUIRE(invx2.area == 2.0);
  REQUIRE(invx2.input_caps[0] == 2.0);
  // rise (0.8, 1.3) and fall (1.2, 1.7) average to (1.0, 1.5)
  REQUIRE_THAT(invx2.intrinsic[0] - 1.0, tol);
  REQUIRE_THAT(invx2.slope[0] - 0.5, tol);

  const cell& nand2 = lib.at(2);
  REQUIRE(nand2.function == 0b0111);
  REQUIRE(nand2.pins == std::vector<std::string>{"A", "B"});
  REQUIRE_THAT(nand2.intrinsic[0] - 1.0, tol);
  REQUIRE_THAT(nand2.slope[0] - 1.0, tol);
  // constant table: slope collapses to zero
  REQUIRE_THAT(nand2.intrinsic[1] - 1.5, tol);
  REQUIRE(nand2.slope[1] == 0.0);

  const cell& nor2 = lib.at(3);
  REQUIRE(nor2.function == 0b0001);
  REQUIRE_THAT(nor2.intrinsic[0] - 1.2, tol);
  REQUIRE_THAT(nor2.slope[0] - 1.0, tol);
  // three-point least squares: values (1.0, 1.9, 3.2) at loads (1, 2, 3)
  REQUIRE_THAT(nor2.intrinsic[1] - 1.0, tol);
  REQUIRE_THAT(nor2.slope[1] - 1.1, tol);

  const cell& and2 = lib.at(4);
  REQUIRE(and2.function == 0b1000);
  REQUIRE(and2.area == 3.0);
  REQUIRE_THAT(and2.intrinsic[0] - 2.0, tol);
  REQUIRE_THAT(and2.slope[0] - 1.0, tol);

  const cell& xor2 = lib.at(5);
  REQUIRE(xor2.function == 0b0110);
  REQUIRE(xor2.area == 5.0);
  REQUIRE(xor2.input_caps == std::vector<double>{2.0, 2.0});
  REQUIRE_THAT(xor2.intrinsic[0] - 2.5, tol);
  REQUIRE_THAT(xor2.slope[0] - 2.0, tol);
  // rise-only arc uses the rise table alone
  REQUIRE_THAT(xor2.intrinsic[1] - 2.5, tol);
  REQUIRE_THAT(xor2.slope[1] - 2.0, tol);
}

TEST_CASE("sequential and malformed cells are skipped with reasons") {
  const std::string text = R"(
library (mixed) {
  cell (DFF) {
    area : 4.0;
    ff (IQ, IQN) { next_state : "D"; }
    pin (D) { direction : input; capacitance : 1.0; }
    pin (Q) { direction : output; function : "IQ"; }
  }
  cell (NOFUNC) {
    area : 1.0;
    pin (A) { direction : input; capacitance : 1.0; }
    pin (Y) { direction : output; }
  }
  cell (TRI) {
    area : 1.0;
    pin (A) { direction : input; capacitance : 1.0; }
    pin (EN) { direction : input; capacitance : 1.0; }
    pin (Y) { direction : output; function : "A"; three_state : "!EN"; }
  }
  cell (GOODINV) {
    area : 1.0;
    pin (A) { direction : input; capacitance : 1.0; }
    pin (Y) { direction : output; function : "!A"; }
  }
  cell (GOODBUF) {
    area : 1.5;
    pin (A) { direction : input; capacitance : 1.0; }
    pin (Y) { direction : output; function : "A"; }
  }
}
)";
  const auto result = import_liberty(text);
  REQUIRE(result.library.size() == 2);
  REQUIRE(result.report.kept == std::vector<std::string>{"GOODINV", "GOODBUF"});
  REQUIRE(result.report.skipped.size() == 3);
  REQUIRE(result.report.skipped[0].reason == "sequential cell");
  REQUIRE(result.report.skipped[1].reason == "no function");
  REQUIRE(result.report.skipped[2].reason == "tristate output");
  // pins without arcs fall back to zero delay, with a warning
  REQUIRE_FALSE(result.report.warnings.empty());
}

TEST_CASE("an import with no survivors is an error") {
  const std::string text = R"(
library (empty) {
  cell (WIDE) {
    area : 1.0;
    pin (A) { direction : input; capacitance : 1.0; }
    pin (B) { direction : input; capacitance : 1.0; }
    pin (C) { direction : input; capacitance : 1.0; }
    pin (D) { direction : input; capacitance : 1.0; }
    pin (E) { direction : input; capacitance : 1.0; }
    pin (Y) { direction : output; function : "A&B&C&D&E"; }
  }
}
)";
  REQUIRE_THROWS_AS(import_liberty(text), empty_library);
}

TEST_CASE("lexical and structural errors carry a line") {
  REQUIRE_THROWS_AS(import_liberty("library (x) { cell (A) { area : 1.0 } }"), syntax_error);
  REQUIRE_THROWS_AS(import_liberty("library (x) {"), syntax_error);
  REQUIRE_THROWS_AS(import_liberty("not_a_library (x) { }"), syntax_error);
  try {
    import_liberty("library (x) {\n  area ; \n}");
    FAIL("expected syntax_error");
  } catch (const syntax_error& e) {
    REQUIRE(e.line() == 2);
  }
}

TEST_CASE("unknown groups produce warnings, not failures") {
  const std::string text = R"(
library (warned) {
  operating_conditions (typical) { process : 1; }
  cell (I1) {
    area : 1.0;
    pin (A) { direction : input; capacitance : 1.0; }
    pin (Y) { direction : output; function : "!A"; }
  }
  cell (I2) {
    area : 2.0;
    pin (A) { direction : input; capacitance : 1.0; }
    pin (Y) { direction : output; function : "!A"; }
  }
}
)";
  const auto result = import_liberty(text);
  REQUIRE(result.library.size() == 2);
  bool warned = false;
  for (const auto& w : result.report.warnings) {
    warned |= w.find("operating_conditions") != std::string::npos;
  }
  REQUIRE(warned);
}
