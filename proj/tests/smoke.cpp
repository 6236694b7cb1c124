#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "creol2ta/creol/parser.hpp"
TEST_CASE("parses minimal class") {
  creol2ta::DiagnosticList d;
  auto m = creol2ta::creol::parse_model("class C implements I begin op init == skip end", d);
  CHECK(m.classes.size() == 1);
}
