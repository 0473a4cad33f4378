#include "doctest.h"
#include "linform/parser.hpp"
#include "linform/report.hpp"

using namespace linform;

TEST_CASE("empty trace serializes with empty iterations") {
  RewriteTrace trace;
  const std::string json = emit_json_report(trace, std::nullopt, "model.nlm");
  CHECK(json.find("\"input\": \"model.nlm\"") != std::string::npos);
  CHECK(json.find("\"iterations\": []") != std::string::npos);
  CHECK(json.find("\"fn\": null") != std::string::npos);
  CHECK(json.find("\"verify\": null") != std::string::npos);
}

TEST_CASE("bilinear iteration lists its auxiliaries") {
  const ParseResult r = parse_model(
      "var b binary\nvar x continuous [0, 5]\nminimize: 2*b*x + x\n");
  REQUIRE(r.ok());
  const FixpointResult fx = run_fixpoint(*r.model);
  REQUIRE(fx.trace.iterations.size() == 1);
  const std::string json = emit_json_report(fx.trace, std::nullopt, "m.nlm");
  CHECK(json.find("\"kind\": \"bilinear\"") != std::string::npos);
  CHECK(json.find("\"_aux_bilinear_0\"") != std::string::npos);
  // the four exact inequalities
  CHECK(fx.trace.iterations[0].aux_constraints.size() == 4);
  CHECK(fx.trace.iterations[0].aux_vars.size() == 1);
}

TEST_CASE("monotone rewrite records the post-solve map") {
  const ParseResult r = parse_model(
      "var x continuous [0, 5]\nminimize: exp(0.5*x + 1)\ns.t. c: x >= 1\n");
  REQUIRE(r.ok());
  const FixpointResult fx = run_fixpoint(*r.model);
  REQUIRE(fx.trace.post_solve.has_value());
  const std::string json = emit_json_report(fx.trace, std::nullopt, "m.nlm");
  CHECK(json.find("\"fn\": \"exp\"") != std::string::npos);
  CHECK(json.find("\"direction\": \"increasing\"") != std::string::npos);
}

TEST_CASE("report bytes are reproducible") {
  const ParseResult r = parse_model(
      "var b binary\nvar x continuous [0, 5]\nminimize: 2*b*x + x\n");
  REQUIRE(r.ok());
  const FixpointResult a = run_fixpoint(*r.model);
  const FixpointResult b = run_fixpoint(*r.model);
  CHECK(emit_json_report(a.trace, std::nullopt, "m.nlm") ==
        emit_json_report(b.trace, std::nullopt, "m.nlm"));
}
