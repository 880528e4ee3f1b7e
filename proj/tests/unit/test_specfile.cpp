#include "pwave/pipeline.hpp"
#include "pwave/specfile.hpp"

#include <doctest.h>

#include <string>

using namespace pwave;

namespace {

const char* kMinimal = R"({
  "model": {
    "n": 2,
    "profile": {"constant": [[2, 0], [0, 2]]}
  }
})";

std::vector<Diagnostic> diagnostics_of(const std::string& text) {
  try {
    parse_spec(text);
  } catch (const SpecError& e) {
    return e.diagnostics();
  }
  return {};
}

}  // namespace

TEST_SUITE("specfile") {

TEST_CASE("minimal document gets every default") {
  const auto s = parse_spec(kMinimal);
  CHECK(s.model.n() == 2);
  CHECK(s.model.profile().is_constant());
  CHECK_FALSE(s.has_gamma);
  CHECK_FALSE(s.gamma().has_value());
  CHECK(s.checks.samples == 32);
  CHECK(s.checks.tolerances.flatness == 1e-7);
  CHECK(s.checks.tolerances.similarity == 1e-8);
  CHECK(s.checks.grid.count == 4001);
  CHECK(s.checks.word_length == 4);
}

TEST_CASE("canonical form round-trips") {
  const auto ex = build_example("example2", {true, 2.0});
  CheckSettings c;
  c.samples = 12;
  c.seed = 99;
  c.tolerances.gauge = 3e-9;
  const auto s = spec_from_gamma(*ex.gamma, c);
  const Json j = spec_to_json(s);
  const auto back = parse_spec(j.dump(2));
  CHECK(spec_to_json(back) == j);
  CHECK(back.checks.seed == 99);
  CHECK(back.checks.tolerances.gauge == 3e-9);
  REQUIRE(back.gamma().has_value());
  CHECK(back.gamma0.size() == ex.gamma->gamma0.size());
  CHECK(back.gamma_hat->t_L == ex.gamma_hat.t_L);
}

TEST_CASE("diagnostics carry pointers and line numbers") {
  const std::string unknown = "{\n  \"model\": {\n    \"n\": 1,\n    \"profile\": {\"constant\": [[1]]},\n    \"colour\": 3\n  }\n}";
  auto d = diagnostics_of(unknown);
  REQUIRE(d.size() == 1);
  CHECK(d[0].pointer == "/model/colour");
  CHECK(d[0].line == 5);
  CHECK(d[0].format().find("line 5") != std::string::npos);

  const std::string asym = "{\"model\": {\"n\": 2,\n \"profile\": {\"constant\": [[1, 2],\n [3, 1]]}}}";
  d = diagnostics_of(asym);
  REQUIRE_FALSE(d.empty());
  CHECK(d[0].pointer == "/model/profile/constant/0/1");

  d = diagnostics_of("{\n  \"model\": {\n    \"n\": 1,\n    \"profile\": {\"constant\": [[1]]},,\n  }\n}");
  REQUIRE(d.size() == 1);
  CHECK(d[0].line == 4);

  d = diagnostics_of(R"({"model": {"n": 0, "profile": {"constant": []}}})");
  REQUIRE_FALSE(d.empty());
  CHECK(d[0].pointer == "/model/n");

  d = diagnostics_of(R"({"model": {"n": 1, "profile": {"constant": [[1]]}},
    "gamma": {"gamma0": [{"alpha": [1], "beta": [0], "z": 0}, {"alpha": [0], "beta": [1], "z": 0}]}})");
  REQUIRE_FALSE(d.empty());
  CHECK(d[0].pointer == "/gamma/gamma0");

  d = diagnostics_of(R"({"model": {"n": 1, "profile": {"constant": [[1]]}}, "checks": {"samples": -3, "fd_step": 0}})");
  CHECK(d.size() == 2);
}

TEST_CASE("json_pointer_lines") {
  const auto lines = json_pointer_lines("{\n \"a\": [1,\n 2],\n \"b\": {\"c\": true}\n}");
  CHECK(lines.at("") == 1);
  CHECK(lines.at("/a") == 2);
  CHECK(lines.at("/a/1") == 3);
  CHECK(lines.at("/b/c") == 4);
}

TEST_CASE("load_spec reports unreadable files") {
  CHECK_THROWS_AS(load_spec("/nonexistent/dir/spec.json"), IoError);
}

TEST_CASE("sha256 and report rendering") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  RunResult r;
  r.report = Json{{"zeta", 1}, {"alpha", {{"y", 2}, {"b", 3}}}};
  r.timings = Json{{"total", 0.5}};
  const auto text = render_report(r);
  CHECK(text.back() == '\n');
  CHECK(text.find("\"alpha\"") < text.find("\"zeta\""));
  CHECK(text.find("\"b\"") < text.find("\"y\""));
  CHECK(Json::parse(text).at("timings").at("total") == 0.5);

  CsvTable t{"x.csv", {"t", "d"}, {{0.1, 2.0}, {-1.0, 1e-20}}};
  const auto csv = t.render();
  CHECK(csv.rfind("t,d\n", 0) == 0);
  CHECK(csv.find("0.10000000000000001,2") != std::string::npos);
}

TEST_CASE("run_checks on a flat model passes the flatness stage") {
  const auto s = parse_spec(kMinimal);
  Stages only;
  only.action = only.quotient = only.gauge = false;
  const auto r = run_checks(s, only, "inline", sha256_hex(kMinimal));
  CHECK(r.pass);
  CHECK(r.report.at("status") == "pass");
  CHECK(r.report.at("stages").contains("flatness"));
  CHECK_FALSE(r.report.at("stages").contains("gauge"));
}

TEST_CASE("example runs are deterministic and the literal obstruction is reported") {
  CheckSettings c;
  c.samples = 8;
  const auto a = run_example("example2", {false, 1.0}, c);
  const auto b = run_example("example2", {false, 1.0}, c);
  CHECK(a.report == b.report);
  CHECK_FALSE(a.pass);
  CHECK(a.report.contains("adjusted_rerun"));
  const auto adj = run_example("example2", {true, 1.0}, c);
  CHECK(adj.pass);
  bool has_transversality = false;
  for (const auto& t : adj.tables) has_transversality |= t.file_name == "transversality.csv";
  CHECK(has_transversality);
}

}  // TEST_SUITE
