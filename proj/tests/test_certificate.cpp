#include <catch_amalgamated.hpp>

#include "grpcert/certificate.hpp"

using namespace grpcert;

namespace {

const char* kS4 = R"J({
  "version": 1,
  "meta": {"shape": "2^2:S3", "description": "normalizer of the Klein four-group in S4", "tight": true},
  "group": {"backend": "permutation", "degree": 4, "generators": {"a": "(1 2)", "b": "(1 2 3 4)"}},
  "define": {"e1": "b^2", "e2": "e1^a", "e3": "e1 e2"},
  "checks": [
    {"id": "E", "type": "check_elementary_abelian", "gens": ["e1", "e2"], "p": 2, "order": 4},
    {"id": "pure", "type": "check_purity", "gens": ["e1", "e2"], "base": "e1",
     "witnesses": [{"element": "e2", "conjugator": "a"}, {"element": "e3", "conjugator": "a^b"}]},
    {"id": "norm", "type": "check_normalizes", "actors": ["a", "b"], "subgroup": ["e1", "e2"]},
    {"id": "cent", "type": "check_centralizes", "actors": ["e1", "e2"], "targets": ["e3"]},
    {"id": "auts", "type": "count_induced_automorphisms", "actors": ["a", "b"], "subgroup": ["e1", "e2"], "count": 6}
  ],
  "bound": {"product": ["E", "auts"], "subgroup": ["a", "b"]}
})J";

Certificate cert(const std::string& text) { return Certificate::from_text(text, "test.json"); }

CertificateReport run(const std::string& text, VerifyOptions opts = {}) { return verify_certificate(cert(text), opts); }

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

const CheckRecord& record(const CertificateReport& r, const std::string& id) {
  for (const CheckRecord& c : r.checks) {
    if (c.id == id) return c;
  }
  FAIL("no check " << id);
  return r.checks.front();
}

}  // namespace

TEST_CASE("normalizer replay in S4", "[certificate]") {
  const Certificate c = cert(kS4);
  const auto r = verify_certificate(c);
  INFO(r.ndjson());
  REQUIRE(r.passed);
  CHECK(r.exit_code() == 0);
  REQUIRE(r.bound);
  CHECK(*r.bound == 24);
  CHECK(r.shape_order == BigInt(24));
  CHECK(r.relation == "equal");
  const auto s = oracle_soundness(c, r);
  CHECK(s.checked);
  CHECK(s.passed);
  CHECK(s.true_order == 24);
  // Reports are byte-identical across runs.
  CHECK(r.ndjson() == verify_certificate(c).ndjson());
}

TEST_CASE("failing witness is isolated", "[certificate]") {
  const auto r = run(replace(kS4, R"J("conjugator": "a^b")J", R"J("conjugator": "b")J"));
  CHECK_FALSE(r.passed);
  CHECK(r.exit_code() == 1);
  for (const CheckRecord& c : r.checks) CHECK((c.status == CheckStatus::pass) == (c.id != "pure"));
  CHECK(r.first_failure().rfind("pure", 0) == 0);
  CHECK_FALSE(r.bound);
}

TEST_CASE("every corrupted witness byte fails the purity check", "[certificate][property]") {
  const std::string text = kS4;
  const std::string witness = R"J("conjugator": "a^b")J";
  const std::size_t start = text.find(witness) + std::string(R"J("conjugator": ")J").size();
  for (std::size_t i = start; i < start + 3; ++i) {
    std::string bad = text;
    bad[i] = 'Z';
    const auto r = run(bad);
    INFO(bad.substr(start - 2, 8));
    CHECK(r.exit_code() == 1);
    CHECK(record(r, "pure").status != CheckStatus::pass);
  }
}

TEST_CASE("failed definitions abort dependent checks only", "[certificate]") {
  const auto r = run(replace(kS4, R"J("e3": "e1 e2")J", R"J("e3": "e1 q")J"));
  CHECK_FALSE(r.passed);
  CHECK(r.definition_failures.size() == 1);
  CHECK(record(r, "E").status == CheckStatus::pass);
  CHECK(record(r, "pure").status == CheckStatus::error);
  CHECK(record(r, "cent").status == CheckStatus::error);
  CHECK(record(r, "cent").detail.find("e3") != std::string::npos);
  CHECK(record(r, "auts").status == CheckStatus::pass);
}

TEST_CASE("empty check list", "[certificate]") {
  const auto r = run(R"J({"version": 1, "group": {"backend": "permutation", "degree": 3, "generators": {}}, "checks": []})J");
  CHECK(r.passed);
  CHECK(r.bound == BigInt(1));
  CHECK(r.warnings.size() == 1);
}

TEST_CASE("schema errors", "[certificate][schema]") {
  CHECK_THROWS_AS(cert(replace(kS4, R"J("version": 1)J", R"J("version": 2)J")), SchemaError);
  CHECK_THROWS_AS(cert(replace(kS4, R"J("version": 1,)J", R"J("version": 1, "extra": 0,)J")), SchemaError);
  CHECK_THROWS_AS(cert(replace(kS4, R"J("p": 2,)J", R"J("p": 2, "q": 1,)J")), SchemaError);
  CHECK_THROWS_AS(cert(replace(kS4, R"J("p": 2,)J", R"J("p": "2",)J")), SchemaError);
  CHECK_THROWS_AS(cert(replace(kS4, "check_normalizes", "check_normalises")), SchemaError);
  CHECK_THROWS_AS(cert(replace(kS4, R"J(["E", "auts"])J", R"J(["E", "norm"])J")), SchemaError);
  CHECK_THROWS_AS(cert(replace(kS4, R"J(["E", "auts"])J", R"J(["E", "nope"])J")), SchemaError);
  CHECK_THROWS_AS(cert(replace(kS4, R"J("e2": "e1^a")J", R"J("a": "e1^a")J")), SchemaError);
  CHECK_THROWS_AS(cert(replace(kS4, R"J("b": "(1 2 3 4)")J", R"J("b": "(1 2 3 5)")J")), SchemaError);
  CHECK_THROWS_AS(cert(replace(kS4, R"J("id": "norm")J", R"J("id": "E")J")), SchemaError);
  try {
    cert(replace(kS4, R"J("p": 2,)J", R"J("p": 2)J"));
    FAIL("malformed JSON accepted");
  } catch (const ParseError& e) {
    CHECK(e.offset() > 100);
  }
}

TEST_CASE("cap and shape comparisons", "[certificate]") {
  const auto capped = run(kS4, VerifyOptions{.cap = 3});
  CHECK_FALSE(capped.passed);
  CHECK(capped.exit_code() == 3);
  CHECK(record(capped, "E").status == CheckStatus::cap);

  const auto above = run(replace(kS4, R"J("shape": "2^2:S3")J", R"J("shape": "S3")J"));
  CHECK_FALSE(above.passed);
  CHECK(above.relation == "above");
  const auto below = run(replace(kS4, R"J("shape": "2^2:S3")J", R"J("shape": "S5")J"));
  CHECK(below.passed);
  CHECK(below.relation == "below");
}

TEST_CASE("every check type through the schema", "[certificate]") {
  const char* text = R"J({
    "version": 1,
    "group": {"backend": "permutation", "degree": 4, "generators": {"a": "(1 2)", "b": "(1 2 3 4)"}},
    "targets": {"C2": {"backend": "permutation", "degree": 2, "generators": {"t": "(1 2)"}}},
    "define": {"v1": "(b^2)^a", "c": "[a, b]"},
    "checks": [
      {"id": "ext", "type": "check_ext_lemma", "subgroup": ["v1"], "element": "b", "prime_power": {"p": 2, "n": 2}, "factor": 4, "bound": 8},
      {"id": "orbit", "type": "check_orbit_divisibility", "actors": ["a", "b"], "seed": "v1", "orbit": 3},
      {"id": "chain", "type": "check_hom_chain", "levels": [
         {"generators": ["a"], "map": {"target": "C2", "images": ["t"]}, "image": 2},
         {"generators": ["a b a^-1 b^-1", "b^2 a b^-2 a"], "conjugation": ["b^2", "b^2^a"], "image": 3},
         {"generators": ["b^2", "b^2^a"]}], "terminal_order": 4},
      {"id": "excl", "type": "exclusion_search", "candidates": {"order": 2}, "probes": ["x", "a x"], "orders": [1, 2], "expect": 3},
      {"id": "rel", "type": "check_relators", "presentation": "A5", "binding": {"a": "v1", "b": "b"}},
      {"id": "ord", "type": "check_element_order", "element": "c", "order": 3},
      {"id": "cl", "type": "check_closure_order", "gens": ["a", "b"], "order": "24"}
    ],
    "bound": {"product": ["chain"], "subgroup": ["a", "b"]}
  })J";
  const auto r = run(text);
  INFO(r.ndjson());
  CHECK(record(r, "ext").status == CheckStatus::pass);
  CHECK(record(r, "ext").bound == BigInt(8));
  CHECK(record(r, "orbit").status == CheckStatus::pass);
  CHECK(record(r, "chain").status == CheckStatus::pass);
  CHECK(record(r, "chain").bound == BigInt(24));
  CHECK(record(r, "excl").status == CheckStatus::pass);
  // S4 does not satisfy the A5 relators with these images.
  CHECK(record(r, "rel").status == CheckStatus::fail);
  CHECK(record(r, "ord").status == CheckStatus::pass);
  CHECK(record(r, "cl").status == CheckStatus::pass);
}

TEST_CASE("odd extension and image certification through the schema", "[certificate]") {
  const char* text = R"J({
    "version": 1,
    "group": {"backend": "matrix", "dimension": 3, "prime": 3, "generators": {
      "x": "[[1,0,1],[0,1,0],[0,0,1]]", "y": "[[1,1,0],[0,1,0],[0,0,1]]", "l": "[[1,0,0],[0,1,1],[0,0,1]]"}},
    "checks": [
      {"id": "odd", "type": "check_odd_ext", "p": 3, "x": "x", "y": "y", "l": "l", "g": [], "h": [], "subsets": "all"},
      {"id": "sub", "type": "check_odd_ext", "p": 3, "x": "x", "y": "y", "l": "l", "g": [], "h": [], "subsets": [["y"], ["x", "y"]]}
    ],
    "bound": {"product": ["odd"], "subgroup": ["x", "y", "l"]}
  })J";
  const Certificate c = cert(text);
  const auto r = verify_certificate(c);
  INFO(r.ndjson());
  REQUIRE(r.passed);
  CHECK(*r.bound == 27);
  CHECK(record(r, "odd").data["subsets"].size() == 4);
  CHECK(record(r, "sub").data["subsets"].size() == 2);
  CHECK(oracle_soundness(c, r).true_order == 27);

  const char* psl = R"J({
    "version": 1,
    "group": {"backend": "matrix", "dimension": 3, "prime": 7, "generators": {
      "a": "[[1,1,1],[0,1,2],[0,0,1]]", "b": "[[0,0,1],[0,6,0],[1,0,0]]"}},
    "checks": [{"id": "img", "type": "certify_simple_image", "presentation": "Sunday-PSL2(7)", "binding": {"a": "a", "b": "b"}}],
    "bound": {"product": ["img"]}
  })J";
  const auto p = run(psl);
  CHECK(p.passed);
  CHECK(p.bound == BigInt(168));
  CHECK_FALSE(run(replace(psl, R"J("b": "b"})J", R"J("b": "b", "c": "a"})J")).passed);
}
