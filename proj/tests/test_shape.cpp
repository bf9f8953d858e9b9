#include <catch_amalgamated.hpp>

#include <fstream>
#include <random>

#include "grpcert/shape.hpp"

using namespace grpcert;

namespace {

const OrderCatalog& cat() { return OrderCatalog::builtin(); }

BigInt order_of(const char* text) { return shape_order(text, cat()); }

BigInt pow_big(unsigned base, unsigned e) { return big_pow(BigInt(base), e); }

// Independent closed forms for the classical families.
BigInt gl_order(unsigned n, unsigned q) {
  BigInt r = 1;
  for (unsigned i = 0; i < n; ++i) r *= pow_big(q, n) - pow_big(q, i);
  return r;
}

BigInt psl_order(unsigned n, unsigned q) {
  const unsigned d = std::gcd(n, q - 1);
  return gl_order(n, q) / (q - 1) / d;
}

BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

std::vector<std::string> maximal_shapes() {
  std::ifstream in(std::string(GRPCERT_DATA_DIR) + "/maximal_subgroups.txt");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    out.push_back(line);
  }
  return out;
}

}  // namespace

TEST_CASE("shape trees", "[shape][parse]") {
  const auto s = parse_shape("41:40").expr;
  REQUIRE(s.kind() == ShapeExpr::Kind::extension);
  CHECK(s.op() == ':');
  CHECK(s.children()[0] == ShapeExpr::cyclic(41));
  CHECK(s.children()[1] == ShapeExpr::cyclic(40));
  CHECK(parse_shape("59:29").expr == ShapeExpr::extension(ShapeExpr::cyclic(59), ShapeExpr::cyclic(29), ':'));

  const auto layered = parse_shape("3^{3+2+6+6}:(L3(3) x SD16)").expr;
  REQUIRE(layered.kind() == ShapeExpr::Kind::extension);
  CHECK(layered.children()[0] == ShapeExpr::prime_power(3, {3, 2, 6, 6}));
  CHECK(layered.children()[1] ==
        ShapeExpr::direct_product({ShapeExpr::named("L3(3)"), ShapeExpr::named("SD16")}));

  // A.B.C = (A.B).C
  const auto chain = parse_shape("2.A.B").expr;
  CHECK(chain.children()[0].kind() == ShapeExpr::Kind::extension);
  CHECK(parse_shape("2E6(2)").expr == ShapeExpr::named("2E6(2)"));
  CHECK(parse_shape("O10+(2)").expr == ShapeExpr::named("O10+(2)"));
  CHECK(parse_shape("O8-(3).2").expr.children()[0] == ShapeExpr::named("O8-(3)"));
}

TEST_CASE("unicode spellings", "[shape][parse]") {
  CHECK(parse_shape("3\xC2\xB7" "Fi\xE2\x82\x82\xE2\x82\x84\xE2\x80\xB2").expr ==
        ShapeExpr::extension(ShapeExpr::cyclic(3), ShapeExpr::named("Fi24'"), '*'));
  CHECK(order_of("2\xC2\xB2.\xC2\xB2" "E\xE2\x82\x86(2):S\xE2\x82\x83") == order_of("2^2.2E6(2):S3"));
  CHECK(order_of("S\xE2\x82\x83 \xC3\x97 Th") == order_of("S3 x Th"));
  CHECK(order_of("2^{10+16}.\xCE\xA9\xE2\x82\x81\xE2\x82\x80\xE2\x81\xBA(2)") == order_of("2^{10+16}.O10+(2)"));
  CHECK(order_of("7\xC2\xB9\xE2\x81\xBA\xE2\x81\xB4:(3 \xC3\x97 2.S\xE2\x82\x87)") == order_of("7^{1+4}:(3 x 2.S7)"));
}

TEST_CASE("warnings and errors", "[shape][parse]") {
  const auto w = parse_shape("M11 x A6.2^2");
  CHECK(w.warnings.size() == 1);
  CHECK(parse_shape("M11 x (A6.2^2)").warnings.empty());
  CHECK(parse_shape("2.B").warnings.empty());

  CHECK_THROWS_AS(parse_shape("2^{1+}"), ParseError);
  CHECK_THROWS_AS(parse_shape("2^{1+2"), ParseError);
  CHECK_THROWS_AS(parse_shape("6^{1+2}"), ParseError);
  CHECK_THROWS_AS(parse_shape("(A5 x A5"), ParseError);
  CHECK_THROWS_AS(parse_shape(""), ParseError);
  try {
    order_of("M13");
    FAIL("unknown name accepted");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("M12") != std::string::npos);
  }
}

TEST_CASE("printing round trips", "[shape][parse]") {
  for (const std::string& s : maximal_shapes()) {
    const auto e = parse_shape(s).expr;
    INFO(s << " -> " << to_string(e));
    CHECK(parse_shape(to_string(e)).expr == e);
  }
}

TEST_CASE("shape orders", "[shape]") {
  CHECK(order_of("41:40") == 1640);
  CHECK(order_of("59:29") == 1711);
  CHECK(order_of("3^{3+2+6+6}:(L3(3) x SD16)") == pow_big(3, 17) * 8 * 11232);
  CHECK(order_of("7^{2+1+2}:GL2(7)") == 672 * pow_big(7, 5) * 3);
  CHECK(order_of("3^{2+5+10}:(M11 x 2.S4)") == pow_big(3, 17) * 7920 * 48);
  CHECK(order_of("A5^3") == 216000);
  CHECK(order_of("(A5 x A5 x A5)") == 216000);
  CHECK(factor_tree(parse_shape("41:40").expr, cat()).find("1640") != std::string::npos);
}

TEST_CASE("catalog matches closed forms", "[shape][catalog]") {
  for (auto [n, q] : std::vector<std::pair<unsigned, unsigned>>{{2, 5}, {2, 7}, {2, 11}, {2, 13}, {2, 25}, {2, 41}, {2, 59}, {2, 71}, {3, 2}, {3, 3}, {3, 5}, {5, 2}}) {
    const std::string name = "L" + std::to_string(n) + "(" + std::to_string(q) + ")";
    INFO(name);
    CHECK(cat().order(name) == psl_order(n, q));
  }
  for (unsigned q : {3u, 5u, 7u, 11u, 13u}) CHECK(cat().order("GL2(" + std::to_string(q) + ")") == gl_order(2, q));
  for (unsigned q : {7u, 13u, 19u, 29u}) CHECK(cat().order("PGL2(" + std::to_string(q) + ")") == gl_order(2, q) / (q - 1));
  for (unsigned q : {5u, 7u, 13u}) CHECK(cat().order("SL2(" + std::to_string(q) + ")") == gl_order(2, q) / (q - 1));
  for (unsigned n = 5; n <= 12; ++n) {
    CHECK(cat().order("A" + std::to_string(n)) == factorial(n) / 2);
    CHECK(cat().order("S" + std::to_string(n)) == factorial(n));
  }
  // |U3(q)| = q^3 (q^3 + 1)(q^2 - 1) / gcd(3, q + 1)
  for (unsigned q : {3u, 4u, 5u, 8u}) {
    const BigInt o = pow_big(q, 3) * (pow_big(q, 3) + 1) * (pow_big(q, 2) - 1) / std::gcd(3u, q + 1);
    CHECK(cat().order("U3(" + std::to_string(q) + ")") == o);
  }
  // |Sp4(q)| = q^4 (q^2 - 1)(q^4 - 1) / gcd(2, q - 1)
  for (unsigned q : {2u, 3u, 4u}) {
    const BigInt o = pow_big(q, 4) * (pow_big(q, 2) - 1) * (pow_big(q, 4) - 1) / std::gcd(2u, q - 1);
    CHECK(cat().order("Sp4(" + std::to_string(q) + ")") == o);
  }
  // |O10+(2)| = 2^20 (2^5 - 1) prod_{i=1..4} (2^{2i} - 1)
  BigInt o10 = pow_big(2, 20) * (pow_big(2, 5) - 1);
  for (unsigned i = 1; i <= 4; ++i) o10 *= pow_big(2, 2 * i) - 1;
  CHECK(cat().order("O10+(2)") == o10);
  CHECK(cat().order("SD16") == 16);
  CHECK(cat().order("D10") == 10);
}

TEST_CASE("maximal subgroup shapes", "[shape][catalog]") {
  const auto shapes = maximal_shapes();
  CHECK(shapes.size() == 46);
  const BigInt monster = cat().order("M");
  for (const std::string& s : shapes) {
    INFO(s);
    const BigInt o = order_of(s.c_str());
    CHECK(o > 1);
    CHECK(monster % o == 0);
  }
}

TEST_CASE("order distributes over direct products", "[shape][property]") {
  std::vector<std::string> names;
  for (const auto& [k, _] : cat().entries()) names.push_back(k);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const std::string& a = names[rng() % names.size()];
    const std::string& b = names[rng() % names.size()];
    INFO(a << " x " << b);
    CHECK(order_of((a + " x " + b).c_str()) == cat().order(a) * cat().order(b));
  }
}
