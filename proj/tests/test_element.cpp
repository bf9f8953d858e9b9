#include <catch_amalgamated.hpp>

#include <random>

#include "grpcert/element.hpp"
#include "grpcert/oracle.hpp"

using namespace grpcert;

namespace {

Element perm(const char* text, std::uint32_t n) { return parse_permutation(text, n); }
Element mat(const char* text, std::uint32_t k, std::uint32_t p) { return parse_matrix(text, k, p); }

Element random_perm(std::mt19937_64& rng, std::uint32_t n) {
  std::vector<std::uint32_t> images(n);
  std::iota(images.begin(), images.end(), 0u);
  std::shuffle(images.begin(), images.end(), rng);
  return Element::from_images(images);
}

Element random_matrix(std::mt19937_64& rng, std::uint32_t k, std::uint32_t p) {
  while (true) {
    std::vector<std::int64_t> entries(k * k);
    for (auto& v : entries) v = static_cast<std::int64_t>(rng() % p);
    try {
      return Element::from_matrix(k, p, entries);
    } catch (const Error&) {
    }
  }
}

// Characteristic polynomial by evaluating det(tI - A) at every t in GF(p)
// and comparing against the computed coefficients.
bool charpoly_agrees(const Element& a) {
  const std::uint32_t k = a.spec().degree;
  const std::uint64_t p = a.spec().prime;
  const auto coeffs = characteristic_polynomial(a);
  for (std::uint64_t t = 0; t < p; ++t) {
    std::vector<std::uint32_t> m(k * k);
    for (std::uint32_t i = 0; i < k; ++i) {
      for (std::uint32_t j = 0; j < k; ++j) {
        const std::uint64_t diag = i == j ? t : 0;
        m[i * k + j] = static_cast<std::uint32_t>((diag + p - a.data()[i * k + j]) % p);
      }
    }
    const std::uint64_t det = detail::det_mod(m, k, static_cast<std::uint32_t>(p));
    std::uint64_t value = 1;  // leading coefficient
    for (std::uint32_t d = k; d-- > 0;) value = (value * t + coeffs[d]) % p;
    if (value != det) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("composition applies the left factor first", "[element]") {
  CHECK(perm("(1 2)", 3) * perm("(2 3)", 3) == perm("(1 3 2)", 3));
  const Element g = perm("(1 4 2)(3 5)", 5);
  CHECK(Element::identity(g.spec()) * g == g);
  CHECK(mat("[[0,4],[1,0]]", 2, 5) * mat("[[0,1],[4,0]]", 2, 5) == Element::identity(BackendSpec::matrices(2, 5)));
}

TEST_CASE("inverse", "[element]") {
  CHECK(perm("(1 2 3)", 3).inverse() == perm("(1 3 2)", 3));
  CHECK(Element::identity(BackendSpec::permutations(4)).inverse().is_identity());
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const Element a = random_matrix(rng, 3, 7);
    CHECK((a * a.inverse()).is_identity());
    CHECK(a.inverse().inverse() == a);
  }
}

TEST_CASE("element order", "[element]") {
  CHECK(element_order(perm("(1 2 3)(4 5 6 7)", 7)) == 12);
  CHECK(element_order(Element::identity(BackendSpec::permutations(3))) == 1);
  CHECK(element_order(mat("[[0,4],[1,0]]", 2, 5)) == 4);
  CHECK_THROWS_AS(element_order(mat("[[1,1],[0,1]]", 2, 101), 50), OrderOverflowError);
}

TEST_CASE("conjugation and commutators", "[element]") {
  CHECK(conjugate(perm("(1 2)", 3), perm("(2 3)", 3)) == perm("(1 3)", 3));
  CHECK(commutator(perm("(1 2)", 4), perm("(3 4)", 4)).is_identity());
  CHECK(commutator(perm("(1 2)", 3), perm("(2 3)", 3)) == perm("(1 2 3)", 3));
  const Element a = perm("(1 5 2)", 5);
  CHECK(commutator(a, a).is_identity());
  CHECK(conjugate(a, Element::identity(a.spec())) == a);
}

TEST_CASE("fingerprints", "[element]") {
  const auto f = fingerprint(perm("(1 2)(3 4)", 5));
  CHECK(f.order == 2);
  CHECK(f.invariant == std::vector<std::uint32_t>{1, 2, 2});
  const auto fm = fingerprint(Element::identity(BackendSpec::matrices(3, 5)));
  CHECK(fm.order == 1);
  // (x - 1)^3 = x^3 - 3x^2 + 3x - 1 over GF(5)
  CHECK(fm.invariant == std::vector<std::uint32_t>{4, 3, 2});
  CHECK(fingerprint(perm("(1 2)", 4)) != fingerprint(perm("(1 2)(3 4)", 4)));

  std::mt19937_64 rng(11);
  const Element c = perm("(1 2 3)", 7);
  for (int i = 0; i < 100; ++i) CHECK(fingerprint(conjugate(c, random_perm(rng, 7))) == fingerprint(c));
}

TEST_CASE("characteristic polynomial matches determinant evaluation", "[element]") {
  std::mt19937_64 rng(3);
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 13u}) {
    for (std::uint32_t k = 1; k <= 5; ++k) {
      for (int i = 0; i < 20; ++i) CHECK(charpoly_agrees(random_matrix(rng, k, p)));
    }
  }
}

TEST_CASE("associativity on random triples", "[element][property]") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 1000; ++i) {
    const Element a = random_perm(rng, 9), b = random_perm(rng, 9), c = random_perm(rng, 9);
    REQUIRE((a * b) * c == a * (b * c));
    REQUIRE(element_order(conjugate(a, b)) == element_order(a));
  }
  for (int i = 0; i < 1000; ++i) {
    const Element a = random_matrix(rng, 3, 11), b = random_matrix(rng, 3, 11), c = random_matrix(rng, 3, 11);
    REQUIRE((a * b) * c == a * (b * c));
    REQUIRE(element_order(conjugate(a, b)) == element_order(a));
  }
}

TEST_CASE("cycle-type order equals power iteration on S6", "[element][oracle]") {
  const Element gens[] = {perm("(1 2)", 6), perm("(1 2 3 4 5 6)", 6)};
  const auto s6 = enumerate_closure(gens);
  REQUIRE(s6.order() == 720);
  for (const Element& g : s6.elements()) {
    std::uint64_t m = 1;
    for (Element x = g; !x.is_identity(); x = x * g) ++m;
    REQUIRE(element_order(g) == m);
  }
}

TEST_CASE("composability", "[element]") {
  CHECK_THROWS_AS(perm("(1 2)", 3) * perm("(1 2)", 4), CompositionError);
  CHECK_THROWS_AS(mat("[[1,0],[0,1]]", 2, 5) * mat("[[1,0],[0,1]]", 2, 7), CompositionError);
  CHECK_THROWS_AS(perm("(1 2)", 2) * mat("[[1,1],[0,1]]", 2, 2), CompositionError);
}

TEST_CASE("text formats", "[element][parse]") {
  CHECK(format_element(perm("(3 1 2)(4 5)", 5)) == "(1 2 3)(4 5)");
  CHECK(format_element(perm("()", 5)) == "()");
  CHECK(perm("(1,2,3)", 3) == perm("(1 2 3)", 3));
  CHECK(format_element(mat("[[5,-1],[1,0]]", 2, 5)) == "[[0,4],[1,0]]");

  auto offset_of = [](auto&& fn) -> std::size_t {
    try {
      fn();
    } catch (const ParseError& e) {
      return e.offset();
    }
    return std::size_t(-1);
  };
  CHECK(offset_of([] { parse_permutation("(1 2 9)", 5); }) == 5);
  CHECK(offset_of([] { parse_permutation("(1 2 1)", 5); }) == 5);
  CHECK(offset_of([] { parse_permutation("(1 2", 5); }) == 4);
  CHECK(offset_of([] { parse_permutation("1 2", 5); }) == 0);
  CHECK(offset_of([] { parse_matrix("[[1,2],[3]]", 2, 5); }) == 9);
  CHECK_THROWS_AS(parse_matrix("[[1,2],[2,4]]", 2, 5), ParseError);
  CHECK_THROWS_AS(parse_matrix("[[1,0],[0,1]]", 2, 6), ParseError);
}
