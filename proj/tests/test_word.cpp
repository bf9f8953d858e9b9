#include <catch_amalgamated.hpp>

#include <random>

#include "grpcert/word.hpp"

using namespace grpcert;

namespace {

GroupContext s6_binding(std::mt19937_64& rng) {
  GroupContext ctx(BackendSpec::permutations(6));
  for (const char* name : {"a", "b", "c"}) {
    std::vector<std::uint32_t> images(6);
    std::iota(images.begin(), images.end(), 0u);
    std::shuffle(images.begin(), images.end(), rng);
    ctx.bind(name, Element::from_images(images));
  }
  return ctx;
}

// Random word trees over {a, b, c}. Conjugation by the identity literal is
// skipped: "w^1" reads as a power.
Word random_word(std::mt19937_64& rng, int depth) {
  const char* names[] = {"a", "b", "c"};
  const int pick = depth <= 0 ? static_cast<int>(rng() % 6) : static_cast<int>(rng() % 10);
  switch (pick) {
    case 0:
      return Word::identity();
    case 1: case 2: case 3: case 4: case 5:
      return Word::generator(names[rng() % 3]);
    case 6: {
      std::vector<Word> f;
      const int n = 2 + static_cast<int>(rng() % 3);
      for (int i = 0; i < n; ++i) f.push_back(random_word(rng, depth - 1));
      return Word::product(std::move(f));
    }
    case 7:
      return Word::power(random_word(rng, depth - 1), BigInt(static_cast<int>(rng() % 9) - 4));
    case 8: {
      Word by = random_word(rng, depth - 1);
      if (by.kind() == Word::Kind::identity) by = Word::generator("b");
      return Word::conjugate(random_word(rng, depth - 1), std::move(by));
    }
    default:
      return Word::commutator(random_word(rng, depth - 1), random_word(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("grammar", "[word][parse]") {
  const Word w = parse_word("a b^-1");
  REQUIRE(w.kind() == Word::Kind::product);
  CHECK(w.children()[0] == Word::generator("a"));
  CHECK(w.children()[1] == Word::power(Word::generator("b"), -1));

  CHECK(parse_word("[a,b]^2") == Word::power(Word::commutator(Word::generator("a"), Word::generator("b")), 2));

  const Word g = Word::generator("g"), h = Word::generator("h");
  CHECK(parse_word("(g h)^5 h") == Word::product({Word::power(Word::product({g, h}), 5), h}));
  CHECK(parse_word("(g*h)^5*h") == parse_word("(g h)^5 h"));
  CHECK(parse_word("a^(-1)") == Word::power(Word::generator("a"), -1));
  CHECK(parse_word("a^b") == Word::conjugate(Word::generator("a"), Word::generator("b")));
  CHECK(parse_word("a^(b c)") == Word::conjugate(Word::generator("a"), Word::product({Word::generator("b"), Word::generator("c")})));
  CHECK(parse_word("1") == Word::identity());
  CHECK(parse_word("x^28").exponent() == 28);
  CHECK(parse_word("x^123456789012345678901234567890").exponent() == BigInt("123456789012345678901234567890"));
  CHECK(parse_word("g_3 h_3'").kind() == Word::Kind::product);
}

TEST_CASE("syntax errors carry byte offsets", "[word][parse]") {
  auto offset_of = [](const char* text) -> std::size_t {
    try {
      parse_word(text);
    } catch (const ParseError& e) {
      return e.offset();
    }
    return std::size_t(-1);
  };
  CHECK(offset_of("") == 0);
  CHECK(offset_of("a b)") == 3);
  CHECK(offset_of("(a b") == 4);
  CHECK(offset_of("a^") == 2);
  CHECK(offset_of("a^*b") == 2);
  CHECK(offset_of("[a b]") == 4);
  CHECK(offset_of("a ^ ^") == 4);
  CHECK(offset_of("a * * b") == 4);
}

TEST_CASE("evaluation", "[word]") {
  GroupContext ctx(BackendSpec::permutations(5));
  ctx.bind_text("a", "(1 2)");
  ctx.bind_text("b", "(2 3)");
  CHECK(evaluate_word("a^b", ctx) == parse_permutation("(1 3)", 5));
  CHECK(evaluate_word("[a,a]", ctx).is_identity());
  CHECK_THROWS_AS(evaluate_word("a z", ctx), UnboundNameError);

  GroupContext a5(BackendSpec::permutations(5));
  a5.bind_text("a", "(1 2)(3 4)");
  a5.bind_text("b", "(1 3 5)");
  CHECK(evaluate_word("(a b)^5", a5).is_identity());
  CHECK_FALSE(evaluate_word("a b", a5).is_identity());
}

TEST_CASE("free reduction", "[word]") {
  CHECK(free_reduce(parse_word("a a^-1 b")) == parse_word("b"));
  CHECK(free_reduce(parse_word("(a^2)^3")) == parse_word("a^6"));
  CHECK(free_reduce(parse_word("b b^-1")) == Word::identity());
  CHECK(to_string(free_reduce(parse_word("b b^-1"))) == "1");
  CHECK(free_reduce(parse_word("a (b c) c^-1 b^-1 a")) == parse_word("a^2"));
  CHECK(free_reduce(parse_word("a^-1 (a b)^2 (a b)^-1")) == parse_word("b"));
}

TEST_CASE("printing round trips", "[word][property]") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const Word w = random_word(rng, 4);
    const std::string text = to_string(w);
    INFO(text);
    REQUIRE(parse_word(text) == w);
    const Word r = free_reduce(w);
    REQUIRE(parse_word(to_string(r)) == r);
    REQUIRE(free_reduce(r) == r);
  }
}

TEST_CASE("evaluation is a homomorphism and reduction is sound", "[word][property]") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    const GroupContext beta = s6_binding(rng);
    const Word u = random_word(rng, 3);
    const Word w = random_word(rng, 3);
    INFO(to_string(u) << " | " << to_string(w));
    REQUIRE(evaluate_word(Word::product({u, w}), beta) == evaluate_word(u, beta) * evaluate_word(w, beta));
    REQUIRE(evaluate_word(free_reduce(w), beta) == evaluate_word(w, beta));
  }
}
